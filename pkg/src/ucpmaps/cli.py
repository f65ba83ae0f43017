"""Command-line front end.

Exit codes: 0 when the check passes (or the requested witness is found), 1
when it fails (or nothing is found), 2 for invalid input.
"""

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from . import channels, extremality, opconvex, partitions, repro
from .matrixcore import DEFAULT_TOL, matrix_units, pauli
from .serialization import (
    FormatError,
    channel_from_doc,
    channel_to_doc,
    load_json,
    matrix_from_doc,
    matrix_to_doc,
    partition_from_doc,
    to_jsonable,
    witness_from_doc,
    witness_to_doc,
)

OK, FAILED, INVALID = 0, 1, 2


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, payload) -> None:
        if self.as_json:
            print(json.dumps(to_jsonable(payload), indent=2))
        else:
            print(text)


def _kraus_map(path: str) -> channels.KrausMap:
    phi = channel_from_doc(load_json(path))
    if not isinstance(phi, channels.KrausMap):
        raise FormatError(f"{path}: expected a Kraus-form channel")
    return phi


def _fmt_flags(flags: channels.ChannelFlags) -> str:
    d = flags.defects
    return "\n".join(
        [
            f"cp:               {flags.cp}  (min Choi eigenvalue {d['choi_min_eigenvalue']:.3e})",
            f"unital:           {flags.unital}  (defect {d['unital']:.3e})",
            f"trace_preserving: {flags.trace_preserving}  (defect {d['trace_preserving']:.3e})",
            f"automorphism:     {flags.automorphism}",
            f"size:             {flags.size}",
        ]
    )


def _cmd_verify(args, out: _Out) -> int:
    check = {
        "verify-fop": partitions.verify_fop,
        "verify-lindblad": partitions.verify_lindblad,
        "verify-cs": partitions.verify_cs,
    }[args.command]
    report = check(partition_from_doc(load_json(args.partition)), args.tol)
    lines = [f"{report.kind}: {'PASS' if report.passed else 'FAIL'}  defect {report.defect:.6e}"]
    lines += [f"  {v}" for v in report.member_violations]
    out.emit("\n".join(lines), report)
    return OK if report.passed else FAILED


def _cmd_choi(args, out: _Out) -> int:
    c = channels.to_choi(channel_from_doc(load_json(args.channel)))
    print(json.dumps(channel_to_doc(c), indent=None if not args.json else 2))
    return OK


def _cmd_kraus(args, out: _Out) -> int:
    doc = load_json(args.choi)
    if isinstance(doc, dict) and "choi" in doc:
        c = channel_from_doc(doc)
    else:
        m = matrix_from_doc(doc)
        n = int(round(np.sqrt(m.shape[0])))
        c = channels.ChoiMatrix(n, m)
    phi = channels.kraus_from_choi(c, args.tol)
    print(json.dumps(channel_to_doc(phi)))
    return OK


def _cmd_classify(args, out: _Out) -> int:
    flags = channels.classify(channel_from_doc(load_json(args.channel)), args.tol)
    out.emit(_fmt_flags(flags), flags)
    return OK if flags.ucp else FAILED


def _cmd_size(args, out: _Out) -> int:
    m = channels.size(channel_from_doc(load_json(args.channel)), args.tol)
    out.emit(str(m), {"size": m})
    return OK


def _cmd_combine(args, out: _Out) -> int:
    coeffs = partition_from_doc(load_json(args.partition))
    maps = [_kraus_map(p) for p in args.channels]
    try:
        phi = opconvex.op_convex_combine(coeffs, maps, args.tol)
    except partitions.PartitionError as exc:
        print(str(exc), file=sys.stderr)
        return FAILED
    print(json.dumps(channel_to_doc(phi)))
    return OK


def _fmt_verdict(v: opconvex.WitnessVerdict) -> str:
    lines = [f"valid:        {v.valid}", f"trivializing: {v.trivializing}", f"lambda:       {v.lam}"]
    lines += [f"  {k}: {r:.3e}" for k, r in v.residuals.items()]
    return "\n".join(lines)


def _cmd_validate(args, out: _Out) -> int:
    target = _kraus_map(args.target)
    v = opconvex.validate_witness(target, witness_from_doc(load_json(args.witness)), args.tol)
    out.emit(_fmt_verdict(v), v)
    return OK if v.valid else FAILED


def _cmd_certify(args, out: _Out) -> int:
    theta = _kraus_map(args.target)
    w = witness_from_doc(load_json(args.witness))
    try:
        cert = extremality.certify_thm37(theta, w, args.tol)
    except extremality.TheoremAnomaly as exc:
        out.emit(f"ANOMALY: {exc}", {"kind": "anomaly", "residuals": exc.residuals})
        return FAILED
    text = f"CERTIFIED  lambda = {cert.evidence['lambda']:.12g}\n" + "\n".join(
        f"  {k}: {r:.3e}" for k, r in cert.residuals.items()
    )
    out.emit(text, _cert_payload(cert))
    return OK


def _cert_payload(cert: extremality.ExtremalityCertificate) -> dict:
    return {
        "kind": cert.kind,
        "evidence": cert.evidence,
        "residuals": cert.residuals,
        "seed": cert.seed,
        "budget_used": cert.budget_used,
    }


def _cmd_extreme(args, out: _Out) -> int:
    cert = extremality.usual_extreme_check(_kraus_map(args.channel), args.tol)
    text = f"{cert.kind}  (size {cert.evidence['size']}, min singular value {cert.evidence['min_singular_value']:.3e})"
    out.emit(text, _cert_payload(cert))
    return OK if cert.kind == extremality.USUAL_EXTREME else FAILED


def _cmd_refute(args, out: _Out) -> int:
    phi = _kraus_map(args.channel)
    result = extremality.search_refuting_witness(phi, args.budget, args.seed, args.tol)
    if result.found:
        cert = result.certificate()
        if args.witness_out:
            with open(args.witness_out, "w") as fh:
                json.dump(witness_to_doc(result.witness), fh)
        out.emit(
            f"REFUTED after {result.trials_used} trials (family {cert.evidence['family']})\n"
            + _fmt_verdict(result.verdict),
            _cert_payload(cert),
        )
        return OK
    if channels.classify(phi, args.tol).automorphism:
        status = "CERTIFIED (automorphism)"
    else:
        status = "NO WITNESS FOUND (inconclusive)"
    out.emit(
        f"{status}  [{result.trials_used} trials, seed {args.seed}]",
        {"kind": status, "seed": args.seed, "budget_used": result.trials_used},
    )
    return FAILED


def _cmd_ks(args, out: _Out) -> int:
    phi = _kraus_map(args.channel)
    x = matrix_from_doc(load_json(args.matrix))
    gap = extremality.kadison_schwarz_gap(phi, x, args.tol)
    out.emit(f"min eigenvalue of phi(xx*) - phi(x)phi(x)*: {gap:.6e}", {"gap": gap})
    return OK if gap >= -args.tol else FAILED


def _cmd_repro(args, out: _Out) -> int:
    report = repro.run_repro_suite(args.scenario, args.seed, args.tol)
    out.emit(report.render(), {**to_jsonable(report), "overall": report.overall})
    return OK if report.overall else FAILED


def _cmd_make(args, out: _Out) -> int:
    kind = args.spec[0] if args.spec else ""
    if kind == "e" and len(args.spec) == 4:
        n, i, j = (int(s) for s in args.spec[1:])
        m = matrix_units(n, i, j)
    elif kind == "pauli" and len(args.spec) == 2:
        m = pauli(args.spec[1])
    elif kind == "identity" and len(args.spec) == 2:
        m = np.eye(int(args.spec[1]))
    else:
        raise ValueError("usage: make e N I J | make pauli {i,x,y,z} | make identity N")
    print(json.dumps(matrix_to_doc(m)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=500)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="ucpmaps", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *positionals, help=None):
        p = sub.add_parser(name, parents=[common], help=help)
        for pos in positionals:
            p.add_argument(pos)
        p.set_defaults(func=func)
        return p

    for name, what in (("verify-fop", "sum v v* = 1"), ("verify-lindblad", "sum v* v = 1"),
                       ("verify-cs", "PSD members summing to 1")):
        add(name, _cmd_verify, "partition", help=f"check {what} (JSON list of matrices)")
    add("choi", _cmd_choi, "channel", help="print the Choi matrix of a channel")
    add("kraus", _cmd_kraus, "choi", help="canonical Kraus form from a Choi matrix")
    add("classify", _cmd_classify, "channel", help="cp / unital / trace-preserving / automorphism flags")
    add("size", _cmd_size, "channel", help="number of canonical Kraus operators")
    p = add("combine", _cmd_combine, "partition", help="operational convex combination")
    p.add_argument("channels", nargs="+")
    add("validate-witness", _cmd_validate, "target", "witness", help="check a two-term decomposition of a channel")
    add("certify-thm37", _cmd_certify, "target", "witness", help="certify a decomposition of an automorphism")
    add("extreme-check", _cmd_extreme, "channel", help="usual-sense extremality in UCP(M_n)")
    p = add("refute-opextreme", _cmd_refute, "channel", help="search for a refuting witness")
    p.add_argument("--witness-out", default=None)
    add("ks-gap", _cmd_ks, "channel", "matrix", help="Kadison-Schwarz gap")
    p = add("repro", _cmd_repro, help="scripted reproduction scenarios")
    p.add_argument("scenario", choices=sorted(repro.SCENARIOS))
    p = add("make", _cmd_make, help="build a matrix: e N I J | pauli X | identity N")
    p.add_argument("spec", nargs="+")
    return parser


def run_command(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    out = _Out(args.json)
    try:
        return args.func(args, out)
    except (FormatError, ValueError, IndexError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except Exception as exc:  # keep the exit-code contract total
        print(f"internal error: {exc!r}", file=sys.stderr)
        return INVALID


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
