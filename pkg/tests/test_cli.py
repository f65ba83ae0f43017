import json

import numpy as np
import pytest

from ucpmaps.channels import ad, identity_map, map_distance, transpose_choi
from ucpmaps.cli import run_command
from ucpmaps.matrixcore import matrix_units, pauli, random_unitary
from ucpmaps.opconvex import DecompositionWitness
from ucpmaps.partitions import bridge_coefficients
from ucpmaps.serialization import (
    channel_from_doc,
    channel_to_doc,
    matrix_from_doc,
    matrix_to_doc,
    witness_to_doc,
)


def e(i, j):
    return matrix_units(2, i, j)


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


@pytest.fixture
def phi_v_file(files):
    return files("phiv.json", {"dim": 2, "kraus": [matrix_to_doc(e(1, 1)), matrix_to_doc(e(2, 1))]})


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_fop(capsys, files):
    path = files("fop.json", [matrix_to_doc(e(1, 1)), matrix_to_doc(e(2, 1))])
    code, out, _ = run(capsys, "verify-fop", path)
    assert code == 0 and "defect" in out
    assert run(capsys, "verify-lindblad", path)[0] == 1
    assert run(capsys, "verify-cs", path)[0] == 1
    code, out, _ = run(capsys, "verify-fop", path, "--json")
    assert json.loads(out)["passed"] is True


def test_verify_fop_failure_reports_defect(capsys, files):
    path = files("bad.json", [matrix_to_doc(e(1, 1)), matrix_to_doc(e(1, 2))])
    code, out, _ = run(capsys, "verify-fop", path, "--json")
    assert code == 1
    assert json.loads(out)["defect"] == pytest.approx(np.sqrt(2))


def test_malformed_json_exits_2(capsys, files, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert run(capsys, "classify", str(bad))[0] == 2
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 2
    mismatch = files("mm.json", {"dim": 2, "kraus": [matrix_to_doc(np.eye(3))]})
    assert run(capsys, "classify", mismatch)[0] == 2


def test_usage_errors_exit_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "repro", "example-9.9")[0] == 2
    assert run(capsys, "make", "e", "2", "3", "1")[0] == 2


def test_classify_and_size(capsys, phi_v_file, files):
    code, out, _ = run(capsys, "classify", phi_v_file, "--json")
    flags = json.loads(out)
    assert code == 0 and flags["cp"] and flags["unital"] and not flags["trace_preserving"]
    assert flags["size"] == 2
    code, out, _ = run(capsys, "size", phi_v_file)
    assert code == 0 and out.strip() == "2"
    tchoi = files("t.json", channel_to_doc(transpose_choi(2)))
    code, out, _ = run(capsys, "classify", tchoi, "--json")
    assert code == 1 and json.loads(out)["cp"] is False
    assert run(capsys, "size", tchoi)[0] == 2


def test_choi_and_kraus_round_trip(capsys, phi_v_file, files):
    code, out, _ = run(capsys, "choi", phi_v_file)
    assert code == 0
    choi_file = files("choi.json", json.loads(out))
    code, out, _ = run(capsys, "kraus", choi_file)
    assert code == 0
    canon = channel_from_doc(json.loads(out))
    phi = channel_from_doc(json.load(open(phi_v_file)))
    assert map_distance(canon, phi) <= 1e-12
    # a bare matrix document is accepted too
    bare = files("bare.json", json.loads(open(choi_file).read())["choi"])
    assert run(capsys, "kraus", bare)[0] == 0
    tchoi = files("t.json", channel_to_doc(transpose_choi(2)))
    assert run(capsys, "kraus", tchoi)[0] == 2


def test_combine(capsys, files):
    u, v, w = (random_unitary(2, s) for s in (1, 2, 3))
    coeffs = files("c.json", [matrix_to_doc(m) for m in bridge_coefficients(u, v, w, 0.4).members])
    fv = files("v.json", channel_to_doc(ad(v)))
    fw = files("w.json", channel_to_doc(ad(w)))
    code, out, _ = run(capsys, "combine", coeffs, fv, fw)
    assert code == 0
    assert map_distance(channel_from_doc(json.loads(out)), ad(u)) <= 1e-9
    bad = files("bad.json", [matrix_to_doc(e(1, 1)), matrix_to_doc(e(1, 2))])
    assert run(capsys, "combine", bad, fv, fw)[0] == 1
    assert run(capsys, "combine", coeffs, fv)[0] == 2


def test_validate_and_certify(capsys, files, phi_v_file):
    u, v, w = (random_unitary(3, s) for s in (4, 5, 6))
    a, b = bridge_coefficients(u, v, w, 0.3).members
    target = files("u.json", channel_to_doc(ad(u)))
    wit = files("wit.json", witness_to_doc(DecompositionWitness(a, ad(v), b, ad(w))))
    code, out, _ = run(capsys, "validate-witness", target, wit, "--json")
    verdict = json.loads(out)
    assert code == 0 and verdict["valid"] and verdict["trivializing"]
    code, out, _ = run(capsys, "certify-thm37", target, wit, "--json")
    cert = json.loads(out)
    assert code == 0 and cert["kind"] == "thm37_certified"
    assert cert["evidence"]["lambda"] == pytest.approx(0.3, abs=1e-12)

    ex36 = files("ex36.json", witness_to_doc(
        DecompositionWitness(e(1, 1), identity_map(2), e(2, 2), ad(e(1, 2) + e(2, 1)))))
    code, out, _ = run(capsys, "validate-witness", phi_v_file, ex36, "--json")
    assert code == 0 and json.loads(out)["trivializing"] is False
    assert run(capsys, "certify-thm37", phi_v_file, ex36)[0] == 2


def test_extreme_and_refute(capsys, files, phi_v_file, tmp_path):
    assert run(capsys, "extreme-check", phi_v_file)[0] == 0
    mix = {"dim": 2, "kraus": [matrix_to_doc(np.eye(2) / np.sqrt(2)), matrix_to_doc(pauli("x") / np.sqrt(2))]}
    assert run(capsys, "extreme-check", files("mix.json", mix))[0] == 1

    out_path = tmp_path / "found.json"
    code, out, _ = run(capsys, "refute-opextreme", phi_v_file, "--seed", "3", "--witness-out", str(out_path))
    assert code == 0 and "REFUTED" in out
    assert out_path.exists()
    code, out, _ = run(capsys, "validate-witness", phi_v_file, str(out_path), "--json")
    assert json.loads(out)["valid"] and not json.loads(out)["trivializing"]

    auto = files("auto.json", channel_to_doc(ad(random_unitary(2, 0))))
    code, out, _ = run(capsys, "refute-opextreme", auto, "--budget", "30")
    assert code == 1 and "CERTIFIED (automorphism)" in out
    code, out, _ = run(capsys, "refute-opextreme", phi_v_file, "--budget", "0")
    assert code == 1 and "NO WITNESS FOUND (inconclusive)" in out


def test_ks_gap(capsys, files, phi_v_file):
    x = files("x.json", matrix_to_doc(e(2, 1)))
    code, out, _ = run(capsys, "ks-gap", phi_v_file, x, "--json")
    assert code == 0 and json.loads(out)["gap"] == 0.0


def test_make(capsys):
    code, out, _ = run(capsys, "make", "e", "2", "1", "2")
    assert code == 0
    np.testing.assert_array_equal(matrix_from_doc(json.loads(out)), e(1, 2))
    code, out, _ = run(capsys, "make", "pauli", "x")
    np.testing.assert_array_equal(matrix_from_doc(json.loads(out)), pauli("x"))


def test_repro_example_33(capsys):
    code, out, _ = run(capsys, "repro", "example-3.3", "--seed", "7")
    assert code == 0 and "overall: PASS" in out
    code, out, _ = run(capsys, "repro", "example-3.3", "--seed", "7", "--json")
    report = json.loads(out)
    assert report["overall"] is True
    dist = [s for s in report["steps"] if "map distance" in s["description"]][0]
    assert dist["residual"] <= 1e-9


@pytest.mark.parametrize("scenario", ["example-3.6", "theorem-3.7", "remark-3.5"])
def test_repro_scenarios(capsys, scenario):
    code, out, _ = run(capsys, "repro", scenario, "--seed", "1")
    assert code == 0, out
