import json

import numpy as np
import pytest

from deutschnoise import io
from deutschnoise.cli import main
from deutschnoise.deutsch import ORACLES, Oracle
from deutschnoise.reference import published_gad, published_index, published_success


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line]


def test_simulate_identity_model(capsys):
    code, out, _ = run(capsys, "simulate", "--model", "ideal", "--oracles", "f0", "--seed", "7")
    assert code == 0
    z = [r for r in records(out) if r["basis"] == "Z"][0]
    assert z["counts"] == {"0": 8192, "1": 0}
    assert z["seed"] == 7


def test_simulate_gad_population(capsys):
    shots = 1_000_000
    _, out, _ = run(capsys, "simulate", "--model", "gad", "--oracles", "fId", "--shots", str(shots))
    z = [r for r in records(out) if r["basis"] == "Z"][0]
    g, p = published_gad()
    mean = 1 - p * g
    sigma = np.sqrt(mean * (1 - mean) / shots)
    assert abs(z["counts"]["1"] / shots - mean) < 3 * sigma


def test_simulate_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["simulate", "--seed", "3", "--out", str(a)]) == 0
    assert main(["simulate", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.jsonl"
    main(["simulate", "--seed", "4", "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_simulate_subset_matches_full_run(capsys):
    _, full, _ = run(capsys, "simulate", "--seed", "9")
    _, sub, _ = run(capsys, "simulate", "--seed", "9", "--oracles", "fNot")
    assert records(sub) == [r for r in records(full) if r["oracle"] == "fNot"]


def test_tomo_from_counts(tmp_path, capsys):
    from deutschnoise.channels import MaGates
    from deutschnoise.pipeline import model_state, paper_gad

    counts = tmp_path / "c.jsonl"
    main(["simulate", "--seed", "1", "--out", str(counts)])
    interp = {r["oracle"]: r["interpretation"] for r in records(counts.read_text())}
    code, out, _ = run(capsys, "tomo", "--counts", str(counts))
    assert code == 0
    recs = records(out)
    assert [r["oracle"] for r in recs] == [o.value for o in ORACLES]
    for r in recs:
        assert r["shots"] == {"X": 8192, "Y": 8192, "Z": 8192}
        assert r["seed"] == 1 and isinstance(r["projected"], bool)
        o, m = io.parse_matrix_record(r)
        truth = model_state(o, paper_gad(), MaGates.paper(), interp[o.value])
        assert np.max(np.abs(m - truth)) < 2e-2


def test_tomo_from_expectations(tmp_path, capsys, published):
    path = tmp_path / "e.jsonl"
    rho = published[Oracle.F0]
    e = {"oracle": "f0", "ex": 2 * rho[0, 1].real, "ey": -2 * rho[0, 1].imag, "ez": (rho[0, 0] - rho[1, 1]).real}
    path.write_text(json.dumps(e) + "\n")
    _, out, _ = run(capsys, "tomo", "--expectations", str(path))
    (r,) = records(out)
    assert np.allclose(io.parse_matrix_record(r)[1], rho, atol=1e-12)
    assert r["projected"] is False


def test_tomo_missing_basis(tmp_path, capsys):
    path = tmp_path / "c.jsonl"
    lines = [json.dumps({"oracle": "f0", "basis": b, "shots": 2, "counts": {"0": 1, "1": 1}}) for b in "XZ"]
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "tomo", "--counts", str(path))
    assert code == 2
    assert "basis Y absent for oracle f0" in err


def test_index_published(capsys):
    _, out, _ = run(capsys, "index")
    ref = published_index()
    for r in records(out):
        assert r["weight"] == pytest.approx(ref[r["oracle"]]["weight"], abs=5e-4)
        assert r["alignment"] == pytest.approx(ref[r["oracle"]]["alignment"], abs=5e-4)


def test_index_ideal_and_mixed(tmp_path, capsys):
    _, out, _ = run(capsys, "index", "--ideal")
    for r in records(out):
        assert r["weight"] == pytest.approx(0.0, abs=1e-12)
        assert r["alignment"] == pytest.approx(1.0, abs=1e-12)
    path = tmp_path / "m.jsonl"
    with path.open("w") as fh:
        io.write_jsonl([io.matrix_record(o, np.eye(2) / 2) for o in ORACLES], fh)
    _, out, _ = run(capsys, "index", "--matrices", str(path))
    for r in records(out):
        assert r["weight"] == pytest.approx(1.0)
        assert r["alignment"] == 0.0


def test_fit_modes(capsys):
    _, out, _ = run(capsys, "fit", "--mode", "joint")
    staged, joint = records(out)
    assert joint["mean_fidelity"] >= 0.997
    assert "gates" in joint and "g0" in joint["gates"]
    _, out, _ = run(capsys, "fit", "--mode", "ma")
    ref = published_index()
    for r in records(out):
        assert set(r["interpretation_fidelity"]) == {"as-printed", "adjoint", "transpose", "conjugate"}
        assert abs(r["best_fidelity"] - ref[r["oracle"]]["fidelity"]) <= 2e-3


def test_fit_gad_on_synthetic(tmp_path, capsys):
    from deutschnoise.channels import GadParams
    from deutschnoise.pipeline import model_state

    g, p = published_gad()
    path = tmp_path / "m.jsonl"
    with path.open("w") as fh:
        io.write_jsonl([io.matrix_record(o, model_state(o, GadParams(g, p))) for o in ORACLES], fh)
    _, out, _ = run(capsys, "fit", "--mode", "gad", "--matrices", str(path))
    (r,) = records(out)
    assert r["gamma"] == pytest.approx(g, abs=1e-3) and r["p"] == pytest.approx(p, abs=1e-3)


def test_fit_joint_incomplete(tmp_path, capsys):
    path = tmp_path / "m.jsonl"
    with path.open("w") as fh:
        io.write_jsonl([io.matrix_record("f0", np.eye(2) / 2)], fh)
    code, _, err = run(capsys, "fit", "--mode", "joint", "--matrices", str(path))
    assert code == 2 and "missing" in err


def test_fit_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["fit", "--out", str(a)])
    main(["fit", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_report_published(capsys):
    code, out, _ = run(capsys, "report")
    assert code == 0
    recs = records(out)
    states = [r for r in recs if r["section"] == "states"]
    probs = published_success()
    assert [r["success_probability"] for r in states] == pytest.approx([probs[o.value] for o in ORACLES], abs=1e-4)
    fits = [r for r in recs if r["section"] == "fit"]
    assert {"delta_gamma", "delta_p"} <= set(fits[0])
    assert recs[-1]["section"] == "summary" and recs[-1]["passed"]


def test_report_ideal_gates_exit_status(capsys):
    code, out, _ = run(capsys, "report", "--ideal")
    states = [r for r in records(out) if r["section"] == "states"]
    assert all(r["success_probability"] == pytest.approx(1.0) for r in states)
    assert code == 1
    code, _, _ = run(capsys, "report", "--ideal", "--no-gate")
    assert code == 0


def test_table_format(capsys):
    code, out, _ = run(capsys, "report", "--format", "table")
    assert code == 0 and "delta" in out and "f0" in out


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["simulate", "--bogus", "1"])
