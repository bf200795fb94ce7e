import pytest

from ara_insider.cli import main
from ara_insider.scenario_io import bundled, read_psi_table

from conftest import D1


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_golden(capsys):
    code, out, _ = run(capsys, "validate", "golden_dad")
    assert code == 0
    assert "valid dad scenario" in out


def test_validate_broken_simplex(capsys, tmp_path, dad_doc):
    import json
    dad_doc["defender"]["cpt_s"]["rows"]["random audits"]["small"] = {"success": 0.5, "fail": 0.4}
    p = tmp_path / "bad.scenario"
    p.write_text(json.dumps(dad_doc))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1
    assert 'defender.cpt_s.rows["random audits","small"]' in out


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "nope.scenario"))
    assert code == 2
    assert "no such file" in err


def test_solve_direct(capsys):
    code, out, _ = run(capsys, "solve", "golden_dad", "--predict", "direct")
    assert code == 0
    assert "dad,random audits,-56.8000," in out
    assert "d1_star,info. sec. & train." in out


def test_solve_ara_reference_sample_size(capsys):
    code, out, _ = run(capsys, "solve", "golden_dad", "--predict", "ara", "--samples", "1000", "--seed", "7")
    assert code == 0
    _, psi = read_psi_table(out)
    assert abs(psi[D1[0]] - 8.8) <= 1.5
    assert "seed,7" in out and "n,1000" in out
    assert "exp_param,100 - Exp(k): k is the rate (mean 1/k)" in out
    assert "normal_param,second parameter is the standard deviation" in out


def test_solve_culture_direct(capsys):
    code, out, _ = run(capsys, "solve", "golden_culture", "--predict", "direct")
    assert code == 0
    _, psi = read_psi_table(out)
    for d, expected in zip(D1, (-11.97, -0.02, -51.92)):
        assert psi[d] == pytest.approx(expected, abs=1e-2)


def test_direct_without_table_fails(capsys, tmp_path, dad_doc):
    import json
    del dad_doc["defender"]["direct_attack_dist"]
    p = tmp_path / "s.scenario"
    p.write_text(json.dumps(dad_doc))
    code, _, err = run(capsys, "solve", str(p), "--predict", "direct")
    assert code == 1
    assert "direct_attack_dist" in err


def test_samples_only_affect_ara(capsys):
    a = run(capsys, "solve", "golden_dad", "--predict", "direct", "--samples", "10")[1]
    b = run(capsys, "solve", "golden_dad", "--predict", "direct", "--samples", "99999")[1]
    assert a == b


def test_output_independent_of_workers(capsys, monkeypatch):
    argv = ("solve", "golden_culture", "--predict", "ara", "--samples", "9000", "--seed", "4")
    monkeypatch.setenv("ARA_WORKERS", "1")
    one = run(capsys, *argv, "--workers", "8")[1]
    monkeypatch.setenv("ARA_WORKERS", "8")
    many = run(capsys, *argv, "--workers", "8")[1]
    assert one == many


def test_predict_command(capsys):
    code, out, _ = run(capsys, "predict", "golden_dad", "--samples", "500", "--seed", "1", "--no-se")
    assert code == 0
    assert "\nd1,a,p,n,seed\n" in out


def _reference_reports():
    return str(bundled("reference_m1_dad_ara.csv")), str(bundled("reference_m2_culture_ara.csv"))


def test_model_average_reference(capsys):
    code, out, _ = run(capsys, "model-average", *_reference_reports(), "--priors", "0.3,0.7")
    assert code == 0
    _, psi = read_psi_table(out)
    for d, expected in zip(D1, (-2.4, 6.86, -89.78)):
        assert psi[d] == pytest.approx(expected, abs=1e-2)
    assert "d1_star,info. sec. & train." in out


def test_model_average_passthrough(capsys):
    _, out, _ = run(capsys, "model-average", *_reference_reports(), "--priors", "1,0")
    _, psi = read_psi_table(out)
    assert list(psi.values()) == [8.8, -10.65, -48.22]


def test_model_average_recomputed_culture(capsys, tmp_path):
    rows = ["model,d1,psi,se"] + [f"culture,{d},{v}," for d, v in zip(D1, (-8.24, -1.27, -46.34))]
    p = tmp_path / "m2.csv"
    p.write_text("\n".join(rows) + "\n")
    _, out, _ = run(capsys, "model-average", _reference_reports()[0], str(p), "--priors", "0.5,0.5")
    _, psi = read_psi_table(out)
    for d, expected in zip(D1, (0.28, -5.96, -47.28)):
        assert psi[d] == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("priors", ["0.3", "0.3,0.3", "a,b", "1.2,-0.2"])
def test_model_average_bad_priors(capsys, priors):
    code, _, _ = run(capsys, "model-average", *_reference_reports(), "--priors", priors)
    assert code == 1
