import json

import pytest

from ara_insider.model import ScenarioError
from ara_insider.report import solve
from ara_insider.scenario_io import (bundled, from_document, load, load_warnings, read_psi_table,
                                     save, to_document, write_report)
from ara_insider.solver_dad import psi_d1_a

from conftest import ATTACKS, D1, REF_PSI_DA


def test_golden_load_reproduces_ref_psi_da(dad):
    for d1 in D1:
        for a, v in zip(ATTACKS, REF_PSI_DA[d1]):
            assert psi_d1_a(dad, d1, a) == pytest.approx(v, abs=1e-9)


@pytest.mark.parametrize("name", ["golden_dad", "golden_culture", "simultaneous_demo"])
def test_round_trip(name):
    text = bundled(name).read_text(encoding="utf-8")
    s = load(text)
    assert json.loads(save(s)) == json.loads(text)
    assert load(save(s)) == s
    assert save(load(save(s))) == save(s)


def test_dirichlet_arity_error_path(dad_doc):
    dad_doc["attacker"]["random_cpt_d2"]["rows"]["random audits"]["small"]["success"]["detected"] = \
        {"dirichlet": {"alphas": [1, 9]}}
    with pytest.raises(ScenarioError) as exc:
        from_document(dad_doc)
    paths = [i.path for i in exc.value.issues]
    assert 'attacker.random_cpt_d2.rows["random audits","small","success","detected"]' in paths


def test_syntax_error():
    with pytest.raises(ScenarioError) as exc:
        load("{ not json")
    assert "syntax error" in str(exc.value)


def test_unknown_key_strict_and_lenient(dad_doc):
    dad_doc["defender"]["cpt_z"] = {"rows": {}}
    with pytest.raises(ScenarioError) as exc:
        from_document(dad_doc)
    assert exc.value.issues[0].path == "defender.cpt_z"
    s = from_document(dad_doc, lenient=True)
    assert [i.path for i in load_warnings(s)] == ["defender.cpt_z"]


def test_bad_distribution_parameter_path(dad_doc):
    rows = dad_doc["attacker"]["random_utility"]["rows"]
    rows["small"]["success"]["detected"]["major upgrade"] = {"normal": {"mean": -85, "sd": -3}}
    with pytest.raises(ScenarioError) as exc:
        from_document(dad_doc)
    assert exc.value.issues[0].path == \
        'attacker.random_utility.rows["small","success","detected","major upgrade"].normal.sd'


def test_error_paths_are_concrete(dad_doc):
    dad_doc["defender"]["cpt_e"]["rows"]["random audits"]["small"]["fail"] = {"detected": 0.1}
    dad_doc["spaces"]["d2"].append("rebuild")
    with pytest.raises(ScenarioError) as exc:
        from_document(dad_doc)
    for issue in exc.value.issues:
        assert issue.path and issue.path.split(".")[0] in {"defender", "attacker", "spaces", "mc"}


def test_csv_report_row(dad):
    text = write_report(solve(dad, "direct"))
    assert "dad,random audits,-56.8000,\n" in text
    assert text.startswith("model,d1,psi,se\n")


def test_direct_mode_predictive_section_is_header_only(dad):
    sections = write_report(solve(dad, "direct")).split("\n\n")
    assert sections[1] == "d1,a,p,se,n,seed"


def test_report_is_byte_identical(dad):
    a = write_report(solve(dad, "ara", n=2000, seed=3))
    b = write_report(solve(dad, "ara", n=2000, seed=3))
    assert a == b
    assert write_report(solve(dad, "ara", n=2000, seed=3), "markdown") == \
        write_report(solve(dad, "ara", n=2000, seed=3), "markdown")


def test_report_has_no_crlf(dad):
    assert "\r" not in write_report(solve(dad, "direct"))


def test_predictive_rows(dad):
    text = write_report(solve(dad, "ara", n=1000, seed=7))
    pred = text.split("\n\n")[1].splitlines()
    assert pred[0] == "d1,a,p,se,n,seed"
    assert len(pred) == 10
    assert pred[1].startswith("anom. det. & data prov.,small,")
    assert pred[1].endswith(",1000,7")


def test_no_se_drops_columns(dad):
    text = write_report(solve(dad, "ara", n=500, seed=7), with_se=False)
    assert text.startswith("model,d1,psi\n")
    assert "\nd1,a,p,n,seed\n" in text


def test_markdown_layout(culture):
    md = write_report(solve(culture, "direct"), "markdown")
    assert "| d1 | small | medium | large |" in md
    assert "| random audits | -112.500 | -103.000 | -93.5000 |" in md
    assert "| info. sec. & train. | 40.0000 | -57.6000 |" in md


def test_read_psi_table(dad):
    model, table = read_psi_table(write_report(solve(dad, "direct")))
    assert model == "dad"
    assert list(table) == list(D1)
    assert table["random audits"] == -56.8


def test_read_psi_table_rejects_other_text():
    with pytest.raises(ValueError):
        read_psi_table("a,b\n1,2\n")


def test_to_document_keys(dad):
    doc = to_document(dad)
    assert set(doc) == {"version", "model", "spaces", "defender", "attacker", "mc"}
    assert doc["mc"] == {"n": 10000, "seed": 7, "exp_param": "rate"}
