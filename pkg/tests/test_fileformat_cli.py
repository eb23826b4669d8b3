import json

import pytest

from pgroups.cli import main
from pgroups.errors import FormatError
from pgroups.fileformat import (
    canonical_json,
    catalog_document,
    load_document,
    load_path,
    loads,
)

HEISENBERG_DOC = {
    "format": "pgroup-v1",
    "prime": 3,
    "kind": "pc",
    "ngens": 3,
    "powers": {},
    "conjugates": {"2,1": [[2, 1], [3, 1]]},
}


# -- document parsing ----------------------------------------------------------


def test_load_pc_document():
    (G,) = load_document(HEISENBERG_DOC)
    assert G.order == 27 and G.exponent() == 3


def test_omitted_relations_default():
    doc = {"format": "pgroup-v1", "prime": 3, "kind": "pc", "ngens": 2}
    (G,) = load_document(doc)
    assert G.order == 9 and G.is_abelian()


def test_load_abelian_and_unitriangular():
    (A,) = load_document(
        {"format": "pgroup-v1", "prime": 3, "kind": "abelian", "exps": [2, 2]}
    )
    assert A.order == 81
    (U,) = load_document(
        {"format": "pgroup-v1", "prime": 3, "kind": "unitriangular", "n": 3, "m": 1}
    )
    assert U.order == 27


def test_load_semidirect():
    doc = {
        "format": "pgroup-v1",
        "prime": 3,
        "kind": "semidirect",
        "m": {"exps": [1, 1, 1]},
        "alpha": [[1, 1, 0], [0, 1, 1], [0, 0, 1]],
        "t": 2,
    }
    (G,) = load_document(doc)
    assert G.order == 3**5  # the powerful-class-p example group


def test_load_catalog_kind():
    doc = {
        "format": "pgroup-v1",
        "prime": 3,
        "kind": "catalog",
        "name": "heisenberg",
        "params": {"p": 3},
    }
    (G,) = load_document(doc)
    assert G.order == 27
    multi = load_document(
        {"format": "pgroup-v1", "prime": 3, "kind": "catalog", "name": "order27_all", "params": {}}
    )
    assert len(multi) == 5


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format="pgroup-v2"),
        lambda d: d.update(kind="permutation"),
        lambda d: d.update(extra=1),
        lambda d: d.pop("prime"),
        lambda d: d.update(prime="three"),
        lambda d: d.update(conjugates={"21": [[2, 1]]}),
        lambda d: d.update(conjugates={"2,1": [[2, 1, 7]]}),
    ],
)
def test_malformed_documents_rejected(mutate):
    doc = {k: (dict(v) if isinstance(v, dict) else v) for k, v in HEISENBERG_DOC.items()}
    mutate(doc)
    with pytest.raises(FormatError):
        load_document(doc)


def test_loads_rejects_bad_json():
    with pytest.raises(FormatError):
        loads("{not json")
    with pytest.raises(FormatError):
        loads('["not", "an", "object"]')


def test_catalog_document_roundtrip(tmp_path):
    doc = catalog_document("mann_nonpf", {"p": 3})
    path = tmp_path / "g.json"
    path.write_text(canonical_json(doc))
    (G,) = load_path(str(path))
    assert G.order == 3**5


def test_prime_mismatch_rejected():
    doc = {
        "format": "pgroup-v1",
        "prime": 5,
        "kind": "catalog",
        "name": "heisenberg",
        "params": {"p": 3},
    }
    with pytest.raises(FormatError):
        load_document(doc)


# -- CLI -----------------------------------------------------------------------


def test_cli_analyze_catalog_json(capsys):
    assert main(["analyze", "--catalog", "heisenberg", "--prime", "3", "--json"]) == 0
    out = capsys.readouterr().out
    rep = json.loads(out)
    assert rep["powerful_class"] == 2
    assert rep["eta_series_orders"] == [[3, 0], [3, 1], [3, 3]]
    assert rep["pf"]["status"] is True
    # canonical round trip is byte-identical
    assert canonical_json(rep) == out


def test_cli_analyze_mann(capsys):
    assert main(["analyze", "--catalog", "mann_nonpf", "--prime", "3", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["powerful_class"] == 3
    assert rep["pf"]["status"] is False
    assert rep["power_surjective"]["1"] is False


def test_cli_analyze_text_output(capsys):
    assert main(["analyze", "--catalog", "modular", "--prime", "3"]) == 0
    out = capsys.readouterr().out
    assert "powerful class  1" in out
    assert "(powerful)" in out


def test_cli_analyze_skip_section(capsys):
    assert main(["analyze", "--catalog", "heisenberg", "--skip", "pf", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pf"] is None


def test_cli_analyze_malformed_file(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{broken")
    assert main(["analyze", str(bad)]) == 2
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2
    assert main(["analyze", "--catalog", "nope"]) == 2
    assert main(["analyze"]) == 2


def test_cli_analyze_budget_exceeded(capsys):
    assert main(["analyze", "--catalog", "abelian", "--prime", "3",
                 "--param", "exps=1,1", "--budget", "2"]) == 3


def test_cli_series(capsys):
    assert main(["series", "--catalog", "heisenberg", "--prime", "3",
                 "--type", "lower-central", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [t["order"] for t in out["terms"]] == [[3, 3], [3, 1], [3, 0]]

    assert main(["series", "--catalog", "modular", "--prime", "3", "--type", "eta"]) == 0
    text = capsys.readouterr().out
    assert "term 0: order 3^0" in text
    assert "term 1: order 3^3" in text


def test_cli_series_eta_potent_nopwc(capsys):
    assert main(["series", "--catalog", "potent_nopwc", "--prime", "5",
                 "--type", "eta", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [t["order"] for t in out["terms"]] == [
        [5, 0], [5, 1], [5, 2], [5, 3], [5, 5]
    ]


def test_cli_analyze_family_emits_report_per_group(capsys):
    assert main(["analyze", "--catalog", "order27_all", "--json"]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert isinstance(reports, list) and len(reports) == 5
    assert sorted(r["exponent"][1] for r in reports) == [1, 1, 2, 2, 3]


def test_cli_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    out = capsys.readouterr().out
    assert "heisenberg" in out and "mainline_coclass1" in out


def test_cli_catalog_get_roundtrip(tmp_path, capsys):
    target = tmp_path / "w.json"
    assert main(["catalog", "get", "wreath", "--prime", "3", "-o", str(target)]) == 0
    (G,) = load_path(str(target))
    assert G.order == 81
    assert main(["catalog", "get", "nope"]) == 2


def test_cli_catalog_get_with_params(tmp_path):
    target = tmp_path / "a.json"
    assert main(
        ["catalog", "get", "abelian", "--prime", "3", "--param", "exps=2,1", "-o", str(target)]
    ) == 0
    (G,) = load_path(str(target))
    assert G.order == 27 and G.exponent() == 9
    assert main(["catalog", "get", "abelian", "--prime", "3", "--param", "exps"]) == 2


def test_cli_verify_small(capsys):
    code = main(["verify", "omega", "--max-order", "81", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["passed"] is True
    assert all(r["suite"] == "omega" for r in out["results"])
    assert any("Omega_i" in r["anchor"] for r in out["results"])


def test_cli_verify_text(capsys):
    code = main(["verify", "catalog-regression", "--max-order", "27"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_cli_verify_json_is_deterministic(capsys):
    assert main(["verify", "eta-lemmas", "--max-order", "27", "--json", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["verify", "eta-lemmas", "--max-order", "27", "--json", "--seed", "7"]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["passed"] is True


def test_cli_verify_unknown_suite():
    with pytest.raises(SystemExit):
        main(["verify", "bogus"])


def test_analyze_trivial_group_has_integer_report():
    from pgroups import build_abelian, analyze_group, quotient, whole_subgroup

    C3 = build_abelian(3, [1])
    one, _ = quotient(C3, whole_subgroup(C3))
    rep = analyze_group(one)
    assert rep["group"]["order"] == [3, 0]
    assert rep["nilpotency_class"] == 0 and rep["coclass"] == 0
    assert rep["powerful_class"] == 0
    assert rep["omega"]["rows"] == []
    assert rep["uniserial"]["applicable"] is False
    text = canonical_json(rep)
    assert "." not in text.replace('"', "")  # integers only, no floats anywhere


def test_canonical_json_round_trips_itself():
    doc = catalog_document("unitriangular", {"n": 3, "p": 3, "m": 2})
    text = canonical_json(doc)
    assert canonical_json(json.loads(text)) == text
