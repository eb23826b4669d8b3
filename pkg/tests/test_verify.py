import random

from pgroups.verify import (
    SUITES,
    PropertyResult,
    kirillov_formula_series,
    random_eta_series,
    run_suites,
)
from pgroups.eta_series import is_eta_series, upper_eta_series


def test_each_suite_passes_on_small_orders():
    for suite in SUITES:
        results = run_suites([suite], max_order=243)
        assert results, suite
        assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_results_have_anchors_and_lines():
    results = run_suites(["omega"], max_order=27)
    for r in results:
        assert isinstance(r, PropertyResult)
        assert r.anchor and r.suite == "omega"
        assert r.line().startswith("PASS")
        js = r.to_json()
        assert set(js) == {"suite", "prop", "group", "passed", "anchor", "detail"}


def test_unknown_suite_rejected():
    import pytest

    with pytest.raises(ValueError):
        run_suites(["nonsense"])


def test_random_eta_series_is_deterministic_per_seed(groups):
    G = groups("wreath", p=3)
    a = [t.bits for t in random_eta_series(G, random.Random(5), 10**6)]
    b = [t.bits for t in random_eta_series(G, random.Random(5), 10**6)]
    assert a == b
    series = random_eta_series(G, random.Random(5), 10**6)
    assert is_eta_series(G, series)


def test_kirillov_formula_terms_are_subgroups(groups):
    G = groups("kirillov_quotient", p=3, e=2)
    terms = kirillov_formula_series(G)
    assert terms[0].is_trivial()
    assert terms[-1].is_whole()
    rep = upper_eta_series(G)
    assert [t.order for t in terms] == rep.series.orders()
