import pytest

from relcomp import checks
from relcomp.algebra.upoly import Poly
from relcomp.checks import CHECKS, run_check


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_check_passes_on_seeded_draw(F998, name):
    result = run_check(name, F998, 9, 3)
    assert result.passed, result.detail
    assert result.name == name


def test_degree_law_on_small_field(F7):
    result = run_check("degree_law", F7, 4, 0)
    assert result.passed


def test_degree_law_reports_rate_and_witness(F998):
    result = run_check("degree_law", F998, 24, 1)
    assert result.passed
    assert "expected=8" in result.detail
    assert "generic_rate=1.00" in result.detail
    assert "witness_delta=8" in result.detail


def test_degree_law_fails_on_low_generic_rate(F998, monkeypatch):
    monkeypatch.setattr(checks, "_poly", lambda K, rng, length: Poly.constant(K, 5))
    result = run_check("degree_law", F998, 9, 3)
    assert not result.passed


def test_degree_law_fails_on_a_bad_witness(F998, monkeypatch):
    monkeypatch.setattr(checks, "x_power_witness", lambda f, mu: Poly.constant(f.field, 1))
    result = run_check("degree_law", F998, 9, 3)
    assert not result.passed
