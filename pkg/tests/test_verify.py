import json
import math

import numpy as np
import pytest

from eigenbounds import generators as gen
from eigenbounds.errors import GNegative, GNotMonotone, MissingNextEigenvalue
from eigenbounds.profiles import classical_membrane
from eigenbounds.solvers import sigma_tilde_p
from eigenbounds.spectra import make_spectrum
from eigenbounds.verify import (
    FAMILY_P,
    CheckReport,
    MonotoneFunctionTable,
    aizenman_lieb_batch,
    aizenman_lieb_identity,
    beta_ratio_report,
    check_family_inequality,
    check_h1,
    check_hp_form,
    check_theorem31,
    chebyshev_report,
    lift_identity,
    monotonicity_report,
    run_suite,
)

P1, P2 = classical_membrane(1), classical_membrane(2)


def test_report_pass_matches_slack():
    assert CheckReport("x", "d", -1e-11, 1e-10).passed
    assert not CheckReport("x", "d", -2e-10, 1e-10).passed
    j = CheckReport("x", "d", math.inf, 1.0, {"v": math.nan}).to_json()
    assert set(j) == {"check", "pass", "slack", "tolerance", "witness"}
    assert j["slack"] is None and j["witness"]["v"] is None
    json.dumps(j, allow_nan=False)


def test_family_on_interval_spectrum():
    s = gen.box_spectrum([1.0], 3)
    for p in FAMILY_P:
        assert check_family_inequality(P1, s, 2, p).passed


def test_family_saturates_at_three_lambda():
    r = check_family_inequality(P2, make_spectrum([1.0, 3.0]), 1, 2.0)
    assert r.slack == 0.0 and r.passed


def test_family_needs_next_eigenvalue():
    with pytest.raises(MissingNextEigenvalue):
        check_family_inequality(P2, make_spectrum([1.0, 2.0]), 2, 1.0)


def test_family_zero_gap_below_one():
    # tie between lambda_m and lambda_{m+1}: the p < 1 right side is infinite
    r = check_family_inequality(P2, make_spectrum([1.0, 2.0, 2.0]), 2, 0.5)
    assert r.slack == math.inf and r.passed
    assert r.to_json()["slack"] is None


def test_hp_form_agrees_with_p0(rng):
    for _ in range(200):
        lams = np.sort(rng.uniform(1, 3, 4)).tolist()
        s = make_spectrum(lams)
        m = int(rng.integers(1, 4))
        a = check_family_inequality(P2, s, m, 0.0)
        b = check_hp_form(P2, s, m)
        assert a.passed == b.passed
        assert math.isclose(a.slack, P2.c * b.slack, rel_tol=1e-9, abs_tol=1e-12)


def test_theorem31_constant_g_is_p2():
    s = gen.box_spectrum([1.0, 1.3], 8)
    for m in range(1, 8):
        g = MonotoneFunctionTable(s.values[:m], (1.0,) * m)
        a = check_theorem31(P2, s, m, g).slack
        b = check_family_inequality(P2, s, m, 2.0).slack
        assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12 * abs(b))


def test_theorem31_power_g_is_p_family():
    s = make_spectrum([1.0, 1.4, 2.0, 2.9])
    m, p = 3, 1.5
    nxt = s.values[m]
    g = MonotoneFunctionTable.from_function(lambda x: (nxt - x) ** (p - 2), s.values[:m])
    a = check_theorem31(P2, s, m, g).slack
    b = check_family_inequality(P2, s, m, p).slack
    assert math.isclose(a, b, rel_tol=1e-12)


def test_monotone_table_validation():
    with pytest.raises(GNotMonotone):
        MonotoneFunctionTable((1.0, 2.0, 3.0), (3.0, 2.0, 1.0))
    with pytest.raises(GNegative):
        MonotoneFunctionTable((1.0, 2.0), (-1.0, 0.0))
    # order is taken from the abscissae
    MonotoneFunctionTable((2.0, 1.0), (5.0, 4.0))


def test_h1_concave_derivative():
    nxt, p = 5.0, 3.0
    xs = np.linspace(0.05, 4.95, 40)
    r = check_h1(lambda x: (nxt - x) ** p, lambda x: -p * (nxt - x) ** (p - 1), xs)
    assert r.passed and r.slack >= -r.tolerance


def test_h1_linear_is_equality():
    r = check_h1(lambda x: 3 * x - 1, lambda x: 3.0, [0.0, 0.5, 2.0, 7.0])
    assert abs(r.slack) <= 1e-14 and r.passed


def test_h1_quartic_fails_with_witness():
    r = check_h1(lambda x: x**4, lambda x: 4 * x**3, [-1.0, 0.0, 1.0])
    assert not r.passed and r.slack == -1.0
    assert {r.witness["x"], r.witness["y"]} in ({0.0, 1.0}, {-1.0, 0.0})


def test_aizenman_lieb_examples():
    assert aizenman_lieb_identity(1.0, 2.0, 4.0).slack >= -1e-13
    assert aizenman_lieb_identity(2.0, 1.0, 3.0).slack >= -1e-13
    assert aizenman_lieb_identity(1.0, 1.5, 2.5).passed


def test_aizenman_lieb_batch_deterministic():
    a, b = aizenman_lieb_batch(50, seed=3), aizenman_lieb_batch(50, seed=3)
    assert a.passed and a.to_json() == b.to_json()


def test_beta_ratios():
    assert beta_ratio_report().passed


@pytest.mark.parametrize("p", [3.0, 4.0])
def test_lift_reproduces_f_tilde(p):
    s = make_spectrum([1.0, 1.5, 2.0, 3.2, 4.0])
    m = 4
    top = sigma_tilde_p(P2, s, m, 2.0).value
    for sigma in np.linspace(1.05, top, 9):
        lifted, direct = lift_identity(P2, s, m, float(sigma), p)
        assert math.isclose(lifted, direct, rel_tol=1e-6, abs_tol=1e-12)


def test_monotonicity_examples():
    s = make_spectrum([1.0, 2.0])
    r = monotonicity_report(P2, s, 2, [0, 1, 2], [2, 3, 4])
    assert r.passed
    assert np.allclose(r.witness["low_values"], [3 + math.sqrt(3), 4.5, 3 + math.sqrt(1.5)], rtol=1e-10)
    flat = monotonicity_report(P2, make_spectrum([3.0]), 1, p_high=[2.0])
    assert flat.passed and abs(flat.slack) <= 1e-12


def test_chebyshev_reports():
    r = chebyshev_report(10_000, 8, seed=7)
    assert r.passed and r.slack >= -1e-12
    assert chebyshev_report(20, 1, seed=7).slack == 0.0
    c = chebyshev_report(500, 8, seed=7, control=True)
    assert c.passed
    # random opposite orderings sit strictly inside the inequality
    assert chebyshev_report(500, 8, seed=7).slack > 0


def test_suite_flags_doctored_spectrum():
    reps = run_suite(P2, make_spectrum([1.0, 2.0, 4.5]), m=2, chebyshev_trials=100, al_trials=5)
    bad = [r for r in reps if not r.passed]
    assert any(r.check == "family_inequality" and r.witness["p"] == 2.0 and r.slack < 0 for r in bad)


def test_suite_passes_on_generated_spectrum():
    s = gen.box_spectrum([1.0], 6)
    reps = run_suite(P1, s, chebyshev_trials=100, al_trials=5)
    assert all(r.passed for r in reps)
