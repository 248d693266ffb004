import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entkit.convex_roof import OptimizerOptions
from entkit.monogamy import (
    HIST_BINS,
    LINEAR_THETA,
    POWER_THETA,
    admissible_s1,
    as_marginal_measure,
    complete_monogamy_check,
    disentangling_check,
    e2_counterexample_state,
    markov_state,
    monogamy_exponent_estimate,
    polygamy_assistance_check,
    polygon_check,
    power_residual,
    residual_terms,
    scan_monogamy,
    strong_monogamy_residual,
    tight_relation_check,
    triangle_check,
    witness_residual,
)
from entkit.multipartite import three_tangle
from entkit.states import MultipartiteState, bell, ghz, product, random_pure, w

ZERO = MultipartiteState((2,), ket=np.array([1.0, 0.0]))
FAST = OptimizerOptions(restarts=4)


def test_ckw_saturated_by_w():
    assert power_residual("tangle", 1.0, w(3)) == pytest.approx(0.0, abs=1e-12)
    assert power_residual("concurrence", 2.0, w(3)) == pytest.approx(0.0, abs=1e-12)


@given(st.integers(0, 2**31 - 1))
def test_ckw_residual_is_three_tangle(seed):
    s = random_pure([2, 2, 2], seed=seed)
    assert power_residual("tangle", 1.0, s) == pytest.approx(three_tangle(s), abs=1e-10)


def test_eof_violates_at_alpha_one_on_w():
    assert power_residual("eof", 1.0, w(3)) < -0.1


def test_residual_monotone_in_alpha():
    rng = np.random.default_rng(4)
    for _ in range(20):
        left, right = residual_terms("concurrence", random_pure([2, 2, 2], seed=rng))
        vals = [left**a - sum(r**a for r in right) for a in (1.0, 1.5, 2.0, 3.0)]
        # normalized by left^a the residual grows with alpha
        scaled = [v / left**a for v, a in zip(vals, (1.0, 1.5, 2.0, 3.0))]
        assert all(x <= y + 1e-12 for x, y in zip(scaled, scaled[1:]))


def test_mixed_marginal_without_bound_rejected():
    s = random_pure([2, 2, 3], seed=1)
    with pytest.raises(ValueError):
        residual_terms("eof", s)
    left, right = residual_terms("concurrence", s)
    assert left > 0 and all(r >= 0 for r in right)


def test_measure_aliases():
    assert as_marginal_measure("tau").name == "tangle"
    assert as_marginal_measure("E_f").name == "eof"
    assert as_marginal_measure("negativity").kind is None


def test_scan_report_shape_and_replay():
    rep = scan_monogamy("eof", 1.0, samples=200, seed=3)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["verdict"] == "violated"
    assert data["histogram"]["bins"] == HIST_BINS
    assert sum(data["histogram"]["counts"]) == 200
    assert data["witnesses"]
    assert witness_residual(data, 0) == pytest.approx(data["witnesses"][0]["residual"], abs=1e-12)
    assert data["min_residual"] == pytest.approx(data["witnesses"][0]["residual"])


def test_scan_ckw_holds_and_is_seeded():
    a = scan_monogamy("tangle", 1.0, samples=300, seed=11)
    b = scan_monogamy("tangle", 1.0, samples=300, seed=11)
    assert a.verdict == "holds" and a.min_residual >= -1e-9
    assert a.to_json() == b.to_json()


def test_scan_workers_match_serial():
    a = scan_monogamy("concurrence", 2.0, samples=40, seed=2, workers=1)
    b = scan_monogamy("concurrence", 2.0, samples=40, seed=2, workers=2)
    assert a.to_json() == b.to_json()


def test_exponent_estimates():
    tangle = monogamy_exponent_estimate("tangle", samples=300, seed=0)
    conc = monogamy_exponent_estimate("concurrence", samples=300, seed=0)
    assert tangle.exponent <= 1.0 + 1e-12
    assert 1.5 < conc.exponent <= 2.0 + 1e-12
    lo, hi = conc.extra["bracket"]
    assert hi - lo <= 1e-2


def test_markov_state_disentangles():
    s = markov_state(random_pure([2, 2], seed=1), random_pure([2, 2], seed=2))
    rep = disentangling_check("eof", s, opts=FAST)
    assert rep.condition_met
    assert rep.ac_product and rep.ac_ppt
    assert rep.e_ac == pytest.approx(0.0, abs=1e-12)


def test_e2_counterexample():
    s = e2_counterexample_state()
    rep = disentangling_check("partial_norm:normalized=False", s, opts=FAST)
    assert rep.e_a_bc == pytest.approx(0.5, abs=1e-9)
    assert rep.e_ab == pytest.approx(0.5, abs=1e-9)
    assert rep.condition_met
    assert rep.ac_min_pt_eigenvalue <= -1e-3
    assert not rep.ac_ppt


def test_polygon_and_triangle():
    assert polygon_check("concurrence", ghz(4)).holds
    assert triangle_check("concurrence", 1.0, w(3)).min_slack == pytest.approx(math.sqrt(8 / 9), abs=1e-12)
    rng = np.random.default_rng(0)
    for _ in range(50):
        assert triangle_check("concurrence", 1.0, random_pure([3, 3, 3], seed=rng)).holds


def test_polygon_degenerate_on_biseparable():
    # C(A|BC) = C(B|AC) = 1 and C(C|AB) = 0
    rep = polygon_check("concurrence", product(bell(), ZERO))
    assert rep.min_slack == pytest.approx(0.0, abs=1e-12)


def test_polygamy_of_assistance():
    rep = polygamy_assistance_check("concurrence", ghz(3), opts=FAST)
    assert min(rep.right) >= 0.999
    assert rep.residual <= -0.99
    assert polygamy_assistance_check("tangle", w(3), opts=FAST).residual < 0


def test_tight_schedules():
    assert LINEAR_THETA.with_gamma(2).coefficients(2) == [1.0, 1.0]
    assert LINEAR_THETA.coefficients(3) == [1.0, 2.0, 4.0]
    assert POWER_THETA.coefficients(2) == [1.0, 3.0]
    with pytest.raises(ValueError):
        LINEAR_THETA.with_gamma(1.5).coefficients(2)
    rng = np.random.default_rng(8)
    states = [random_pure([2, 2, 2], seed=rng) for _ in range(200)]
    r_lin = tight_relation_check(LINEAR_THETA, "concurrence", states)
    r_pow = tight_relation_check(POWER_THETA, "concurrence", states)
    assert r_lin.holds and r_pow.holds
    assert r_lin.skipped == r_pow.skipped < 200
    assert all(b >= a - 1e-15 for a, b in zip(r_lin.right_sides, r_pow.right_sides))


def test_tight_gamma_two_is_ckw():
    rng = np.random.default_rng(5)
    s = next(t for t in (random_pure([2, 2, 2], seed=rng) for _ in range(100)) if admissible_s1("concurrence", t))
    rep = tight_relation_check(LINEAR_THETA.with_gamma(2), "concurrence", [s])
    assert rep.residuals[0] == pytest.approx(power_residual("concurrence", 2.0, s), abs=1e-12)


def test_strong_monogamy():
    assert strong_monogamy_residual(ghz(3)) == pytest.approx(1.0, abs=1e-9)
    assert strong_monogamy_residual(w(3)) == pytest.approx(0.0, abs=1e-9)
    p = product(ZERO, ZERO, ZERO, ZERO)
    assert strong_monogamy_residual(p, opts=FAST) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        strong_monogamy_residual(ghz(5))


@pytest.mark.slow
def test_strong_monogamy_ghz4():
    assert strong_monogamy_residual(ghz(4), mu=1.0, opts=FAST) == pytest.approx(1.0, abs=1e-6)


def test_complete_monogamy_product_state():
    rep = complete_monogamy_check("tangle", product(bell(), ZERO), opts=FAST)
    assert rep.holds
    item = next(it for it in rep.items if it.finer == "A|B|C" and it.coarser == "A|B")
    assert item.equal and item.all_vanish
    assert set(item.xi_values) == {"A|C", "B|C", "AB|C"}


def test_complete_monogamy_ghz():
    rep = complete_monogamy_check("tangle", ghz(3), opts=FAST)
    assert rep.holds
    assert all(not it.equal for it in rep.items)
