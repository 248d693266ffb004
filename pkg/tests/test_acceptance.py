"""Acceptance criteria, one check per criterion at its stated tolerance.

Each ``check_*`` returns ``(ok, detail)``. Under pytest every check prints a
``criterion N: PASS|FAIL`` line (even with output capture on) and asserts.
Run ``python tests/test_acceptance.py`` for the summary alone.
"""

from __future__ import annotations

import csv
import io
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from entkit.bipartite import assistance_upper_sandwich, isotropic_eof, two_qubit_closed_forms
from entkit.cli import run
from entkit.convex_roof import OptimizerOptions, assistance_maximize, roof_minimize
from entkit.monogamy import disentangling_check, e2_counterexample_state, power_residual, triangle_check
from entkit.multipartite import (
    ckw_residual,
    fill_measures,
    geometric_measure,
    gmc,
    hyperdeterminant,
    meyer_wallach,
    three_tangle,
)
from entkit.partitions import Partition, complementarity_set, enumerate_k_partitions
from entkit.reduced_fn import concavity_probe, parse_kind, subadditivity_probe
from entkit.states import ghz, partial_trace, partial_transpose, random_density, random_pure, w

sys.path.insert(0, str(Path(__file__).parent))
from xi_fixtures import XI_ABCDE_MINUS_AB, XI_ABCDE_MINUS_ABC  # noqa: E402

TRIALS = 10_000


def _random_pures(dims, count, seed):
    rng = np.random.default_rng(seed)
    return [random_pure(dims, seed=rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# 1


def check_1():
    """Convex-roof E_f matches the two-qubit closed form on 50 mixed states."""
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    opts = OptimizerOptions(ensemble_size=4, restarts=20, seed=0)
    worst = 0.0
    for _ in range(50):
        rho = random_density([2, 2], seed=rng)
        exact = two_qubit_closed_forms(rho)["E_f"]
        worst = max(worst, abs(roof_minimize("S", rho, opts).value - exact))
    elapsed = time.perf_counter() - start
    return worst <= 1e-3 and elapsed <= 300, f"max |roof - exact| = {worst:.2e}, {elapsed:.0f} s"


# ---------------------------------------------------------------------------
# 2


def check_2():
    """CKW tangle residual on 10^4 random three-qubit kets and W saturation."""
    low = min(power_residual("tangle", 1.0, s) for s in _random_pures([2, 2, 2], TRIALS, 202))
    sat = power_residual("tangle", 1.0, w(3))
    return low >= -1e-9 and abs(sat) <= 1e-9, f"min residual {low:.3e}, W residual {sat:.1e}"


# ---------------------------------------------------------------------------
# 3


def check_3():
    """E_f at alpha = 1.45 holds on 10^4 kets, W violates at alpha = 1."""
    low = min(power_residual("eof", 1.45, s) for s in _random_pures([2, 2, 2], TRIALS, 303))
    w_res = power_residual("eof", 1.0, w(3))
    return low >= -1e-9 and w_res <= -0.15, f"min residual {low:.3e}, W alpha=1 residual {w_res:.4f}"


# ---------------------------------------------------------------------------
# 4


def check_4():
    """Closed-form multipartite fixtures."""
    pairs = [
        ("three_tangle(GHZ3)", three_tangle(ghz(3)), 1.0),
        ("three_tangle(W3)", three_tangle(w(3)), 0.0),
        ("gmc(W3)", gmc(w(3)), 2 * math.sqrt(2) / 3),
        ("geometric(W3)", geometric_measure(w(3)), 5 / 9),
        ("geometric(GHZ3)", geometric_measure(ghz(3)), 0.5),
        ("F(GHZ3)", fill_measures(ghz(3))["F"], 1.0),
        ("F(W3)", fill_measures(w(3))["F"], 8 / 9),
        ("E_Q(W3)", meyer_wallach(w(3)), 8 / 9),
    ]
    for n in range(3, 7):
        pairs.append((f"gmc(GHZ{n})", gmc(ghz(n)), 1.0))
        pairs.append((f"E_Q(GHZ{n})", meyer_wallach(ghz(n)), 1.0))
    bad = [name for name, got, want in pairs if abs(got - want) > 1e-9]
    worst = max(abs(got - want) for _, got, want in pairs)
    return not bad, f"{len(pairs)} fixtures, max error {worst:.1e}" + (f", failing {bad}" if bad else "")


# ---------------------------------------------------------------------------
# 5


def _h2(x):
    return 0.0 if x <= 0 or x >= 1 else -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _iso_mid(t, m):
    gamma = (math.sqrt(t) + math.sqrt((m - 1) * (1 - t))) ** 2 / m
    return _h2(gamma) + (1 - gamma) * math.log2(m - 1)


def _iso_top(t, m):
    return (t - 1) * m * math.log2(m - 1) / (m - 2) + math.log2(m)


def isotropic_oracle(t, m):
    if t <= 1 / m:
        return 0.0
    if m == 2 or t < 4 * (m - 1) / m**2:
        return _iso_mid(t, m)
    return _iso_top(t, m)


def check_5():
    """Isotropic E_f curves for m = 2, 3, 4 over 101 points."""
    worst, jumps, nonzero = 0.0, 0.0, []
    for m in (2, 3, 4):
        out, err = io.StringIO(), io.StringIO()
        if run(["reproduce", "--target", "isotropic-eof", "--m", str(m), "--points", "101"], out, err) != 0:
            return False, f"reproduce failed for m={m}: {err.getvalue()}"
        rows = list(csv.DictReader(io.StringIO(out.getvalue())))
        grid = {round(i / 100, 12) for i in range(101)}
        if not grid <= {round(float(r["t"]), 12) for r in rows}:
            return False, f"m={m}: grid points missing"
        for r in rows:
            t, val = float(r["t"]), float(r["E_f"])
            worst = max(worst, abs(val - isotropic_oracle(t, m)), abs(isotropic_eof(t, m) - isotropic_oracle(t, m)))
            if t <= 1 / m and val != 0.0:
                nonzero.append((m, t))
        if isotropic_eof(1 / m, m) != 0.0:
            nonzero.append((m, 1 / m))
        knot1 = 1 / m
        jumps = max(jumps, abs(_iso_mid(knot1, m)), abs(isotropic_eof(knot1 + 1e-13, m)))
        if m > 2:
            knot2 = 4 * (m - 1) / m**2
            jumps = max(jumps, abs(_iso_mid(knot2, m) - _iso_top(knot2, m)))
            jumps = max(jumps, abs(isotropic_eof(knot2 - 1e-13, m) - isotropic_eof(knot2 + 1e-13, m)))
    ok = worst <= 1e-9 and jumps <= 1e-9 and not nonzero
    return ok, f"max curve error {worst:.1e}, max knot jump {jumps:.1e}, nonzero below 1/m: {nonzero}"


# ---------------------------------------------------------------------------
# 6


def check_6():
    """4|Det| equals the CKW residual on 10^3 kets."""
    worst = max(abs(4 * abs(hyperdeterminant(s)) - ckw_residual(s)) for s in _random_pures([2, 2, 2], 1000, 606))
    return worst <= 1e-8, f"max deviation {worst:.1e}"


# ---------------------------------------------------------------------------
# 7


def check_7():
    """Concavity and subadditivity behaviour of reduced functions."""
    problems = []
    for spec in ("S", "h_C", "h_tau", "tsallis:q=2", "tsallis:q=3", "h_N", "h_F"):
        rep = concavity_probe(parse_kind(spec), 3, TRIALS, 7)
        if rep.violation_count:
            problems.append(f"concavity {spec}: {rep.violation_count}")
    if not concavity_probe(parse_kind("h_2"), 3, TRIALS, 7).equality_witnesses:
        problems.append("no strictness witness for h_2")
    neg = subadditivity_probe(parse_kind("h_N"), [2, 2], TRIALS, 7)
    if not (neg.violations and neg.reverse_violations):
        problems.append("h_N missing a direction")
    if not subadditivity_probe(parse_kind("h_alpha"), [2, 2], TRIALS, 7).violations:
        problems.append("h_alpha subadditive")
    for spec in ("S", "h_C", "h_tau", "tsallis:q=2"):
        rep = subadditivity_probe(parse_kind(spec), [2, 2], TRIALS, 7)
        if rep.violation_count:
            problems.append(f"subadditivity {spec}: {rep.violation_count}")
    return not problems, "; ".join(problems) or "all expected outcomes found"


# ---------------------------------------------------------------------------
# 8


def check_8():
    """Partial-norm counterexample to the disentangling condition."""
    s = e2_counterexample_state()
    rep = disentangling_check("partial_norm:normalized=False", s, opts=OptimizerOptions(restarts=8))
    rho_ac = partial_trace(s, [0, 2])
    low = float(np.linalg.eigvalsh(partial_transpose(rho_ac, [0]))[0])
    gap = abs(rep.e_a_bc - rep.e_ab)
    return gap <= 1e-9 and low <= -1e-3, f"|E(A|BC) - E(AB)| = {gap:.1e}, min PT eigenvalue {low:.4f}"


# ---------------------------------------------------------------------------
# 9


def check_9():
    """Concurrence triangle on qubit and qutrit kets."""
    q2 = min(triangle_check("concurrence", 1.0, s).min_slack for s in _random_pures([2, 2, 2], TRIALS, 909))
    q3 = min(triangle_check("concurrence", 1.0, s).min_slack for s in _random_pures([3, 3, 3], 1000, 919))
    return q2 >= -1e-9 and q3 >= -1e-9, f"min slack qubits {q2:.3e}, qutrits {q3:.3e}"


# ---------------------------------------------------------------------------
# 10


def _stirling(n, k):
    table = [[0] * (n + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def check_10():
    """Stirling counts and both five-party complementarity sets."""
    bad = [(n, k) for n in range(1, 9) for k in range(1, n + 1) if len(enumerate_k_partitions(n, k)) != _stirling(n, k)]
    first = complementarity_set(Partition.parse("A|B|CD|E"), Partition.parse("A|B"))
    ok1 = sorted(map(str, first)) == sorted(str(Partition.parse(x)) for x in XI_ABCDE_MINUS_AB)
    second = complementarity_set(Partition.parse("A|B|C|D|E"), Partition.parse("A|B|C"))
    listed = [Partition.parse(x) for x in XI_ABCDE_MINUS_ABC]
    # the reference listing repeats ABCD|E once; the computed set has ABC|DE there
    dup = [p for p in set(listed) if listed.count(p) > 1]
    extra = set(second) - set(listed)
    ok2 = (
        len(second) == len(set(second)) == len(listed)
        and set(listed) <= set(second)
        and dup == [Partition.parse("ABCD|E")]
        and extra == {Partition.parse("ABC|DE")}
    )
    ok = not bad and ok1 and ok2
    return ok, f"stirling mismatches {bad}, first set {len(first)} ok={ok1}, second set {len(second)} ok={ok2}"


# ---------------------------------------------------------------------------
# 11


def check_11():
    """Assistance concurrence polygamy on GHZ3."""
    s = ghz(3)
    rho_ab = partial_trace(s, [0, 1])
    rho_ac = partial_trace(s, [0, 2])
    opts = OptimizerOptions(restarts=8)
    ca_ab = assistance_maximize("concurrence", rho_ab, opts).value
    ca_ac = assistance_maximize("concurrence", rho_ac, opts).value
    residual = 1.0**2 - ca_ab**2 - ca_ac**2
    return ca_ab >= 0.999 and residual <= -0.99, f"C_a(AB) = {ca_ab:.6f}, beta=2 residual {residual:.4f}"


# ---------------------------------------------------------------------------
# 12


def check_12():
    """Negativity sandwich on 10^3 two-qubit states."""
    rng = np.random.default_rng(1212)
    states = [random_density([2, 2], rank=int(rng.integers(1, 5)), seed=rng) for _ in range(1000)]
    fails = sum(not assistance_upper_sandwich(s)["holds"] for s in states)
    return fails == 0, f"{fails} of 1000 states outside the sandwich"


CHECKS = {n: globals()[f"check_{n}"] for n in range(1, 13)}


def _line(n, ok, detail):
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {CHECKS[n].__doc__.strip()} ({detail})"


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(n, capsys):
    ok, detail = CHECKS[n]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = {n: fn() for n, fn in CHECKS.items()}
    for n, (ok, detail) in results.items():
        print(_line(n, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results.values()) else 1)
