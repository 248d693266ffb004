"""Monogamy and polygamy checks for bipartite and multipartite measures.

Residuals are ``left - right`` so that a nonnegative value means the
inequality holds on the state. Mixed marginals are evaluated with exact
formulas where they exist (two-qubit closed forms, negativity, product
states). Otherwise the bound direction is chosen so a reported violation is
genuine: monogamy right-hand sides use certified lower bounds and left-hand
sides use convex-roof upper bounds.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .bipartite import (
    concurrence_lower_bound,
    negativity,
    parse_measure,
    pure_measure,
    q_concurrence_lower_bound,
    alpha_concurrence_lower_bound,
    two_qubit_closed_forms,
)
from .convex_roof import OptimizerOptions, assistance_maximize, roof_minimize
from .linalg import TOL, psd_spectrum
from .multipartite import Reductions, three_tangle
from .partitions import Partition, complementarity_set, enumerate_all_partitions
from .reduced_fn import ReducedFunctionKind, make_kind
from .states import (
    MultipartiteState,
    RANK_TOL,
    partial_trace,
    partial_transpose,
    permute,
    random_pure,
    reduced_density,
    state_from_json,
    state_to_json,
)

__all__ = [
    "HIST_BINS",
    "DISENTANGLING_TOL",
    "MarginalMeasure",
    "MonogamyReport",
    "TightSchedule",
    "LINEAR_THETA",
    "POWER_THETA",
    "as_marginal_measure",
    "residual_terms",
    "power_residual",
    "witness_residual",
    "scan_monogamy",
    "monogamy_exponent_estimate",
    "disentangling_check",
    "polygon_check",
    "triangle_check",
    "polygamy_assistance_check",
    "admissible_s1",
    "tight_relation_check",
    "strong_monogamy_residual",
    "complete_monogamy_check",
    "markov_state",
    "e2_counterexample_state",
]

HIST_BINS = 64
DISENTANGLING_TOL = 1e-6
_PRODUCT_TOL = 1e-12
_MAX_WITNESSES = 16

_TWO_QUBIT_KEYS = {"concurrence": "C", "tangle": "tau", "von_neumann": "E_f"}
_NAMES = {
    "tangle": "tangle",
    "tau": "tangle",
    "concurrence": "concurrence",
    "c": "concurrence",
    "eof": "von_neumann",
    "e_f": "von_neumann",
    "ef": "von_neumann",
    "entanglement_of_formation": "von_neumann",
}


# ---------------------------------------------------------------------------
# measure adaptor


@dataclass(frozen=True)
class MarginalMeasure:
    """A bipartite measure evaluable on pure states and on marginals.

    ``kind`` is the reduced function of the pure-state measure; ``None``
    marks negativity, which is evaluated exactly on mixed states.
    """

    name: str
    kind: ReducedFunctionKind | None

    def __str__(self) -> str:
        return self.name

    def pure(self, s: MultipartiteState, side: Sequence[int]) -> float:
        spec = "negativity" if self.kind is None else self.kind
        return pure_measure(spec, s, list(side)).value

    def value(self, s: MultipartiteState, side: Sequence[int], bound: str = "lower", opts=None) -> float:
        """Value on ``s`` split as ``side | rest``.

        ``bound`` selects the route for mixed states without an exact
        formula: ``"lower"`` (certified lower bound), ``"upper"`` (convex-roof
        upper bound) or ``"assist"`` (lower bound on the assistance quantity).

        Raises
        ------
        ValueError
            When ``bound="lower"`` and no certified lower bound is known.
        """
        side = list(side)
        if s.is_pure or _rank(s) == 1:
            return self.pure(s.as_pure() if not s.is_pure else s, side)
        if bound == "assist":
            return assistance_maximize(self._roof_spec(), s, opts, side).value
        if self.kind is None:
            return negativity(s, side).value
        if _is_product(s, side):
            return 0.0
        tag = self.kind.tag
        if tuple(s.dims) == (2, 2) and tag in _TWO_QUBIT_KEYS:
            return two_qubit_closed_forms(s)[_TWO_QUBIT_KEYS[tag]]
        if bound == "upper":
            return roof_minimize(self._roof_spec(), s, opts, side).value
        if bound == "lower":
            return self._lower(s, side)
        raise ValueError(f"unknown bound {bound!r}")

    def _roof_spec(self):
        return make_kind("negativity") if self.kind is None else self.kind

    def _lower(self, s: MultipartiteState, side) -> float:
        tag = self.kind.tag
        if tag == "concurrence":
            return concurrence_lower_bound(s, side).value
        if tag == "tangle":
            return concurrence_lower_bound(s, side).value ** 2
        if tag == "q_concurrence":
            return q_concurrence_lower_bound(s, float(self.kind.params["q"]), side).value
        if tag == "alpha_concurrence":
            return alpha_concurrence_lower_bound(s, float(self.kind.params["alpha"]), side).value
        raise ValueError(
            f"{self.name} on a mixed {'x'.join(map(str, s.dims))} marginal has no certified lower bound; "
            "use two-qubit marginals or a concurrence-type measure"
        )


def as_marginal_measure(measure) -> MarginalMeasure:
    """Resolve ``"tangle"``, ``"concurrence"``, ``"eof"``, ``"negativity"`` or a reduced-function kind."""
    if isinstance(measure, MarginalMeasure):
        return measure
    if isinstance(measure, ReducedFunctionKind):
        return MarginalMeasure(str(measure), measure)
    text = str(measure).strip()
    key = text.lower()
    if key in _NAMES:
        tag = _NAMES[key]
        return MarginalMeasure("eof" if tag == "von_neumann" else tag, make_kind(tag))
    if key == "negativity":
        return MarginalMeasure("negativity", None)
    spec = parse_measure(text)
    return MarginalMeasure(text, spec.kind)


def _rank(s: MultipartiteState) -> int:
    return int(np.sum(psd_spectrum(s.matrix) > RANK_TOL))


def _is_product(s: MultipartiteState, side) -> bool:
    rest = [i for i in range(s.n) if i not in side]
    return not rest or _factorizes(s, [list(side), rest])


def _as_state(state) -> MultipartiteState:
    if isinstance(state, MultipartiteState):
        return state
    raise TypeError("pass a MultipartiteState")


# ---------------------------------------------------------------------------
# power residuals


def _pair_marginal(s: MultipartiteState, a: int, b: int):
    keep = sorted((a, b))
    return partial_trace(s, keep), [keep.index(a)]


def residual_terms(measure, state, focus: int = 0, partners=None, opts=None) -> tuple[float, list[float]]:
    """``(E(focus|rest), [E(focus, partner_i)])`` with conservative bounds.

    The left value is exact on pure states and a convex-roof upper bound on
    mixed ones; the pair values are exact or certified lower bounds.
    """
    E = as_marginal_measure(measure)
    s = _as_state(state)
    if s.n < 3:
        raise ValueError("monogamy needs at least three parties")
    partners = [i for i in range(s.n) if i != focus] if partners is None else list(partners)
    if focus in partners or not partners:
        raise ValueError("partners must be nonempty and exclude the focus")
    left = E.value(s, [focus], bound="upper", opts=opts)
    right = [E.value(*_pair_marginal(s, focus, p), bound="lower", opts=opts) for p in partners]
    return left, right


def _combine(left: float, right: Sequence[float], alpha: float) -> float:
    return left**alpha - sum(r**alpha for r in right)


def power_residual(measure, alpha: float, state, focus: int = 0, partners=None, opts=None) -> float:
    """``E^alpha(focus|rest) - sum_i E^alpha(focus, partner_i)``.

    Examples
    --------
    >>> from entkit.states import w
    >>> abs(power_residual("tangle", 1.0, w(3))) < 1e-9
    True
    >>> power_residual("eof", 1.0, w(3)) < 0
    True
    """
    left, right = residual_terms(measure, state, focus, partners, opts)
    return _combine(left, right, alpha)


@dataclass
class MonogamyReport:
    """Outcome of a sampling campaign for ``E^alpha`` monogamy."""

    measure: str
    exponent: float
    focus: int
    samples: int
    min_residual: float
    violating_witnesses: list = field(default_factory=list)
    witness_residuals: list = field(default_factory=list)
    verdict: str = "holds"
    tolerance: float = 1e-9
    histogram: list = field(default_factory=lambda: [0] * HIST_BINS)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "measure": self.measure,
            "exponent": self.exponent,
            "focus": self.focus,
            "samples": self.samples,
            "min_residual": self.min_residual,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "histogram": {"bins": HIST_BINS, "range": [-1.0, 1.0], "counts": list(self.histogram)},
            "witnesses": [
                {"residual": r, "state": state_to_json(s)}
                for s, r in zip(self.violating_witnesses, self.witness_residuals)
            ],
            **self.extra,
        }


def _histogram(residuals: np.ndarray) -> list[int]:
    counts, _ = np.histogram(np.clip(residuals, -1.0, 1.0), bins=HIST_BINS, range=(-1.0, 1.0))
    return [int(c) for c in counts]


def _report(measure: str, alpha: float, focus: int, states, residuals: np.ndarray, tol: float, extra=None):
    bad = np.flatnonzero(residuals < -tol)
    order = bad[np.argsort(residuals[bad], kind="stable")][:_MAX_WITNESSES]
    return MonogamyReport(
        measure=measure,
        exponent=float(alpha),
        focus=focus,
        samples=len(residuals),
        min_residual=float(residuals.min()) if residuals.size else 0.0,
        violating_witnesses=[states[i] for i in order],
        witness_residuals=[float(residuals[i]) for i in order],
        verdict="violated" if bad.size else "holds",
        tolerance=tol,
        histogram=_histogram(residuals),
        extra=dict(extra or {}),
    )


def witness_residual(report_json: dict, index: int = 0) -> float:
    """Re-evaluate a stored witness from its serialized state alone."""
    wit = report_json["witnesses"][index]
    s = state_from_json(wit["state"])
    return power_residual(report_json["measure"], report_json["exponent"], s, report_json["focus"])


def _sample_states(dims, samples: int, seed) -> list[MultipartiteState]:
    seqs = np.random.SeedSequence(seed).spawn(samples)
    return [random_pure(dims, np.random.default_rng(ss)) for ss in seqs]


def _terms_chunk(args):
    measure, states, focus = args
    return [residual_terms(measure, s, focus) for s in states]


def _all_terms(measure, states, focus: int, workers: int):
    if workers <= 1 or len(states) < 2 * workers:
        return _terms_chunk((measure, states, focus))
    size = math.ceil(len(states) / workers)
    chunks = [(str(measure), states[i : i + size], focus) for i in range(0, len(states), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_terms_chunk, chunks))
    return [t for part in parts for t in part]


def _residuals(terms, alpha: float) -> np.ndarray:
    return np.array([_combine(left, right, alpha) for left, right in terms])


def scan_monogamy(
    measure,
    alpha: float,
    dims: Sequence[int] = (2, 2, 2),
    samples: int = 1000,
    seed=0,
    focus: int = 0,
    tol: float = 1e-9,
    workers: int = 1,
    states: Iterable[MultipartiteState] | None = None,
) -> MonogamyReport:
    """Evaluate the ``alpha``-power residual on random pure states (or ``states``).

    Sample ``i`` uses a seed derived from ``(seed, i)``, so results do not
    depend on ``workers``.

    Examples
    --------
    >>> rep = scan_monogamy("tangle", 1.0, samples=50, seed=7)
    >>> rep.verdict
    'holds'
    """
    states = list(states) if states is not None else _sample_states(dims, samples, seed)
    terms = _all_terms(measure, states, focus, workers)
    return _report(str(measure), alpha, focus, states, _residuals(terms, alpha), tol)


def monogamy_exponent_estimate(
    measure,
    sampler: Callable[[], Iterable[MultipartiteState]] | Iterable[MultipartiteState] | None = None,
    alpha_grid: Sequence[float] | None = None,
    tolerance: float = 1e-9,
    resolution: float = 1e-2,
    dims: Sequence[int] = (2, 2, 2),
    samples: int = 1000,
    seed=0,
    focus: int = 0,
) -> MonogamyReport:
    """Empirical estimate of the smallest exponent with no sampled violation.

    The grid (default ``0.5, 0.75, ..., 4``) is scanned upward; the first
    violation-free point and its failing predecessor are refined by
    bisection to ``resolution``. The report's ``exponent`` is the upper end
    of the final bracket and its witnesses violate the lower end.
    """
    if sampler is None:
        states = _sample_states(dims, samples, seed)
    else:
        states = list(sampler() if callable(sampler) else sampler)
    grid = sorted(alpha_grid) if alpha_grid is not None else list(np.arange(0.5, 4.0 + 1e-12, 0.25))
    terms = _all_terms(measure, states, focus, 1)

    def ok(a: float) -> bool:
        return bool(_residuals(terms, a).min() >= -tolerance)

    lo = None
    hi = None
    for a in grid:
        if ok(a):
            hi = a
            break
        lo = a
    if hi is None:
        res = _residuals(terms, grid[-1])
        return _report(str(measure), float("inf"), focus, states, res, tolerance, {"bracket": [grid[-1], None]})
    if lo is not None:
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if ok(mid):
                hi = mid
            else:
                lo = mid
    witness_alpha = lo if lo is not None else hi
    res = _residuals(terms, witness_alpha)
    rep = _report(str(measure), hi, focus, states, res, tolerance, {"bracket": [lo, hi], "estimate": "empirical"})
    rep.exponent = float(hi)
    return rep


# ---------------------------------------------------------------------------
# disentangling condition


@dataclass
class DisentanglingReport:
    e_a_bc: float
    e_ab: float
    delta: float
    condition_met: bool
    e_ac: float | None = None
    ac_min_pt_eigenvalue: float | None = None
    ac_ppt: bool | None = None
    ac_product: bool | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def disentangling_check(
    measure, state, parties: Sequence[int] = (0, 1, 2), tol: float = DISENTANGLING_TOL, opts=None
) -> DisentanglingReport:
    """Test whether ``E(A|BC) = E(AB)`` forces the ``AC`` marginal to be unentangled.

    ``parties`` names ``(A, B, C)``. Mixed marginals without an exact
    formula use convex-roof upper bounds. When the condition holds the
    ``AC`` marginal is reported with ``E(AC)``, its smallest partial-transpose
    eigenvalue and whether it factorizes.
    """
    E = as_marginal_measure(measure)
    s = _as_state(state)
    if s.n != 3:
        raise ValueError("disentangling check needs a tripartite state")
    a, b, c = parties
    e_a_bc = E.value(s, [a], bound="upper", opts=opts)
    rho_ab, side_ab = _pair_marginal(s, a, b)
    e_ab = E.value(rho_ab, side_ab, bound="upper", opts=opts)
    delta = abs(e_a_bc - e_ab)
    rep = DisentanglingReport(e_a_bc, e_ab, delta, bool(delta <= tol))
    if rep.condition_met:
        rho_ac, side_ac = _pair_marginal(s, a, c)
        rep.ac_product = _is_product(rho_ac, side_ac)
        rep.ac_min_pt_eigenvalue = float(np.linalg.eigvalsh(partial_transpose(rho_ac, side_ac))[0])
        rep.ac_ppt = bool(rep.ac_min_pt_eigenvalue >= -TOL)
        rep.e_ac = E.value(rho_ac, side_ac, bound="upper", opts=opts)
    return rep


def markov_state(phi: MultipartiteState, eta: MultipartiteState) -> MultipartiteState:
    """``|phi>^{A B1} |eta>^{B2 C}`` as a tripartite state with ``B = B1 B2``."""
    if phi.n != 2 or eta.n != 2:
        raise ValueError("phi and eta must be bipartite")
    ket = np.kron(phi.as_pure().ket if not phi.is_pure else phi.ket, eta.as_pure().ket if not eta.is_pure else eta.ket)
    dims = (phi.dims[0], phi.dims[1] * eta.dims[0], eta.dims[1])
    return MultipartiteState(dims, ket=ket)


def e2_counterexample_state(a=(math.sqrt(0.5), math.sqrt(0.3), math.sqrt(0.2)), a_prime=None) -> MultipartiteState:
    """Pure ``3 x 4 x 2`` state whose ``AB`` marginal carries all the partial-norm entanglement.

    ``|Phi> = (|psi0>|0> + |psi1>|1>) / sqrt 2`` with
    ``|psi0> = sum_i a_i |ii>`` and
    ``|psi1> = a'_0 |03> + a'_1 |12> + a'_2 |21>``. The partial-norm value
    ``1 - a_0^2`` coincides across ``A|BC`` and ``AB`` while the ``AC``
    marginal is NPT whenever ``a'_1 a_2 != a_1 a'_2``.
    """
    if a_prime is None:
        a_prime = (math.sqrt(0.5), math.sqrt(0.35), math.sqrt(0.15))
    a = np.asarray(a, dtype=float)
    ap = np.asarray(a_prime, dtype=float)
    for v in (a, ap):
        if v.shape != (3,) or abs(np.sum(v**2) - 1) > 1e-12:
            raise ValueError("amplitude triples must be normalized")
    if abs(a[0] ** 2 - ap[0] ** 2) > 1e-12 or a[0] ** 2 < 0.5:
        raise ValueError("need a_0^2 = a'_0^2 >= 1/2")
    t = np.zeros((3, 4, 2))
    for i in range(3):
        t[i, i, 0] = a[i]
    t[0, 3, 1], t[1, 2, 1], t[2, 1, 1] = ap
    return MultipartiteState((3, 4, 2), ket=(t / math.sqrt(2)).reshape(-1))


# ---------------------------------------------------------------------------
# polygon and polygamy


@dataclass
class PolygonReport:
    values: list
    slacks: list
    power: float
    holds: bool

    @property
    def min_slack(self) -> float:
        return min(self.slacks)

    def to_json(self) -> dict:
        return {"values": self.values, "slacks": self.slacks, "power": self.power, "holds": self.holds}


def polygon_check(measure, ket, power: float = 1.0, tol: float = 1e-9) -> PolygonReport:
    """Check ``E^p(i|rest) <= sum_{j != i} E^p(j|rest)`` for every party ``i``.

    Examples
    --------
    >>> from entkit.states import ghz
    >>> polygon_check("concurrence", ghz(3)).holds
    True
    """
    E = as_marginal_measure(measure)
    s = _as_state(ket)
    if not s.is_pure:
        s = s.as_pure()
    vals = [E.pure(s, [i]) ** power for i in range(s.n)]
    total = sum(vals)
    slacks = [total - 2 * v for v in vals]
    return PolygonReport(vals, slacks, float(power), bool(min(slacks) >= -tol))


def triangle_check(measure, alpha: float, ket, tol: float = 1e-9) -> PolygonReport:
    """Triangle form of :func:`polygon_check` for a pure tripartite state."""
    s = _as_state(ket)
    if s.n != 3:
        raise ValueError("triangle check needs three parties")
    return polygon_check(measure, s, alpha, tol)


@dataclass
class PolygamyReport:
    left: float
    right: list
    beta: float
    residual: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def polygamy_assistance_check(measure, ket, beta: float = 1.0, opts=None, parties=(0, 1, 2)) -> PolygamyReport:
    """``E_a^beta(A|BC) - E_a^beta(AB) - E_a^beta(AC)`` on a pure state.

    The left value is exact (assistance equals the measure on pure
    states) and the pair values are optimizer lower bounds, so a negative
    residual evidences polygamy.
    """
    E = as_marginal_measure(measure)
    s = _as_state(ket)
    if not s.is_pure:
        s = s.as_pure()
    if s.n != 3:
        raise ValueError("polygamy check needs a tripartite state")
    a, b, c = parties
    left = E.pure(s, [a])
    right = [E.value(*_pair_marginal(s, a, x), bound="assist", opts=opts) for x in (b, c)]
    return PolygamyReport(left, right, float(beta), _combine(left, right, beta))


# ---------------------------------------------------------------------------
# tighter relations


@dataclass(frozen=True)
class TightSchedule:
    """Coefficients ``c_i = theta(x)^(i-1)`` with ``x = gamma / base``.

    ``theta`` comes from an inequality ``(1+t)^x >= 1 + theta(x) t^x`` on
    ``0 <= t <= 1``; for ``gamma >= base`` every coefficient is at least 1.
    States must pass ``admissible`` (by default the ordered set where each
    pair value dominates the remaining group).
    """

    name: str
    theta: Callable[[float], float]
    gamma: float
    base: float = 2.0
    admissible: Callable | None = None

    def coefficients(self, n: int) -> list[float]:
        x = self.gamma / self.base
        if x < 1:
            raise ValueError(f"gamma must be at least the base exponent {self.base}")
        th = self.theta(x)
        return [th**i for i in range(n)]

    def with_gamma(self, gamma: float) -> "TightSchedule":
        return TightSchedule(self.name, self.theta, gamma, self.base, self.admissible)


def _theta_linear(x: float) -> float:
    return x


def _theta_power(x: float) -> float:
    return 2.0**x - 1.0


LINEAR_THETA = TightSchedule("linear", _theta_linear, 4.0)
POWER_THETA = TightSchedule("power", _theta_power, 4.0)


def _group_value(E: MarginalMeasure, s: MultipartiteState, focus: int, group: Sequence[int], opts) -> float:
    keep = sorted([focus, *group])
    sub = partial_trace(s, keep)
    return E.value(sub, [keep.index(focus)], bound="upper", opts=opts)


def admissible_s1(measure, state, focus: int = 0, partners=None, delta: float = 1.0, opts=None) -> bool:
    """``E^delta(A B_i) >= E^delta(A | B_{i+1} ... B_n)`` for ``1 <= i <= n-1``."""
    E = as_marginal_measure(measure)
    s = _as_state(state)
    partners = [i for i in range(s.n) if i != focus] if partners is None else list(partners)
    for i in range(len(partners) - 1):
        pair = _group_value(E, s, focus, [partners[i]], opts)
        rest = _group_value(E, s, focus, partners[i + 1 :], opts)
        if pair**delta < rest**delta - 1e-12:
            return False
    return True


@dataclass
class TightReport:
    schedule: str
    gamma: float
    coefficients: list
    residuals: list
    right_sides: list
    skipped: int
    tolerance: float

    @property
    def min_residual(self) -> float:
        return min(self.residuals) if self.residuals else 0.0

    @property
    def holds(self) -> bool:
        return self.min_residual >= -self.tolerance

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["min_residual"] = self.min_residual
        out["verdict"] = "holds" if self.holds else "violated"
        return out


def tight_relation_check(
    schedule: TightSchedule, measure, states: Iterable[MultipartiteState], focus: int = 0, tol: float = 1e-9, opts=None
) -> TightReport:
    """Residuals ``E^gamma(A|B_1...B_n) - sum_i c_i E^gamma(A B_i)`` over admissible states.

    Partners are taken in party order. Inadmissible states are skipped and
    counted.
    """
    E = as_marginal_measure(measure)
    residuals, rights, skipped = [], [], 0
    coeffs = None
    for s in states:
        s = _as_state(s)
        pred = schedule.admissible or admissible_s1
        if not pred(E, s, focus):
            skipped += 1
            continue
        left, pair = residual_terms(E, s, focus, opts=opts)
        coeffs = schedule.coefficients(len(pair))
        rhs = sum(c * v**schedule.gamma for c, v in zip(coeffs, pair))
        rights.append(float(rhs))
        residuals.append(float(left**schedule.gamma - rhs))
    return TightReport(schedule.name, schedule.gamma, coeffs or [], residuals, rights, skipped, tol)


# ---------------------------------------------------------------------------
# strong monogamy


def _default_mu(m: int) -> float:
    return 1.0 if m == 2 else m / 2.0


def _tau_pure(s: MultipartiteState, mu: Callable[[int], float], opts) -> float:
    """Residual ``m``-tangle of a pure ``m``-qubit state with focus on party 0."""
    m = s.n
    left = pure_measure("tangle", s, [0]).value
    if m == 2:
        return left
    if m == 3:
        return three_tangle(s)  # equals the CKW residual on pure 3-qubit states
    total = left
    for size in range(1, m - 1):
        for sub in combinations(range(1, m), size):
            val = _tau_mixed(partial_trace(s, (0, *sub)), mu, opts)
            total -= val ** mu(size + 1)
    return total


def _tau_mixed(s: MultipartiteState, mu, opts) -> float:
    if s.is_pure or _rank(s) == 1:
        return _tau_pure(s if s.is_pure else s.as_pure(), mu, opts)
    if s.n == 2:
        return two_qubit_closed_forms(s)["tau"]
    if _is_product(s, [0]):
        return 0.0

    def root(ket):
        t = _tau_pure(MultipartiteState(s.dims, ket=ket, validate=False), mu, opts)
        return math.sqrt(max(t, 0.0))

    return roof_minimize(root, s, opts).value ** 2


def strong_monogamy_residual(ket, mu: Callable[[int], float] | dict | float | None = None, opts=None) -> float:
    """Residual ``n``-tangle of a pure ``n``-qubit state (``n <= 4``).

    ``mu`` gives the exponent of the ``m``-party terms: a callable, a dict
    ``{m: mu_m}``, a constant or ``None`` (``mu_m = m / 2``, with
    ``mu_2 = 1``). Mixed ``m``-party marginals use the square-root convex
    roof, evaluated by the optimizer (an upper bound).

    Examples
    --------
    >>> from entkit.states import ghz
    >>> round(strong_monogamy_residual(ghz(3)), 9)
    1.0
    """
    s = _as_state(ket)
    if not s.is_pure:
        s = s.as_pure()
    if any(d != 2 for d in s.dims) or not 2 <= s.n <= 4:
        raise ValueError("strong monogamy residual supports 2 to 4 qubits")
    if mu is None:
        fn = _default_mu
    elif callable(mu):
        fn = mu
    elif isinstance(mu, dict):
        fn = lambda m: 1.0 if m == 2 else float(mu.get(m, _default_mu(m)))  # noqa: E731
    else:
        fn = lambda m: 1.0 if m == 2 else float(mu)  # noqa: E731
    opts = opts or OptimizerOptions(restarts=6)
    return _tau_pure(s, fn, opts)


# ---------------------------------------------------------------------------
# complete monogamy


def _unified_value(h: ReducedFunctionKind, s: MultipartiteState, p: Partition, opts) -> float:
    """``1/2 sum_blocks h(rho_block)`` on the reduced state over ``p``'s ground (convex roof when mixed)."""
    ground = sorted(p.ground)
    sub = partial_trace(s, ground)
    blocks = [[ground.index(x) for x in b] for b in p.blocks]

    def pure_val(t: MultipartiteState) -> float:
        r = Reductions(t)
        return 0.5 * sum(r.h(h, b) for b in blocks)

    if sub.is_pure or _rank(sub) == 1:
        return pure_val(sub if sub.is_pure else sub.as_pure())
    if _factorizes(sub, blocks):
        return 0.0
    return roof_minimize(lambda k: pure_val(MultipartiteState(sub.dims, ket=k, validate=False)), sub, opts).value


def _factorizes(s: MultipartiteState, blocks) -> bool:
    """True when ``s`` equals the product of its block marginals."""
    order = [x for b in blocks for x in b]
    joint = permute(s, order).matrix
    prod = np.ones((1, 1), dtype=complex)
    for b in blocks:
        prod = np.kron(prod, reduced_density(s, b))
    return bool(np.max(np.abs(joint - prod)) < _PRODUCT_TOL)


@dataclass
class CompleteMonogamyItem:
    finer: str
    coarser: str
    e_finer: float
    e_coarser: float
    equal: bool
    xi_values: dict
    all_vanish: bool | None

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CompleteMonogamyReport:
    items: list
    tolerance: float

    @property
    def holds(self) -> bool:
        return all(it.all_vanish is not False for it in self.items)

    def to_json(self) -> dict:
        return {"tolerance": self.tolerance, "holds": self.holds, "items": [it.to_json() for it in self.items]}


def _type_a_coarsenings(p: Partition) -> list[Partition]:
    out = []
    for size in range(2, p.k):
        for keep in combinations(p.blocks, size):
            out.append(Partition(keep))
    return out


def complete_monogamy_check(h, ket, tol: float = 1e-9, opts=None) -> CompleteMonogamyReport:
    """Complete-monogamy test for the unified global measure built on ``h``.

    For every partition ``P`` of all parties and every ``Q`` obtained by
    discarding blocks of ``P`` (``Q`` keeps at least two blocks), when
    ``|E(P) - E(Q)| <= tol`` the measure is evaluated on each member of
    ``Xi(P - Q)`` and the item records whether all of them vanish. Mixed
    reductions use convex-roof upper bounds, so a vanishing verdict is
    certified. Supports ``n <= 4``.
    """
    kind = h if isinstance(h, ReducedFunctionKind) else parse_measure(h).kind
    s = _as_state(ket)
    if s.n > 4:
        raise ValueError("complete monogamy check supports at most 4 parties")
    opts = opts or OptimizerOptions(restarts=6)
    cache: dict = {}

    def val(p: Partition) -> float:
        if p not in cache:
            cache[p] = _unified_value(kind, s, p, opts)
        return cache[p]

    items = []
    for p in enumerate_all_partitions(s.n):
        if p.k < 3:
            continue
        for q in _type_a_coarsenings(p):
            ep, eq = val(p), val(q)
            equal = abs(ep - eq) <= tol
            xi_vals, vanish = {}, None
            if equal:
                xi_vals = {str(g): val(g) for g in complementarity_set(p, q)}
                vanish = all(v <= tol for v in xi_vals.values())
            items.append(CompleteMonogamyItem(str(p), str(q), ep, eq, equal, xi_vals, vanish))
    return CompleteMonogamyReport(items, tol)

