"""Multipartite entanglement measures of pure states.

Families built from a reduced function ``h`` evaluate ``h`` on reduced
states of blocks of a partition. ``Gamma_k`` is the set of ``k``-block
partitions and ``Gamma_k^f`` the set of partitions whose blocks have at
most ``k`` parties. Exhaustive families enumerate partitions for up to
:data:`MAX_EXHAUSTIVE` parties; beyond that pass an explicit list.

Mixed states go through :func:`mixed_via_roof`, which returns an upper
bound from the convex-roof optimizer.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .bipartite import wootters_from_factor
from .partitions import Partition, enumerate_fineness_partitions, enumerate_k_partitions
from .reduced_fn import ReducedFunctionKind, eval_h_spectrum, make_kind, parse_kind
from .states import MultipartiteState, complement, reduced_density, schmidt_spectrum

__all__ = [
    "MAX_EXHAUSTIVE",
    "GATE_TOL",
    "MultiMeasureSpec",
    "Reductions",
    "global_mem",
    "gem",
    "gmc",
    "gmc_xstate",
    "hyperdeterminant",
    "three_tangle",
    "ckw_residual",
    "n_tangle",
    "yu_song_residual",
    "fill_measures",
    "k_partition_sums",
    "k_em",
    "k_me_family",
    "k_pem",
    "meyer_wallach",
    "scott",
    "concentratable",
    "gbc",
    "genuine_geometric",
    "geometric_measure",
    "pairwise_concurrence",
    "global_concurrence",
    "mixed_via_roof",
    "parse_multi",
    "evaluate_multi",
]

#: Largest party count for which partitions are enumerated automatically.
MAX_EXHAUSTIVE = 8
#: Values of ``h`` at or below this count as zero in biseparability gates.
GATE_TOL = 1e-9
_RADICAND_CLAMP = -1e-12


# ---------------------------------------------------------------------------
# reduced-state bookkeeping


class Reductions:
    """Cached spectra of reduced states of one pure state."""

    def __init__(self, state: MultipartiteState):
        if not isinstance(state, MultipartiteState):
            raise TypeError("expected a MultipartiteState")
        if not state.is_pure:
            try:
                state = state.as_pure()
            except ValueError:
                raise ValueError("pure state required; use mixed_via_roof for mixed input") from None
        self.state = state
        self.n = state.n
        self._cache: dict[frozenset, np.ndarray] = {}

    def dim(self, subset) -> int:
        return math.prod(self.state.dims[i] for i in subset)

    def spectrum(self, subset) -> np.ndarray:
        key = frozenset(subset)
        if key not in self._cache:
            if not key or len(key) == self.n:
                spec = np.array([1.0])
            else:
                spec = schmidt_spectrum(self.state, key)
            self._cache[key] = spec
        return self._cache[key]

    def h(self, kind, subset, d: int | None = None) -> float:
        return eval_h_spectrum(kind, self.spectrum(subset), self.dim(subset) if d is None else d)

    def purity(self, subset) -> float:
        return float(np.sum(self.spectrum(subset) ** 2))

    def pair_factor(self, i: int, j: int) -> np.ndarray:
        """``M`` with ``rho_ij = M M^dag``, read off the ket."""
        side = sorted([i, j])
        rest = complement(side, self.n)
        tensor = self.state.ket.reshape(self.state.dims)
        return np.transpose(tensor, side + rest).reshape(self.dim(side), -1)

    def linear_entropy(self, subset) -> float:
        spec = self.spectrum(subset)
        return float(sum(spec[i] * (np.sum(spec[:i]) + np.sum(spec[i + 1 :])) for i in range(spec.size)))

    def lmax(self, subset) -> float:
        return float(self.spectrum(subset)[0])


def _red(state) -> Reductions:
    return state if isinstance(state, Reductions) else Reductions(state)


def _kind(h) -> ReducedFunctionKind:
    return h if isinstance(h, ReducedFunctionKind) else parse_kind(str(h))


def _partitions(n: int, k: int, partitions=None) -> list[Partition]:
    if partitions is not None:
        return [p if isinstance(p, Partition) else Partition.parse(p) for p in partitions]
    if n > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE}; pass partitions explicitly")
    return enumerate_k_partitions(n, k)


def _bipartitions(r: Reductions, partitions=None) -> list[Partition]:
    if r.n < 2:
        raise ValueError("need at least two parties")
    return _partitions(r.n, 2, partitions)


def _require_qubits(r: Reductions, what: str) -> None:
    if any(d != 2 for d in r.state.dims):
        raise ValueError(f"{what} is defined for qubits only, got dims {list(r.state.dims)}")


# ---------------------------------------------------------------------------
# global and genuine families


def global_mem(family: str, h, state, partitions=None) -> float:
    """Global measures from a reduced function.

    ``family`` is ``"sum"`` (half the sum of ``h`` over single parties),
    ``"bipartition_sum"`` (half the sum over all bipartitions, using the block
    holding the first party) or ``"max"`` (largest single-party ``h``).

    Examples
    --------
    >>> from entkit.states import ghz
    >>> global_mem("bipartition_sum", "tangle", ghz(4))
    3.5
    """
    r, kind = _red(state), _kind(h)
    if family == "sum":
        return 0.5 * sum(r.h(kind, [i]) for i in range(r.n))
    if family == "bipartition_sum":
        return 0.5 * sum(r.h(kind, p.blocks[0]) for p in _bipartitions(r, partitions))
    if family == "max":
        return max(r.h(kind, [i]) for i in range(r.n))
    raise ValueError(f"unknown global family {family!r}")


def _gate(r: Reductions, kind, partitions=None) -> bool:
    """True when every bipartition carries ``h > GATE_TOL``."""
    return all(r.h(kind, p.blocks[0]) > GATE_TOL for p in _bipartitions(r, partitions))


def gem(family: str, h, state, partitions=None) -> float:
    """Genuine measures: a global quantity gated to zero on biseparable states.

    ``family`` is one of ``"sum"``, ``"bipartition_sum"``, ``"max"``,
    ``"min"`` (all gated) or ``"bipartition_min"`` (minimum of ``h`` over
    bipartitions, which vanishes on biseparable states by itself).
    """
    r, kind = _red(state), _kind(h)
    if family == "bipartition_min":
        return min(r.h(kind, p.blocks[0]) for p in _bipartitions(r, partitions))
    if family not in ("sum", "bipartition_sum", "max", "min"):
        raise ValueError(f"unknown genuine family {family!r}")
    if not _gate(r, kind, partitions):
        return 0.0
    if family == "min":
        return min(r.h(kind, [i]) for i in range(r.n))
    return global_mem(family, kind, r, partitions)


def gmc(state, partitions=None) -> float:
    """Genuine multipartite concurrence ``min sqrt(2(1 - Tr rho_X^2))`` over bipartitions.

    Examples
    --------
    >>> from entkit.states import ghz
    >>> round(gmc(ghz(3)), 12)
    1.0
    """
    r = _red(state)
    return min(math.sqrt(max(0.0, 2 * r.linear_entropy(p.blocks[0]))) for p in _bipartitions(r, partitions))


def gmc_xstate(a: Sequence[float], b: Sequence[float], z: Sequence[complex]) -> float:
    """Closed-form genuine concurrence of an ``n``-qubit X state.

    ``2 max_i max(0, |z_i| - sum_{j != i} sqrt(a_j b_j))``.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    z = np.asarray(z, dtype=complex)
    if not (a.shape == b.shape == z.shape):
        raise ValueError("a, b and z must have equal length")
    roots = np.sqrt(np.clip(a * b, 0.0, None))
    total = roots.sum()
    return float(2 * max(0.0, float(np.max(np.abs(z) - (total - roots)))))


# ---------------------------------------------------------------------------
# qubit tangles


def hyperdeterminant(state) -> complex:
    """Cayley hyperdeterminant of a three-qubit ket's amplitudes."""
    r = _red(state)
    if list(r.state.dims) != [2, 2, 2]:
        raise ValueError(f"three-qubit ket required, got dims {list(r.state.dims)}")
    a = r.state.ket.reshape(2, 2, 2)
    return complex(
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
        - 2
        * (
            a[0, 0, 0] * a[0, 0, 1] * a[1, 1, 0] * a[1, 1, 1]
            + a[0, 0, 0] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 1]
            + a[0, 0, 0] * a[1, 0, 0] * a[0, 1, 1] * a[1, 1, 1]
            + a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 1] * a[1, 1, 0]
            + a[0, 0, 1] * a[1, 0, 0] * a[0, 1, 1] * a[1, 1, 0]
            + a[0, 1, 0] * a[1, 0, 0] * a[0, 1, 1] * a[1, 0, 1]
        )
        + 4 * (a[0, 0, 0] * a[0, 1, 1] * a[1, 0, 1] * a[1, 1, 0] + a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0] * a[1, 1, 1])
    )


def three_tangle(state) -> float:
    """``4 |Det(a)|`` for a three-qubit ket."""
    return 4 * abs(hyperdeterminant(state))


def ckw_residual(state, focus: int = 0) -> float:
    """``C^2(X|rest) - sum_Y C^2(rho_XY)`` for an ``n``-qubit ket and focus ``X``.

    The one-to-rest term uses the pure-state formula ``2(1 - Tr rho_X^2)`` and
    the pair terms use the two-qubit closed form.
    """
    r = _red(state)
    _require_qubits(r, "ckw_residual")
    total = 2 * r.linear_entropy([focus])
    for other in range(r.n):
        if other != focus:
            total -= wootters_from_factor(r.pair_factor(focus, other)) ** 2
    return total


_EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])


def n_tangle(state) -> float:
    """Generalized tangle for ``n`` qubits with ``n`` even or ``n = 3``.

    Contracts four copies of the amplitude tensor with antisymmetric
    ``eps`` tensors pairing copies 1-2 and 3-4 on the first ``n-1`` qubits
    and copies 1-3 and 2-4 on the last one; the value is twice the modulus.
    """
    r = _red(state)
    _require_qubits(r, "n_tangle")
    n = r.n
    if n < 2 or (n % 2 and n != 3):
        raise ValueError(f"n_tangle needs an even qubit count or n = 3, got {n}")
    a = r.state.ket.reshape(2 ** (n - 1), 2)
    e = _EPS
    for _ in range(n - 2):
        e = np.kron(e, _EPS)
    t = a.T @ e @ a  # t[x, y] = sum a_{alpha x} a_{beta y} eps(alpha, beta)
    inner = _EPS.T @ t @ _EPS
    return float(2 * abs(np.sum(inner * t)))


def yu_song_residual(state) -> float:
    """Minimum over single-qubit foci of the CKW residual."""
    r = _red(state)
    return min(ckw_residual(r, f) for f in range(r.n))


def _heron(sides, coef: float, power: float) -> float:
    q = 0.5 * sum(sides)
    rad = coef * q * np.prod([q - s for s in sides])
    if rad < 0:
        if rad < _RADICAND_CLAMP:
            raise ValueError(f"sides {sides} violate the triangle inequality")
        rad = 0.0
    return float(rad**power)


def fill_measures(state, eta: float = 0.5, h="von_neumann") -> dict:
    """Triangle measures of a three-qubit ket.

    Returns
    -------
    dict
        ``F`` uses squared concurrences as sides, ``F_prime`` concurrences,
        and ``F_eta`` the sides ``E^eta`` where ``E`` has reduced function ``h``.

    Examples
    --------
    >>> from entkit.states import w
    >>> round(fill_measures(w(3))["F"], 12)
    0.888888888889
    """
    r = _red(state)
    if list(r.state.dims) != [2, 2, 2]:
        raise ValueError("fill measures need a three-qubit ket")
    if not 0 < eta:
        raise ValueError("eta must be positive")
    if eta > 0.5:
        warnings.warn("triangle area with eta > 1/2 is not a genuine entanglement monotone", stacklevel=2)
    c2 = [max(0.0, 2 * r.linear_entropy([i])) for i in range(3)]
    c = [math.sqrt(x) for x in c2]
    kind = _kind(h)
    e = [r.h(kind, [i]) ** eta for i in range(3)]
    return {
        "F": _heron(c2, 16.0 / 3.0, 0.25),
        "F_prime": _heron(c, 16.0 / 3.0, 0.5),
        "F_eta": _heron(e, 1.0, 0.5),
    }


# ---------------------------------------------------------------------------
# k-entanglement and k-producibility


def k_partition_sums(h, k: int, state, partitions=None) -> list[tuple[Partition, float]]:
    """``(gamma, (1/2) sum_t h(rho_{X_t}))`` for every ``gamma`` in ``Gamma_k``."""
    r, kind = _red(state), _kind(h)
    if not 2 <= k <= r.n:
        raise ValueError(f"k must lie in [2, {r.n}], got {k}")
    return [(p, 0.5 * sum(r.h(kind, b) for b in p.blocks)) for p in _partitions(r.n, k, partitions)]


def k_em(policy: str, h, k: int, state, partitions=None) -> float:
    """k-entanglement from the block sums over ``Gamma_k``.

    ``policy`` is ``"min"``, ``"max"``, ``"mean"`` or ``"geom"``. The max and
    mean are gated to zero when the minimum vanishes; the geometric mean
    vanishes by itself.
    """
    sums = np.array([v for _, v in k_partition_sums(h, k, state, partitions)])
    low = float(sums.min())
    if policy == "min":
        return low
    if policy == "geom":
        if low <= 0:
            return 0.0
        return float(np.exp(np.mean(np.log(sums))))
    if policy in ("max", "mean"):
        if low <= GATE_TOL:
            return 0.0
        return float(sums.max() if policy == "max" else sums.mean())
    raise ValueError(f"unknown policy {policy!r}")


def k_me_family(kind: str, k: int, state, q: float = 2.0, alpha: float = 0.5, partitions=None) -> float:
    """Concurrence-type k-entanglement: minimum over ``Gamma_k``.

    ``kind="concurrence"``: ``sqrt(2 sum_t [1 - Tr rho_t^2] / k)``;
    ``kind="q"``: ``sum_t [1 - Tr rho_t^q] / k``;
    ``kind="alpha"``: ``sum_t [Tr rho_t^alpha - 1] / k``.
    """
    r = _red(state)
    if not 2 <= k <= r.n:
        raise ValueError(f"k must lie in [2, {r.n}], got {k}")
    parts = _partitions(r.n, k, partitions)
    if kind == "concurrence":
        f = lambda p: math.sqrt(max(0.0, 2 * sum(r.linear_entropy(b) for b in p.blocks) / k))
    elif kind == "q":
        if q <= 1:
            raise ValueError("q must exceed 1")
        hq = make_kind("q_concurrence", q=q)
        f = lambda p: sum(r.h(hq, b) for b in p.blocks) / k
    elif kind == "alpha":
        ha = make_kind("alpha_concurrence", alpha=alpha)
        f = lambda p: sum(r.h(ha, b) for b in p.blocks) / k
    else:
        raise ValueError(f"unknown k-ME kind {kind!r}")
    return min(f(p) for p in parts)


def k_pem(variant: str, k: int, state, h="von_neumann", q: float = 2.0, alpha: float = 0.5, partitions=None) -> float:
    """k-partite (producibility) entanglement: minimum over ``Gamma_{k-1}^f``.

    Variants with ``m`` blocks per partition:

    ``"sum"``: ``(1/2) sum_t h(rho_t)``;
    ``"concurrence"``: ``sum_t sqrt(2[1 - Tr rho_t^2]) / m``;
    ``"q"``: ``sqrt(sum_t [1 - Tr rho_t^q] / m)``;
    ``"alpha"``: ``sqrt(sum_t [Tr rho_t^alpha - 1] / m)``.
    """
    r = _red(state)
    if not 2 <= k <= r.n:
        raise ValueError(f"k must lie in [2, {r.n}], got {k}")
    if partitions is not None:
        parts = [p if isinstance(p, Partition) else Partition.parse(p) for p in partitions]
    else:
        if r.n > MAX_EXHAUSTIVE:
            raise ValueError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE}")
        parts = enumerate_fineness_partitions(r.n, k - 1)
    if variant == "sum":
        kind = _kind(h)
        f = lambda p: 0.5 * sum(r.h(kind, b) for b in p.blocks)
    elif variant == "concurrence":
        f = lambda p: sum(math.sqrt(max(0.0, 2 * r.linear_entropy(b))) for b in p.blocks) / len(p)
    elif variant == "q":
        hq = make_kind("q_concurrence", q=q)
        f = lambda p: math.sqrt(max(0.0, sum(r.h(hq, b) for b in p.blocks) / len(p)))
    elif variant == "alpha":
        ha = make_kind("alpha_concurrence", alpha=alpha)
        f = lambda p: math.sqrt(max(0.0, sum(r.h(ha, b) for b in p.blocks) / len(p)))
    else:
        raise ValueError(f"unknown k-PEM variant {variant!r}")
    return min(f(p) for p in parts)


# ---------------------------------------------------------------------------
# purity-based monotones


def meyer_wallach(state) -> float:
    """``2 (1 - mean_k Tr rho_k^2)`` for ``n`` qubits."""
    r = _red(state)
    _require_qubits(r, "meyer_wallach")
    return 2 * (1 - sum(r.purity([i]) for i in range(r.n)) / r.n)


def scott(state, m: int = 1) -> float:
    """``d^m/(d^m - 1) [1 - C(n, m)^{-1} sum_{|S|=m} Tr rho_S^2]`` for ``n`` qudits of equal ``d``."""
    r = _red(state)
    dims = set(r.state.dims)
    if len(dims) != 1:
        raise ValueError("scott measure needs equal local dimensions")
    d = dims.pop()
    if not 1 <= m <= r.n // 2:
        raise ValueError(f"m must lie in [1, {r.n // 2}], got {m}")
    avg = sum(r.purity(s) for s in combinations(range(r.n), m)) / math.comb(r.n, m)
    return d**m / (d**m - 1) * (1 - avg)


def concentratable(state, subset: Iterable[int] | None = None) -> float:
    """``1 - 2^{-|S|} sum_{t subset of S} Tr rho_t^2`` with ``Tr rho_empty^2 = 1``."""
    r = _red(state)
    s = list(range(r.n)) if subset is None else sorted(set(int(i) for i in subset))
    if not s or any(not 0 <= i < r.n for i in s):
        raise ValueError("subset must be a nonempty set of valid party indices")
    total = sum(r.purity(t) for size in range(len(s) + 1) for t in combinations(s, size))
    return 1 - total / 2 ** len(s)


# ---------------------------------------------------------------------------
# geometric and pairwise quantities


def gbc(state, partitions=None) -> float:
    """Geometric mean over bipartitions of ``sqrt(h(X_1) h(X_2))``.

    ``h(rho) = sqrt(d/(d-1) (1 - Tr rho^2))`` with ``d`` the smaller side dimension.
    """
    r = _red(state)
    nc = make_kind("normalized_concurrence")
    logs = []
    for p in _bipartitions(r, partitions):
        x1, x2 = p.blocks
        d = min(r.dim(x1), r.dim(x2))
        val = math.sqrt(r.h(nc, x1, d) * r.h(nc, x2, d))
        if val <= 0:
            return 0.0
        logs.append(math.log(val))
    return float(math.exp(sum(logs) / len(logs)))


def genuine_geometric(state, partitions=None) -> float:
    """``1 - max over bipartitions of the largest squared Schmidt coefficient``."""
    r = _red(state)
    return 1 - max(r.lmax(p.blocks[0]) for p in _bipartitions(r, partitions))


def geometric_measure(state, restarts: int = 8, seed=0, max_iters: int = 5000, tol: float = 1e-15) -> float:
    """``1 - max |<phi|psi>|^2`` over fully product ``|phi>``.

    Alternating maximization: each local factor is replaced in turn by the
    normalized contraction of ``psi`` with the other factors, which never
    decreases the overlap. Starts are the local top eigenvectors plus random
    product states; the result is an upper bound on the true value.
    """
    r = _red(state)
    dims = list(r.state.dims)
    psi = r.state.ket.reshape(dims)
    rng = np.random.default_rng(seed)
    letters = "abcdefghijklmnopqrstuvwxyz"[: r.n]

    def contract(factors, skip):
        ops = [psi]
        subs = [letters]
        for k, f in enumerate(factors):
            if k != skip:
                ops.append(f.conj())
                subs.append(letters[k])
        return np.einsum(",".join(subs) + "->" + letters[skip], *ops)

    starts = []
    local = []
    for k in range(r.n):
        rho_k = reduced_density(r.state, [k])
        _, vecs = np.linalg.eigh(rho_k)
        local.append(vecs[:, -1])
    starts.append(local)
    for _ in range(restarts):
        starts.append([_unit(rng.standard_normal(d) + 1j * rng.standard_normal(d)) for d in dims])
    best = 0.0
    for factors in starts:
        factors = [f.astype(complex) for f in factors]
        prev = -1.0
        for _ in range(max_iters):
            for k in range(r.n):
                factors[k] = _unit(contract(factors, k))
            ov = float(abs(np.linalg.norm(contract(factors, r.n - 1))) ** 2)
            if ov - prev < tol:
                break
            prev = ov
        best = max(best, ov)
    return 1 - min(best, 1.0)


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("zero vector in alternating maximization")
    return v / norm


def pairwise_concurrence(state, pair: Sequence[int] = (0, 1)) -> float:
    """``sqrt(C^2(rho_pair) + tau)`` for a three-qubit ket, ``tau`` the three-tangle."""
    r = _red(state)
    if list(r.state.dims) != [2, 2, 2]:
        raise ValueError("pairwise concurrence needs a three-qubit ket")
    i, j = sorted(int(x) for x in pair)
    if i == j or not (0 <= i < 3 and 0 <= j < 3):
        raise ValueError(f"invalid pair {pair}")
    return math.sqrt(wootters_from_factor(r.pair_factor(i, j)) ** 2 + three_tangle(r))


def global_concurrence(kind: str, state, partitions=None) -> float:
    """Global concurrences.

    ``"C_n"``: ``2^{1-n/2} sqrt(2^n - 2 - sum_S Tr rho_S^2)`` with ``S`` over all
    nonempty proper subsets; ``"C_n'"``: ``sqrt(2(n - sum_i Tr rho_i^2))``;
    ``"C_n''"``: ``sqrt(|Gamma_2| - sum_{Gamma_2} Tr rho_{X_1}^2)``.
    """
    r = _red(state)
    n = r.n
    if kind in ("C_n", "Cn"):
        if n > MAX_EXHAUSTIVE:
            raise ValueError(f"C_n limited to n <= {MAX_EXHAUSTIVE}")
        total = sum(r.purity(s) for size in range(1, n) for s in combinations(range(n), size))
        return 2 ** (1 - n / 2) * math.sqrt(max(0.0, 2**n - 2 - total))
    if kind in ("C_n'", "Cn'", "C_n_prime"):
        return math.sqrt(max(0.0, 2 * sum(r.linear_entropy([i]) for i in range(n))))
    if kind in ("C_n''", "Cn''", "C_n_dprime"):
        parts = _bipartitions(r, partitions)
        return math.sqrt(max(0.0, sum(r.linear_entropy(p.blocks[0]) for p in parts)))
    raise ValueError(f"unknown global concurrence {kind!r}")


# ---------------------------------------------------------------------------
# mixed states and dispatch


def mixed_via_roof(fn: Callable[[MultipartiteState], float], rho: MultipartiteState, opts=None, maximize=False):
    """Convex-roof extension of a pure-state function (upper bound when minimizing)."""
    from .convex_roof import assistance_maximize, roof_minimize

    dims = tuple(rho.dims)
    wrapped = lambda ket: fn(MultipartiteState(dims, ket=ket, validate=False))
    run = assistance_maximize if maximize else roof_minimize
    return run(wrapped, rho, opts)


FAMILIES = (
    "global_sum",
    "bipartition_sum",
    "global_max",
    "gem_sum",
    "gem_bipartition",
    "gem_max",
    "gem_min",
    "gem_bipartition_min",
    "gmc",
    "gmc_xstate",
    "genuine_geometric",
    "geometric_measure",
    "gbc",
    "three_tangle",
    "n_tangle",
    "yu_song_residual",
    "global_concurrence_Cn",
    "global_concurrence_Cn_prime",
    "global_concurrence_Cn_dprime",
    "concurrence_fill",
    "improved_fill",
    "triangle_area",
    "k_em",
    "k_me_concurrence",
    "q_k_me",
    "alpha_k_me",
    "k_pem",
    "meyer_wallach",
    "scott",
    "concentratable",
    "pairwise_concurrence",
)


@dataclass(frozen=True)
class MultiMeasureSpec:
    """A multipartite family with parameters (``h``, ``k``, ``policy``, ...)."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown multipartite family {self.family!r}")

    def __str__(self) -> str:
        if not self.params:
            return self.family
        return self.family + ":" + ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))

    def __hash__(self) -> int:
        return hash(str(self))


def _value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_multi(text: str) -> MultiMeasureSpec:
    """Parse ``"family:key=value,..."``.

    Reduced-function parameters are prefixed with ``h.``, e.g.
    ``"k_em:policy=min,k=2,h=tsallis,h.q=3"``. Subsets and pairs use ``+``
    between 1-based indices, e.g. ``"concentratable:S=1+2"``.
    """
    tag, _, rest = text.partition(":")
    params: dict = {}
    hparams: dict = {}
    for item in filter(None, rest.split(",")):
        k, sep, v = item.partition("=")
        if not sep:
            raise ValueError(f"malformed parameter {item!r} in {text!r}")
        k, v = k.strip(), v.strip()
        if k.startswith("h."):
            hparams[k[2:]] = _value(v)
        elif k in ("S", "pair"):
            params[k] = tuple(int(x) - 1 for x in v.split("+"))
        else:
            params[k] = _value(v)
    if "h" in params or hparams:
        params["h"] = make_kind(str(params.get("h", "von_neumann")), **hparams)
    return MultiMeasureSpec(tag.strip(), params)


def evaluate_multi(spec, state) -> float:
    """Evaluate a multipartite family on a pure state."""
    spec = parse_multi(spec) if isinstance(spec, str) else spec
    p = spec.params
    fam = spec.family
    h = p.get("h", make_kind("von_neumann"))
    table: dict[str, Callable[[], float]] = {
        "global_sum": lambda: global_mem("sum", h, state),
        "bipartition_sum": lambda: global_mem("bipartition_sum", h, state),
        "global_max": lambda: global_mem("max", h, state),
        "gem_sum": lambda: gem("sum", h, state),
        "gem_bipartition": lambda: gem("bipartition_sum", h, state),
        "gem_max": lambda: gem("max", h, state),
        "gem_min": lambda: gem("min", h, state),
        "gem_bipartition_min": lambda: gem("bipartition_min", h, state),
        "gmc": lambda: gmc(state),
        "genuine_geometric": lambda: genuine_geometric(state),
        "geometric_measure": lambda: geometric_measure(state),
        "gbc": lambda: gbc(state),
        "three_tangle": lambda: three_tangle(state),
        "n_tangle": lambda: n_tangle(state),
        "yu_song_residual": lambda: yu_song_residual(state),
        "global_concurrence_Cn": lambda: global_concurrence("C_n", state),
        "global_concurrence_Cn_prime": lambda: global_concurrence("C_n'", state),
        "global_concurrence_Cn_dprime": lambda: global_concurrence("C_n''", state),
        "concurrence_fill": lambda: fill_measures(state)["F"],
        "improved_fill": lambda: fill_measures(state)["F_prime"],
        "triangle_area": lambda: fill_measures(state, float(p.get("eta", 0.5)), h)["F_eta"],
        "k_em": lambda: k_em(str(p.get("policy", "min")), h, int(p.get("k", 2)), state),
        "k_me_concurrence": lambda: k_me_family("concurrence", int(p.get("k", 2)), state),
        "q_k_me": lambda: k_me_family("q", int(p.get("k", 2)), state, q=float(p.get("q", 2.0))),
        "alpha_k_me": lambda: k_me_family("alpha", int(p.get("k", 2)), state, alpha=float(p.get("alpha", 0.5))),
        "k_pem": lambda: k_pem(
            str(p.get("variant", "sum")),
            int(p.get("k", 2)),
            state,
            h=h,
            q=float(p.get("q", 2.0)),
            alpha=float(p.get("alpha", 0.5)),
        ),
        "meyer_wallach": lambda: meyer_wallach(state),
        "scott": lambda: scott(state, int(p.get("m", 1))),
        "concentratable": lambda: concentratable(state, p.get("S")),
        "pairwise_concurrence": lambda: pairwise_concurrence(state, p.get("pair", (0, 1))),
    }
    if fam == "gmc_xstate":
        raise ValueError("gmc_xstate takes (a, b, z) directly; call gmc_xstate()")
    return float(table[fam]())
