"""Multipartite states: construction, tensor-structure operations, decompositions, sampling.

Subsystems are indexed from 0 in this Python API. The command line and the
partition text syntax use 1-based labels and convert at the boundary.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence
from urllib.parse import parse_qsl

import numpy as np

from .linalg import TOL, hermitian_eig, is_hermitian, kron

__all__ = [
    "MultipartiteState",
    "SchmidtForm",
    "NamedStateSpec",
    "build",
    "partial_trace",
    "reduced_density",
    "partial_transpose",
    "realign",
    "schmidt",
    "schmidt_spectrum",
    "purify",
    "random_pure",
    "random_density",
    "permute",
    "state_to_json",
    "state_from_json",
    "load_state",
    "parse_state_uri",
]

_KET_NORM_TOL = 1e-12
_DENSITY_TOL = 1e-10
#: Schmidt coefficients with squared value at or below this are treated as zero.
RANK_TOL = 1e-10


class MultipartiteState:
    """A ket or density operator together with its ordered subsystem dimensions.

    Parameters
    ----------
    dims : sequence of int
        Local dimensions ``d_1, ..., d_n``.
    matrix : array_like, optional
        Density operator of shape ``(D, D)`` with ``D = prod(dims)``.
    ket : array_like, optional
        State vector of length ``D``. Exactly one of ``matrix`` and ``ket``
        must be supplied.
    validate : bool
        Check normalization, hermiticity and positivity.
    """

    __slots__ = ("dims", "_ket", "_matrix")

    def __init__(self, dims: Sequence[int], matrix=None, ket=None, validate: bool = True):
        self.dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in self.dims) or not self.dims:
            raise ValueError(f"invalid dims {dims}")
        if (matrix is None) == (ket is None):
            raise ValueError("supply exactly one of matrix or ket")
        total = math.prod(self.dims)
        if ket is not None:
            vec = np.asarray(ket, dtype=complex).reshape(-1)
            if vec.size != total:
                raise ValueError(f"ket length {vec.size} does not match dims {self.dims}")
            if validate and abs(np.linalg.norm(vec) - 1.0) > _KET_NORM_TOL:
                raise ValueError(f"ket is not normalized (norm {np.linalg.norm(vec):.12g})")
            self._ket = vec
            self._matrix = None
        else:
            rho = np.asarray(matrix, dtype=complex)
            if rho.shape != (total, total):
                raise ValueError(f"density shape {rho.shape} does not match dims {self.dims}")
            if validate:
                if not is_hermitian(rho, _DENSITY_TOL):
                    raise ValueError("density matrix is not hermitian")
                if abs(np.trace(rho).real - 1.0) > _DENSITY_TOL:
                    raise ValueError(f"density matrix trace {np.trace(rho).real:.12g} != 1")
                lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
                if lam[0] < -_DENSITY_TOL:
                    raise ValueError(f"density matrix is not PSD (min eigenvalue {lam[0]:.3e})")
            self._ket = None
            self._matrix = rho

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @property
    def is_pure(self) -> bool:
        return self._ket is not None

    @property
    def ket(self) -> np.ndarray:
        if self._ket is None:
            raise ValueError("state is mixed; no ket available")
        return self._ket

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.outer(self._ket, self._ket.conj())
        return self._matrix

    def as_pure(self) -> "MultipartiteState":
        """Return a ket-backed copy, accepting rank-one density matrices.

        Raises
        ------
        ValueError
            If the state is mixed (purity below ``1 - 1e-10``).
        """
        if self.is_pure:
            return self
        vals, vecs = hermitian_eig(self._matrix)
        if vals[0] < 1.0 - _DENSITY_TOL:
            raise ValueError("mixed-state input where a pure state is required")
        return MultipartiteState(self.dims, ket=vecs[:, 0], validate=False)

    def __repr__(self) -> str:
        kind = "ket" if self.is_pure else "density"
        return f"MultipartiteState(dims={self.dims}, kind={kind})"


@dataclass(frozen=True)
class SchmidtForm:
    """Schmidt decomposition across a bipartition ``A|B``.

    ``left_basis[:, i]`` and ``right_basis[:, i]`` are the local vectors
    paired with ``coefficients[i]``; subsystems of ``A`` (then ``B``) appear
    in increasing index order.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    bipartition: tuple

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients**2 > RANK_TOL))


# ---------------------------------------------------------------------------
# index helpers


def _normalize_subset(subset: Iterable[int], n: int, allow_empty: bool = False) -> list[int]:
    idx = sorted(set(int(i) for i in subset))
    if not idx and not allow_empty:
        raise ValueError("subsystem set must be nonempty")
    for i in idx:
        if i < 0 or i >= n:
            raise ValueError(f"subsystem index {i} out of range for {n} parties")
    return idx


def complement(subset: Iterable[int], n: int) -> list[int]:
    s = set(subset)
    return [i for i in range(n) if i not in s]


def _as_state(s) -> MultipartiteState:
    if not isinstance(s, MultipartiteState):
        raise TypeError(f"expected MultipartiteState, got {type(s).__name__}")
    return s


# ---------------------------------------------------------------------------
# tensor operations


def permute(s: MultipartiteState, order: Sequence[int]) -> MultipartiteState:
    """Reorder subsystems so that new subsystem ``k`` is old subsystem ``order[k]``."""
    s = _as_state(s)
    order = [int(i) for i in order]
    if sorted(order) != list(range(s.n)):
        raise ValueError(f"{order} is not a permutation of {s.n} subsystems")
    dims = tuple(s.dims[i] for i in order)
    if s.is_pure:
        t = s.ket.reshape(s.dims).transpose(order)
        return MultipartiteState(dims, ket=t.reshape(-1), validate=False)
    t = s.matrix.reshape(s.dims + s.dims)
    t = t.transpose(order + [s.n + i for i in order])
    d = s.dim
    return MultipartiteState(dims, matrix=t.reshape(d, d), validate=False)


def reduced_density(s: MultipartiteState, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on ``keep`` (kept in increasing index order)."""
    s = _as_state(s)
    keep = _normalize_subset(keep, s.n)
    rest = complement(keep, s.n)
    dk = math.prod(s.dims[i] for i in keep)
    if s.is_pure:
        m = s.ket.reshape(s.dims).transpose(keep + rest).reshape(dk, -1)
        return m @ m.conj().T
    if not rest:
        return s.matrix.copy()
    dr = math.prod(s.dims[i] for i in rest)
    t = s.matrix.reshape(s.dims + s.dims)
    t = t.transpose(keep + rest + [s.n + i for i in keep] + [s.n + i for i in rest])
    t = t.reshape(dk, dr, dk, dr)
    return np.einsum("ajbj->ab", t)


def partial_trace(s: MultipartiteState, keep: Iterable[int]) -> MultipartiteState:
    """Trace out every subsystem not in ``keep``.

    Examples
    --------
    >>> ghz = build(NamedStateSpec("ghz", {"n": 3, "d": 2}))
    >>> np.round(partial_trace(ghz, [0]).matrix.real, 3)
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    s = _as_state(s)
    keep = _normalize_subset(keep, s.n)
    rho = reduced_density(s, keep)
    return MultipartiteState([s.dims[i] for i in keep], matrix=rho, validate=False)


def partial_transpose(s: MultipartiteState, subset: Iterable[int]) -> np.ndarray:
    """Transpose the listed subsystems in the computational basis."""
    s = _as_state(s)
    subset = _normalize_subset(subset, s.n, allow_empty=True)
    t = s.matrix.reshape(s.dims + s.dims)
    axes = list(range(2 * s.n))
    for i in subset:
        axes[i], axes[s.n + i] = axes[s.n + i], axes[i]
    return t.transpose(axes).reshape(s.dim, s.dim)


def _bipartite_tensor(s: MultipartiteState, part: Iterable[int]):
    part = _normalize_subset(part, s.n)
    rest = complement(part, s.n)
    if not rest:
        raise ValueError("bipartition must leave a nonempty complement")
    p = permute(s, part + rest) if part + rest != list(range(s.n)) else s
    da = math.prod(s.dims[i] for i in part)
    db = math.prod(s.dims[i] for i in rest)
    return p, da, db, part, rest


def realign(s: MultipartiteState, part: Iterable[int], kind: str = "column") -> np.ndarray:
    """Realignment of ``rho`` with respect to the cut ``part | rest``.

    Writing ``rho = sum a_{ijkl} |i><j| (x) |k><l|``, the column form
    places ``a_{ijkl}`` at row ``(j, i)`` and column ``(l, k)``; the row
    form at row ``(i, j)`` and column ``(k, l)``. Both share the same
    singular values.
    """
    s = _as_state(s)
    p, da, db, _, _ = _bipartite_tensor(s, part)
    t = p.matrix.reshape(da, db, da, db)  # [i, k, j, l]
    if kind == "column":
        r = t.transpose(2, 0, 3, 1)
    elif kind == "row":
        r = t.transpose(0, 2, 1, 3)
    else:
        raise ValueError(f"unknown realignment kind {kind!r}")
    return r.reshape(da * da, db * db)


def coefficient_matrix(s: MultipartiteState, part: Iterable[int]) -> np.ndarray:
    """Ket reshaped into a ``d_part x d_rest`` matrix."""
    s = _as_state(s).as_pure()
    p, da, db, _, _ = _bipartite_tensor(s, part)
    return p.ket.reshape(da, db)


def schmidt_spectrum(s: MultipartiteState, part: Iterable[int]) -> np.ndarray:
    """Descending squared Schmidt coefficients of a ket across ``part | rest``.

    Taken from singular values of the reshaped ket, so small entries keep
    full relative precision. Nothing is truncated.
    """
    side = sorted(int(i) for i in part)
    rest = complement(side, s.n)
    dim = math.prod(s.dims[i] for i in side)
    mat = np.transpose(s.ket.reshape(s.dims), side + rest).reshape(dim, -1)
    return np.linalg.svd(mat, compute_uv=False) ** 2


def schmidt(s: MultipartiteState, part: Iterable[int]) -> SchmidtForm:
    """Schmidt decomposition of a pure state across ``part | rest``.

    Only coefficients with square above :data:`RANK_TOL` are kept.

    Raises
    ------
    ValueError
        If the state is mixed.
    """
    s = _as_state(s)
    if not s.is_pure:
        s = s.as_pure()
    part = _normalize_subset(part, s.n)
    m = coefficient_matrix(s, part)
    u, sv, vh = np.linalg.svd(m, full_matrices=False)
    keep = sv**2 > RANK_TOL
    return SchmidtForm(
        coefficients=sv[keep],
        left_basis=u[:, keep],
        right_basis=vh[keep, :].T,
        bipartition=(tuple(part), tuple(complement(part, s.n))),
    )


def purify(s: MultipartiteState) -> MultipartiteState:
    """Spectral purification with an ancilla of dimension ``rank(rho)`` appended last."""
    s = _as_state(s)
    if s.is_pure:
        return MultipartiteState(s.dims + (1,), ket=s.ket, validate=False)
    vals, vecs = hermitian_eig(s.matrix)
    keep = vals > TOL
    vals, vecs = vals[keep], vecs[:, keep]
    r = int(keep.sum())
    psi = (vecs * np.sqrt(vals)).reshape(s.dim, r)
    psi = psi / np.linalg.norm(psi)
    return MultipartiteState(s.dims + (r,), ket=psi.reshape(-1), validate=False)


# ---------------------------------------------------------------------------
# random states


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure(dims: Sequence[int], seed=None) -> MultipartiteState:
    """Haar-random ket: a normalized complex Gaussian vector."""
    rng = _rng(seed)
    d = math.prod(dims)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return MultipartiteState(dims, ket=v / np.linalg.norm(v), validate=False)


def random_density(dims: Sequence[int], rank: int | None = None, seed=None) -> MultipartiteState:
    """Random density matrix ``G G^dagger / Tr`` with complex Gaussian ``G`` of width ``rank``."""
    rng = _rng(seed)
    d = math.prod(dims)
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} outside [1, {d}]")
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return MultipartiteState(dims, matrix=0.5 * (rho + rho.conj().T), validate=False)


# ---------------------------------------------------------------------------
# named states


@dataclass(frozen=True)
class NamedStateSpec:
    """A named family plus its parameters, e.g. ``NamedStateSpec("ghz", {"n": 3})``."""

    family: str
    params: dict = field(default_factory=dict)


def _basis_ket(digits: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    v = np.zeros(math.prod(dims), dtype=complex)
    v[np.ravel_multi_index(tuple(digits), tuple(dims))] = 1.0
    return v


def _swap(m: int) -> np.ndarray:
    f = np.zeros((m * m, m * m))
    for i in range(m):
        for j in range(m):
            f[j * m + i, i * m + j] = 1.0
    return f


def _phi_plus(m: int) -> np.ndarray:
    v = np.zeros(m * m, dtype=complex)
    v[[i * m + i for i in range(m)]] = 1.0 / math.sqrt(m)
    return v


def _check_range(name: str, value: float, lo: float, hi: float) -> None:
    if not lo - 1e-12 <= value <= hi + 1e-12:
        raise ValueError(f"parameter {name}={value} outside [{lo}, {hi}]")


def _ghz(n: int, d: int = 2) -> MultipartiteState:
    return _generalized_ghz([1.0 / math.sqrt(d)] * d, n)


def _generalized_ghz(lambdas: Sequence[float], n: int) -> MultipartiteState:
    lam = np.asarray(lambdas, dtype=complex)
    d = lam.size
    if abs(np.sum(np.abs(lam) ** 2) - 1.0) > 1e-8:
        raise ValueError("generalized GHZ coefficients must satisfy sum |lambda_i|^2 = 1")
    dims = (d,) * n
    psi = sum(lam[i] * _basis_ket([i] * n, dims) for i in range(d))
    psi /= np.linalg.norm(psi)
    return MultipartiteState(dims, ket=psi, validate=False)


def _generalized_w_ket(amplitudes, n: int, d: int) -> np.ndarray:
    a = np.asarray(amplitudes, dtype=complex).reshape(n, d - 1)
    norm2 = float(np.sum(np.abs(a) ** 2))
    if norm2 <= 0:
        raise ValueError("generalized W amplitudes are all zero")
    if abs(norm2 - 1.0) > 1e-8:
        warnings.warn(f"generalized W amplitudes have squared norm {norm2:.6g}; renormalizing", stacklevel=3)
        a = a / math.sqrt(norm2)
    dims = (d,) * n
    psi = np.zeros(d**n, dtype=complex)
    for party in range(n):
        for level in range(1, d):
            digits = [0] * n
            digits[party] = level
            psi += a[party, level - 1] * _basis_ket(digits, dims)
    return psi


def _werner_x(x: float, m: int) -> np.ndarray:
    _check_range("x", x, 0.0, 1.0)
    ident = np.eye(m * m)
    f = _swap(m)
    sym, anti = 0.5 * (ident + f), 0.5 * (ident - f)
    return 2 * (1 - x) / (m * (m + 1)) * sym + 2 * x / (m * (m - 1)) * anti


def _werner_c(c: float, m: int) -> np.ndarray:
    _check_range("c", c, -1.0, 1.0)
    return ((m - c) * np.eye(m * m) + (m * c - 1) * _swap(m)) / (m**3 - m)


def _isotropic_t(t: float, m: int) -> np.ndarray:
    _check_range("t", t, 0.0, 1.0)
    p = np.outer(_phi_plus(m), _phi_plus(m).conj())
    return (1 - t) / (m * m - 1) * np.eye(m * m) + (t * m * m - 1) / (m * m - 1) * p


def _isotropic_f(f: float, m: int) -> np.ndarray:
    _check_range("f", f, 0.0, 1.0)
    p = np.outer(_phi_plus(m), _phi_plus(m).conj())
    return (1 - f) / (m * m - 1) * (np.eye(m * m) - p) + f * p


def xstate_matrix(a: Sequence[float], b: Sequence[float], z: Sequence[complex]) -> np.ndarray:
    """n-qubit X-shaped density matrix with diagonal ``a_1..a_m, b_m..b_1`` and anti-diagonal ``z_i``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    z = np.asarray(z, dtype=complex)
    m = a.size
    if b.size != m or z.size != m or m & (m - 1):
        raise ValueError("X-state needs equal-length a, b, z of length 2^(n-1)")
    if np.any(a < -1e-12) or np.any(b < -1e-12):
        raise ValueError("X-state diagonal entries must be nonnegative")
    if abs(a.sum() + b.sum() - 1.0) > 1e-10:
        raise ValueError("X-state requires sum(a_i + b_i) = 1")
    if np.any(np.abs(z) > np.sqrt(np.clip(a * b, 0, None)) + 1e-12):
        raise ValueError("X-state requires |z_i| <= sqrt(a_i b_i)")
    dim = 2 * m
    rho = np.zeros((dim, dim), dtype=complex)
    for i in range(m):
        rho[i, i] = a[i]
        rho[dim - 1 - i, dim - 1 - i] = b[i]
        rho[i, dim - 1 - i] = z[i]
        rho[dim - 1 - i, i] = np.conj(z[i])
    return rho


_BELL = {
    "phi+": ([1, 0, 0, 1], 1),
    "phi-": ([1, 0, 0, -1], 1),
    "psi+": ([0, 1, 1, 0], 1),
    "psi-": ([0, 1, -1, 0], 1),
}


def build(spec: NamedStateSpec) -> MultipartiteState:
    """Construct a named state.

    Supported families and parameters:

    ==================  ==================================================
    ``ghz``             ``n``, ``d`` (default 2)
    ``generalized_ghz`` ``lambdas`` (sequence), ``n``
    ``w``               ``n``
    ``generalized_w``   ``amplitudes`` (``n x (d-1)``), ``n``, ``d``
    ``gwv``             ``p``, ``amplitudes``, ``n``, ``d``
    ``werner_x``        ``x``, ``m``
    ``werner_c``        ``c``, ``m``
    ``isotropic_t``     ``t``, ``m``
    ``isotropic_f``     ``f``, ``m``
    ``xstate``          ``a``, ``b``, ``z`` (length ``2**(n-1)`` each)
    ``bell``            ``which`` in {phi+, phi-, psi+, psi-}
    ``custom_ket``      ``data``, ``dims``
    ``custom_density``  ``data``, ``dims``
    ==================  ==================================================
    """
    fam = spec.family.lower().replace("-", "_")
    p = dict(spec.params)
    if fam == "ghz":
        n, d = int(p.get("n", 3)), int(p.get("d", 2))
        return _ghz(n, d)
    if fam == "generalized_ghz":
        return _generalized_ghz(p["lambdas"], int(p.get("n", 3)))
    if fam == "w":
        n = int(p.get("n", 3))
        return MultipartiteState((2,) * n, ket=_generalized_w_ket([1 / math.sqrt(n)] * n, n, 2), validate=False)
    if fam == "generalized_w":
        n, d = int(p.get("n", 3)), int(p.get("d", 2))
        psi = _generalized_w_ket(p["amplitudes"], n, d)
        return MultipartiteState((d,) * n, ket=psi / np.linalg.norm(psi), validate=False)
    if fam == "gwv":
        n, d, prob = int(p.get("n", 3)), int(p.get("d", 2)), float(p["p"])
        _check_range("p", prob, 0.0, 1.0)
        amps = p.get("amplitudes", [1.0 / math.sqrt(n * (d - 1))] * (n * (d - 1)))
        psi = math.sqrt(prob) * _generalized_w_ket(amps, n, d)
        psi += math.sqrt(1 - prob) * _basis_ket([0] * n, (d,) * n)
        return MultipartiteState((d,) * n, ket=psi / np.linalg.norm(psi), validate=False)
    if fam in ("werner_x", "werner_c", "isotropic_t", "isotropic_f"):
        m = int(p.get("m", 2))
        if m < 2:
            raise ValueError("local dimension m must be at least 2")
        key = fam.split("_")[1]
        fn = {"werner_x": _werner_x, "werner_c": _werner_c, "isotropic_t": _isotropic_t, "isotropic_f": _isotropic_f}[fam]
        return MultipartiteState((m, m), matrix=fn(float(p[key]), m))
    if fam == "xstate":
        rho = xstate_matrix(p["a"], p["b"], p["z"])
        n = int(round(math.log2(rho.shape[0])))
        return MultipartiteState((2,) * n, matrix=rho)
    if fam == "bell":
        which = str(p.get("which", "phi+"))
        if which not in _BELL:
            raise ValueError(f"unknown Bell state {which!r}")
        v = np.asarray(_BELL[which][0], dtype=complex) / math.sqrt(2)
        return MultipartiteState((2, 2), ket=v, validate=False)
    if fam == "custom_ket":
        return MultipartiteState(p["dims"], ket=p["data"])
    if fam == "custom_density":
        return MultipartiteState(p["dims"], matrix=p["data"])
    raise ValueError(f"unknown state family {spec.family!r}")


def ghz(n: int, d: int = 2) -> MultipartiteState:
    return _ghz(n, d)


def w(n: int) -> MultipartiteState:
    return build(NamedStateSpec("w", {"n": n}))


def bell(which: str = "phi+") -> MultipartiteState:
    return build(NamedStateSpec("bell", {"which": which}))


def product(*states: MultipartiteState) -> MultipartiteState:
    """Tensor product, pure if every factor is pure."""
    dims = tuple(d for s in states for d in s.dims)
    if all(s.is_pure for s in states):
        return MultipartiteState(dims, ket=kron([s.ket for s in states]).reshape(-1), validate=False)
    return MultipartiteState(dims, matrix=kron([s.matrix for s in states]), validate=False)


# ---------------------------------------------------------------------------
# serialization


def _parse_value(text: str):
    if "," in text:
        return [_parse_value(t) for t in text.split(",") if t != ""]
    for cast in (int, float, complex):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_state_uri(uri: str) -> NamedStateSpec:
    """Parse ``named:<family>?k=v&k=v`` into a :class:`NamedStateSpec`.

    Comma-separated values become lists, so ``named:xstate?a=0.5,0&b=0.5,0&z=0.5,0``
    describes a two-qubit X state.
    """
    if not uri.startswith("named:"):
        raise ValueError(f"not a named-state URI: {uri!r}")
    body = uri[len("named:"):]
    family, _, query = body.partition("?")
    if not family:
        raise ValueError(f"missing family in {uri!r}")
    aliases = {"isotropic": "isotropic_f", "werner": "werner_x"}
    family = aliases.get(family, family)
    params = {k: _parse_value(v) for k, v in parse_qsl(query, keep_blank_values=False)}
    return NamedStateSpec(family, params)


def _encode(arr: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(arr, dtype=complex).reshape(-1)]


def state_to_json(s: MultipartiteState) -> dict:
    """Serialize to ``{"dims", "kind", "data"}`` with row-major ``[re, im]`` pairs."""
    if s.is_pure:
        return {"dims": list(s.dims), "kind": "ket", "data": _encode(s.ket)}
    return {"dims": list(s.dims), "kind": "density", "data": _encode(s.matrix)}


def state_from_json(obj: dict) -> MultipartiteState:
    dims = [int(d) for d in obj["dims"]]
    data = np.asarray([complex(re, im) for re, im in obj["data"]], dtype=complex)
    kind = obj.get("kind")
    if kind == "ket":
        return MultipartiteState(dims, ket=data)
    if kind == "density":
        dim = math.prod(dims)
        return MultipartiteState(dims, matrix=data.reshape(dim, dim))
    raise ValueError(f"unknown state kind {kind!r}")


def load_state(source: str) -> MultipartiteState:
    """Load from a ``named:`` URI or a JSON state file."""
    if source.startswith("named:"):
        return build(parse_state_uri(source))
    path = Path(source)
    if not path.exists():
        raise ValueError(f"state source {source!r} is neither a named: URI nor an existing file")
    return state_from_json(json.loads(path.read_text()))
