"""Bipartite entanglement measures.

Pure states are handled exactly through reduced functions; mixed states
through closed forms (two qubits, Werner and isotropic families),
computable quantifiers (negativity, logarithmic negativity, realignment
negativity) and lower bounds. Bipartitions are given as the list of
0-based party indices forming side ``A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import psd_spectrum, trace_norm
from .reduced_fn import ReducedFunctionKind, eval_h_spectrum, make_kind, parse_kind
from .states import (
    RANK_TOL,
    MultipartiteState,
    _normalize_subset,
    partial_transpose,
    realign,
    schmidt,
    schmidt_spectrum,
)

__all__ = [
    "MeasureSpec",
    "MeasureResult",
    "parse_measure",
    "binary_entropy",
    "pure_measure",
    "negativity",
    "log_negativity",
    "ccnr",
    "two_qubit_closed_forms",
    "wootters_concurrence",
    "isotropic_eof",
    "werner_eof",
    "concurrence_lower_bound",
    "q_concurrence_lower_bound",
    "alpha_concurrence_lower_bound",
    "schmidt_number_pure",
    "assistance_upper_sandwich",
    "evaluate",
]

FAMILIES = (
    "reduced_fn",
    "negativity",
    "log_negativity",
    "ccnr",
    "schmidt_number",
    "geometric",
    "two_qubit_concurrence",
    "two_qubit_eof",
    "two_qubit_tangle",
    "werner_eof",
    "isotropic_eof",
    "lower_bound_concurrence",
    "lower_bound_q_concurrence",
    "lower_bound_alpha_concurrence",
)


@dataclass(frozen=True)
class MeasureSpec:
    """A measure family with its parameters.

    For ``family="reduced_fn"`` the reduced function is ``params["kind"]``.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown measure family {self.family!r}")

    @property
    def kind(self) -> ReducedFunctionKind:
        if self.family == "reduced_fn":
            return self.params["kind"]
        if self.family == "negativity":
            return make_kind("negativity")
        if self.family == "geometric":
            return make_kind("geometric")
        raise ValueError(f"{self.family} has no reduced function")

    def __str__(self) -> str:
        if self.family == "reduced_fn":
            return str(self.params["kind"])
        if not self.params:
            return self.family
        return self.family + ":" + ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))

    def __hash__(self) -> int:
        return hash(str(self))


@dataclass
class MeasureResult:
    """A measure value tagged with how it was obtained."""

    value: float
    method: str
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "metadata": dict(self.metadata)}


def parse_measure(text) -> MeasureSpec:
    """Parse ``"family[:k=v,...]"``; unknown families are tried as reduced functions.

    Examples
    --------
    >>> parse_measure("negativity").family
    'negativity'
    >>> parse_measure("tsallis:q=2").params["kind"].tag
    'tsallis'
    """
    if isinstance(text, MeasureSpec):
        return text
    if isinstance(text, ReducedFunctionKind):
        return MeasureSpec("reduced_fn", {"kind": text})
    tag, _, rest = str(text).partition(":")
    tag = tag.strip()
    if tag in FAMILIES and tag != "reduced_fn":
        kv = {}
        for item in filter(None, rest.split(",")):
            k, sep, v = item.partition("=")
            if not sep:
                raise ValueError(f"malformed parameter {item!r} in {text!r}")
            kv[k.strip()] = _num(v.strip())
        return MeasureSpec(tag, kv)
    if tag == "reduced_fn":
        kind_text = rest.partition("=")[2] if rest.startswith("kind=") else rest
        return MeasureSpec("reduced_fn", {"kind": parse_kind(kind_text)})
    return MeasureSpec("reduced_fn", {"kind": parse_kind(str(text))})


def _num(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def binary_entropy(x: float) -> float:
    """``H2(x) = -x log2 x - (1-x) log2 (1-x)`` with ``0 log 0 = 0``."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _as_state(s, dims=None) -> MultipartiteState:
    if isinstance(s, MultipartiteState):
        return s
    arr = np.asarray(s, dtype=complex)
    if arr.ndim == 1:
        return MultipartiteState(dims or _guess_dims(arr.size), ket=arr)
    return MultipartiteState(dims or _guess_dims(arr.shape[0]), matrix=arr)


def _guess_dims(d: int) -> list[int]:
    r = int(round(math.sqrt(d)))
    if r * r != d:
        raise ValueError(f"cannot infer a bipartition for dimension {d}; pass a MultipartiteState")
    return [r, r]


def _side(s: MultipartiteState, bipartition) -> list[int]:
    part = [0] if bipartition is None else _normalize_subset(bipartition, s.n)
    if not part or len(part) == s.n:
        raise ValueError("bipartition must be a nonempty proper subset of parties")
    return part


def _side_dims(s: MultipartiteState, part) -> tuple[int, int]:
    da = int(np.prod([s.dims[i] for i in part]))
    return da, s.dim // da


def _meta(s, part, spec=None, **extra):
    meta = {"bipartition": [p + 1 for p in part], "dims": list(s.dims)}
    if spec is not None:
        meta["measure"] = str(spec)
    meta.update(extra)
    return meta


def pure_measure(spec, ket, bipartition=None) -> MeasureResult:
    """Exact value of a pure-state measure, ``h(rho_A)``.

    Parameters
    ----------
    spec : MeasureSpec, ReducedFunctionKind or str
        ``reduced_fn`` kinds, ``negativity``, ``geometric`` (``1 - lambda_max^2``)
        or ``schmidt_number``.
    ket : MultipartiteState or array_like
        Pure state (a rank-one density matrix is accepted).
    bipartition : iterable of int, optional
        Parties on side ``A``; defaults to ``[0]``.

    Normalized reduced functions use ``d = min(d_A, d_B)``.

    Raises
    ------
    ValueError
        For mixed input; use :mod:`entkit.convex_roof` instead.
    """
    spec = parse_measure(spec)
    s = _as_state(ket)
    if not s.is_pure:
        try:
            s = s.as_pure()
        except ValueError:
            raise ValueError("pure_measure needs a pure state; use convex_roof for mixed states") from None
    part = _side(s, bipartition)
    da, db = _side_dims(s, part)
    if spec.family == "schmidt_number":
        return MeasureResult(float(schmidt_number_pure(s, part)), "reduced_fn", _meta(s, part, spec))
    value = eval_h_spectrum(spec.kind, schmidt_spectrum(s, part), min(da, db))
    return MeasureResult(value, "reduced_fn", _meta(s, part, spec))


def negativity(rho, bipartition=None) -> MeasureResult:
    """``N = (||rho^{T_A}||_1 - 1) / 2``."""
    s = _as_state(rho)
    part = _side(s, bipartition)
    value = max(0.0, (trace_norm(partial_transpose(s, part)) - 1) / 2)
    return MeasureResult(value, "closed_form", _meta(s, part, "negativity"))


def log_negativity(rho, bipartition=None) -> MeasureResult:
    """``E_N = log2 ||rho^{T_A}||_1``."""
    s = _as_state(rho)
    part = _side(s, bipartition)
    value = max(0.0, math.log2(trace_norm(partial_transpose(s, part))))
    return MeasureResult(value, "closed_form", _meta(s, part, "log_negativity"))


def ccnr(rho, bipartition=None) -> MeasureResult:
    """Realignment negativity ``E_R = ln ||rho^R||_1`` (clipped at 0)."""
    s = _as_state(rho)
    part = _side(s, bipartition)
    value = max(0.0, math.log(trace_norm(realign(s, part))))
    return MeasureResult(value, "closed_form", _meta(s, part, "ccnr"))


_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the eigenvalues of ``R = (sqrt(rho) rho~ sqrt(rho))^{1/2}``
    with ``rho~ = (sy x sy) rho* (sy x sy)``.
    """
    s = _as_state(rho, [2, 2])
    if list(s.dims) != [2, 2]:
        raise ValueError(f"two-qubit formula needs dims [2, 2], got {list(s.dims)}")
    # with rho = Psi Psi^dag the l_i are the singular values of Psi^T (sy x sy) Psi
    if s.is_pure:
        psi = s.ket.reshape(4, 1)
    else:
        vals, vecs = np.linalg.eigh(0.5 * (s.matrix + s.matrix.conj().T))
        psi = vecs * np.sqrt(np.clip(vals, 0.0, None))
    return wootters_from_factor(psi)


def wootters_from_factor(psi) -> float:
    """Two-qubit concurrence of ``rho = psi psi^dag`` for a ``4 x r`` factor ``psi``.

    Avoids an eigendecomposition, so a factor read directly off a larger
    pure state keeps full precision.
    """
    psi = np.asarray(psi, dtype=complex).reshape(4, -1)
    lam = np.zeros(4)
    sv = np.linalg.svd(psi.T @ _SYSY @ psi, compute_uv=False)
    lam[: min(4, sv.size)] = sv[:4]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def two_qubit_closed_forms(rho) -> dict:
    """Concurrence, entanglement of formation and tangle of a two-qubit state.

    Returns
    -------
    dict
        ``{"C": C, "E_f": H2((1 + sqrt(1 - C^2)) / 2), "tau": C^2}``.

    Examples
    --------
    >>> from entkit.states import bell
    >>> two_qubit_closed_forms(bell())["C"]  # doctest: +ELLIPSIS
    1.0...
    """
    c = wootters_concurrence(rho)
    return {"C": c, "E_f": eof_from_concurrence(c), "tau": c * c}


def eof_from_concurrence(c: float) -> float:
    """Two-qubit ``E_f`` as a function of concurrence."""
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1 + math.sqrt(max(0.0, 1 - c * c))) / 2)


def isotropic_eof(t: float, m: int) -> float:
    """Entanglement of formation of the isotropic state with fidelity ``t``.

    Three branches: 0 for ``t <= 1/m``; ``H2(g) + (1-g) log2(m-1)`` with
    ``g = [sqrt(t) + sqrt((m-1)(1-t))]^2 / m`` up to ``t = 4(m-1)/m^2``; and
    ``(t-1) m log2(m-1)/(m-2) + log2 m`` beyond. For ``m = 2`` the last
    branch only contains ``t = 1`` and takes its limiting value 1.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if m < 2:
        raise ValueError("m must be at least 2")
    if t <= 1.0 / m:
        return 0.0
    knot = 4.0 * (m - 1) / m**2
    if t < knot or m == 2:
        g = (math.sqrt(t) + math.sqrt((m - 1) * (1 - t))) ** 2 / m
        g = min(g, 1.0)
        tail = (1 - g) * math.log2(m - 1) if m > 2 else 0.0
        return binary_entropy(g) + tail
    return (t - 1) * m * math.log2(m - 1) / (m - 2) + math.log2(m)


def werner_eof(x: float) -> float:
    """Entanglement of formation of the Werner state with antisymmetric weight ``x``.

    ``H2(1/2 - sqrt(x(1-x)))`` for ``x > 1/2`` and 0 otherwise; the value does
    not depend on the local dimension.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x <= 0.5:
        return 0.0
    return binary_entropy(0.5 - math.sqrt(x * (1 - x)))


def _norms(rho, bipartition):
    s = _as_state(rho)
    part = _side(s, bipartition)
    da, db = _side_dims(s, part)
    pt = trace_norm(partial_transpose(s, part))
    re = trace_norm(realign(s, part))
    return s, part, min(da, db), max(pt, re)


def concurrence_lower_bound(rho, bipartition=None) -> MeasureResult:
    """``C >= sqrt(2/(m(m-1))) (max{||rho^{T_A}||, ||rho^R||} - 1)``, floored at 0.

    ``m`` is the smaller local dimension.
    """
    s, part, m, top = _norms(rho, bipartition)
    value = max(0.0, math.sqrt(2.0 / (m * (m - 1))) * (top - 1))
    return MeasureResult(value, "bound_lower", _meta(s, part, "lower_bound_concurrence"))


def q_concurrence_lower_bound(rho, q: float, bipartition=None) -> MeasureResult:
    """``C_q >= (max{||.||^{q-1}} - 1)^2 / (d^{2q-2} - d^{q-1})`` for ``q > 1``."""
    if q <= 1:
        raise ValueError(f"q must exceed 1, got {q}")
    s, part, d, top = _norms(rho, bipartition)
    excess = max(0.0, top ** (q - 1) - 1)
    value = excess**2 / (d ** (2 * q - 2) - d ** (q - 1))
    return MeasureResult(value, "bound_lower", _meta(s, part, "lower_bound_q_concurrence", q=q))


def alpha_concurrence_lower_bound(rho, alpha: float, bipartition=None) -> MeasureResult:
    """``C_alpha >= (d^{1-alpha} - 1)/(d - 1) (max{||.||} - 1)`` for ``0 < alpha < 1``.

    The prefactor is chosen so the bound is tight on maximally entangled
    states, where ``C_alpha = d^{1-alpha} - 1`` and the norm excess is ``d - 1``.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    s, part, d, top = _norms(rho, bipartition)
    value = max(0.0, (d ** (1 - alpha) - 1) / (d - 1) * (top - 1))
    return MeasureResult(value, "bound_lower", _meta(s, part, "lower_bound_alpha_concurrence", alpha=alpha))


def schmidt_number_pure(ket, bipartition=None) -> int:
    """Number of Schmidt coefficients above the rank tolerance."""
    s = _as_state(ket)
    if not s.is_pure:
        try:
            s = s.as_pure()
        except ValueError:
            raise ValueError("schmidt_number_pure needs a pure state") from None
    part = _side(s, bipartition)
    return schmidt(s, part).rank


def assistance_upper_sandwich(rho) -> dict:
    """Check ``sqrt((1-C)^2 + C^2) - 1 + C <= 2N <= C`` for a two-qubit state.

    Returns
    -------
    dict
        ``lower``, ``two_n``, ``upper`` and a boolean ``holds`` (tolerance 1e-9).
    """
    s = _as_state(rho, [2, 2])
    c = wootters_concurrence(s)
    two_n = 2 * negativity(s, [0]).value
    lower = math.sqrt((1 - c) ** 2 + c**2) - 1 + c
    holds = lower <= two_n + 1e-9 and two_n <= c + 1e-9
    return {"lower": lower, "two_n": two_n, "upper": c, "holds": bool(holds)}


def evaluate(spec, state, bipartition=None) -> MeasureResult:
    """Dispatch a measure on any state, choosing the exact route when one exists.

    Pure states go through :func:`pure_measure` for reduced-function
    families. Mixed states of reduced-function families are rejected; use
    :func:`entkit.convex_roof.roof_minimize`.
    """
    spec = parse_measure(spec)
    s = _as_state(state)
    fam = spec.family
    if fam == "negativity" and not s.is_pure:
        return negativity(s, bipartition)
    if fam == "log_negativity":
        return log_negativity(s, bipartition)
    if fam == "ccnr":
        return ccnr(s, bipartition)
    if fam in ("two_qubit_concurrence", "two_qubit_eof", "two_qubit_tangle"):
        forms = two_qubit_closed_forms(s)
        key = {"two_qubit_concurrence": "C", "two_qubit_eof": "E_f", "two_qubit_tangle": "tau"}[fam]
        return MeasureResult(forms[key], "closed_form", _meta(s, [0], spec))
    if fam == "werner_eof":
        return MeasureResult(werner_eof(float(spec.params["x"])), "closed_form", {"measure": str(spec)})
    if fam == "isotropic_eof":
        t, m = float(spec.params["t"]), int(spec.params["m"])
        return MeasureResult(isotropic_eof(t, m), "closed_form", {"measure": str(spec)})
    if fam == "lower_bound_concurrence":
        return concurrence_lower_bound(s, bipartition)
    if fam == "lower_bound_q_concurrence":
        return q_concurrence_lower_bound(s, float(spec.params.get("q", 2.0)), bipartition)
    if fam == "lower_bound_alpha_concurrence":
        return alpha_concurrence_lower_bound(s, float(spec.params.get("alpha", 0.5)), bipartition)
    if s.is_pure or _is_rank_one(s):
        return pure_measure(spec, s, bipartition)
    raise ValueError(f"{spec} on a mixed state needs the convex-roof optimizer")


def _is_rank_one(s: MultipartiteState) -> bool:
    return int(np.sum(psd_spectrum(s.matrix) > RANK_TOL)) == 1
