"""Reduced functions h(rho) and falsification probes for their analytic properties.

A pure bipartite state's entanglement is ``h`` evaluated on either
reduced state. Every kind here depends only on the spectrum, so each is
unitarily invariant by construction.

Logarithm bases: von Neumann, dual entropy and Renyi (by default) use
base 2; Tsallis, Kaniadakis and unified entropies are natural forms with
no logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import psd_spectrum, random_unitary, trace_norm
from .states import MultipartiteState, random_density, reduced_density, state_to_json

__all__ = [
    "ReducedFunctionKind",
    "KINDS",
    "make_kind",
    "parse_kind",
    "eval_h",
    "eval_h_spectrum",
    "ProbeReport",
    "concavity_probe",
    "subadditivity_probe",
    "schur_concavity_probe",
]

_ZERO = 1e-12  # eigenvalues at or below this are treated as exact zeros
_POS = 1e-10  # threshold for "positive" eigenvalues in min-norm kinds

_ALIASES = {
    "s": "von_neumann",
    "entropy": "von_neumann",
    "von_neumann": "von_neumann",
    "eof": "von_neumann",
    "e_f": "von_neumann",
    "h_c": "concurrence",
    "h_tau": "tangle",
    "tau": "tangle",
    "h_q": "tsallis",
    "h_alpha": "renyi",
    "h_n": "negativity",
    "h_f": "fidelity",
    "h_f'": "sqrt_fidelity",
    "h_af": "afidelity",
    "h_2": "partial_norm",
    "e2": "partial_norm",
    "h_min": "min_norm",
    "h_min'": "reinforced_min",
    "g_d": "g_concurrence",
    "c_k": "elementary_symmetric",
}


@dataclass(frozen=True)
class ReducedFunctionKind:
    """A reduced-function tag plus its parameters."""

    tag: str
    params: dict = field(default_factory=dict)

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.tag}:{args}"

    def __hash__(self) -> int:
        return hash((self.tag, tuple(sorted(self.params.items()))))


def _s(p):
    p = p[p > _ZERO]
    return float(-np.sum(p * np.log2(p)))


def _tr(p, q):
    p = p[p > _ZERO]
    return float(np.sum(p**q))


def _sq_norm_sum(p):
    return float(np.sum(p**2))


def _linear_entropy(p):
    """``1 - sum p_i^2`` as the cross-term sum, accurate near pure spectra."""
    p = np.asarray(p, dtype=float)
    return float(sum(p[i] * (np.sum(p[:i]) + np.sum(p[i + 1 :])) for i in range(p.size)))


def _dual(p, d):
    if d < 2:
        return 0.0
    comp = 1.0 - p
    comp = comp[comp > _ZERO]
    s_to = _s(p) - float(np.sum(comp * np.log2(comp)))
    r = d * math.log2(d) - (d - 1) * math.log2(d - 1)
    return s_to / r


def _elementary(p, k, d):
    if not 1 <= k <= d:
        raise ValueError(f"elementary symmetric order k={k} outside [1, {d}]")
    coeffs = np.poly(p)  # prod (x - p_i): coefficient of x^(d-k) is (-1)^k e_k
    e_k = float(((-1) ** k) * coeffs[k].real)
    ref = math.comb(d, k) / d**k
    return max(e_k, 0.0) / ref


def _min_norm(p):
    pos = p[p > _POS]
    if pos.size <= 1:
        return 0.0
    return float(pos[-1])


def _total(p, q, d):
    mu = d - d ** (1 - q) * (1 + (d - 1) ** q)
    if mu <= 0:
        return 0.0
    comp = np.clip(1.0 - p, 0.0, None)
    return (1.0 - _tr(p, q) + float(np.sum(comp)) - float(np.sum(comp**q))) / mu


def _ic(p, r):
    total = sum(math.comb(r, i) * _tr(p, i + 1) for i in range(r + 1))
    return 1.0 - total / 2**r


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def _validate(tag: str, params: dict) -> None:
    if tag == "tsallis":
        q = params["q"]
        _check(q > 0 and q != 1, f"tsallis requires q > 0, q != 1 (got {q})")
    elif tag == "renyi":
        a = params["alpha"]
        _check(a > 0 and a != 1, f"renyi requires alpha > 0, alpha != 1 (got {a})")
        _check(params.get("base", 2) in (2, "e"), "renyi base must be 2 or 'e'")
    elif tag == "kaniadakis":
        k = params["kappa"]
        _check(0 < k <= 1, f"kaniadakis requires 0 < kappa <= 1 (got {k})")
    elif tag == "unified":
        q, s = params["q"], params["s"]
        _check(q > 0 and q != 1 and s != 0, f"unified requires q > 0, q != 1, s != 0 (got q={q}, s={s})")
    elif tag in ("q_concurrence", "total_concurrence"):
        q = params["q"]
        _check(q > 1, f"{tag} requires q > 1 (got {q})")
    elif tag == "alpha_concurrence":
        a = params["alpha"]
        _check(0 <= a < 1, f"alpha_concurrence requires 0 <= alpha < 1 (got {a})")
    elif tag == "elementary_symmetric":
        _check(int(params["k"]) >= 1, "elementary_symmetric requires k >= 1")
    elif tag == "ic_measure" and params.get("r") is not None:
        _check(int(params["r"]) >= 0, "ic_measure requires r >= 0")


# name -> (defaults, evaluator(p, d, params))
KINDS: dict[str, tuple[dict, Callable]] = {
    "von_neumann": ({}, lambda p, d, a: _s(p)),
    "concurrence": ({}, lambda p, d, a: math.sqrt(max(0.0, 2 * _linear_entropy(p)))),
    "normalized_concurrence": (
        {},
        lambda p, d, a: 0.0 if d < 2 else math.sqrt(max(0.0, d / (d - 1) * _linear_entropy(p))),
    ),
    "tangle": ({}, lambda p, d, a: max(0.0, 2 * _linear_entropy(p))),
    "tsallis": ({"q": 2.0}, lambda p, d, a: (1 - _tr(p, a["q"])) / (a["q"] - 1)),
    "renyi": (
        {"alpha": 0.5, "base": 2},
        lambda p, d, a: math.log(_tr(p, a["alpha"])) / (1 - a["alpha"]) / (math.log(2) if a["base"] == 2 else 1.0),
    ),
    "negativity": ({}, lambda p, d, a: 0.5 * (float(np.sum(np.sqrt(p))) ** 2 - 1)),
    "fidelity": ({}, lambda p, d, a: 1 - _tr(p, 3)),
    "sqrt_fidelity": ({}, lambda p, d, a: 1 - math.sqrt(_tr(p, 3))),
    "afidelity": ({}, lambda p, d, a: 1 - _sq_norm_sum(p) ** 2),
    "partial_norm": (
        {"normalized": True},
        lambda p, d, a: 0.0 if d < 2 else (1 - float(p[0])) * (d / (d - 1) if a["normalized"] else 1.0),
    ),
    "geometric": ({}, lambda p, d, a: 1 - float(p[0])),
    "min_norm": ({}, lambda p, d, a: _min_norm(p)),
    "reinforced_min": ({}, lambda p, d, a: _min_norm(p) * int(np.sum(p > _POS))),
    "dual_entropy": ({}, lambda p, d, a: _dual(p, d)),
    "kaniadakis": (
        {"kappa": 0.5},
        lambda p, d, a: (_tr(p, 1 - a["kappa"]) - _tr(p, 1 + a["kappa"])) / (2 * a["kappa"]),
    ),
    "unified": ({"q": 2.0, "s": 1.0}, lambda p, d, a: (_tr(p, a["q"]) ** a["s"] - 1) / ((1 - a["q"]) * a["s"])),
    "q_concurrence": ({"q": 2.0}, lambda p, d, a: 1 - _tr(p, a["q"])),
    "alpha_concurrence": ({"alpha": 0.5}, lambda p, d, a: _tr(p, a["alpha"]) - 1),
    "elementary_symmetric": ({"k": 2}, lambda p, d, a: _elementary(p, int(a["k"]), d) ** (1.0 / int(a["k"]))),
    "g_concurrence": ({}, lambda p, d, a: d * float(np.prod(p)) ** (1.0 / d)),
    "total_concurrence": ({"q": 2.0}, lambda p, d, a: _total(p, a["q"], d)),
    "ic_measure": ({"r": None}, lambda p, d, a: _ic(p, d - 1 if a["r"] is None else int(a["r"]))),
}


def make_kind(tag: str, **params) -> ReducedFunctionKind:
    """Build a validated kind, filling in default parameters.

    Examples
    --------
    >>> make_kind("tsallis", q=3)
    ReducedFunctionKind(tag='tsallis', params={'q': 3})
    """
    key = _ALIASES.get(tag.lower(), tag.lower())
    if key not in KINDS:
        raise ValueError(f"unknown reduced function {tag!r}")
    defaults, _ = KINDS[key]
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"unknown parameter(s) {sorted(unknown)} for {key}")
    merged = {**defaults, **params}
    _validate(key, merged)
    return ReducedFunctionKind(key, merged)


def _coerce(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_kind(text: str) -> ReducedFunctionKind:
    """Parse ``"tag[:k=v,...]"``, e.g. ``"tsallis:q=2"``."""
    if isinstance(text, ReducedFunctionKind):
        return text
    tag, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        k, sep, v = item.partition("=")
        if not sep:
            raise ValueError(f"malformed parameter {item!r} in {text!r}")
        params[k.strip()] = _coerce(v.strip())
    return make_kind(tag.strip(), **params)


def _as_kind(kind) -> ReducedFunctionKind:
    if isinstance(kind, ReducedFunctionKind):
        return kind
    return parse_kind(str(kind))


def eval_h_spectrum(kind, spectrum, d: int | None = None) -> float:
    """Evaluate ``h`` on an eigenvalue vector.

    ``d`` is the Hilbert-space dimension used by normalized kinds; it
    defaults to ``len(spectrum)``. The spectrum is padded with zeros or
    truncated (dropping its smallest entries) to length ``d``.
    """
    kind = _as_kind(kind)
    p = np.sort(np.clip(np.asarray(spectrum, dtype=float), 0.0, None))[::-1]
    d = p.size if d is None else int(d)
    if p.size < d:
        p = np.concatenate([p, np.zeros(d - p.size)])
    elif p.size > d:
        p = p[:d]
    _, fn = KINDS[kind.tag]
    return float(fn(p, d, kind.params))


def eval_h(kind, rho, d: int | None = None) -> float:
    """Evaluate the reduced function on a density matrix.

    Parameters
    ----------
    kind : ReducedFunctionKind or str
        E.g. ``make_kind("renyi", alpha=0.5)`` or ``"tsallis:q=2"``.
    rho : array_like or MultipartiteState
        Density matrix.
    d : int, optional
        Dimension for normalized kinds (defaults to the matrix size).

    Examples
    --------
    >>> eval_h("S", np.eye(2) / 2)
    1.0
    """
    if isinstance(rho, MultipartiteState):
        rho = rho.matrix
    spec = psd_spectrum(rho)
    # eigenvalues below the numerical-rank threshold are round-off
    if spec.size:
        spec = np.where(spec > spec[0] * spec.size * np.finfo(float).eps, spec, 0.0)
    return eval_h_spectrum(kind, spec, d)


# ---------------------------------------------------------------------------
# probes


@dataclass
class ProbeReport:
    """Outcome of a falsification search.

    ``violations`` holds witness records ``{"rho1", "rho2", "lam", "gap"}``
    (density matrices as arrays). For subadditivity probes ``rho1`` is the
    joint state and ``rho2``/``lam`` are unused; ``reverse_violations``
    holds superadditivity failures.
    """

    kind: ReducedFunctionKind
    probe: str
    trials: int
    violations: list = field(default_factory=list)
    reverse_violations: list = field(default_factory=list)
    equality_witnesses: list = field(default_factory=list)
    min_gap: float = math.inf
    violation_count: int = 0
    reverse_count: int = 0
    equality_count: int = 0

    @property
    def verdict(self) -> str:
        if self.violation_count:
            return "violated"
        if self.equality_count:
            return "equality_witness_found"
        return "consistent"

    def to_json(self) -> dict:
        def enc(rec, dims):
            out = {"gap": rec["gap"], "lam": rec.get("lam")}
            for key in ("rho1", "rho2"):
                if rec.get(key) is not None:
                    m = np.asarray(rec[key])
                    out[key] = state_to_json(MultipartiteState(dims or [m.shape[0]], matrix=m, validate=False))
            return out

        dims = getattr(self, "_dims", None)
        return {
            "kind": str(self.kind),
            "probe": self.probe,
            "trials": self.trials,
            "verdict": self.verdict,
            "min_gap": self.min_gap,
            "violation_count": self.violation_count,
            "reverse_count": self.reverse_count,
            "equality_count": self.equality_count,
            "violations": [enc(r, dims) for r in self.violations],
            "reverse_violations": [enc(r, dims) for r in self.reverse_violations],
            "equality_witnesses": [enc(r, dims) for r in self.equality_witnesses],
        }


_VIOLATION_TOL = 1e-9
_EQUALITY_TOL = 1e-9
_DISTANCE_MIN = 1e-3
_MAX_WITNESSES = 8


def _random_commuting_pair(dim: int, rng: np.random.Generator):
    """Two states diagonal in a common random basis with identically ordered spectra."""
    u = random_unitary(dim, rng)
    x = np.sort(rng.dirichlet(np.ones(dim)))[::-1]
    y = np.sort(rng.dirichlet(np.ones(dim)))[::-1]
    return (u * x) @ u.conj().T, (u * y) @ u.conj().T


def concavity_probe(kind, dim: int, trials: int, seed=None) -> ProbeReport:
    """Search for violations of ``h(l r1 + (1-l) r2) >= l h(r1) + (1-l) h(r2)``.

    Even trials draw two random density matrices of random rank; odd trials
    draw a commuting pair with identically ordered spectra, where functions
    that are linear along some directions (such as ``1 - ||rho||``) show
    equality. A gap below ``-1e-9`` is a violation; ``|gap| < 1e-9`` with
    ``||r1 - r2||_1 >= 1e-3`` is recorded as a strictness (equality) witness.
    """
    kind = _as_kind(kind)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    rep = ProbeReport(kind, "concavity", trials)
    rep._dims = [dim]
    for t in range(trials):
        if t % 2 == 0:
            r1 = random_density([dim], rank=int(rng.integers(1, dim + 1)), seed=rng).matrix
            r2 = random_density([dim], rank=int(rng.integers(1, dim + 1)), seed=rng).matrix
        else:
            r1, r2 = _random_commuting_pair(dim, rng)
        lam = float(rng.uniform(0.05, 0.95))
        mix = lam * r1 + (1 - lam) * r2
        gap = eval_h(kind, mix) - lam * eval_h(kind, r1) - (1 - lam) * eval_h(kind, r2)
        rep.min_gap = min(rep.min_gap, gap)
        rec = {"rho1": r1, "rho2": r2, "lam": lam, "gap": gap}
        if gap < -_VIOLATION_TOL:
            rep.violation_count += 1
            if len(rep.violations) < _MAX_WITNESSES:
                rep.violations.append(rec)
        elif abs(gap) < _EQUALITY_TOL and trace_norm(r1 - r2) >= _DISTANCE_MIN:
            rep.equality_count += 1
            if len(rep.equality_witnesses) < _MAX_WITNESSES:
                rep.equality_witnesses.append(rec)
    return rep


def concavity_gap(kind, rho1, rho2, lam: float) -> float:
    """``h(l r1 + (1-l) r2) - l h(r1) - (1-l) h(r2)`` for explicit inputs."""
    r1, r2 = np.asarray(rho1, dtype=complex), np.asarray(rho2, dtype=complex)
    return eval_h(kind, lam * r1 + (1 - lam) * r2) - lam * eval_h(kind, r1) - (1 - lam) * eval_h(kind, r2)


def _classical_joint(da: int, db: int, rng: np.random.Generator) -> np.ndarray:
    p = rng.dirichlet(np.full(da * db, 0.3))
    return np.diag(p).astype(complex)


def subadditivity_probe(kind, dims, trials: int, seed=None) -> ProbeReport:
    """Search for ``h(rho_AB) > h(rho_A) + h(rho_B)`` and its reverse.

    Samples alternate between random quantum states of random rank,
    product states ``rho_A (x) rho_B`` and sparse classical (diagonal)
    distributions. ``gap = h(A) + h(B) - h(AB)``; a gap below ``-1e-9`` is a
    subadditivity violation and one above ``+1e-9`` a superadditivity
    violation.
    """
    kind = _as_kind(kind)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    da, db = (int(x) for x in dims)
    rng = np.random.default_rng(seed)
    rep = ProbeReport(kind, "subadditivity", trials)
    rep._dims = [da, db]
    for t in range(trials):
        mode = t % 3
        if mode == 0:
            rho = random_density([da, db], rank=int(rng.integers(1, da * db + 1)), seed=rng)
        elif mode == 1:
            ra = random_density([da], rank=int(rng.integers(1, da + 1)), seed=rng).matrix
            rb = random_density([db], rank=int(rng.integers(1, db + 1)), seed=rng).matrix
            rho = MultipartiteState([da, db], matrix=np.kron(ra, rb), validate=False)
        else:
            rho = MultipartiteState([da, db], matrix=_classical_joint(da, db, rng), validate=False)
        h_ab = eval_h(kind, rho.matrix)
        h_a = eval_h(kind, reduced_density(rho, [0]))
        h_b = eval_h(kind, reduced_density(rho, [1]))
        gap = h_a + h_b - h_ab
        rep.min_gap = min(rep.min_gap, gap)
        rec = {"rho1": rho.matrix, "rho2": None, "lam": None, "gap": gap}
        if gap < -_VIOLATION_TOL:
            rep.violation_count += 1
            if len(rep.violations) < _MAX_WITNESSES:
                rep.violations.append(rec)
        elif gap > _VIOLATION_TOL:
            rep.reverse_count += 1
            if len(rep.reverse_violations) < _MAX_WITNESSES:
                rep.reverse_violations.append(rec)
    return rep


def _random_doubly_stochastic(dim: int, rng: np.random.Generator, terms: int = 4) -> np.ndarray:
    weights = rng.dirichlet(np.ones(terms))
    out = np.zeros((dim, dim))
    for w in weights:
        out += w * np.eye(dim)[rng.permutation(dim)]
    return out


def schur_concavity_probe(kind, dim: int, trials: int, seed=None) -> ProbeReport:
    """Check ``h(diag(D y)) >= h(diag(y))`` for random doubly stochastic ``D``.

    ``D y`` is majorized by ``y``, so a Schur-concave ``h`` never decreases.
    ``gap = h(Dy) - h(y)``.
    """
    kind = _as_kind(kind)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    rep = ProbeReport(kind, "schur_concavity", trials)
    rep._dims = [dim]
    for _ in range(trials):
        y = rng.dirichlet(np.full(dim, 0.5))
        x = _random_doubly_stochastic(dim, rng) @ y
        gap = eval_h_spectrum(kind, x) - eval_h_spectrum(kind, y)
        rep.min_gap = min(rep.min_gap, gap)
        if gap < -_VIOLATION_TOL:
            rep.violation_count += 1
            if len(rep.violations) < _MAX_WITNESSES:
                rep.violations.append({"rho1": np.diag(x), "rho2": np.diag(y), "lam": None, "gap": gap})
    return rep
