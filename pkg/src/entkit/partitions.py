"""Set partitions of subsystems, coarsening relations and complementarity sets.

Subsystems are 0-based integers internally. Text forms use letters
(``"AB|C|DE"``, ``A`` is subsystem 0) or 1-based indices (``"1,2|3|4,5"``).
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Partition",
    "CoarseningStep",
    "MAX_PARTIES",
    "restricted_growth_strings",
    "enumerate_k_partitions",
    "enumerate_fineness_partitions",
    "enumerate_all_partitions",
    "coarser_partitions",
    "is_coarser",
    "coarsening_relation",
    "complementarity_set",
]

#: Largest number of parties accepted by the enumerators.
MAX_PARTIES = 10

_LETTERS = string.ascii_uppercase


@dataclass(frozen=True)
class Partition:
    """A partition of a set of subsystems into disjoint nonempty blocks.

    Blocks are stored sorted internally and ordered by least element, so
    equal partitions compare equal.

    Examples
    --------
    >>> Partition.parse("BC|A") == Partition.parse("A|BC")
    True
    >>> str(Partition.parse("1,2|3"))
    'AB|C'
    """

    blocks: tuple

    def __init__(self, blocks: Iterable[Iterable[int]]):
        norm = []
        seen: set[int] = set()
        for b in blocks:
            block = tuple(sorted(int(x) for x in b))
            if not block:
                raise ValueError("partition blocks must be nonempty")
            if any(x < 0 for x in block):
                raise ValueError("subsystem indices must be nonnegative")
            if seen.intersection(block) or len(set(block)) != len(block):
                raise ValueError("partition blocks must be disjoint")
            seen.update(block)
            norm.append(block)
        object.__setattr__(self, "blocks", tuple(sorted(norm)))

    @property
    def ground(self) -> frozenset:
        return frozenset(x for b in self.blocks for x in b)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def fineness(self) -> int:
        """Largest block size."""
        return max((len(b) for b in self.blocks), default=0)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.blocks)

    def block_of(self, x: int) -> tuple | None:
        for b in self.blocks:
            if x in b:
                return b
        return None

    def __str__(self) -> str:
        if self.ground and max(self.ground) >= len(_LETTERS):
            return self.to_indices()
        return "|".join("".join(_LETTERS[x] for x in b) for b in self.blocks)

    def __repr__(self) -> str:
        return f"Partition({str(self)!r})"

    def to_indices(self) -> str:
        """1-based index form, e.g. ``"1,2|3"``."""
        return "|".join(",".join(str(x + 1) for x in b) for b in self.blocks)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse letter (``"AB|C"``) or 1-based index (``"1,2|3"``) syntax."""
        text = text.strip()
        if not text:
            raise ValueError("empty partition string")
        blocks = []
        for raw in text.split("|"):
            raw = raw.strip()
            if not raw:
                raise ValueError(f"empty block in partition {text!r}")
            if raw[0].isdigit():
                try:
                    idx = [int(t) - 1 for t in raw.split(",")]
                except ValueError:
                    raise ValueError(f"bad block {raw!r} in partition {text!r}") from None
                if any(i < 0 for i in idx):
                    raise ValueError(f"indices are 1-based in {text!r}")
                blocks.append(idx)
            else:
                if not all(c in _LETTERS for c in raw):
                    raise ValueError(f"bad block {raw!r} in partition {text!r}")
                blocks.append([_LETTERS.index(c) for c in raw])
        return cls(blocks)


@dataclass(frozen=True)
class CoarseningStep:
    """One coarsening move: ``a`` discards blocks, ``b`` merges blocks,
    ``c`` discards subsystems inside a block of size at least two."""

    type: str
    payload: tuple

    def apply(self, p: Partition) -> Partition:
        blocks = [set(b) for b in p.blocks]
        if self.type == "a":
            drop = {tuple(sorted(b)) for b in self.payload}
            return Partition([b for b in blocks if tuple(sorted(b)) not in drop])
        if self.type == "b":
            merged = set().union(*map(set, self.payload))
            rest = [b for b in blocks if not b <= merged]
            if sum(len(b) for b in blocks if b <= merged) != len(merged):
                raise ValueError("merge payload must consist of whole blocks")
            return Partition(rest + [merged])
        if self.type == "c":
            drop = set(self.payload)
            out = []
            for b in blocks:
                if b & drop:
                    if len(b) < 2 or b <= drop:
                        raise ValueError("type-c step must keep part of a block of size >= 2")
                    b = b - drop
                out.append(b)
            return Partition(out)
        raise ValueError(f"unknown step type {self.type!r}")


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_PARTIES:
        raise ValueError(f"n must lie in [1, {MAX_PARTIES}], got {n}")


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """All restricted growth strings of length ``n`` (one per set partition)."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


def _from_rgs(rgs: Sequence[int], labels: Sequence[int]) -> Partition:
    blocks: dict[int, list[int]] = {}
    for lab, g in zip(labels, rgs):
        blocks.setdefault(g, []).append(lab)
    return Partition(blocks.values())


def enumerate_all_partitions(n_or_labels) -> list[Partition]:
    """Every set partition of ``range(n)`` or of an explicit label list."""
    labels = list(range(n_or_labels)) if isinstance(n_or_labels, int) else sorted(n_or_labels)
    return [_from_rgs(r, labels) for r in restricted_growth_strings(len(labels))]


def enumerate_k_partitions(n: int, k: int) -> list[Partition]:
    """All partitions of ``n`` subsystems into exactly ``k`` blocks.

    The count is the Stirling number of the second kind ``S(n, k)``.

    Examples
    --------
    >>> [str(p) for p in enumerate_k_partitions(3, 2)]
    ['AB|C', 'AC|B', 'A|BC']
    """
    _check_n(n)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    return [_from_rgs(r, range(n)) for r in restricted_growth_strings(n) if max(r) + 1 == k]


def enumerate_fineness_partitions(n: int, k: int) -> list[Partition]:
    """All partitions of ``n`` subsystems whose blocks have at most ``k`` members."""
    _check_n(n)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    return [p for p in enumerate_all_partitions(n) if p.fineness <= k]


def is_coarser(p: Partition, q: Partition) -> bool:
    """True when ``q`` is reachable from ``p`` by at least one coarsening step.

    ``q`` must use a subset of ``p``'s subsystems, and no block of ``p`` may be
    split across blocks of ``q``.
    """
    if p == q or not q.ground <= p.ground or not q.blocks:
        return False
    gq = q.ground
    for b in p.blocks:
        kept = [x for x in b if x in gq]
        if kept and len({q.block_of(x) for x in kept}) > 1:
            return False
    return True


def coarsening_relation(p: Partition, q: Partition) -> list[CoarseningStep] | None:
    """Witness sequence of steps turning ``p`` into ``q``, or ``None``.

    Steps are emitted in the order c (trim blocks), a (drop blocks), b
    (merge blocks); the set of step types used is the unique minimal
    combination. ``None`` also covers ``p == q`` (the relation is strict).

    Examples
    --------
    >>> steps = coarsening_relation(Partition.parse("A|BC"), Partition.parse("A|B"))
    >>> [s.type for s in steps]
    ['c']
    """
    if not is_coarser(p, q):
        return None
    gq = q.ground
    steps: list[CoarseningStep] = []
    trim = tuple(sorted(x for b in p.blocks if any(y in gq for y in b) for x in b if x not in gq))
    if trim:
        steps.append(CoarseningStep("c", trim))
    drop = tuple(b for b in p.blocks if not any(y in gq for y in b))
    if drop:
        steps.append(CoarseningStep("a", drop))
    pieces = [tuple(x for x in b if x in gq) for b in p.blocks]
    pieces = [t for t in pieces if t]
    for qb in q.blocks:
        group = tuple(t for t in pieces if t[0] in qb)
        if len(group) > 1:
            steps.append(CoarseningStep("b", group))
    return steps


def coarser_partitions(p: Partition, min_blocks: int = 1) -> list[Partition]:
    """Every partition strictly coarser than ``p`` with at least ``min_blocks`` blocks."""
    ground = sorted(p.ground)
    if len(ground) > MAX_PARTIES:
        raise ValueError(f"at most {MAX_PARTIES} subsystems supported")
    out = []
    for size in range(1, len(ground) + 1):
        for subset in combinations(ground, size):
            for r in enumerate_all_partitions(list(subset)):
                if r.k >= min_blocks and is_coarser(p, r):
                    out.append(r)
    return out


def _merged_tail(p: Partition, q: Partition):
    """If ``q`` keeps some blocks of ``p`` and fuses all the others, return those others."""
    kept = [b for b in q.blocks if b in p.blocks]
    fused = [b for b in q.blocks if b not in p.blocks]
    if q.ground != p.ground or len(fused) != 1:
        return None
    tail = [b for b in p.blocks if b not in kept]
    if len(tail) >= 2 and set(fused[0]) == set().union(*map(set, tail)):
        return Partition(tail)
    return None


def complementarity_set(p: Partition, q: Partition) -> list[Partition]:
    """The complementarity ``Xi(p - q)`` of ``q`` up to ``p``.

    Members are partitions with at least two blocks that are coarser than
    ``p`` and satisfy:

    (i) neither coarser than ``q`` nor able to reach ``q`` by coarsening;
    (ii) every subsystem of ``q`` they contain sits in one common block.

    When ``q`` keeps some blocks of ``p`` unchanged and fuses all the
    remaining ones ``X_l ... X_k`` into a single block, the set is instead
    ``X_l|...|X_k`` together with all its coarsenings with at least two
    blocks.

    Raises
    ------
    ValueError
        If ``q`` is not coarser than ``p``.

    Examples
    --------
    >>> xi = complementarity_set(Partition.parse("A|B|C|D"), Partition.parse("A|BCD"))
    >>> sorted(str(r) for r in xi)
    ['B|C', 'B|C|D', 'B|CD', 'B|D', 'BC|D', 'BD|C', 'C|D']
    """
    if not is_coarser(p, q):
        raise ValueError(f"{q} is not coarser than {p}")
    tail = _merged_tail(p, q)
    if tail is not None:
        return [tail] + coarser_partitions(tail, min_blocks=2)
    gq = q.ground
    out = []
    for r in coarser_partitions(p, min_blocks=2):
        if is_coarser(q, r) or is_coarser(r, q) or r == q:
            continue
        present = [x for x in r.ground if x in gq]
        if len({r.block_of(x) for x in present}) > 1:
            continue
        out.append(r)
    return out
