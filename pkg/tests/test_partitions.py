import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entkit.partitions import (
    CoarseningStep,
    Partition,
    coarsening_relation,
    complementarity_set,
    enumerate_all_partitions,
    enumerate_fineness_partitions,
    enumerate_k_partitions,
    is_coarser,
    restricted_growth_strings,
)

from xi_fixtures import XI_ABCD_MINUS_A_BCD, XI_ABCDE_MINUS_AB, XI_ABCDE_MINUS_ABC


def stirling2(n, k):
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


def _canon(items):
    return {Partition.parse(s) for s in items}


def test_parse_and_canonical_form():
    assert Partition.parse("BC|A") == Partition.parse("A|BC")
    assert Partition.parse("1,2|3") == Partition.parse("AB|C")
    assert Partition.parse("A|BC").to_indices() == "1|2,3"
    for bad in ("", "A||B", "A|A", "a|b", "0|1"):
        with pytest.raises(ValueError):
            Partition.parse(bad)


def test_k_partition_examples():
    assert [str(p) for p in enumerate_k_partitions(3, 2)] == ["AB|C", "AC|B", "A|BC"]
    assert len(enumerate_k_partitions(4, 2)) == 7
    assert len(enumerate_k_partitions(4, 4)) == 1
    with pytest.raises(ValueError):
        enumerate_k_partitions(3, 4)


@pytest.mark.parametrize("n", range(1, 9))
def test_stirling_counts(n):
    for k in range(1, n + 1):
        assert len(enumerate_k_partitions(n, k)) == stirling2(n, k)


def test_bell_numbers():
    assert [len(enumerate_all_partitions(n)) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]
    assert sum(1 for _ in restricted_growth_strings(5)) == 52


def test_fineness_examples():
    assert [str(p) for p in enumerate_fineness_partitions(3, 1)] == ["A|B|C"]
    assert {str(p) for p in enumerate_fineness_partitions(3, 2)} == {"A|B|C", "A|BC", "AC|B", "AB|C"}
    f43 = enumerate_fineness_partitions(4, 3)
    assert len(f43) == 15 - 1
    assert Partition.parse("ABCD") not in f43


def test_coarsening_examples():
    steps = coarsening_relation(Partition.parse("A|B|C|D"), Partition.parse("A|B|D"))
    assert [s.type for s in steps] == ["a"]
    steps = coarsening_relation(Partition.parse("A|B|C|D"), Partition.parse("AC|B|D"))
    assert [s.type for s in steps] == ["b"]
    steps = coarsening_relation(Partition.parse("A|BC"), Partition.parse("A|B"))
    assert [s.type for s in steps] == ["c"]
    assert coarsening_relation(Partition.parse("AB|C"), Partition.parse("A|BC")) is None
    assert coarsening_relation(Partition.parse("A|B"), Partition.parse("A|B")) is None


def test_steps_replay():
    p, q = Partition.parse("A|BC|D|E"), Partition.parse("AB|E")
    cur = p
    for step in coarsening_relation(p, q):
        cur = step.apply(cur)
    assert cur == q
    with pytest.raises(ValueError):
        CoarseningStep("c", (0,)).apply(Partition.parse("A|BC"))


def test_xi_four_party():
    got = complementarity_set(Partition.parse("A|B|C|D"), Partition.parse("A|BCD"))
    assert set(got) == _canon(XI_ABCD_MINUS_A_BCD)
    assert len(got) == 7


def test_xi_first_five_party_example():
    got = complementarity_set(Partition.parse("A|B|CD|E"), Partition.parse("A|B"))
    assert len(got) == len(set(got)) == 51
    assert set(got) == _canon(XI_ABCDE_MINUS_AB)


def test_xi_second_five_party_example():
    got = complementarity_set(Partition.parse("A|B|C|D|E"), Partition.parse("A|B|C"))
    listed = _canon(XI_ABCDE_MINUS_ABC)
    assert len(listed) == 42
    assert set(got) == listed | {Partition.parse("ABC|DE")}


def test_xi_rule_iii_contains_merged_pair():
    p = Partition.parse("A|B|C|D")
    got = complementarity_set(p, Partition.parse("A|B|CD"))
    assert Partition.parse("C|D") in got


def test_xi_requires_coarser():
    with pytest.raises(ValueError):
        complementarity_set(Partition.parse("A|BC"), Partition.parse("AB|C"))


@given(st.integers(1, 7), st.data())
def test_enumerated_partitions_cover_ground(n, data):
    parts = enumerate_all_partitions(n)
    p = data.draw(st.sampled_from(parts))
    blocks = [set(b) for b in p.blocks]
    assert set().union(*blocks) == set(range(n))
    assert sum(len(b) for b in blocks) == n
    assert Partition.parse(str(p)) == p


@given(st.integers(2, 5), st.data())
def test_coarsening_is_transitive(n, data):
    parts = enumerate_all_partitions(n)
    p = data.draw(st.sampled_from(parts))
    mids = [q for q in parts if is_coarser(p, q)]
    if not mids:
        return
    q = data.draw(st.sampled_from(mids))
    for r in parts:
        if is_coarser(q, r):
            assert is_coarser(p, r)
