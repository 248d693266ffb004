import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entkit.linalg import trace_norm
from entkit.states import (
    MultipartiteState,
    NamedStateSpec,
    bell,
    build,
    ghz,
    load_state,
    parse_state_uri,
    partial_trace,
    partial_transpose,
    permute,
    product,
    purify,
    random_density,
    random_pure,
    realign,
    reduced_density,
    schmidt,
    state_from_json,
    state_to_json,
    w,
)


def _ket(*amps):
    v = np.asarray(amps, dtype=complex)
    return MultipartiteState((v.size,), ket=v / np.linalg.norm(v))


def test_validation_rejects_bad_inputs():
    with pytest.raises(ValueError):
        MultipartiteState((2, 2), ket=np.ones(3))
    with pytest.raises(ValueError):
        MultipartiteState((2,), matrix=np.diag([0.7, 0.7]))
    with pytest.raises(ValueError):
        MultipartiteState((2,), matrix=np.diag([1.2, -0.2]))
    with pytest.raises(ValueError):
        MultipartiteState((2,), ket=np.array([1.0, 1.0]))


def test_build_reductions():
    assert np.allclose(reduced_density(ghz(3, 2), [0]), np.eye(2) / 2)
    vals = np.linalg.eigvalsh(reduced_density(w(3), [0]))[::-1]
    assert np.allclose(vals, [2 / 3, 1 / 3])
    iso = build(NamedStateSpec("isotropic_f", {"f": 1.0, "m": 2}))
    phi = bell().ket
    assert np.allclose(iso.matrix, np.outer(phi, phi.conj()))


def test_parameter_ranges_checked():
    with pytest.raises(ValueError):
        build(NamedStateSpec("werner_x", {"x": 1.5, "m": 2}))
    with pytest.raises(ValueError):
        build(NamedStateSpec("isotropic_f", {"f": -0.1, "m": 3}))
    with pytest.raises(ValueError):
        build(NamedStateSpec("xstate", {"a": [0.5, 0.0], "b": [0.5, 0.0], "z": [0.9, 0.0]}))


def test_partial_trace_examples():
    assert np.allclose(partial_trace(bell(), [0]).matrix, np.eye(2) / 2)
    rho = random_density([2], seed=1)
    sigma = random_density([3], seed=2)
    assert np.allclose(partial_trace(product(rho, sigma), [0]).matrix, rho.matrix)
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = 0.5
    assert np.allclose(partial_trace(ghz(3), [1, 2]).matrix, expected)


def test_partial_transpose_properties():
    assert np.linalg.eigvalsh(partial_transpose(bell(), [0]))[0] == pytest.approx(-0.5)
    prod = product(random_density([2], seed=3), random_density([3], seed=4))
    assert np.linalg.eigvalsh(partial_transpose(prod, [0]))[0] > -1e-12
    s = random_density([2, 3], seed=5)
    once = MultipartiteState(s.dims, matrix=partial_transpose(s, [0]), validate=False)
    assert np.max(np.abs(partial_transpose(once, [0]) - s.matrix)) < 1e-12


def test_realignment_norms(rng):
    assert trace_norm(realign(bell(), [0])) == pytest.approx(2.0)
    p = product(random_pure([2], rng), random_pure([3], rng))
    assert trace_norm(realign(p, [0])) == pytest.approx(1.0)
    s = random_density([2, 3], seed=rng)
    assert trace_norm(realign(s, [0], "row")) == pytest.approx(trace_norm(realign(s, [0], "column")), abs=1e-10)


def test_schmidt_examples(rng):
    assert np.allclose(schmidt(bell(), [0]).coefficients, [1 / math.sqrt(2)] * 2)
    p = product(random_pure([2], rng), random_pure([2], rng))
    assert np.allclose(schmidt(p, [0]).coefficients, [1.0])
    assert np.allclose(schmidt(w(3), [0]).coefficients, [math.sqrt(2 / 3), math.sqrt(1 / 3)])


def test_schmidt_reconstructs(rng):
    s = random_pure([2, 3, 2], rng)
    f = schmidt(s, [1])
    assert np.sum(f.coefficients**2) == pytest.approx(1.0, abs=1e-10)
    t = sum(c * np.kron(f.left_basis[:, i], f.right_basis[:, i]) for i, c in enumerate(f.coefficients))
    moved = permute(s, [1, 0, 2]).ket
    assert np.max(np.abs(t - moved)) < 1e-9


def test_purify_round_trip():
    pure = purify(bell())
    assert pure.is_pure
    assert np.allclose(partial_trace(pure, [0, 1]).matrix, bell().matrix)
    mixed = MultipartiteState((2,), matrix=np.eye(2) / 2)
    p = purify(mixed)
    assert np.allclose(np.abs(schmidt(p, [0]).coefficients), [1 / math.sqrt(2)] * 2)
    rho = random_density([3], rank=3, seed=11)
    assert np.max(np.abs(partial_trace(purify(rho), [0]).matrix - rho.matrix)) <= 1e-10


def test_random_determinism_and_rank():
    a = random_pure([2, 3], seed=9)
    b = random_pure([2, 3], seed=9)
    assert np.array_equal(a.ket, b.ket)
    r = random_density([2, 2], rank=1, seed=4)
    assert np.trace(r.matrix @ r.matrix).real == pytest.approx(1.0, abs=1e-10)


def test_haar_mean_purity():
    rng = np.random.default_rng(123)
    pur = np.array([np.trace(np.linalg.matrix_power(reduced_density(random_pure([2, 2], rng), [0]), 2)).real for _ in range(1000)])
    expected = (2 + 2) / (2 * 2 + 1)  # Haar average (dA + dB) / (dA dB + 1)
    assert abs(pur.mean() - expected) <= 3 * pur.std() / math.sqrt(pur.size)


def test_state_uri_and_json_round_trip(tmp_path):
    spec = parse_state_uri("named:ghz?n=3&d=2")
    assert spec.family == "ghz" and spec.params == {"n": 3, "d": 2}
    s = load_state("named:w?n=3")
    path = tmp_path / "w.json"
    path.write_text(json.dumps(state_to_json(s)))
    assert np.allclose(load_state(str(path)).ket, s.ket)
    rho = random_density([2, 2], seed=2)
    assert np.allclose(state_from_json(state_to_json(rho)).matrix, rho.matrix)
    with pytest.raises(ValueError):
        load_state("not-a-file.json")


@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 2), (2, 3), (2, 2, 2)]))
def test_random_density_invariants(seed, dims):
    rho = random_density(list(dims), seed=seed).matrix
    assert np.max(np.abs(rho - rho.conj().T)) <= 1e-10
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.eigvalsh(rho)[0] >= -1e-10


@given(st.integers(0, 2**31 - 1))
def test_partial_trace_composes(seed):
    s = random_density([2, 2, 2], seed=seed)
    step = partial_trace(partial_trace(s, [0, 1]), [0])
    assert np.allclose(step.matrix, partial_trace(s, [0]).matrix, atol=1e-12)
