import math

import numpy as np
import pytest

from entkit.bipartite import pure_measure, two_qubit_closed_forms
from entkit.convex_roof import (
    OptimizerOptions,
    assistance_maximize,
    ensemble_from_isometry,
    pure_values,
    roof_minimize,
)
from entkit.linalg import random_unitary
from entkit.states import MultipartiteState, bell, ghz, partial_trace, random_density, random_pure


def test_identity_isometry_gives_spectral_ensemble():
    rho = random_density([2, 2], rank=3, seed=1)
    ens = ensemble_from_isometry(rho, np.eye(3))
    vals = np.linalg.eigvalsh(rho.matrix)[::-1][:3]
    assert np.allclose(np.sort(ens.probs)[::-1], vals)
    assert np.max(np.abs(ens.density() - rho.matrix)) <= 1e-10


def test_random_isometry_reconstructs():
    rng = np.random.default_rng(2)
    rho = random_density([2, 3], rank=3, seed=rng)
    u = random_unitary(6, rng)[:, :3]
    ens = ensemble_from_isometry(rho, u)
    assert np.max(np.abs(ens.density() - rho.matrix)) <= 1e-10
    assert np.all(ens.probs >= 0) and ens.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert len(ens) <= 9


def test_hadamard_column_on_pure_state():
    ens = ensemble_from_isometry(bell(), np.array([[1.0], [1.0]]) / math.sqrt(2))
    assert np.allclose(ens.density(), bell().matrix, atol=1e-12)
    assert np.count_nonzero(ens.probs > 1e-14) == 2
    with pytest.raises(ValueError):
        ensemble_from_isometry(bell(), np.array([[1.0], [1.0]]))


def test_pure_input_is_exact():
    s = random_pure([2, 2], seed=3)
    rho = MultipartiteState((2, 2), matrix=s.matrix)
    res = roof_minimize("S", rho)
    assert res.value == pytest.approx(pure_measure("S", s).value, abs=1e-12)
    assert assistance_maximize("S", rho).value == pytest.approx(res.value, abs=1e-12)


def test_separable_mixture_reaches_zero():
    rng = np.random.default_rng(4)
    mat = np.zeros((4, 4), dtype=complex)
    for p in (0.5, 0.3, 0.2):
        a = random_pure([2], seed=rng).ket
        b = random_pure([2], seed=rng).ket
        v = np.kron(a, b)
        mat += p * np.outer(v, v.conj())
    res = roof_minimize("S", MultipartiteState((2, 2), matrix=mat), OptimizerOptions(restarts=6))
    assert res.value <= 1e-4
    assert res.bound == "upper"


@pytest.mark.parametrize("seed", [10, 11, 12])
def test_wootters_agreement(seed):
    rho = random_density([2, 2], seed=seed)
    res = roof_minimize("S", rho, OptimizerOptions(ensemble_size=4, restarts=20, seed=seed))
    assert abs(res.value - two_qubit_closed_forms(rho)["E_f"]) <= 1e-3
    assert np.max(np.abs(res.ensemble.density() - rho.matrix)) <= 1e-10
    witness = float(np.dot(res.ensemble.probs, pure_values("S", res.ensemble.kets, (2, 2))))
    assert witness == pytest.approx(res.value, abs=1e-10)


def test_concurrence_of_assistance_on_ghz_marginal():
    rho = partial_trace(ghz(3), [0, 1])
    res = assistance_maximize("concurrence", rho)
    assert res.value >= 1 - 1e-3
    assert res.bound == "lower"


def test_assistance_dominates_roof():
    rng = np.random.default_rng(5)
    opts = OptimizerOptions(ensemble_size=4, restarts=4)
    for _ in range(5):
        rho = random_density([2, 2], seed=rng)
        assert assistance_maximize("S", rho, opts).value >= roof_minimize("S", rho, opts).value - 1e-9


def test_ensemble_size_validation():
    rho = random_density([2, 2], rank=2, seed=6)
    with pytest.raises(ValueError):
        roof_minimize("S", rho, OptimizerOptions(ensemble_size=5))


def test_determinism():
    rho = random_density([2, 2], seed=7)
    opts = OptimizerOptions(ensemble_size=4, restarts=3, seed=1)
    assert roof_minimize("S", rho, opts).value == roof_minimize("S", rho, opts).value


def test_callable_measure():
    rho = random_density([2, 2], seed=8)
    res = roof_minimize(lambda k: 0.0, rho, OptimizerOptions(restarts=1))
    assert res.value == 0.0
    assert "ensemble" in res.to_json()
