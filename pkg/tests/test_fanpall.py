import numpy as np
import pytest
from scipy.linalg import null_space

from core.errors import DimensionMismatch, FanPallViolated, InterlacingViolated, NotSorted
from services.fanpall.fanpall import (
    build_compression_subspace,
    check_fan_pall,
    compression_spectrum,
    deflate_once,
    interlace_chain,
)
from services.linalg.linalg_core import adjoint, is_unitary_columns


def _random_positive(rng, m: int) -> np.ndarray:
    A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return A @ adjoint(A)


def _feasible_mu(rng, lam: np.ndarray, n: int) -> np.ndarray:
    """Случайный μ в коробке Фан-Палла (сортировка сохраняет границы)"""
    m = lam.size
    t = rng.uniform(size=n)
    mu = t * lam[:n] + (1.0 - t) * lam[m - n:]
    return np.sort(mu)[::-1]


# Тесты для check_fan_pall
def test_fan_pall_examples():
    assert check_fan_pall([3, 2, 1], [2.5, 1.5])
    assert check_fan_pall([3, 2, 1], [3, 1])
    assert not check_fan_pall([3, 2, 1], [3.5, 1])
    assert not check_fan_pall([3, 2, 1], [1.5, 0.5])


def test_fan_pall_unsorted():
    with pytest.raises(NotSorted):
        check_fan_pall([1, 2, 3], [2])
    with pytest.raises(NotSorted):
        check_fan_pall([3, 2, 1], [1, 2])


def test_fan_pall_dimension():
    with pytest.raises(DimensionMismatch):
        check_fan_pall([1], [1, 1])


def test_fan_pall_necessity(rng):
    for _ in range(1000):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, m + 1))
        H = _random_positive(rng, m)
        lam = np.sort(np.linalg.eigvalsh(H))[::-1]
        G = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        basis, _ = np.linalg.qr(G)
        assert check_fan_pall(lam, compression_spectrum(H, basis))


# Тесты для interlace_chain
def test_chain_single_step():
    chain = interlace_chain([3, 2, 1], [2.5, 1.5])
    assert len(chain.spectra) == 2
    assert np.allclose(chain.spectra[0], [3, 2, 1])
    assert np.allclose(chain.spectra[1], [2.5, 1.5])


def test_chain_square():
    chain = interlace_chain([2, 1], [2, 1])
    assert len(chain.spectra) == 1
    assert np.allclose(chain.spectra[0], [2, 1])


def test_chain_two_steps():
    chain = interlace_chain([4, 1, 0, 0], [1, 1])
    assert [list(level) for level in chain.spectra] == [[4, 1, 0, 0], [1, 1, 0], [1, 1]]


def test_chain_interlaces(rng):
    for _ in range(50):
        lam = np.sort(rng.uniform(0, 10, size=7))[::-1]
        mu = _feasible_mu(rng, lam, 3)
        chain = interlace_chain(lam, mu)
        assert np.allclose(chain.spectra[0], lam)
        assert np.allclose(chain.spectra[-1], mu)
        for outer, inner in zip(chain.spectra, chain.spectra[1:]):
            assert inner.size == outer.size - 1
            assert np.all(outer[:-1] >= inner - 1e-12)
            assert np.all(inner >= outer[1:] - 1e-12)


def test_chain_violation():
    with pytest.raises(FanPallViolated):
        interlace_chain([3, 2, 1], [3.5, 1])


# Тесты для deflate_once
def test_deflate_distinct():
    w = deflate_once([3, 2, 1], [2.5, 1.5])
    assert np.allclose(w, np.sqrt([0.375, 0.25, 0.375]), atol=1e-12)
    N = null_space(w[None, :])
    compressed = N.T @ np.diag([3.0, 2.0, 1.0]) @ N
    assert np.allclose(np.sort(np.linalg.eigvalsh(compressed))[::-1], [2.5, 1.5])


def test_deflate_boundary_tie():
    w = deflate_once([2, 1], [2])
    assert np.allclose(w, [0.0, 1.0])


def test_deflate_full_degeneracy():
    c = 1.7
    w = deflate_once([c, c, c], [c, c])
    assert np.allclose(w, [0.0, 0.0, 1.0])


def test_deflate_exact_match_inside():
    w = deflate_once([4, 1, 0], [1, 1])
    assert np.allclose(w, [np.sqrt(0.75), 0.0, 0.5])


def test_deflate_single():
    assert np.allclose(deflate_once([5.0], []), [1.0])


def test_deflate_weights_sum(rng):
    for _ in range(100):
        k = int(rng.integers(2, 9))
        lam = np.sort(rng.uniform(0, 5, size=k))[::-1]
        t = rng.uniform(size=k - 1)
        nu = t * lam[:-1] + (1.0 - t) * lam[1:]
        w = deflate_once(lam, nu)
        assert np.sum(w ** 2) == pytest.approx(1.0, abs=1e-12)
        N = null_space(w[None, :])
        spectrum = np.sort(np.linalg.eigvalsh(N.T @ np.diag(lam) @ N))[::-1]
        assert np.allclose(spectrum, nu, atol=1e-8)


def test_deflate_not_interlacing():
    with pytest.raises(InterlacingViolated):
        deflate_once([3, 2, 1], [3.5, 1.5])
    with pytest.raises(DimensionMismatch):
        deflate_once([3, 2, 1], [2.5])


# Тесты для build_compression_subspace
def test_subspace_diagonal():
    H = np.diag([3.0, 2.0, 1.0])
    S = build_compression_subspace(H, [2.5, 1.5])
    assert S.dim == 2
    assert is_unitary_columns(S.basis, 1e-12)
    assert np.allclose(compression_spectrum(H, S.basis), [2.5, 1.5], atol=1e-10)
    w = np.sqrt([0.375, 0.25, 0.375])
    assert np.allclose(np.abs(w @ S.basis), 0.0, atol=1e-10)


def test_subspace_identity():
    H = np.eye(4)
    S = build_compression_subspace(H, [1.0, 1.0])
    assert np.allclose(adjoint(S.basis) @ H @ S.basis, np.eye(2), atol=1e-12)


def test_subspace_avoids_top_eigenvalue():
    H = np.diag([4.0, 1.0, 0.0])
    S = build_compression_subspace(H, [1.0, 1.0])
    assert np.allclose(compression_spectrum(H, S.basis), [1.0, 1.0], atol=1e-10)
    assert np.allclose(S.projection @ S.projection, S.projection, atol=1e-12)


def test_subspace_round_trip(rng):
    for _ in range(30):
        m = int(rng.integers(2, 11))
        n = int(rng.integers(1, m + 1))
        H = _random_positive(rng, m)
        lam = np.sort(np.linalg.eigvalsh(H))[::-1]
        mu = _feasible_mu(rng, lam, n)
        S = build_compression_subspace(H, mu)
        assert is_unitary_columns(S.basis, 1e-10)
        assert np.allclose(compression_spectrum(H, S.basis), mu, atol=1e-8)


def test_subspace_infeasible():
    with pytest.raises(FanPallViolated):
        build_compression_subspace(np.diag([3.0, 2.0, 1.0]), [3.5, 1.0])
