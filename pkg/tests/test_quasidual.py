import math

import numpy as np
import pytest

from core.errors import DimensionMismatch, InvalidP, NoParsevalDual, NotParseval, NotSorted, RankTooLow
from core.models import Frame, UINormSpec
from services.certify.certification_service import sample_coisometry
from services.frames.frame_service import (
    canonical_dual,
    frame_operator,
    gramian_spectrum,
    is_parseval,
    polar_coisometry,
    scaled,
    unitary_rotation,
)
from services.linalg.linalg_core import adjoint, numerical_rank, op_norm, singular_values
from services.norms.uin import uin_norm
from services.quasidual.quasidual import (
    alpha,
    alpha_p,
    construct,
    dilation,
    frame_distance,
    is_quasidual,
    optimal_spectrum,
    optimal_spectrum_via_r,
    parseval_dual_exists,
    reconstruct,
    reconstruction_error,
    tight_dual_bound,
    worst_case_error,
)

NORMS = [
    UINormSpec.schatten(1),
    UINormSpec.schatten(2),
    UINormSpec.schatten(math.inf),
    UINormSpec.kyfan(2),
]

GRID_VALUES = [0.25, 0.81, 1.0, 1.44, 4.0]


def _alpha_inf_formula(lam: np.ndarray, n: int) -> float:
    m = lam.size
    return max(1.0 - math.sqrt(lam[n - 1]), math.sqrt(lam[m - n]) - 1.0, 0.0)


def _abs_matrix(M: np.ndarray) -> np.ndarray:
    _, s, Vh = np.linalg.svd(M)
    return adjoint(Vh) @ np.diag(s) @ Vh


def _grid_frames(diagonal_frame, random_unitary):
    """Спектры S_F по обе стороны условий существования парсевалевой двойственной"""
    frames = []
    for i, a in enumerate(GRID_VALUES):
        for b in GRID_VALUES[: i + 1]:
            for m in (2, 3, 4):
                F = diagonal_frame([a, b], m)
                frames.append(unitary_rotation(F, random_unitary(m)))
    return frames


# Тесты для optimal_spectrum
def test_optimal_spectrum_examples():
    result = optimal_spectrum([4.0, 1.0, 0.0], 2)
    assert np.allclose(result.d, [1.0, 1.0])
    assert result.r == 2
    result = optimal_spectrum([0.25, 0.16, 0.0], 2)
    assert np.allclose(result.d, [0.25, 0.16])
    assert result.r == 0
    result = optimal_spectrum([9.0, 4.0, 0.0], 2)
    assert np.allclose(result.d, [4.0, 1.0])
    assert result.r == 2


def test_optimal_spectrum_feasible(rng):
    for _ in range(50):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, m + 1))
        lam = np.concatenate([np.sort(rng.uniform(0.05, 4.0, size=n))[::-1], np.zeros(m - n)])
        d = optimal_spectrum(lam, n).d
        assert np.all(lam[:n] >= d)
        assert np.all(d >= lam[m - n:])
        assert np.all(np.diff(d) <= 0)


def test_optimal_spectrum_errors():
    with pytest.raises(NotSorted):
        optimal_spectrum([1.0, 4.0, 0.0], 2)
    with pytest.raises(RankTooLow):
        optimal_spectrum([1.0, 0.0, 0.0], 2)
    with pytest.raises(DimensionMismatch):
        optimal_spectrum([1.0], 2)


def test_optimal_spectrum_rank_cutoff_on_singular_scale():
    # σ_2 = sqrt(1e-25) выше порога ранга 3 * eps * σ_1, σ_2 = 1e-16 ниже
    synthesis = np.diag([1.0, math.sqrt(1e-25)])
    assert numerical_rank(np.hstack([synthesis, np.zeros((2, 1))])) == 2
    result = optimal_spectrum([1.0, 1e-25, 0.0], 2)
    assert result.d == pytest.approx([1.0, 1e-25], rel=1e-12, abs=0)
    with pytest.raises(RankTooLow):
        optimal_spectrum([1.0, 1e-32, 0.0], 2)


# Тесты для optimal_spectrum_via_r
def test_via_r_below_one():
    check = optimal_spectrum_via_r([0.25, 0.16, 0.0], 2)
    assert check.r == 0
    assert check.branch == "below_one"
    assert check.consistent
    assert np.allclose(sorted(check.values), [0.5, 0.6])


def test_via_r_boundary():
    check = optimal_spectrum_via_r([9.0, 4.0, 0.0], 2)
    assert check.r == 2
    assert check.branch == "boundary"
    assert not check.consistent
    assert np.allclose(check.values, [1.0])


def test_via_r_parseval_dual_case():
    check = optimal_spectrum_via_r([4.0, 1.0, 0.0], 2)
    assert check.values == ()


def test_via_r_above_one():
    check = optimal_spectrum_via_r([9.0, 4.0, 2.25], 2)
    assert check.branch == "above_one"
    assert check.consistent
    assert np.allclose(check.values, [1.0, 0.5])


def test_via_r_all_one():
    check = optimal_spectrum_via_r([9.0, 4.0, 0.25, 0.0], 2)
    assert check.branch == "all_one"
    assert check.consistent
    assert check.values == ()


# Тесты для alpha и alpha_p
def test_alpha_orthonormal(onb_frame):
    for norm in NORMS:
        assert alpha(onb_frame, norm) == pytest.approx(0.0, abs=1e-12)


def test_alpha_small_frame(frame_small):
    assert alpha(frame_small, UINormSpec.schatten(math.inf)) == pytest.approx(0.6)
    assert alpha(frame_small, UINormSpec.schatten(1)) == pytest.approx(1.1)


def test_alpha_large_frame(frame_9_4):
    assert alpha(frame_9_4, UINormSpec.schatten(math.inf)) == pytest.approx(1.0)
    assert _alpha_inf_formula(gramian_spectrum(frame_9_4), 2) == pytest.approx(1.0)


def test_alpha_p_examples(onb_frame, frame_small, frame_9_4):
    assert alpha_p(onb_frame, 3.0) == pytest.approx(0.0, abs=1e-12)
    assert alpha_p(frame_small, 2.0) == pytest.approx(math.sqrt(0.61))
    assert alpha_p(frame_9_4, math.inf) == pytest.approx(1.0)


def test_alpha_p_invalid(frame_small):
    with pytest.raises(InvalidP):
        alpha_p(frame_small, 0.5)


def test_alpha_p_matches_alpha(random_frame):
    for n, m in [(2, 3), (3, 5), (4, 4), (2, 6)]:
        F = random_frame(n, m)
        for p in (1.0, 2.0, 3.0, math.inf):
            assert alpha_p(F, p) == pytest.approx(alpha(F, UINormSpec.schatten(p)), abs=1e-12)


def test_alpha_unitary_invariance(random_frame, random_unitary):
    F = random_frame(3, 5)
    rotated = unitary_rotation(F, random_unitary(5))
    for norm in NORMS:
        assert alpha(rotated, norm) == pytest.approx(alpha(F, norm), abs=1e-10)


def test_alpha_scaling_law(random_frame):
    F = random_frame(2, 4)
    lam = gramian_spectrum(F)
    for c in (0.3, 1.0, 2.5):
        expected = _alpha_inf_formula(c ** 2 * lam, 2)
        assert alpha(scaled(F, c), UINormSpec.operator()) == pytest.approx(expected, abs=1e-10)


# Тесты для construct
def test_construct_orthonormal(onb_frame):
    result = construct(onb_frame)
    X = result.X
    assert np.allclose(X @ adjoint(X), np.eye(2), atol=1e-12)
    assert np.allclose(onb_frame.synthesis @ adjoint(X), np.eye(2), atol=1e-12)
    assert result.alpha_value == pytest.approx(0.0, abs=1e-12)


def test_construct_parseval_dual(frame_4_1):
    result = construct(frame_4_1)
    X = result.X
    assert np.allclose(frame_4_1.synthesis @ adjoint(X), np.eye(2), atol=1e-8)
    assert np.allclose(X @ adjoint(X), np.eye(2), atol=1e-8)
    assert result.achieved == pytest.approx(0.0, abs=1e-8)


def test_construct_large_frame(frame_9_4):
    result = construct(frame_9_4)
    FX = frame_9_4.synthesis @ adjoint(result.X)
    assert np.allclose(FX, adjoint(FX), atol=1e-8)
    assert np.allclose(np.sort(np.linalg.eigvalsh(FX))[::-1], [2.0, 1.0], atol=1e-8)
    assert op_norm(FX - np.eye(2)) == pytest.approx(1.0, abs=1e-8)


def test_construct_invariants(random_frame):
    for n, m in [(2, 2), (2, 3), (3, 5), (3, 8), (4, 6), (4, 10)]:
        F = random_frame(n, m)
        result = construct(F, UINormSpec.schatten(2))
        X = result.X
        FX = F.synthesis @ adjoint(X)
        assert np.linalg.norm(X @ adjoint(X) - np.eye(n), 2) <= 1e-8
        assert np.allclose(FX, adjoint(FX), atol=1e-8)
        eigenvalues = np.sort(np.linalg.eigvalsh(0.5 * (FX + adjoint(FX))))[::-1]
        assert eigenvalues.min() >= -1e-8
        assert np.allclose(eigenvalues, np.sqrt(result.d.d), atol=1e-8)
        for norm in NORMS:
            direct = uin_norm(norm, FX - np.eye(n))
            assert direct == pytest.approx(alpha(F, norm), abs=1e-8)
            assert direct == pytest.approx(uin_norm(norm, _abs_matrix(FX) - np.eye(n)), abs=1e-9)


def test_construct_norm_independent(random_frame):
    F = scaled(random_frame(2, 4), 0.05)
    first = construct(F, UINormSpec.schatten(2))
    second = construct(F, UINormSpec.schatten(math.inf))
    assert np.array_equal(first.X, second.X)
    assert first.alpha_value != pytest.approx(second.alpha_value)


# Тесты для parseval_dual_exists и dilation
def test_parseval_dual_examples(onb_frame, frame_4_1, frame_9_4):
    assert parseval_dual_exists(onb_frame)
    assert parseval_dual_exists(frame_4_1)
    assert not parseval_dual_exists(frame_9_4)


def test_parseval_dual_equivalence(diagonal_frame, random_unitary):
    frames = _grid_frames(diagonal_frame, random_unitary)
    assert len(frames) == 45
    for F in frames:
        exists = parseval_dual_exists(F)
        assert exists == (alpha(F, UINormSpec.schatten(math.inf)) <= 1e-8)
        if exists:
            X = construct(F).X
            assert np.allclose(F.synthesis @ adjoint(X), np.eye(F.n), atol=1e-8)
            Q = dilation(F).Q
            assert np.linalg.norm(Q @ Q - Q, 2) <= 1e-8


def test_distance_identity_for_parseval_duals(diagonal_frame, random_unitary):
    for F in _grid_frames(diagonal_frame, random_unitary):
        if not parseval_dual_exists(F):
            continue
        X = Frame(construct(F).X)
        expected = op_norm(frame_operator(F) - np.eye(F.n))
        assert frame_distance(F, X) ** 2 == pytest.approx(expected, abs=1e-8)


def test_dilation_orthonormal(onb_frame):
    result = dilation(onb_frame)
    assert np.allclose(result.Q, np.eye(2), atol=1e-12)
    assert np.allclose(adjoint(result.embedding) @ result.embedding, np.eye(2), atol=1e-12)


def test_dilation_oblique(frame_4_1):
    result = dilation(frame_4_1)
    Q, E = result.Q, result.embedding
    assert np.linalg.norm(Q @ Q - Q, 2) <= 1e-8
    assert np.linalg.matrix_rank(Q, tol=1e-8) == 2
    assert np.allclose(adjoint(E) @ E, np.eye(2), atol=1e-10)
    for i in range(frame_4_1.m):
        e = np.zeros(frame_4_1.m)
        e[i] = 1.0
        assert np.allclose(Q @ e, E @ frame_4_1.synthesis[:, i])
    assert np.allclose(Q @ E, E, atol=1e-8)


def test_dilation_of_parseval_is_orthogonal(mercedes_frame):
    F = scaled(mercedes_frame, math.sqrt(2.0 / 3.0))
    Q = dilation(F).Q
    assert np.allclose(Q, adjoint(Q), atol=1e-8)
    assert np.allclose(Q @ Q, Q, atol=1e-8)


def test_dilation_requires_dual(frame_9_4):
    with pytest.raises(NoParsevalDual):
        dilation(frame_9_4)


# Тесты для is_quasidual и ошибок восстановления
def test_is_quasidual_constructed(frame_small):
    norm = UINormSpec.schatten(2)
    X = Frame(construct(frame_small, norm).X)
    assert is_quasidual(frame_small, X, norm)


def test_is_quasidual_parseval_self(mercedes_frame):
    F = scaled(mercedes_frame, math.sqrt(2.0 / 3.0))
    assert is_quasidual(F, F, UINormSpec.operator())


def test_is_quasidual_random_coisometry(frame_small):
    Y = Frame(sample_coisometry(2, 3, seed=7))
    assert not is_quasidual(frame_small, Y, UINormSpec.schatten(2))


def test_is_quasidual_requires_parseval(onb_frame):
    with pytest.raises(NotParseval):
        is_quasidual(onb_frame, scaled(onb_frame, 2.0), UINormSpec.operator())


def test_worst_case_error_examples(random_frame, random_unitary, frame_9_4):
    F = random_frame(2, 4)
    assert worst_case_error(F, canonical_dual(F)) == pytest.approx(0.0, abs=1e-10)
    X = Frame(construct(frame_9_4).X)
    assert worst_case_error(frame_9_4, X) == pytest.approx(1.0, abs=1e-8)
    U = random_unitary(2)
    onb = Frame(np.eye(2))
    expected = op_norm(adjoint(U) - np.eye(2))
    assert worst_case_error(onb, Frame(U)) == pytest.approx(expected, abs=1e-12)


def test_worst_case_error_shape(onb_frame, frame_4_1):
    with pytest.raises(DimensionMismatch):
        worst_case_error(onb_frame, frame_4_1)


def test_reconstruct_with_dual(rng, random_frame):
    F = random_frame(3, 5)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert np.allclose(reconstruct(F, canonical_dual(F), f), f)


def test_reconstruction_error_operator(frame_small):
    X = Frame(construct(frame_small).X)
    assert reconstruction_error(frame_small, X, UINormSpec.operator()) == pytest.approx(
        worst_case_error(frame_small, X)
    )


def test_tight_dual_bound(frame_small, frame_9_4, onb_frame):
    assert tight_dual_bound(frame_small) == pytest.approx(2.5)
    assert tight_dual_bound(frame_9_4) is None
    assert tight_dual_bound(onb_frame) == pytest.approx(1.0)


def test_polar_coisometry_bounds_alpha(random_frame):
    F = random_frame(2, 5)
    W = polar_coisometry(F)
    assert is_parseval(W)
    assert worst_case_error(F, W) >= alpha(F, UINormSpec.operator()) - 1e-10
    s = singular_values(F.synthesis)
    assert worst_case_error(F, W) == pytest.approx(np.max(np.abs(s - 1.0)), abs=1e-10)
