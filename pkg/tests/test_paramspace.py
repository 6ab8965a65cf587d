import numpy as np
import pytest

from helpers import random_complex
from palinverse.errors import Inconsistent, NoNonsingularFound, PairingNotClosed
from palinverse.numerics import fnorm
from palinverse.paramspace import (PJCF, SBasis, _rvec, jordan_block,
                                   nilpotent_shift, pascal_matrix,
                                   pascal_scaling, s_basis, s_basis_pjcf,
                                   sample_nonsingular, solve_constrained_S,
                                   constrained_family, solution_space)
from palinverse.system import ALL_CLASSES, HP, TA, TP


def test_pascal_matrix_small():
    assert np.allclose(pascal_matrix(1), [[1.0]])
    assert np.allclose(pascal_matrix(3), [[1, 0, 0], [2, 1, 0], [1, 1, 1]])
    P4 = pascal_matrix(4).real
    assert np.allclose(P4, [[1, 0, 0, 0], [3, 1, 0, 0], [3, 2, 1, 0], [1, 1, 1, 1]])


@pytest.mark.parametrize("lam", [0.3 + 0.4j, 2 - 1j, -1.0])
@pytest.mark.parametrize("m", range(1, 7))
def test_pascal_similarity_identity(lam, m):
    N = nilpotent_shift(m)
    P = pascal_scaling(m, lam)
    lhs = np.linalg.inv((1.0 / lam) * np.eye(m) + N.T)
    rhs = np.linalg.inv(P) @ (lam * np.eye(m) + N.T) @ P
    assert fnorm(lhs - rhs) <= 1e-10 * max(fnorm(lhs), 1.0)


def _pair_diag(cls, *lams):
    vals = []
    for lam in lams:
        vals += [lam, 1 / cls.star_scalar(lam)]
    return np.diag(np.array(vals, dtype=complex))


def test_s_basis_dimensions_simple_cases():
    assert s_basis(_pair_diag(HP, 1 + 1j), HP).dim == 2
    assert s_basis(np.diag([1.0, -1.0]), TA).dim == 4
    assert s_basis(_pair_diag(TP, 2.0), TP).dim == 2


def test_s_basis_hp_pair_structure():
    b = s_basis(_pair_diag(HP, 1 + 1j), HP)
    for B in b.basis:
        assert abs(B[0, 0]) < 1e-12 and abs(B[1, 1]) < 1e-12
        assert abs(B[1, 0] + np.conj(B[0, 1])) < 1e-12


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_s_basis_membership_residuals(cls):
    T = _pair_diag(cls, 0.4 + 0.2j, 1.7 - 0.5j)
    b = s_basis(T, cls)
    nt = fnorm(T)
    for B in b.basis:
        assert fnorm(B + cls.epsilon * cls.star_of(B)) <= 1e-12 * fnorm(B)
        assert fnorm(B - T @ B @ cls.star_of(T)) <= 1e-10 * fnorm(B) * nt * nt


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_s_basis_real_dim_convention(cls):
    # Star = T spaces are complex linear: i * element stays inside, so the
    # real dimension is even and twice the complex one.
    T = _pair_diag(cls, 0.4 + 0.2j, 1.7 - 0.5j)
    b = s_basis(T, cls)
    if cls.star == "T":
        assert b.dim % 2 == 0
        A = np.column_stack([_rvec(B) for B in b.basis])
        q, _ = np.linalg.qr(A)
        for B in b.basis:
            v = _rvec(1j * B)
            assert np.linalg.norm(v - q @ (q.T @ v)) < 1e-8


def _span_gap(basis_a, basis_b):
    A = np.column_stack([_rvec(B) / np.linalg.norm(_rvec(B)) for B in basis_a])
    B = np.column_stack([_rvec(M) / np.linalg.norm(_rvec(M)) for M in basis_b])
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    return max(np.linalg.norm(B - qa @ (qa.T @ B)),
               np.linalg.norm(A - qb @ (qb.T @ A)))


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_pjcf_basis_agrees_with_generic_simple(cls):
    lam1, lam2 = 0.4 + 0.2j, 1.7 - 0.5j
    jcf = PJCF(cls.star,
               [lam1, 1 / cls.star_scalar(lam1), lam2, 1 / cls.star_scalar(lam2)],
               [[1], [1], [1], [1]], n_pairs=2)
    sb = s_basis_pjcf(jcf, cls)
    gb = s_basis(jcf.T_matrix(), cls)
    assert sb.dim == gb.dim
    assert _span_gap(sb.basis, gb.basis) <= 1e-8


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_pjcf_basis_agrees_with_generic_jordan(cls):
    lam = 0.5 + 0.3j
    jcf = PJCF(cls.star, [lam, 1 / cls.star_scalar(lam)], [[2], [2]], n_pairs=1)
    sb = s_basis_pjcf(jcf, cls)
    gb = s_basis(jcf.T_matrix(), cls)
    assert sb.dim == gb.dim == 4
    assert _span_gap(sb.basis, gb.basis) <= 1e-8


def test_pjcf_jordan_pair_is_pascal_hankel():
    lam = 0.5 + 0.3j
    jcf = PJCF("T", [lam, 1 / lam], [[2], [2]], n_pairs=1)
    sb = s_basis_pjcf(jcf, TP)
    P = pascal_scaling(2, lam)
    for B in sb.basis:
        H = B[:2, 2:] @ np.linalg.inv(P)
        # Upper-triangular Hankel: zero below the main anti-diagonal,
        # constant on anti-diagonals.
        assert abs(H[1, 1]) < 1e-12
        assert abs(H[0, 1] - H[1, 0]) < 1e-12


def test_pjcf_flags_forced_zero_singletons():
    jcf = PJCF("T", [2.0, 0.5, 1.0, -1.0], [[1], [1], [1], [1]], n_pairs=1)
    sb = s_basis_pjcf(jcf, TP)
    assert sorted(z.real for z in sb.zero_singletons) == [-1.0, 1.0]
    assert sb.dim == 2
    sb_ta = s_basis_pjcf(jcf, TA)
    assert sb_ta.zero_singletons == []
    assert sb_ta.dim == 6


def test_pjcf_validation():
    with pytest.raises(PairingNotClosed):
        PJCF("T", [2.0, 0.4], [[1], [1]], n_pairs=1)
    with pytest.raises(PairingNotClosed):
        PJCF("H", [0.3 + 0.1j], [[1]], n_pairs=0)
    with pytest.raises(ValueError):
        PJCF("T", [2.0, 0.5], [[1, 2], [1, 2]], n_pairs=1)


def test_sample_nonsingular_scalar_family():
    basis = SBasis(np.diag([1.0, -1.0]), TA,
                   [np.diag([1.0, -1.0]).astype(complex)])
    S = sample_nonsingular(basis, seed=0)
    assert np.linalg.cond(S) < 1e8


def test_sample_nonsingular_structural_failure():
    basis = SBasis(np.eye(2, dtype=complex), TA,
                   [np.diag([1.0, 0.0]).astype(complex)])
    with pytest.raises(NoNonsingularFound):
        sample_nonsingular(basis, seed=0)


def test_sample_nonsingular_deterministic():
    T = _pair_diag(HP, 0.3 + 0.4j, 1.2 - 0.1j)
    b = s_basis(T, HP)
    S1 = sample_nonsingular(b, seed=123)
    S2 = sample_nonsingular(b, seed=123)
    assert np.array_equal(S1, S2)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_solve_constrained_plant_and_recover(cls):
    rng = np.random.default_rng(8)
    T = _pair_diag(cls, 0.4 + 0.2j, 1.7 - 0.5j)
    b = s_basis(T, cls)
    X = random_complex(rng, 3, 4)
    S0 = b.combine(rng.standard_normal(b.dim))
    C = X @ S0 @ cls.star_of(X)
    S = solve_constrained_S(b, X, C, cls)
    assert fnorm(X @ S @ cls.star_of(X) - C) <= 1e-10 * max(fnorm(C), 1e-300)


def test_solve_constrained_homogeneous_and_inconsistent():
    rng = np.random.default_rng(9)
    T = _pair_diag(TA, 0.4 + 0.2j)
    b = s_basis(T, TA)
    X = random_complex(rng, 2, 2)
    S, hom = constrained_family(b, X, np.zeros((2, 2)), TA)
    assert fnorm(S) < 1e-10
    # Right-hand side violating the required antisymmetry type:
    bad = np.array([[1.0, 0.0], [0.0, 2.0]])  # symmetric, but C must be too
    C_bad = np.array([[0.0, 1.0], [-1.0, 0.0]])  # skew: wrong type for TA
    with pytest.raises(Inconsistent):
        solve_constrained_S(b, X, C_bad, TA)
    # Structurally unreachable symmetric right side:
    X1 = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(Inconsistent):
        solve_constrained_S(b, X1, bad, TA)


def test_solution_space_with_isotropy_constraint():
    # Scalar case: T = diag(1, -1), X = [1, 1] forces s2 = -s1.
    T = np.diag([1.0, -1.0])
    X = np.array([[1.0, 1.0]])
    basis = solution_space(T, TA, X)
    assert len(basis) == 2  # one complex parameter
    for B in basis:
        assert abs(B[0, 0] + B[1, 1]) < 1e-10


def test_jordan_block_layout():
    J = jordan_block(2.0 + 1.0j, 3)
    assert J[0, 1] == 1.0 and J[1, 2] == 1.0 and J[0, 2] == 0.0
    assert np.allclose(np.diag(J), 2.0 + 1.0j)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_pjcf_basis_geometric_multiplicity_two(cls):
    # Two Jordan blocks per eigenvalue: rectangular Hankel sub-blocks.
    lam = 0.45 + 0.2j
    jcf = PJCF(cls.star, [lam, 1 / cls.star_scalar(lam)], [[2, 1], [2, 1]],
               n_pairs=1)
    sb = s_basis_pjcf(jcf, cls)
    gb = s_basis(jcf.T_matrix(), cls)
    # min-size sums over the 2x2 sub-block grid: 2+1+1+1 parameters.
    assert sb.dim == gb.dim == 10
    assert _span_gap(sb.basis, gb.basis) <= 1e-8


def test_pjcf_basis_jordan_singles():
    jcf_h = PJCF("H", [np.exp(0.6j)], [[2]], n_pairs=0)
    for cls in (HP, TA):
        if cls.star == "H":
            sb = s_basis_pjcf(jcf_h, cls)
            gb = s_basis(jcf_h.T_matrix(), cls)
        else:
            jcf_t = PJCF("T", [1.0], [[2]], n_pairs=0)
            sb = s_basis_pjcf(jcf_t, cls)
            gb = s_basis(jcf_t.T_matrix(), cls)
        assert sb.dim == gb.dim == 2
        assert _span_gap(sb.basis, gb.basis) <= 1e-8
