import numpy as np
import pytest

from helpers import max_eig_condition, random_system
from palinverse.errors import (PairingFailure, PairingNotClosed,
                               SpectraOverlap, TargetNotFound)
from palinverse.forward import eig_full, linearize, residual_scale, select_pairs
from palinverse.numerics import dense_eig, linear_solve
from palinverse.system import ALL_CLASSES, TA, TP, PalindromicSystem
from reference_problems import update_fixture


def test_linearize_scalar():
    sys = PalindromicSystem(TA, [[1.0]], [[0.0]])
    M0, M1 = linearize(sys)
    w, _ = dense_eig(-linear_solve(M1, M0))
    assert sorted(np.round(w.real, 10)) == [-1.0, 1.0]


def test_linearize_fixture_eigenvalue():
    sys, replace, _ = update_fixture("tp")
    M0, M1 = linearize(sys)
    w, _ = dense_eig(-linear_solve(M1, M0))
    assert len(w) == 6
    assert min(abs(w - replace[0])) < 2e-3 * abs(replace[0])
    assert min(abs(w - replace[1])) < 2e-3


def test_pencil_spectrum_matches_quartic_roots():
    # Independent oracle at n = 2: expand det Q into a quartic by
    # polynomial arithmetic on the entries, then take its roots.
    sys = random_system(TP, 2, seed=21)
    q = [None] * 2
    polys = {}
    for i in range(2):
        for j in range(2):
            polys[(i, j)] = np.array([
                sys.cls.star_of(sys.A1)[i, j],
                sys.A0[i, j],
                sys.cls.epsilon * sys.A1[i, j],
            ])
    det = np.polysub(np.polymul(polys[(0, 0)], polys[(1, 1)]),
                     np.polymul(polys[(0, 1)], polys[(1, 0)]))
    roots = np.roots(det)
    e = eig_full(sys)
    for r in roots:
        assert min(abs(e.values - r)) < 1e-6 * max(1.0, abs(r))


def test_eig_full_scalar_pairing():
    sys = PalindromicSystem(TA, [[1.0]], [[0.0]])
    e = eig_full(sys)
    assert sorted(np.round(e.values.real, 10)) == [-1.0, 1.0]
    assert e.pairing_complete
    assert all(a == b for a, b in e.pairing)  # both are +-1 self-pairs


def test_eig_full_fixture_pairs():
    sys, replace, _ = update_fixture("tp")
    e = eig_full(sys)
    i = int(np.argmin(abs(e.values - replace[0])))
    j = e.partner_index(i)
    assert abs(e.values[j] - replace[1]) < 2e-3


def test_eig_full_conjugate_pair_fixture():
    sys, replace, _ = update_fixture("hp")
    e = eig_full(sys)
    i = int(np.argmin(abs(e.values - replace[0])))
    j = e.partner_index(i)
    assert abs(e.values[j] - replace[1]) < 2e-3
    assert abs(e.values[i] * np.conj(e.values[j]) - 1.0) < 1e-10


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_eig_full_residual_bound(cls):
    sys = random_system(cls, 5, seed=33)
    e = eig_full(sys)
    from palinverse.system import eval_Q

    for i, lam in enumerate(e.values):
        res = np.linalg.norm(eval_Q(sys, lam) @ e.vectors[:, i])
        assert res <= 1e-8 * residual_scale(sys, lam)
        assert res == pytest.approx(e.residuals[i], abs=1e-12)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.code)
def test_spectral_symmetry_random(cls):
    count = 0
    seed = 0
    while count < 20:
        seed += 1
        sys = random_system(cls, int(np.random.default_rng(seed).integers(1, 6)),
                            seed=seed)
        if max_eig_condition(sys) >= 1e6:
            continue
        e = eig_full(sys)
        assert e.pairing_complete
        for a, b in e.pairing:
            assert cls.pair_defect(e.values[a], e.values[b]) <= 1e-6
        count += 1


def test_real_transpose_conjugate_closure():
    for cls in (TP, TA):
        for seed in range(5):
            sys = random_system(cls, 4, seed=77 + seed, real=True)
            e = eig_full(sys)
            for v in e.values:
                assert min(abs(e.values - np.conj(v))) < 1e-8 * max(1.0, abs(v))


def test_select_pairs_fixture():
    sys, replace, _ = update_fixture("ta")
    e = eig_full(sys)
    X1, T1, X2, T2 = select_pairs(e, replace)
    assert T1.shape == (2, 2) and T2.shape == (4, 4)
    assert abs(np.diag(T1)[0] - 4.23606797749979) < 1e-4


def test_select_pairs_all():
    sys, _, _ = update_fixture("ta")
    e = eig_full(sys)
    X1, T1, X2, T2 = select_pairs(e, list(e.values))
    assert T2.shape == (0, 0) and X2.shape == (3, 0)


def test_select_pairs_errors():
    sys, replace, _ = update_fixture("ta")
    e = eig_full(sys)
    with pytest.raises(TargetNotFound):
        select_pairs(e, [123.0])
    with pytest.raises(PairingNotClosed):
        select_pairs(e, [replace[0]])


def test_select_pairs_overlap_guard():
    sys, replace, _ = update_fixture("ta")
    e = eig_full(sys)
    e.values[2] = e.values[0] * (1 + 1e-10)  # inject a near-duplicate
    with pytest.raises((SpectraOverlap, PairingNotClosed)):
        select_pairs(e, [e.values[0], 1 / e.values[0]])


def test_eig_full_strict_pairing_failure():
    sys, _, _ = update_fixture("tp")
    # An absurdly tight tolerance forces unmatched eigenvalues.
    e = eig_full(sys, pairing_tol=1e-18)
    assert not e.pairing_complete
    assert e.unmatched
    with pytest.raises(PairingFailure):
        eig_full(sys, pairing_tol=1e-18, strict=True)
