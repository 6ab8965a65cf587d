"""Forward eigensolver for palindromic quadratics, with reciprocal pairing.

The quadratic is linearized into the companion pencil lambda M1 + M0 with
M1 = [[A1*, 0], [0, I]] and M0 = [[A0, eps A1], [-I, 0]].  This companion
form is deliberately unstructured; at desk scale its accuracy supports the
1e-6 pairing tolerance used throughout, and structure-preserving solvers
are out of scope.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (PairingFailure, PairingNotClosed, SpectraOverlap,
                     TargetNotFound)
from .numerics import dense_eig, fnorm, linear_solve
from .system import SymmetryClass, eval_Q

PAIRING_TOL = 1e-6


def linearize(sys):
    """Companion pencil (M0, M1) of Q; lambda M1 + M0 is singular exactly
    at the eigenvalues of Q, and the top n-block of a pencil eigenvector is
    an eigenvector of Q."""
    n = sys.n
    eye = np.eye(n, dtype=np.complex128)
    zero = np.zeros((n, n), dtype=np.complex128)
    M1 = np.block([[sys.cls.star_of(sys.A1), zero], [zero, eye]])
    M0 = np.block([[sys.A0, sys.cls.epsilon * sys.A1], [-eye, zero]])
    return M0, M1


@dataclass
class EigenPairSet:
    """All 2n eigenpairs of a system plus reciprocal pairing bookkeeping.

    pairing holds index tuples (i, j) with lam_j ~= 1 / lam_i*; self-paired
    unimodular eigenvalues appear as (i, i).  residuals[i] is the 2-norm of
    Q(lam_i) v_i.  pairing_complete is False when some eigenvalue found no
    partner within pairing_tol; those indices are listed in unmatched.
    """

    cls: SymmetryClass
    values: np.ndarray
    vectors: np.ndarray
    pairing: list
    residuals: np.ndarray
    pairing_tol: float
    unmatched: list = field(default_factory=list)

    @property
    def pairing_complete(self):
        return not self.unmatched

    @property
    def n(self):
        return self.vectors.shape[0]

    def partner_index(self, i):
        for a, b in self.pairing:
            if a == i:
                return b
            if b == i:
                return a
        return None


def _greedy_pairing(values, cls, tol):
    """Match eigenvalues into (lam, 1/lam*) pairs.

    Smallest modulus first; each unmatched value takes the unmatched
    candidate minimizing |lam lam'* - 1| (itself included, which accepts
    unimodular self-pairs).  Ties break by index order.
    """
    m = len(values)
    order = sorted(range(m), key=lambda i: (abs(values[i]), i))
    matched = [False] * m
    pairs = []
    unmatched = []
    for i in order:
        if matched[i]:
            continue
        best_j, best_d = None, np.inf
        for j in range(m):
            if matched[j] and j != i:
                continue
            d = cls.pair_defect(values[i], values[j])
            if best_j is None or d < best_d:
                best_j, best_d = j, d
        if best_d <= tol:
            matched[i] = True
            matched[best_j] = True
            pairs.append((min(i, best_j), max(i, best_j)))
        else:
            matched[i] = True
            unmatched.append(i)
    return pairs, unmatched


def eig_full(sys, pairing_tol=PAIRING_TOL, strict=False):
    """All 2n finite eigenpairs of Q with reciprocal pairing.

    Solves the standard eigenproblem of -M1^{-1} M0 (A1 nonsingular rules
    out infinite eigenvalues), normalizes eigenvectors from the better
    scaled companion block, and pairs the spectrum greedily.  With
    strict=True an incomplete pairing raises PairingFailure; otherwise the
    result is returned with the failures recorded.
    """
    n = sys.n
    M0, M1 = linearize(sys)
    values, Z = dense_eig(-linear_solve(M1, M0))
    vectors = np.zeros((n, 2 * n), dtype=np.complex128)
    residuals = np.zeros(2 * n)
    for i, lam in enumerate(values):
        top, bottom = Z[:n, i], Z[n:, i]
        x = top if abs(lam) >= 1.0 else bottom
        nx = np.linalg.norm(x)
        if nx == 0.0:
            x = top if np.linalg.norm(top) > 0 else bottom
            nx = np.linalg.norm(x)
        x = x / nx
        vectors[:, i] = x
        residuals[i] = float(np.linalg.norm(eval_Q(sys, lam) @ x))
    pairs, unmatched = _greedy_pairing(values, sys.cls, pairing_tol)
    if unmatched and strict:
        bad = ", ".join(f"{values[i]:.6g}" for i in unmatched)
        raise PairingFailure(f"no reciprocal partner within {pairing_tol:g} for: {bad}")
    return EigenPairSet(sys.cls, values, vectors, pairs, residuals,
                        pairing_tol, unmatched)


def residual_scale(sys, lam):
    """Natural residual scale ||A1||(1 + |lam|^2) + ||A0|| |lam|."""
    a = abs(lam)
    return fnorm(sys.A1) * (1.0 + a * a) + fnorm(sys.A0) * a


def select_pairs(eigs, targets, tol=1e-3, overlap_tol=1e-8):
    """Split an EigenPairSet into selected and remaining invariant pairs.

    Each target must match exactly one computed eigenvalue within tol
    (absolute, relative to max(1, |target|)), the selection must be closed
    under reciprocal pairing, and selected and remaining eigenvalues must
    not overlap.  Returns (X1, T1, X2, T2) with diagonal T factors.
    """
    values = eigs.values
    m = len(values)
    selected = []
    for t in targets:
        t = complex(t)
        dists = np.abs(values - t)
        j = int(np.argmin(dists))
        if dists[j] > tol * max(1.0, abs(t)):
            raise TargetNotFound(
                f"target not found: {t:.6g} (closest eigenvalue {values[j]:.6g})")
        if j in selected:
            raise TargetNotFound(
                f"targets are ambiguous: eigenvalue {values[j]:.6g} matched twice")
        selected.append(j)
    sel = set(selected)
    for i in selected:
        j = eigs.partner_index(i)
        if j is None:
            raise PairingNotClosed(
                f"pairing not closed: eigenvalue {values[i]:.6g} has no partner")
        if j not in sel:
            raise PairingNotClosed(
                f"pairing not closed: eigenvalue {values[i]:.6g} selected "
                f"without its partner {values[j]:.6g}")
    rest = [i for i in range(m) if i not in sel]
    for i in selected:
        for j in rest:
            if abs(values[i] - values[j]) <= overlap_tol * max(1.0, abs(values[i])):
                raise SpectraOverlap(
                    f"selected eigenvalue {values[i]:.6g} reappears in the "
                    "remaining spectrum")
    X1 = eigs.vectors[:, selected]
    T1 = np.diag(values[selected])
    X2 = eigs.vectors[:, rest]
    T2 = np.diag(values[rest])
    return X1, T1, X2, T2
