"""Canonical congruence factorizations B = Y Delta Y* for the four classes.

A parameter-type matrix satisfies star(B) = -eps B.  Depending on the class
that makes B skew-Hermitian, Hermitian, complex skew-symmetric or complex
symmetric, and the canonical middle factor Delta is respectively a
(+i/-i) inertia pattern, a (+1/-1) inertia pattern, an aggregated
[[0, I], [-I, 0]] block, or an identity block, each padded with a trailing
zero block when B is rank deficient.

The Hermitian cases reduce to a unitary eigendecomposition.  The complex
symmetric case is an SVD-based Takagi factorization with degenerate
singular-value clusters re-symmetrized blockwise.  The complex
skew-symmetric case is a Youla reduction driven by the unitary
eigendecomposition of B B^H.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (BadIndices, FactorizationFailure, NotHermitian,
                     SymmetryViolation)
from .numerics import RANK_RTOL, as_matrix, fnorm, two_norm
from .system import SymmetryClass

SYMMETRY_RTOL = 1e-10
RECONSTRUCT_RTOL = 1e-10
# Relative gap under which singular values are treated as one cluster.
CLUSTER_RTOL = 1e-8


def inertia(H, tol=None):
    """Counts (p, q, z) of eigenvalues of Hermitian H above/below/near zero.

    The zero band is |eig| <= tol, default 1e-10 * ||H||_2.
    """
    H = as_matrix(H, "H")
    nrm = fnorm(H)
    if fnorm(H - H.conj().T) > SYMMETRY_RTOL * max(nrm, 1e-300):
        raise NotHermitian("input is not Hermitian within tolerance")
    if H.shape[0] == 0:
        return 0, 0, 0
    w = np.linalg.eigvalsh((H + H.conj().T) / 2.0)
    if tol is None:
        tol = 1e-10 * (np.max(np.abs(w)) if w.size else 0.0)
    p = int(np.count_nonzero(w > tol))
    q = int(np.count_nonzero(w < -tol))
    return p, q, H.shape[0] - p - q


def build_delta(cls, p, q, t, size):
    """The canonical Delta matrix of a class.

    Star = H: diag(i I_q, -i I_p, 0) for eps = +1, diag(I_p, -I_q, 0)
    for eps = -1 (p + q <= size).  Star = T: the aggregated skew block
    diag([[0, I_{t/2}], [-I_{t/2}, 0]], 0) for eps = +1 (t even) and
    diag(I_t, 0) for eps = -1 (t <= size).
    """
    if size < 0:
        raise BadIndices("size must be nonnegative")
    D = np.zeros((size, size), dtype=np.complex128)
    if cls.star == "H":
        if p < 0 or q < 0 or p + q > size:
            raise BadIndices(f"need p, q >= 0 and p + q <= size, got p={p}, q={q}, size={size}")
        if cls.epsilon == 1:
            D[:q, :q] = 1j * np.eye(q)
            D[q:q + p, q:q + p] = -1j * np.eye(p)
        else:
            D[:p, :p] = np.eye(p)
            D[p:p + q, p:p + q] = -np.eye(q)
    else:
        if t < 0 or t > size:
            raise BadIndices(f"need 0 <= t <= size, got t={t}, size={size}")
        if cls.epsilon == 1:
            if t % 2 != 0:
                raise BadIndices("skew-symmetric Delta needs even t")
            h = t // 2
            D[:h, h:t] = np.eye(h)
            D[h:t, :h] = -np.eye(h)
        else:
            D[:t, :t] = np.eye(t)
    return D


@dataclass(frozen=True)
class DeltaPattern:
    """Structural description of a canonical Delta factor."""

    cls: SymmetryClass
    size: int
    p: int = 0
    q: int = 0
    t: int = 0

    @property
    def rank(self):
        return self.p + self.q if self.cls.star == "H" else self.t

    def matrix(self):
        return build_delta(self.cls, self.p, self.q, self.t, self.size)

    def diag_values(self):
        """Exact diagonal entries (star = H patterns only)."""
        if self.cls.star != "H":
            raise ValueError("diag_values only applies to star = H patterns")
        return np.diag(self.matrix()).copy()


@dataclass
class StarFactorization:
    """B = Y Delta Y* with Y square nonsingular (or thin n-by-rank)."""

    Y: np.ndarray
    pattern: DeltaPattern
    cls: SymmetryClass

    @property
    def delta(self):
        if self.Y.shape[1] == self.pattern.size:
            return self.pattern.matrix()
        r = self.pattern.rank
        full = self.pattern.matrix()
        return full[:r, :r]

    @property
    def rank(self):
        return self.pattern.rank

    @property
    def condition(self):
        """Condition number of Y; the scaling absorbed into Y can inflate
        this badly for ill-conditioned inputs, so it is worth reporting."""
        s = np.linalg.svd(self.Y, compute_uv=False)
        return float(s[0] / s[-1]) if s.size and s[-1] > 0 else np.inf

    def reconstruct(self):
        return self.Y @ self.delta @ self.cls.star_of(self.Y)


def _cluster_descending(values, tol):
    """Group indices of a descending nonnegative sequence by closeness."""
    groups = []
    for i, v in enumerate(values):
        if groups and (values[groups[-1][0]] - v) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _takagi(B, rank_tol):
    """Takagi factorization B = Z diag(s) Z^T of complex symmetric B.

    Returns (s, Z, t) with s descending, Z unitary, t the numerical rank.
    Degenerate singular-value clusters are handled by a blockwise matrix
    square root, re-symmetrized within each cluster.
    """
    n = B.shape[0]
    u, s, vh = np.linalg.svd(B)
    smax = s[0] if s.size else 0.0
    t = int(np.count_nonzero(s > rank_tol))
    w = vh.conj().T
    blocks = []
    for group in _cluster_descending(s[:t], CLUSTER_RTOL * max(smax, 1e-300)):
        idx = np.asarray(group)
        M = u[:, idx].T @ w[:, idx]
        M = (M + M.T) / 2.0
        blocks.append(scipy.linalg.sqrtm(M))
    if t < n:
        blocks.append(np.eye(n - t))
    Q = scipy.linalg.block_diag(*blocks) if blocks else np.zeros((0, 0))
    Z = u @ np.conj(Q)
    return s, Z, t


def _youla_pairs(B, rank_tol):
    """Youla reduction of complex skew-symmetric B.

    Returns (gammas, U, V, kernel) with B = sum_i gamma_i (u_i v_i^T -
    v_i u_i^T), gammas descending positive, and [U V kernel] unitary.
    The left singular vectors of B (eigenvectors of B B^H) span the
    active subspace; the antilinear map x -> B conj(x) pairs each basis
    vector with an orthogonal partner carrying the same singular value.
    """
    n = B.shape[0]
    zleft, s, _ = np.linalg.svd(B)
    smax = s[0] if s.size else 0.0
    t = int(np.count_nonzero(s > rank_tol))
    if t % 2 != 0:
        raise FactorizationFailure(
            f"skew-symmetric input has odd numerical rank {t}; "
            "rank must be even")
    kernel = zleft[:, t:]

    # Nonzero singular values of a skew-symmetric matrix come in equal
    # pairs; the pairing map stays inside each equal-sigma cluster, so the
    # deflation must as well.  Merge clusters forward until all are even.
    clusters = _cluster_descending(s[:t], CLUSTER_RTOL * max(smax, 1e-300))
    merged = []
    carry = []
    for group in clusters:
        carry += group
        if len(carry) % 2 == 0:
            merged.append(carry)
            carry = []
    if carry:
        raise FactorizationFailure("could not pair singular-value clusters")

    gammas, us, vs = [], [], []
    for group in merged:
        active = zleft[:, group]
        while active.shape[1] > 0:
            v = active[:, 0]
            u = B @ np.conj(v)
            gamma = float(np.linalg.norm(u))
            if gamma <= rank_tol:
                raise FactorizationFailure(
                    "pairing collapsed inside the numerically nonzero subspace")
            u = u / gamma
            u = u - v * np.vdot(v, u)
            nu = np.linalg.norm(u)
            if nu < 0.5:
                raise FactorizationFailure("lost orthogonality in Youla pairing")
            u = u / nu
            gammas.append(gamma)
            vs.append(v)
            us.append(u)
            keep = active.shape[1] - 2
            if keep == 0:
                break
            proj = active - np.outer(v, np.conj(v) @ active) \
                - np.outer(u, np.conj(u) @ active)
            q, sp, _ = np.linalg.svd(proj, full_matrices=False)
            if sp[keep - 1] < 0.5:
                raise FactorizationFailure("deflation lost rank in Youla pairing")
            active = q[:, :keep]
    U = np.column_stack(us) if us else np.zeros((n, 0), dtype=np.complex128)
    V = np.column_stack(vs) if vs else np.zeros((n, 0), dtype=np.complex128)
    return np.asarray(gammas), U, V, kernel


def star_factorize(B, cls, rank_tol=None, thin=False):
    """Canonical congruence factorization B = Y Delta Y*.

    Requires star(B) = -eps B within 1e-10 relative; the input is projected
    onto that structure before factorizing.  Y is square nonsingular with
    the zero block of Delta trailing; pass thin=True to keep only the
    leading rank columns.
    """
    B = as_matrix(B, "B")
    n = B.shape[0]
    if B.shape != (n, n):
        raise SymmetryViolation("B must be square")
    nrm = fnorm(B)
    defect = fnorm(cls.star_of(B) + cls.epsilon * B)
    if defect > SYMMETRY_RTOL * max(nrm, 1e-300):
        raise SymmetryViolation(
            f"star(B) != -eps B: defect {defect:.3e} vs ||B|| {nrm:.3e}")
    Bp = (B - cls.epsilon * cls.star_of(B)) / 2.0
    if rank_tol is None:
        rank_tol = RANK_RTOL * two_norm(Bp)

    if cls.star == "H":
        H = 1j * Bp if cls.epsilon == 1 else Bp
        H = (H + H.conj().T) / 2.0
        w, Z = np.linalg.eigh(H)
        pos = [i for i in range(n) if w[i] > rank_tol]
        neg = [i for i in range(n) if w[i] < -rank_tol]
        zer = [i for i in range(n) if i not in pos and i not in neg]
        pos.sort(key=lambda i: -w[i])
        neg.sort(key=lambda i: w[i])
        p, q = len(pos), len(neg)
        # eps=+1: Delta = diag(i I_q, -i I_p, 0) -> negative eigenvalues lead.
        order = (neg + pos + zer) if cls.epsilon == 1 else (pos + neg + zer)
        scale = np.ones(n)
        scale[:p + q] = np.sqrt(np.abs(w[order][:p + q]))
        Y = Z[:, order] * scale
        pattern = DeltaPattern(cls, n, p=p, q=q)
    elif cls.epsilon == -1:
        s, Z, t = _takagi(Bp, rank_tol)
        scale = np.ones(n)
        scale[:t] = np.sqrt(s[:t])
        Y = Z * scale
        pattern = DeltaPattern(cls, n, t=t)
    else:
        # Guard on the raw input: a genuinely skew-symmetric matrix has even
        # rank, so an odd numerical rank flags an inconsistent rank decision.
        s_raw = np.linalg.svd(B, compute_uv=False) if B.size else np.zeros(0)
        if int(np.count_nonzero(s_raw > rank_tol)) % 2 != 0:
            raise FactorizationFailure(
                "input has odd numerical rank; skew-symmetric matrices have "
                "even rank")
        gammas, U, V, kernel = _youla_pairs(Bp, rank_tol)
        sq = np.sqrt(gammas)
        Y = np.hstack([U * sq, V * sq, kernel])
        pattern = DeltaPattern(cls, n, t=2 * len(gammas))

    fact = StarFactorization(Y, pattern, cls)
    err = fnorm(fact.reconstruct() - Bp)
    if err > RECONSTRUCT_RTOL * max(nrm, 1e-300) and err > 1e-13:
        raise FactorizationFailure(
            f"reconstruction residual {err:.3e} exceeds tolerance for ||B|| = {nrm:.3e}")
    if thin:
        fact = StarFactorization(Y[:, :pattern.rank], pattern, cls)
    return fact
