"""Inverse eigenvalue problems with prescribed eigenpairs.

solve_iep_full covers the complete-eigendata case: a regular solution
exists exactly when the parameter space of (X, T) contains a nonsingular
element, which is searched by seeded sampling.  solve_iep_partial covers
1 <= k < 2n prescribed pairs under the standing assumptions that the
prescribed T1 is similar to T1^{-*} and the remaining spectrum stays
disjoint: a parameter block S1 for the prescribed part is sampled, the
deficit X1 S1 X1* = Y Delta Y* is cancelled by extra eigenvector columns
Y Psi with Psi Omega Psi* = -Delta, and the remaining eigenvalues enter
through any T2hat preserving the canonical form Omega.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (Infeasible, NoNonsingularFound, NoSolution,
                     NonsingularityRetryExhausted, PairingNotClosed,
                     RemainingEigenvalueConflict, ResidualTooLarge,
                     RetryExhausted, SingularW)
from .numerics import as_matrix, fnorm, linear_solve, sv_ratio
from .paramspace import (SBasis, s_basis, sample_nonsingular, solution_space)
from .spectral import coefficients_from_pair
from .structfact import build_delta, inertia, star_factorize
from .system import pair_residual

OUTPUT_RESIDUAL_TOL = 1e-9
DISJOINT_RTOL = 1e-8
NONSINGULAR_RTOL = 1e-12


def solve_iep_full(X, T, cls, seed=0, attempts=50):
    """Construct a regular system with the full prescribed pair (X, T).

    Samples a nonsingular S subject to star(S) = -eps S, S = T S T* and
    X S X* = 0; raises NoSolution when the constrained space contains no
    nonsingular element (for instance when a transpose-palindromic target
    carries a simple eigenvalue at +1 or -1).
    """
    X = as_matrix(X, "X")
    T = as_matrix(T, "T")
    if X.shape[1] != T.shape[0] or 2 * X.shape[0] != T.shape[0]:
        raise SingularW("solve_iep_full needs X n-by-2n and T 2n-by-2n")
    basis = SBasis(T, cls, solution_space(T, cls, X))
    try:
        S = sample_nonsingular(basis, seed, attempts)
    except NoNonsingularFound as exc:
        raise NoSolution(f"no nonsingular parameter matrix exists: {exc}") from exc
    sys = coefficients_from_pair(X, T, S, cls)
    resid = pair_residual(sys, (X, T))
    if resid > OUTPUT_RESIDUAL_TOL:
        raise ResidualTooLarge(
            f"constructed system has pair residual {resid:.3e}")
    return sys


# ---------------------------------------------------------------------------
# Psi construction: solve Psi Omega Psi* = target for canonical patterns
# ---------------------------------------------------------------------------

def _random_complex(rng, rows, cols):
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def _square_frame(rng, size, star, theta_mode):
    """Full unitary (star = H) or real orthogonal (star = T) square frame.

    The leading columns act as the theta isometry of the construction and
    the trailing columns as its orthogonal completion, used to park the
    form-isotropic rows that keep the assembled eigenvector matrix full
    rank.  Identity by default; a random frame on genericity retries.
    """
    if size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if theta_mode == "identity":
        return np.eye(size, dtype=np.complex128)
    if star == "H":
        q, _ = np.linalg.qr(_random_complex(rng, size, size))
    else:
        q, _ = np.linalg.qr(rng.standard_normal((size, size)))
    return q.astype(np.complex128)


def _hermitian_pattern_values(M):
    """Diagonal of a star = H canonical (+-i / +-1 / 0) pattern, snapped."""
    d = np.diag(M)
    out = []
    for z in d:
        cands = [0.0, 1.0, -1.0, 1.0j, -1.0j]
        out.append(min(cands, key=lambda c: abs(z - c)))
    return np.array(out, dtype=np.complex128)


def _skew_pattern(M, tol=1e-8):
    """(t, sigma) of an aggregated block sigma * [[0, I], [-I, 0]] + 0."""
    n = M.shape[0]
    t = int(np.count_nonzero(np.abs(M).sum(axis=1) > tol))
    if t == 0:
        return 0, 1.0
    if t % 2 != 0:
        raise Infeasible("skew pattern has odd rank")
    sigma = 1.0 if M[0, t // 2].real > 0 else -1.0
    return t, sigma


def _congruence_onto(target, form, cls, rng, theta_mode):
    """Psi with Psi form Psi* = target, both canonical-type patterns.

    form must be nonsingular canonical; target may be rank deficient with
    trailing zeros.  Mirrors the constructive recipe: draw a random B,
    normalize it so B form B* is canonical, and pick rows of that canonical
    source through theta blocks.  Rows of Psi facing the zero block of the
    target are filled with form-isotropic combinations of the leftover
    source directions (instead of zeros) so the assembled eigenvector
    matrix can reach full row rank; the leftover budget covers all zero
    rows exactly when the target rank equals its maximum.
    """
    n = target.shape[0]
    r = form.shape[0]
    if r == 0:
        if fnorm(target) > 1e-12:
            raise Infeasible("empty form cannot produce a nonzero target")
        return np.zeros((n, 0), dtype=np.complex128)
    rows_b = max(n, r)
    for _ in range(10):
        B = _random_complex(rng, rows_b, r)
        G = B @ form @ cls.star_of(B)
        try:
            fact = star_factorize(G, cls)
        except Exception:
            continue
        if fact.rank == r:
            break
    else:
        raise RetryExhausted("random normalizer kept losing rank")
    B = linear_solve(fact.Y, B)
    source = fact.pattern.matrix()

    C = np.zeros((n, rows_b), dtype=np.complex128)
    if cls.star == "H":
        svals = _hermitian_pattern_values(source)
        tvals = _hermitian_pattern_values(target)
        plus, minus = (1.0j, -1.0j) if cls.epsilon == 1 else (1.0, -1.0)
        spare = {}
        t_t = 0
        for value in (plus, minus):
            tgt_idx = np.flatnonzero(tvals == value)
            src_idx = np.flatnonzero(svals == value)
            t_t += len(tgt_idx)
            if len(src_idx) < len(tgt_idx):
                raise Infeasible(
                    f"inertia shortfall: target needs {len(tgt_idx)} entries of "
                    f"{value}, source offers {len(src_idx)}")
            frame = _square_frame(rng, len(src_idx), cls.star, theta_mode)
            theta = frame[:, :len(tgt_idx)]
            if len(tgt_idx):
                C[np.ix_(tgt_idx, src_idx)] = cls.star_of(theta)
            spare[value] = (src_idx, frame[:, len(tgt_idx):])
        extras = min(spare[plus][1].shape[1], spare[minus][1].shape[1], n - t_t)
        for z in range(extras):
            # One +, one - leftover direction: the form values cancel.
            C[t_t + z, spare[plus][0]] = cls.star_of(spare[plus][1][:, z])
            C[t_t + z, spare[minus][0]] = cls.star_of(spare[minus][1][:, z])
    elif cls.epsilon == 1:
        t_t, sig_t = _skew_pattern(target)
        t_s, sig_s = _skew_pattern(source)
        if t_t > t_s:
            raise Infeasible(f"target rank {t_t} exceeds source rank {t_s}")
        ht, hs = t_t // 2, t_s // 2
        frame = _square_frame(rng, hs, cls.star, theta_mode)
        th = frame[:, :ht].T
        if sig_t == sig_s:
            C[:ht, :hs] = th
            C[ht:t_t, hs:2 * hs] = th
        else:
            C[:ht, hs:2 * hs] = th
            C[ht:t_t, :hs] = th
        # A single slot of a fresh symplectic pair is isotropic.
        extras = min(hs - ht, n - t_t)
        for z in range(extras):
            C[t_t + z, :hs] = frame[:, ht + z].T
    else:
        diag_t = np.real(np.diag(target))
        diag_s = np.real(np.diag(source))
        t_t = int(np.count_nonzero(np.abs(diag_t) > 1e-8))
        t_s = int(np.count_nonzero(np.abs(diag_s) > 1e-8))
        if t_t > t_s:
            raise Infeasible(f"target rank {t_t} exceeds source rank {t_s}")
        sig_t = 1.0 if t_t == 0 or diag_t[0] > 0 else -1.0
        frame = _square_frame(rng, t_s, cls.star, theta_mode)
        theta = frame[:, :t_t]
        C[:t_t, :t_s] = theta.T if sig_t > 0 else 1j * theta.T
        # Pairs of leftover directions combine into isotropic rows: 1^2 + i^2 = 0.
        extras = min((t_s - t_t) // 2, n - t_t)
        for z in range(extras):
            C[t_t + z, :t_s] = frame[:, t_t + 2 * z].T + 1j * frame[:, t_t + 2 * z + 1].T
    psi = C @ B
    err = fnorm(psi @ form @ cls.star_of(psi) - target)
    floor = 1e-12 * max(1.0, fnorm(psi) ** 2 * fnorm(form))
    if err > 1e-10 * fnorm(target) + floor:
        raise RetryExhausted(f"congruence construction residual {err:.3e}")
    return psi


def solve_psi(delta, omega, cls, seed=0, theta_mode="identity"):
    """A matrix Psi with Psi Omega Psi* = -Delta.

    Delta is an n-by-n canonical factor (possibly rank deficient, zeros
    trailing); Omega is a nonsingular canonical factor of the complementary
    size.  For star = H the inertias must satisfy the usual feasibility
    inequalities, otherwise Infeasible is raised.
    """
    delta = as_matrix(delta, "Delta")
    omega = as_matrix(omega, "Omega")
    rng = np.random.default_rng(seed)
    return _congruence_onto(-delta, omega, cls, rng, theta_mode)


# ---------------------------------------------------------------------------
# remaining-spectrum machinery
# ---------------------------------------------------------------------------

def _group_values(values, cls, tol=DISJOINT_RTOL):
    """Split a pairing-closed value list into reciprocal pairs and
    unimodular singletons; raise when some value has no partner."""
    values = [complex(v) for v in values]
    used = [False] * len(values)
    pairs, singles = [], []
    for i, v in enumerate(values):
        if used[i]:
            continue
        used[i] = True
        if cls.pair_defect(v, v) <= tol:
            singles.append(v)
            continue
        partner = None
        for j in range(i + 1, len(values)):
            if not used[j] and cls.pair_defect(v, values[j]) <= tol:
                partner = j
                break
        if partner is None:
            raise PairingNotClosed(
                f"value {v:.6g} has no reciprocal partner in the list")
        used[partner] = True
        pairs.append((v, values[partner]))
    return pairs, singles


def _unit_multiplicity(values, point, tol=DISJOINT_RTOL):
    return int(sum(1 for v in values if abs(complex(v) - point) <= tol))


def _ta_singleton_parity(order, t1_values):
    """Forced +-1 singleton counts for a transpose-anti-palindromic system.

    Q(1) and Q(-1) are skew-symmetric, so both +1 and -1 must appear with
    multiplicity congruent to the order n mod 2 (odd order forces both).
    Returns (need_plus, need_minus) in {0, 1} for the remaining spectrum,
    raising when the prescribed part already owns the point with the wrong
    parity (the remaining spectrum must stay disjoint from T1).
    """
    need = []
    for point in (1.0, -1.0):
        m = _unit_multiplicity(t1_values, point)
        deficit = (order - m) % 2
        if deficit and m > 0:
            raise Infeasible(
                f"parity: eigenvalue {point:+.0f} must occur with multiplicity "
                f"congruent to n mod 2, but it is prescribed {m} times and the "
                "remaining spectrum cannot repeat it")
        need.append(deficit)
    return need[0], need[1]


def _default_remaining(cls, count, n_pos, n_neg, order, t1_values, rng,
                       tol=DISJOINT_RTOL):
    """Seeded default for the unprescribed eigenvalues.

    Off-circle reciprocal pairs with modulus in [0.3, 0.7] wherever the
    class structure allows them; star = H classes fill the remaining
    inertia with unimodular singletons, transpose-anti adds the +-1
    singletons its determinant parity forces.
    """
    avoid = [complex(a) for a in t1_values]

    def clear(z):
        return all(abs(z - a) > 10 * tol * max(1.0, abs(a)) for a in avoid)

    def draw_pair():
        for _ in range(100):
            radius = rng.uniform(0.3, 0.7)
            mu = radius * np.exp(2j * np.pi * rng.uniform())
            nu = 1.0 / cls.star_scalar(mu)
            if clear(mu) and clear(nu):
                avoid.extend([mu, nu])
                return mu, nu
        raise RetryExhausted("could not draw a clear reciprocal pair")

    def draw_unimodular():
        for _ in range(100):
            mu = np.exp(2j * np.pi * rng.uniform())
            if clear(mu):
                avoid.append(mu)
                return mu
        raise RetryExhausted("could not draw a clear unimodular value")

    pairs, singles, signs = [], [], []
    if cls.star == "H":
        n_pair = min(n_pos, n_neg)
        if 2 * n_pair + abs(n_pos - n_neg) != count:
            raise Infeasible(
                f"inertia targets ({n_pos}, {n_neg}) inconsistent with count {count}")
        for _ in range(n_pair):
            pairs.append(draw_pair())
        extra_sign = 1 if n_pos > n_neg else -1
        for _ in range(abs(n_pos - n_neg)):
            singles.append(draw_unimodular())
            signs.append(extra_sign)
    elif cls.epsilon == 1:
        if count % 2 != 0:
            raise Infeasible("parity: transpose-palindromic remainder must be even")
        for _ in range(count // 2):
            pairs.append(draw_pair())
    else:
        need_plus, need_minus = _ta_singleton_parity(order, t1_values)
        for point, needed in ((1.0, need_plus), (-1.0, need_minus)):
            if needed:
                singles.append(complex(point))
                signs.append(1)
        n_pair, rem = divmod(count - len(singles), 2)
        if n_pair < 0 or rem != 0:
            raise Infeasible(
                f"parity: remaining count {count} cannot host the forced "
                f"+-1 singletons")
        for _ in range(n_pair):
            pairs.append(draw_pair())
    return pairs, singles, signs


def _assign_hermitian_signs(cls, n_singles, n_pairs, n_pos, n_neg):
    """Distribute singleton inertia signs to hit the (n_pos, n_neg) target."""
    a = n_pos - n_pairs
    b = n_neg - n_pairs
    if a < 0 or b < 0 or a + b != n_singles:
        raise Infeasible(
            f"remaining eigenvalues carry {n_pairs} pairs and {n_singles} "
            f"singletons, incompatible with inertia targets ({n_pos}, {n_neg})")
    return [1] * a + [-1] * b


def _canonical_model(cls, pairs, singles, signs):
    """(Lambda_hat, Omega0): diagonal model spectrum and a matching
    nonsingular parameter matrix in canonical block form."""
    values = []
    blocks = []
    for mu, nu in pairs:
        values.extend([mu, nu])
        s = 1.0
        blk = np.array([[0.0, s], [-cls.epsilon * cls.star_scalar(s), 0.0]],
                       dtype=np.complex128)
        blocks.append(blk)
    for mu, sign in zip(singles, signs):
        values.append(mu)
        if cls.star == "H":
            # sign = +1 must contribute positive inertia to sqrt(-eps) Omega0.
            s = -1.0j * sign if cls.epsilon == 1 else 1.0 * sign
        else:
            s = 1.0
        blocks.append(np.array([[s]], dtype=np.complex128))
    lam = np.diag(np.array(values, dtype=np.complex128))
    omega0 = scipy.linalg.block_diag(*blocks) if blocks else np.zeros((0, 0))
    return lam, np.asarray(omega0, dtype=np.complex128)


def _build_t2hat(cls, pairs, singles, signs, omega):
    """T2hat with T2hat Omega T2hat* = Omega and the given spectrum.

    Builds the diagonal model (Lambda_hat, Omega0), star-factorizes
    Omega0 = Y0 Delta0 Y0* (Delta0 equals Omega because ranks and inertias
    match), and conjugates: T2hat = Y0^{-1} Lambda_hat Y0.
    """
    lam, omega0 = _canonical_model(cls, pairs, singles, signs)
    if omega0.shape != omega.shape:
        raise Infeasible("remaining eigenvalue count does not match Omega")
    if omega0.size == 0:
        return omega0
    fact = star_factorize(omega0, cls)
    if fnorm(fact.pattern.matrix() - omega) > 1e-8 * max(fnorm(omega), 1e-300):
        raise Infeasible(
            "canonical factor of the model parameter block does not match Omega")
    return linear_solve(fact.Y, lam @ fact.Y)


@dataclass
class IepProblem:
    """A partial inverse problem: k prescribed eigenpairs (X1, T1).

    remaining_eigenvalues optionally fixes the other 2n - k eigenvalues
    (must be pairing-closed and disjoint from the spectrum of T1);
    otherwise seeded defaults are drawn.
    """

    cls: object
    X1: np.ndarray
    T1: np.ndarray
    seed: int = 0
    remaining_eigenvalues: list = None
    attempts: int = 20
    sample_attempts: int = 50

    def __post_init__(self):
        self.X1 = as_matrix(self.X1, "X1")
        self.T1 = as_matrix(self.T1, "T1")
        k = self.T1.shape[0]
        if self.T1.shape != (k, k) or self.X1.shape[1] != k:
            raise SingularW("X1 and T1 dimensions do not conform")
        if sv_ratio(self.T1) <= NONSINGULAR_RTOL:
            raise SingularW("T1 must be nonsingular")
        X1T1inv = linear_solve(self.T1.T, self.X1.T).T
        stacked = np.vstack([self.X1, -X1T1inv])
        if sv_ratio(stacked) <= 1e-10:
            raise SingularW("[X1; -X1 T1^{-1}] must have full column rank")
        w = np.linalg.eigvals(self.T1)
        _group_values(w, self.cls)  # raises PairingNotClosed if not closed

    @property
    def n(self):
        return self.X1.shape[0]

    @property
    def k(self):
        return self.T1.shape[0]


@dataclass
class IepSolution:
    """A solved partial problem with its assembled spectral data."""

    system: object
    X: np.ndarray
    T: np.ndarray
    S: np.ndarray
    attempts: int
    residual: float


def solve_iep_partial_result(problem):
    """Run the partial-eigendata construction, returning full diagnostics."""
    cls = problem.cls
    n, k = problem.n, problem.k
    r = 2 * n - k
    if r == 0:
        sys = solve_iep_full(problem.X1, problem.T1, cls, problem.seed,
                             problem.sample_attempts)
        S = None
        return IepSolution(sys, problem.X1, problem.T1, S, 1,
                           pair_residual(sys, (problem.X1, problem.T1)))
    if cls.star == "T" and cls.epsilon == 1 and r % 2 != 0:
        raise Infeasible(
            f"infeasible: parity requires an even number of remaining "
            f"eigenvalues for this class, got {r}")
    t1_eigs = np.linalg.eigvals(problem.T1)
    basis = s_basis(problem.T1, cls)
    master = np.random.default_rng(problem.seed)
    last_error = None
    for attempt in range(problem.attempts):
        seeds = master.integers(0, 2 ** 63, size=3)
        theta_mode = "identity" if attempt == 0 else "random"
        try:
            S1 = sample_nonsingular(basis, int(seeds[0]), problem.sample_attempts)
        except NoNonsingularFound as exc:
            raise NoSolution(
                f"no nonsingular parameter block for the prescribed pairs: {exc}"
            ) from exc
        try:
            if cls.star == "H":
                herm = 1j * S1 if cls.epsilon == 1 else S1
                p, q, _ = inertia(herm)
                if p + q != k:
                    raise Infeasible("sampled parameter block is numerically singular")
                if n - p < 0 or n - q < 0:
                    raise Infeasible(
                        f"inertia ({p}, {q}) of the prescribed block exceeds the "
                        "order; no completion exists")
                omega = build_delta(cls, p=n - p, q=n - q, t=0, size=r)
                n_pos, n_neg = n - p, n - q
            else:
                omega = build_delta(cls, p=0, q=0, t=r, size=r)
                n_pos = n_neg = 0
            iso = problem.X1 @ S1 @ cls.star_of(problem.X1)
            if fnorm(iso) <= 1e-12 * fnorm(problem.X1) ** 2 * fnorm(S1):
                iso = np.zeros_like(iso)
            fact = star_factorize(iso, cls)
            if problem.remaining_eigenvalues is not None:
                vals = [complex(v) for v in problem.remaining_eigenvalues]
                if len(vals) != r:
                    raise RemainingEigenvalueConflict(
                        f"expected {r} remaining eigenvalues, got {len(vals)}")
                for v in vals:
                    if min(abs(v - t1_eigs)) <= DISJOINT_RTOL * max(1.0, abs(v)):
                        raise RemainingEigenvalueConflict(
                            f"remaining eigenvalue {v:.6g} collides with the "
                            "prescribed spectrum")
                try:
                    pairs, singles = _group_values(vals, cls)
                except PairingNotClosed as exc:
                    raise RemainingEigenvalueConflict(str(exc)) from exc
                if cls.star == "T" and singles and cls.epsilon == 1:
                    raise Infeasible(
                        "simple unimodular eigenvalues are structurally "
                        "impossible for this class")
                if cls.star == "T" and cls.epsilon == -1:
                    for point in (1.0, -1.0):
                        total = _unit_multiplicity(t1_eigs, point) \
                            + _unit_multiplicity(vals, point)
                        if (n - total) % 2 != 0:
                            raise Infeasible(
                                f"parity: eigenvalue {point:+.0f} must occur "
                                f"with multiplicity congruent to n mod 2")
                if cls.star == "H":
                    signs = _assign_hermitian_signs(cls, len(singles), len(pairs),
                                                    n_pos, n_neg)
                else:
                    signs = [1] * len(singles)
            else:
                pairs, singles, signs = _default_remaining(
                    cls, r, n_pos, n_neg, n, t1_eigs,
                    np.random.default_rng(int(seeds[1])))
            t2hat = _build_t2hat(cls, pairs, singles, signs, omega)
            psi = solve_psi(fact.pattern.matrix(), omega, cls, int(seeds[2]),
                            theta_mode)
            X2 = fact.Y @ psi
            X = np.hstack([problem.X1, X2])
            T = scipy.linalg.block_diag(problem.T1, t2hat)
            S = scipy.linalg.block_diag(S1, omega)
            TinvS = linear_solve(T, S)
            G = X @ TinvS @ cls.star_of(X)
            if sv_ratio(G) <= NONSINGULAR_RTOL:
                last_error = NonsingularityRetryExhausted(
                    "assembled leading block singular")
                continue
            sys = coefficients_from_pair(X, T, S, cls)
            resid = pair_residual(sys, (problem.X1, problem.T1))
            if resid > OUTPUT_RESIDUAL_TOL:
                last_error = ResidualTooLarge(
                    f"prescribed-pair residual {resid:.3e}")
                continue
            return IepSolution(sys, X, T, S, attempt + 1, resid)
        except (RemainingEigenvalueConflict, Infeasible):
            raise
        except (RetryExhausted, NoNonsingularFound) as exc:
            last_error = exc
            continue
    raise NonsingularityRetryExhausted(
        f"no regular completion in {problem.attempts} attempts "
        f"(last failure: {last_error})")


def solve_iep_partial(problem):
    """Construct a system carrying the prescribed partial eigenstructure."""
    return solve_iep_partial_result(problem).system
