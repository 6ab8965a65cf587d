"""Shared seeded generators for the test suite."""

import numpy as np
import scipy.linalg

from palinverse.forward import eig_full
from palinverse.system import PalindromicSystem


def random_complex(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_structured(rng, cls, n):
    """A random matrix with star(B) = -eps B."""
    M = random_complex(rng, n, n)
    return (M - cls.epsilon * cls.star_of(M)) / 2.0


def random_system(cls, n, seed, real=False, cond_limit=1e6, max_tries=200):
    """A random regular system of the class, conditioning filtered.

    Rejects draws whose companion eigenproblem has an eigenvalue condition
    number above cond_limit (left/right eigenvector angle test), so the
    accepted systems are semi-simple with well separated reciprocal pairs.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        if real:
            A1 = rng.standard_normal((n, n))
            M = rng.standard_normal((n, n))
        else:
            A1 = random_complex(rng, n, n)
            M = random_complex(rng, n, n)
        A0 = M + cls.epsilon * cls.star_of(M)
        try:
            sys = PalindromicSystem(cls, A1, A0)
        except Exception:
            continue
        if max_eig_condition(sys) < cond_limit:
            return sys
    raise RuntimeError(f"no well conditioned {cls.code} system of order {n} found")


def max_eig_condition(sys):
    """Largest eigenvalue condition number of the companion eigenproblem."""
    from palinverse.forward import linearize
    from palinverse.numerics import linear_solve

    M0, M1 = linearize(sys)
    A = -linear_solve(M1, M0)
    w, vl, vr = scipy.linalg.eig(A, left=True, right=True)
    conds = []
    for i in range(len(w)):
        denom = abs(np.vdot(vl[:, i], vr[:, i]))
        conds.append(np.inf if denom == 0 else 1.0 / denom)
    return max(conds)


def separated_spectrum(eigs, tol=1e-6):
    """True when all computed eigenvalues are pairwise separated."""
    v = eigs.values
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            if abs(v[i] - v[j]) <= tol * max(1.0, abs(v[i])):
                return False
    return True


def planted_direct_sum(cls, sizes, seed, cond_limit=1e5, max_tries=200):
    """Full pair (X, J) of a direct-sum system built from genuine
    subsystem eigendata, with pairwise disjoint sub-spectra.

    Note: two transpose-anti blocks of odd order can never be disjoint
    (each is forced to carry +1 and -1), so such size requests fail.
    """
    if cls.epsilon == -1 and cls.star == "T" and \
            sum(1 for nb in sizes if nb % 2 == 1) > 1:
        raise ValueError(
            "transpose-anti blocks of odd order all contain +-1; at most one "
            "odd block can appear in a disjoint direct sum")
    rng_seed = seed
    for _ in range(max_tries):
        Xs, Js, all_vals = [], [], []
        ok = True
        for i, nb in enumerate(sizes):
            sys = random_system(cls, nb, rng_seed + 1000 * i, cond_limit=cond_limit)
            e = eig_full(sys)
            if not (e.pairing_complete and separated_spectrum(e, 1e-4)):
                ok = False
                break
            Xs.append(e.vectors)
            Js.append(np.diag(e.values))
            all_vals.extend(e.values)
        if ok:
            vals = np.asarray(all_vals)
            sep = min(abs(vals[i] - vals[j])
                      for i in range(len(vals)) for j in range(i + 1, len(vals)))
            if sep > 1e-4:
                return scipy.linalg.block_diag(*Xs), scipy.linalg.block_diag(*Js)
        rng_seed += 7919
    raise RuntimeError(f"no disjoint {cls.code} direct sum of sizes {sizes}")
