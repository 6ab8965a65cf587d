"""Known reference problems used across the test suite.

Two families: a 4-by-4 prescribed-eigenpair construction problem (one
eigenvector matrix, transpose- and conjugate-transpose-flavored eigenvalue
sets), and four 3-by-3 systems with two published eigenvalues each for the
no-spillover update.
"""

import numpy as np

from palinverse.system import HA, HP, TA, TP

# --- construction problems (k = 4 prescribed eigenpairs, order 4) ---------

IEP_X1 = np.array([
    [1, 1j, 0, 0],
    [2, 2j, 1, 0],
    [1, 1, 1j, 1j],
    [1, -1, 1, -1],
], dtype=np.complex128)

IEP_T1_TRANSPOSE = np.diag(np.array(
    [1 + 1j, 1 / (1 + 1j), 2 + 3j, 1 / (2 + 3j)], dtype=np.complex128))

IEP_T1_CONJUGATE = np.diag(np.array(
    [1 + 1j, 1 / (1 - 1j), 2 + 3j, 1 / (2 - 3j)], dtype=np.complex128))


def iep_fixture(cls):
    T1 = IEP_T1_TRANSPOSE if cls.star == "T" else IEP_T1_CONJUGATE
    return IEP_X1.copy(), T1.copy()


# --- update problems: system, eigenvalue pair to replace, replacement -----

UPDATE_FIXTURES = {
    "tp": dict(
        cls=TP,
        A1=np.array([[2, 1 + 2j, 1 - 2j],
                     [1, -1 + 1j, 1 + 1j],
                     [1 - 2j, 1 + 1j, 1]], dtype=np.complex128),
        A0=np.array([[4, -3 + 1j, 5],
                     [-3 + 1j, 1, -1],
                     [5, -1, -1]], dtype=np.complex128),
        replace=[-4.0685 + 10.3032j, -0.0332 - 0.0840j],
        new=[-6 + 9j, 1 / (-6 + 9j)],
    ),
    "ta": dict(
        cls=TA,
        A1=np.array([[2, 1, 1],
                     [1, -1, 1],
                     [1, 1, 1]], dtype=np.complex128),
        A0=np.array([[0, -3, 5],
                     [3, 0, -1],
                     [-5, 1, 0]], dtype=np.complex128),
        replace=[4.2361, 0.2361],
        new=[4.0, 0.25],
    ),
    "hp": dict(
        cls=HP,
        A1=np.array([[2 - 5j, 1 + 2j, 1 - 2j],
                     [1 + 2j, -1 + 1j, 1 + 1j],
                     [1 - 2j, 1 + 1j, 1 + 3j]], dtype=np.complex128),
        A0=np.array([[4, -3, 5],
                     [-3, 1, -1],
                     [5, -1, -1]], dtype=np.complex128),
        replace=[0.8745 + 0.6115j, 0.7680 + 0.5371j],
        new=[1 + 1j, 1 / (1 - 1j)],
    ),
    "ha": dict(
        cls=HA,
        A1=np.array([[2 - 5j, 1 + 2j, 1 - 2j],
                     [1 + 2j, -1 + 1j, 1 + 1j],
                     [1 - 2j, 1 + 1j, 1 + 3j]], dtype=np.complex128),
        A0=np.array([[0, -3, 5],
                     [3, 0, -1],
                     [-5, 1, 0]], dtype=np.complex128),
        replace=[0.8195 - 2.4199j, 0.1255 - 0.3707j],
        new=[1 - 2.5j, 1 / (1 + 2.5j)],
    ),
}


def update_fixture(code):
    from palinverse.system import PalindromicSystem

    fix = UPDATE_FIXTURES[code]
    sys = PalindromicSystem(fix["cls"], fix["A1"], fix["A0"])
    return sys, list(fix["replace"]), list(fix["new"])
