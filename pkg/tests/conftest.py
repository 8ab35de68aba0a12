"""Shared independent oracles for the test suite.

These deliberately re-derive results through different algorithms than the
package (Cramer's rule, complete-pivot elimination) so that agreement is a
real cross-check.
"""

import numpy as np
import pytest


def det3(a):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def cramer_solve3(a, b):
    """3x3 solve by Cramer's rule."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = det3(a)
    x = np.empty(3)
    for i in range(3):
        ai = a.copy()
        ai[:, i] = b
        x[i] = det3(ai) / d
    return x


def full_pivot_solve(a, b):
    """Gaussian elimination with complete (row and column) pivoting."""
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    n = a.shape[0]
    col_perm = list(range(n))
    for k in range(n):
        sub = np.abs(a[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        i += k
        j += k
        a[[k, i]] = a[[i, k]]
        b[k], b[i] = b[i], b[k]
        a[:, [k, j]] = a[:, [j, k]]
        col_perm[k], col_perm[j] = col_perm[j], col_perm[k]
        for r in range(k + 1, n):
            f = a[r, k] / a[k, k]
            a[r, k:] -= f * a[k, k:]
            b[r] -= f * b[k]
    y = np.zeros(n)
    for k in range(n - 1, -1, -1):
        y[k] = (b[k] - a[k, k + 1 :] @ y[k + 1 :]) / a[k, k]
    x = np.zeros(n)
    for k in range(n):
        x[col_perm[k]] = y[k]
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
