"""Small dense linear-algebra kernels and the axis-angle rotation map.

Everything here operates on plain numpy arrays: 3-vectors of shape (3,),
3x3 and 6x6 matrices. All functions are pure and thread-safe.
"""

from __future__ import annotations

import numpy as np


class NumericalError(RuntimeError):
    """Base class for numerical failures (singular systems, non-convergence)."""


class SingularSystemError(NumericalError):
    """Raised when a linear system is singular to working precision."""


def vec3(x, y, z) -> np.ndarray:
    return np.array([float(x), float(y), float(z)])


def cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cross product u x v."""
    return np.array(
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    )


def skew_apply_matrix(v: np.ndarray) -> np.ndarray:
    """Matrix K(v) with K(v) @ x == cross(v, x)."""
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


# Relative singularity cutoff for the elimination pivots: a system counts as
# singular when |det| < SINGULAR_RTOL * ||a||_F ** n.
SINGULAR_RTOL = 1e-14


def _solve_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Partial-pivot Gaussian elimination for small n (3 or 6)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape != (n,):
        raise ValueError(f"shape mismatch: a {a.shape}, b {b.shape}")
    scale = float(np.linalg.norm(a))
    aug = np.hstack([a, b[:, None]])
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(aug[k:, k])))
        if p != k:
            aug[[k, p]] = aug[[p, k]]
            det = -det
        piv = aug[k, k]
        det *= piv
        if piv != 0.0:
            aug[k + 1 :, k:] -= np.outer(aug[k + 1 :, k] / piv, aug[k, k:])
    if abs(det) < SINGULAR_RTOL * scale**n:
        raise SingularSystemError(
            f"{n}x{n} system singular to tolerance (|det|={abs(det):.3e})"
        )
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (aug[k, n] - aug[k, k + 1 : n] @ x[k + 1 :]) / aug[k, k]
    return x


def solve3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve the 3x3 system a @ x = b.

    Raises SingularSystemError when |det(a)| falls below the relative cutoff.
    """
    return _solve_dense(a, b)


def solve6(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve the 6x6 system a @ x = b."""
    return _solve_dense(a, b)


# Below this rotation angle the axis n = theta/|theta| is ill-defined;
# the rotation is the identity to machine precision anyway.
ROTATION_ANGLE_CUTOFF = 1e-12


def rotation_matrix(theta: np.ndarray) -> np.ndarray:
    """Rotation by angle |theta| about axis theta/|theta|.

    Entry layout chosen so that for small angles
    rotation_matrix(h*w) @ g == g + h*cross(g, w) + O(h^2).
    """
    t = float(np.linalg.norm(theta))
    if t < ROTATION_ANGLE_CUTOFF:
        return np.eye(3)
    n1, n2, n3 = theta / t
    c = np.cos(t)
    s = np.sin(t)
    return np.array(
        [
            [n1 * n1 + (1 - n1 * n1) * c, n1 * n2 * (1 - c) + n3 * s, n1 * n3 * (1 - c) - n2 * s],
            [n2 * n1 * (1 - c) - n3 * s, n2 * n2 + (1 - n2 * n2) * c, n2 * n3 * (1 - c) + n1 * s],
            [n3 * n1 * (1 - c) + n2 * s, n3 * n2 * (1 - c) - n1 * s, n3 * n3 + (1 - n3 * n3) * c],
        ]
    )


def bs_solve(x: np.ndarray, v: np.ndarray, c: float) -> np.ndarray:
    """Solve x' - x = c * (x' + x) x v for x'.

    Rearranged to (I + c*K(v)) x' = x + c * (x x v); the update preserves
    |x|^2 exactly in exact arithmetic since (x'+x).(x'-x) = 0.
    """
    lhs = np.eye(3) + c * skew_apply_matrix(v)
    rhs = x + c * cross(x, v)
    return solve3(lhs, rhs)
