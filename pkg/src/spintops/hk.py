"""Bilinear one-step discretization of the full body-frame equations.

Each step is linear in the new (omega, gamma), so the update is a single 6x6
linear solve. The defining relations are invariant under h -> -h with the two
time levels exchanged, which makes the scheme time-reversal symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import solve3, solve6
from .models import BodyState, TopParams


def assemble_system(s: BodyState, p: TopParams, h: float) -> tuple[np.ndarray, np.ndarray]:
    """6x6 matrix and right-hand side; unknown ordering (w1, w2, w3, g1, g2, g3)."""
    w, gam = s.omega, s.gamma
    gv = p.g
    a1 = h * (p.B - p.C) / (2.0 * p.A)
    a2 = h * (p.C - p.A) / (2.0 * p.B)
    a3 = h * (p.A - p.B) / (2.0 * p.C)
    b1 = h / (2.0 * p.A)
    b2 = h / (2.0 * p.B)
    b3 = h / (2.0 * p.C)
    hh = 0.5 * h

    mat = np.eye(6)
    # omega rows: new-level bilinear partners and averaged gravity terms.
    mat[0, 1] = -a1 * w[2]
    mat[0, 2] = -a1 * w[1]
    mat[0, 4] = -b1 * gv[2]
    mat[0, 5] = +b1 * gv[1]
    mat[1, 0] = -a2 * w[2]
    mat[1, 2] = -a2 * w[0]
    mat[1, 3] = +b2 * gv[2]
    mat[1, 5] = -b2 * gv[0]
    mat[2, 0] = -a3 * w[1]
    mat[2, 1] = -a3 * w[0]
    mat[2, 3] = -b3 * gv[1]
    mat[2, 4] = +b3 * gv[0]
    # gamma rows: every product pairs one old with one new factor.
    mat[3, 1] = +hh * gam[2]
    mat[3, 2] = -hh * gam[1]
    mat[3, 4] = -hh * w[2]
    mat[3, 5] = +hh * w[1]
    mat[4, 0] = -hh * gam[2]
    mat[4, 2] = +hh * gam[0]
    mat[4, 3] = +hh * w[2]
    mat[4, 5] = -hh * w[0]
    mat[5, 0] = +hh * gam[1]
    mat[5, 1] = -hh * gam[0]
    mat[5, 3] = -hh * w[1]
    mat[5, 4] = +hh * w[0]

    rhs = np.array(
        [
            w[0] + b1 * (gv[2] * gam[1] - gv[1] * gam[2]),
            w[1] + b2 * (gv[0] * gam[2] - gv[2] * gam[0]),
            w[2] + b3 * (gv[1] * gam[0] - gv[0] * gam[1]),
            gam[0],
            gam[1],
            gam[2],
        ]
    )
    return mat, rhs


def hk_step(s: BodyState, p: TopParams, h: float) -> BodyState:
    """Advance (omega, gamma) by one bilinear step (one 6x6 solve)."""
    mat, rhs = assemble_system(s, p, h)
    x = solve6(mat, rhs)
    return BodyState(x[:3], x[3:])


@dataclass(frozen=True)
class HkStepReport:
    state_next: BodyState
    matrix_cond_estimate: float
    residual: float


def hk_step_report(s: BodyState, p: TopParams, h: float) -> HkStepReport:
    """hk_step plus linear-solve diagnostics."""
    mat, rhs = assemble_system(s, p, h)
    x = solve6(mat, rhs)
    res = float(np.max(np.abs(mat @ x - rhs)))
    cond = float(np.linalg.cond(mat))
    return HkStepReport(BodyState(x[:3], x[3:]), cond, res)


def euler_system(omega: np.ndarray, p: TopParams, h: float) -> tuple[np.ndarray, np.ndarray]:
    """3x3 system of the free-top specialization (gravity absent)."""
    a1 = h * (p.B - p.C) / (2.0 * p.A)
    a2 = h * (p.C - p.A) / (2.0 * p.B)
    a3 = h * (p.A - p.B) / (2.0 * p.C)
    mat = np.array(
        [
            [1.0, -a1 * omega[2], -a1 * omega[1]],
            [-a2 * omega[2], 1.0, -a2 * omega[0]],
            [-a3 * omega[1], -a3 * omega[0], 1.0],
        ]
    )
    return mat, np.asarray(omega, dtype=float)


def hk_step_euler(omega: np.ndarray, p: TopParams, h: float) -> np.ndarray:
    """Free-top bilinear step in omega alone; identical to the omega block of
    hk_step with zero gravity."""
    mat, rhs = euler_system(omega, p, h)
    return solve3(mat, rhs)
