"""Discrete steps for the reduced A=B=2, C=1 top with gravity along x.

Three unit-sphere-preserving updates for gamma (midpoint solve, stereographic
Euler substep, axis-angle rotation), an exact phase-factor update for
xi = omega^2 - c0*gamma recovered through a complex square root with branch
selection, and a hybrid predictor-corrector that keeps both |gamma|^2 and
|xi|^2 exact while staying close to time-reversal symmetric.
"""

from __future__ import annotations

import cmath
import enum
import math

import numpy as np

from .algebra import NumericalError, bs_solve, rotation_matrix, vec3
from .hk import hk_step
from .models import BodyState, KowalevskiParams, gamma_complex, omega_complex


class GammaMethod(enum.Enum):
    BS_A = "bs"
    STEREO_B = "stereo"
    ROTATION_C = "rotation"


class BranchRule(enum.Enum):
    ARG_SIGN = "arg-sign"
    NEAREST_PREDICTOR = "nearest"


class SouthPoleError(NumericalError):
    """Stereographic chart breaks down at gamma_3 = -1."""


def gamma_step_bs(gamma: np.ndarray, omega: np.ndarray, h: float) -> np.ndarray:
    """gamma' - gamma = (h/2)(gamma' + gamma) x omega; preserves |gamma|."""
    return bs_solve(np.asarray(gamma, dtype=float), np.asarray(omega, dtype=float), 0.5 * h)


SOUTH_POLE_TOL = 1e-12


def stereo_forward(gamma: np.ndarray) -> complex:
    """z = (gamma_1 + i*gamma_2) / (1 + gamma_3)."""
    if 1.0 + gamma[2] < SOUTH_POLE_TOL:
        raise SouthPoleError("gamma_3 too close to -1 for the stereographic chart")
    return complex(gamma[0], gamma[1]) / (1.0 + gamma[2])


def stereo_inverse(z: complex) -> np.ndarray:
    """Unit vector with gamma_1 + i*gamma_2 = 2z/(1+|z|^2), gamma_3 = (1-|z|^2)/(1+|z|^2)."""
    d = 1.0 + abs(z) ** 2
    return vec3(2.0 * z.real / d, 2.0 * z.imag / d, (1.0 - abs(z) ** 2) / d)


def gamma_step_stereo(gamma: np.ndarray, omega: np.ndarray, h: float) -> np.ndarray:
    """One explicit Euler substep of dz/dt = (i/2)(w - 2*w3*z - conj(w)*z^2)
    in the stereographic variable, mapped back to the sphere.

    The inverse map lands on the unit sphere by construction, so |gamma'| = 1
    regardless of the substep error.
    """
    z = stereo_forward(gamma)
    w = complex(omega[0], omega[1])
    dz = 0.5j * (w - 2.0 * omega[2] * z - w.conjugate() * z * z)
    return stereo_inverse(z + h * dz)


def gamma_step_rotation(gamma: np.ndarray, omega: np.ndarray, h: float) -> np.ndarray:
    """gamma' = R(h*omega) gamma: instantaneous rotation over one step."""
    return rotation_matrix(h * np.asarray(omega, dtype=float)) @ gamma


def gamma_step(gamma: np.ndarray, omega: np.ndarray, h: float, method: GammaMethod) -> np.ndarray:
    if method is GammaMethod.BS_A:
        return gamma_step_bs(gamma, omega, h)
    if method is GammaMethod.STEREO_B:
        return gamma_step_stereo(gamma, omega, h)
    return gamma_step_rotation(gamma, omega, h)


def omega3_update(
    omega3: float, gamma2_n: float, gamma2_next: float, h: float, c0: float
) -> float:
    """Trapezoidal update w3' = w3 - (h/2) c0 (gamma2' + gamma2)."""
    return omega3 - 0.5 * h * c0 * (gamma2_next + gamma2_n)


def _arg_sign(w: complex) -> int:
    # Sign of atan2(im, re); zero argument counts as positive.
    return -1 if math.atan2(w.imag, w.real) < 0.0 else 1


def bohlin_step(
    omega_n: complex,
    gamma_n: complex,
    gamma_next: complex,
    gamma3_n: float,
    omega3_n: float,
    omega3_next: float,
    h: float,
    c0: float,
    rule: BranchRule = BranchRule.ARG_SIGN,
) -> complex:
    """Recover omega' = omega_1' + i*omega_2' from the exact phase update
    xi' = exp(-i*chi) xi, chi = (h/2)(w3' + w3).

    Solves (omega')^2 = exp(-i*chi)(omega^2 - c0*gamma) + c0*gamma' by a
    complex square root; the sign ambiguity is resolved against the one-step
    explicit predictor omega - (i h/2)(w3*omega - c0*gamma3).
    """
    chi = 0.5 * h * (omega3_next + omega3_n)
    z = cmath.exp(-1j * chi) * (omega_n * omega_n - c0 * gamma_n) + c0 * gamma_next
    w = cmath.sqrt(z)
    if w == 0:
        return w
    predictor = omega_n - 0.5j * h * (omega3_n * omega_n - c0 * gamma3_n)
    if rule is BranchRule.ARG_SIGN:
        if _arg_sign(w) != _arg_sign(predictor):
            w = -w
    else:
        if abs(w - predictor) > abs(-w - predictor):
            w = -w
    return w


def bohlin_algorithm_step(
    s: BodyState,
    kp: KowalevskiParams,
    h: float,
    method: GammaMethod = GammaMethod.BS_A,
    rule: BranchRule = BranchRule.ARG_SIGN,
) -> BodyState:
    """Three-stage step: gamma by the selected sphere-preserving method, then
    the trapezoidal w3 update, then the square-root recovery of (w1, w2).

    Keeps |gamma|^2 = 1 and |xi|^2 exact; not symmetric under h -> -h since
    the gamma stage uses omega at the old level only.
    """
    gam_next = gamma_step(s.gamma, s.omega, h, method)
    w3_next = omega3_update(s.omega[2], s.gamma[1], gam_next[1], h, kp.c0)
    w_next = bohlin_step(
        omega_complex(s),
        gamma_complex(s),
        complex(gam_next[0], gam_next[1]),
        s.gamma[2],
        s.omega[2],
        w3_next,
        h,
        kp.c0,
        rule,
    )
    return BodyState(vec3(w_next.real, w_next.imag, w3_next), gam_next)


def hybrid_step(
    s: BodyState,
    kp: KowalevskiParams,
    h: float,
    rule: BranchRule = BranchRule.ARG_SIGN,
    refresh_omega3: bool = False,
) -> BodyState:
    """Predictor-corrector step: bilinear 6x6 predictor, then a midpoint-type
    re-solve of gamma against the averaged omega, then the square-root
    recovery of (w1, w2).

    Keeps |gamma|^2 = 1 and |xi|^2 exact, and is nearly h -> -h symmetric.
    With refresh_omega3 the trapezoidal w3 update is re-applied using the
    corrected gamma instead of keeping the predictor's w3.
    """
    pred = hk_step(s, kp.top_params(), h)
    gam_next = bs_solve(s.gamma, pred.omega + s.omega, 0.25 * h)
    if refresh_omega3:
        w3_next = omega3_update(s.omega[2], s.gamma[1], gam_next[1], h, kp.c0)
    else:
        w3_next = float(pred.omega[2])
    w_next = bohlin_step(
        omega_complex(s),
        gamma_complex(s),
        complex(gam_next[0], gam_next[1]),
        s.gamma[2],
        s.omega[2],
        w3_next,
        h,
        kp.c0,
        rule,
    )
    return BodyState(vec3(w_next.real, w_next.imag, w3_next), gam_next)
