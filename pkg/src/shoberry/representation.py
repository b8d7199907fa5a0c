"""Oscillator representations built from pairs of classical solutions.

A representation is the classical solution pair u(t) = cos(wt),
v(t) = C sin(wt + beta) for an oscillator of mass M and angular frequency w,
together with the quantities derived from it: the amplitude rho = sqrt(u^2+v^2),
the conserved Wronskian M(u v' - v u'), and the closed (u, v) trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRepresentationError

# Degeneracy guard: |cos beta| below this makes the Wronskian vanish and every
# phase integrand blow up, so such representations are rejected outright.
COS_BETA_EPS = 1e-9


def _as_time(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


@dataclass(frozen=True)
class PhysicalConfig:
    """Physical constants entering the wavefunctions."""

    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class Representation:
    """Classical-solution pair (cos wt, C sin(wt + beta)).

    M and w must be positive and are enforced at construction; the amplitude C
    and phase angle beta (radians) are checked by validate(), because phase
    formulas tolerate sign choices that normalizable wavefunctions do not.
    """

    M: float
    w: float
    C: float
    beta: float

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidRepresentationError("mass M must be positive")
        if not self.w > 0:
            raise InvalidRepresentationError("angular frequency w must be positive")

    @property
    def tau0(self) -> float:
        """Classical period, always derived from w."""
        return 2.0 * math.pi / self.w


STATIONARY = Representation(M=1.0, w=1.0, C=1.0, beta=0.0)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    mode: str
    failures: tuple[str, ...] = ()


def validate(rep: Representation, mode: str = "full") -> ValidationReport:
    """Check representation constraints without raising.

    "formula-only" admits any representation whose phase formulas are finite
    (C nonzero, |cos beta| above the degeneracy guard). "full" additionally
    requires C cos(beta) > 0, i.e. a positive Wronskian, which normalizable
    wavefunctions need.
    """
    if mode not in ("formula-only", "full"):
        raise ValueError(f"unknown validation mode {mode!r}")
    failures = []
    if rep.C == 0:
        failures.append("C must be nonzero")
    cos_beta = math.cos(rep.beta)
    if abs(cos_beta) <= COS_BETA_EPS:
        failures.append(
            f"|cos(beta)| must exceed {COS_BETA_EPS:g}"
            " (beta is too close to an odd multiple of pi/2)")
    if mode == "full" and not failures and rep.C * cos_beta <= 0:
        failures.append(
            "C*cos(beta) must be positive for normalizable wavefunctions"
            " (the Wronskian M*C*w*cos(beta) is not positive)")
    return ValidationReport(ok=not failures, mode=mode, failures=tuple(failures))


def require_valid(rep: Representation, mode: str = "full") -> None:
    report = validate(rep, mode)
    if not report.ok:
        raise InvalidRepresentationError("; ".join(report.failures))


def classical_pair(rep: Representation, t):
    """u, v and their time derivatives at t (scalar or array)."""
    require_valid(rep, "formula-only")
    arr, scalar = _as_time(t)
    wt = rep.w * arr
    shifted = wt + rep.beta
    u = np.cos(wt)
    v = rep.C * np.sin(shifted)
    du = -rep.w * np.sin(wt)
    dv = rep.C * rep.w * np.cos(shifted)
    if scalar:
        return float(u), float(v), float(du), float(dv)
    return u, v, du, dv


def rho(rep: Representation, t):
    """Amplitude sqrt(u^2 + v^2); periodic with half the classical period."""
    u, v, _, _ = classical_pair(rep, t)
    r = np.hypot(u, v)
    if np.any(np.asarray(r) == 0.0):
        raise ArithmeticError("u^2 + v^2 vanished; classical pair is degenerate")
    return r


def rho_dot(rep: Representation, t):
    u, v, du, dv = classical_pair(rep, t)
    r = np.hypot(u, v)
    if np.any(np.asarray(r) == 0.0):
        raise ArithmeticError("u^2 + v^2 vanished; classical pair is degenerate")
    return (u * du + v * dv) / r


def rho_ddot(rep: Representation, t):
    """Second time derivative of rho, from u'' = -w^2 u exactly."""
    u, v, du, dv = classical_pair(rep, t)
    r = np.hypot(u, v)
    if np.any(np.asarray(r) == 0.0):
        raise ArithmeticError("u^2 + v^2 vanished; classical pair is degenerate")
    rd = (u * du + v * dv) / r
    return (du * du + dv * dv - rep.w ** 2 * r * r - rd * rd) / r


def omega_invariant(rep: Representation) -> float:
    """Conserved Wronskian M (u v' - v u') = M C w cos(beta)."""
    require_valid(rep, "formula-only")
    return rep.M * rep.C * rep.w * math.cos(rep.beta)


def winding_phase(rep: Representation, t):
    """Continuous argument of u - i v, anchored at its principal value at t=0.

    For a positive Wronskian the argument decreases monotonically (at the rate
    -Omega/(M rho^2)) and drops by exactly pi every half period, so the branch
    at any isolated t equals the one obtained by unwrapping along [0, t]. That
    lets the value be computed in closed form: reduce t into [0, tau0/2), take
    atan2 there, and shift by -pi per elapsed half period.
    """
    require_valid(rep, "full")
    arr, scalar = _as_time(t)
    half = 0.5 * rep.tau0
    m = np.floor(arr / half)
    local = arr - m * half
    u, v, _, _ = classical_pair(rep, local)
    raw = np.arctan2(np.negative(v), u)
    theta0 = math.atan2(-rep.C * math.sin(rep.beta), 1.0)
    # unique representative of raw (mod 2pi) inside (theta0 - pi, theta0]
    center = theta0 - 0.5 * math.pi
    theta_local = raw + 2.0 * math.pi * np.round((center - raw) / (2.0 * math.pi))
    out = theta_local - math.pi * m
    return float(out) if scalar else out


def trajectory(rep: Representation, samples: int) -> np.ndarray:
    """Sample the closed (u, v) curve over one classical period.

    Returns an array of shape (samples, 2) including both endpoints, which
    coincide by periodicity.
    """
    require_valid(rep, "formula-only")
    if samples < 2:
        raise ValueError("at least two samples are needed")
    ts = np.linspace(0.0, rep.tau0, samples)
    u, v, _, _ = classical_pair(rep, ts)
    return np.stack([u, v], axis=1)
