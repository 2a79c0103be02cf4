"""Air-to-ground channel: sight probability, mean path loss, the
quadratic-in-radius fit of the sight probability, and per-user minimum
transmit power. All functions are pure and stateless."""

import math
from dataclasses import dataclass

from .errors import DomainError
from .model import Environment

# Fit domain of the quadratic sight-probability approximation.
FIT_H_MIN = 100.0
FIT_H_MAX = 2000.0
FIT_RADIUS_MAX = 1000.0


@dataclass(frozen=True)
class LinkGeometry:
    """Geometry of one UAV-user link: squared horizontal offset r2 (m^2),
    altitude h (m), slant distance d (m) and elevation angle in degrees."""

    r2: float
    h: float
    d: float
    theta_deg: float

    @classmethod
    def from_offset(cls, r2, h):
        if not h > 0:
            raise DomainError("altitude must be > 0")
        if r2 < 0:
            raise DomainError("squared offset must be >= 0")
        d = math.sqrt(r2 + h * h)
        theta = math.degrees(math.asin(h / d))
        return cls(r2=r2, h=h, d=d, theta_deg=theta)


def los_probability(env: Environment, geo: LinkGeometry) -> float:
    """Probability of an unobstructed link at elevation angle theta."""
    return 1.0 / (1.0 + env.c_env * math.exp(-env.d_env * (geo.theta_deg - env.c_env)))


def mean_path_loss(env: Environment, geo: LinkGeometry) -> float:
    """Path loss averaged over sight/no-sight outcomes (dimensionless)."""
    p = los_probability(env, geo)
    return (p + env.eta * (1.0 - p)) * geo.d**env.alpha


def los_fit_coefficients(h):
    """Altitude-dependent (slope, intercept) of the quadratic fit
    p_sight ~ slope * r2 + intercept, valid for 100 <= h <= 2000 m."""
    if not (FIT_H_MIN <= h <= FIT_H_MAX):
        raise DomainError(f"altitude {h} outside fit domain [{FIT_H_MIN}, {FIT_H_MAX}]")
    slope = -1e-11 * h * h + 15e-9 * h - 57e-7
    intercept = 2.37e-7 * h * h - 5.24e-4 * h + 1.32
    return slope, intercept


def los_probability_approx(h, r2):
    """Quadratic-in-r2 fit of the sight probability.

    Returns the raw polynomial value; it may exceed 1 (or go negative) and
    is deliberately never clamped, so that closed-form optimality systems
    built on it keep their algebra. Callers needing a probability must clamp.
    """
    slope, intercept = los_fit_coefficients(h)
    if r2 < 0 or math.sqrt(r2) > FIT_RADIUS_MAX:
        raise DomainError(
            f"horizontal offset sqrt({r2}) outside fit domain [0, {FIT_RADIUS_MAX}]"
        )
    return slope * r2 + intercept


def min_power_per_user(env: Environment, w, beta, lbar) -> float:
    """Minimum transmit power (W) to sustain rate beta over bandwidth w
    against mean path loss lbar. Exactly linear in the noise power."""
    if not w > 0:
        raise DomainError("per-user bandwidth must be > 0")
    if beta < 0:
        raise DomainError("rate requirement must be >= 0")
    return (2.0 ** (beta / w) - 1.0) * env.n0 * lbar
