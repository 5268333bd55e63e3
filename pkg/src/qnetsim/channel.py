"""Photonic link physics: ground-station placement and per-pair link probabilities.

All public distances are in kilometres. The satellite sits at the centre of the
coverage disk at a fixed altitude.

Default constants
-----------------
=====================  ===========  =======================================
parameter              default      meaning
=====================  ===========  =======================================
``h_sat``              500 km       satellite altitude
``eta0``               0.1          detection / pointing / atmosphere factor
``r_rec``              0.75 m       receiver telescope radius
``beam_coeff``         2.5e-6       long-term beam width per unit distance
``alpha_db_per_km``    0.2 dB/km    fiber attenuation
=====================  ===========  =======================================
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class SatelliteParams:
    h_sat: float = 500.0
    eta0: float = 0.1
    r_rec: float = 0.75
    beam_coeff: float = 2.5e-6

    def __post_init__(self):
        if not self.h_sat > 0:
            raise InvalidParameterError(f"h_sat must be > 0, got {self.h_sat}")
        if not 0.0 <= self.eta0 <= 1.0:
            raise InvalidParameterError(f"eta0 must lie in [0, 1], got {self.eta0}")
        if not self.r_rec > 0:
            raise InvalidParameterError(f"r_rec must be > 0, got {self.r_rec}")
        if not self.beam_coeff > 0:
            raise InvalidParameterError(f"beam_coeff must be > 0, got {self.beam_coeff}")


@dataclass(frozen=True)
class FiberParams:
    alpha_db_per_km: float = 0.2

    def __post_init__(self):
        if not self.alpha_db_per_km > 0:
            raise InvalidParameterError(
                f"alpha_db_per_km must be > 0, got {self.alpha_db_per_km}")


DEFAULT_SATELLITE = SatelliteParams()
DEFAULT_FIBER = FiberParams()


def sample_positions(n, radius, rng):
    """Draw ``n`` points uniformly over the disk of the given radius.

    Returns an ``(n, 2)`` array of (x, y) in km. The radial coordinate is
    ``radius * sqrt(u)`` so that the density is uniform in area.
    """
    if n < 1:
        raise InvalidParameterError(f"need at least one node, got n={n}")
    if not radius > 0:
        raise InvalidParameterError(f"radius must be > 0, got {radius}")
    u = rng.random(n)
    theta = rng.random(n) * (2.0 * np.pi)
    r = radius * np.sqrt(u)
    pos = np.empty((n, 2))
    pos[:, 0] = r * np.cos(theta)
    pos[:, 1] = r * np.sin(theta)
    # cos/sin rounding can push a boundary point out by one ulp
    norm = np.hypot(pos[:, 0], pos[:, 1])
    over = norm > radius
    if over.any():
        pos[over] *= (radius / norm[over])[:, None]
    return pos


def sat_distance(pos, params=DEFAULT_SATELLITE):
    """Straight-line ground-to-satellite distance (km) for one or many positions."""
    pos = np.asarray(pos, dtype=float)
    x, y = pos[..., 0], pos[..., 1]
    return np.sqrt(x * x + y * y + params.h_sat * params.h_sat)


def p_sat(d, params=DEFAULT_SATELLITE):
    """Downlink arrival probability for a station at distance ``d`` km.

    ``eta0 * (1 - exp(-2 r_rec^2 / w^2))`` with the long-term beam width
    ``w = beam_coeff * d`` expressed in metres, like ``r_rec``.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise InvalidParameterError("satellite distance must be > 0")
    w = params.beam_coeff * d * 1e3
    out = params.eta0 * -np.expm1(-2.0 * params.r_rec ** 2 / (w * w))
    return out if out.ndim else float(out)


def p_fiber(d, params=DEFAULT_FIBER):
    """Single-attempt fiber transmission probability ``10**(-alpha d / 10)``."""
    d = np.asarray(d, dtype=float)
    out = np.power(10.0, -params.alpha_db_per_km * d / 10.0)
    return out if out.ndim else float(out)


def link_prob(p_trial, n_p):
    """Probability that at least one of ``n_p`` independent attempts succeeds."""
    if n_p < 1:
        raise InvalidParameterError(f"n_p must be >= 1, got {n_p}")
    p_trial = np.asarray(p_trial, dtype=float)
    if np.any((p_trial < 0) | (p_trial > 1)):
        raise InvalidParameterError("trial probability must lie in [0, 1]")
    # log1p/expm1 keep precision when p_trial is tiny and n_p large
    with np.errstate(divide="ignore"):
        out = -np.expm1(n_p * np.log1p(-p_trial))
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)
