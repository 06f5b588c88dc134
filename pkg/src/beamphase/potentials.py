"""Polynomial potentials with z-dependent coefficients.

A potential is a finite sum ``U(x, z) = sum_k c_k(z) * x**k`` where each
coefficient follows a profile in z (constant, piecewise-constant lattice, or
harmonic modulation).  The Moyal kick generator

    G(x, y, z) = [U(x + eps*y/2, z) - U(x - eps*y/2, z)] / eps

is evaluated in closed form through the binomial shift expansion

    G = sum_{j odd} 2 * (eps/2)**j / eps * S_j(x, z) * y**j,
    S_j(x, z) = U^(j)(x, z) / j! = sum_k C(k, j) * c_k(z) * x**(k-j),

so no numerical differencing is involved, the series terminates at the
polynomial degree, and truncating at order 1 reproduces the classical
Liouville generator U'(x) * y with bit-identical arithmetic to
``eval_gradient(spec, x, z) * y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BeamPhaseError

__all__ = [
    "ConstantProfile",
    "PiecewiseProfile",
    "HarmonicProfile",
    "PotentialSpec",
    "free_space",
    "linear_lens",
    "quartic_channel",
    "eval_potential",
    "eval_gradient",
    "moyal_generator",
    "moyal_generator_truncated",
]


@dataclass(frozen=True)
class ConstantProfile:
    """Coefficient that does not depend on z."""

    value: float

    def __call__(self, z: float) -> float:
        return self.value


@dataclass(frozen=True)
class PiecewiseProfile:
    """Piecewise-constant coefficient, e.g. a lattice of discrete elements.

    ``breaks`` is a sorted tuple of (z_start, value) pairs; the value of the
    first pair also applies before its z_start, and the last value holds to
    infinity.
    """

    breaks: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.breaks:
            raise BeamPhaseError("piecewise profile needs at least one segment")
        zs = [z for z, _ in self.breaks]
        if any(b <= a for a, b in zip(zs, zs[1:])):
            raise BeamPhaseError("piecewise profile breakpoints must be strictly increasing")
        object.__setattr__(self, "breaks", tuple((float(z), float(v)) for z, v in self.breaks))

    def __call__(self, z: float) -> float:
        value = self.breaks[0][1]
        for z_start, v in self.breaks:
            if z < z_start:
                break
            value = v
        return value


@dataclass(frozen=True)
class HarmonicProfile:
    """Coefficient modulated as ``amplitude * cos(omega * z + phase)``."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def __call__(self, z: float) -> float:
        return self.amplitude * math.cos(self.omega * z + self.phase)


@dataclass(frozen=True)
class PotentialSpec:
    """Polynomial potential: tuple of (power, coefficient profile) terms."""

    terms: tuple[tuple[int, object], ...] = ()

    def __post_init__(self):
        cleaned = []
        seen = set()
        for power, profile in self.terms:
            if isinstance(power, bool) or not isinstance(power, (int, np.integer)):
                raise BeamPhaseError(f"potential power must be an integer, got {power!r}")
            power = int(power)
            if power < 0:
                raise BeamPhaseError(f"potential power must be >= 0, got {power}")
            if power in seen:
                raise BeamPhaseError(f"duplicate potential power {power}")
            if not callable(profile):
                raise BeamPhaseError(f"coefficient profile for x**{power} is not callable")
            seen.add(power)
            cleaned.append((power, profile))
        cleaned.sort(key=lambda t: t[0])
        object.__setattr__(self, "terms", tuple(cleaned))

    @property
    def degree(self) -> int:
        """Highest power with a term; -1 for the empty (free-space) spec."""
        return self.terms[-1][0] if self.terms else -1

    def coefficients(self, z: float) -> np.ndarray:
        """Dense coefficient array c[0..degree] at a given z."""
        c = np.zeros(self.degree + 1)
        for power, profile in self.terms:
            c[power] = profile(z)
        return c


def free_space() -> PotentialSpec:
    """No potential at all."""
    return PotentialSpec(())


def linear_lens(k_strength: float) -> PotentialSpec:
    """Linear focusing channel, U = K * x**2 / 2."""
    if not math.isfinite(k_strength):
        raise BeamPhaseError(f"lens strength must be finite, got {k_strength}")
    return PotentialSpec(((2, ConstantProfile(k_strength / 2.0)),))


def quartic_channel(k_strength: float, lambda4: float) -> PotentialSpec:
    """Quartic anharmonic channel, U = K * x**2 / 2 + lambda4 * x**4."""
    if not (math.isfinite(k_strength) and math.isfinite(lambda4)):
        raise BeamPhaseError(
            f"channel coefficients must be finite, got K={k_strength}, lambda={lambda4}"
        )
    return PotentialSpec(
        ((2, ConstantProfile(k_strength / 2.0)), (4, ConstantProfile(lambda4)))
    )


def _horner(coeffs: np.ndarray, x):
    """Evaluate sum_k coeffs[k] * x**k by Horner's rule (vectorized in x)."""
    if len(coeffs) == 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    result = np.full_like(np.asarray(x, dtype=float), coeffs[-1])
    for c in coeffs[-2::-1]:
        result = result * x + c
    return result


def _divided_derivative_coeffs(coeffs: np.ndarray, j: int) -> np.ndarray:
    """Coefficients of U^(j)(x)/j! = sum_k C(k, j) c_k x**(k-j)."""
    k = np.arange(j, len(coeffs))
    if k.size == 0:
        return np.zeros(0)
    return np.array([math.comb(int(kk), j) for kk in k]) * coeffs[j:]


def eval_potential(spec: PotentialSpec, x, z: float):
    """U(x, z) for scalar or array x."""
    return _horner(spec.coefficients(z), x)


def eval_gradient(spec: PotentialSpec, x, z: float):
    """dU/dx(x, z) for scalar or array x."""
    return _horner(_divided_derivative_coeffs(spec.coefficients(z), 1), x)


def _shift_series(spec, x, y, z, epsilon, j_max, j_min=1):
    """Partial sum over odd j in [j_min, j_max] of the shift expansion."""
    coeffs = spec.coefficients(z)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
    half = 0.5 * epsilon
    y_sq = y * y
    y_pow = y.astype(float)
    for _ in range(3, j_min, 2):
        y_pow = y_pow * y_sq
    for j in range(j_min, j_max + 1, 2):
        alpha = 2.0 * half**j / epsilon
        s_j = _horner(_divided_derivative_coeffs(coeffs, j), x)
        out = out + alpha * s_j * y_pow
        y_pow = y_pow * y_sq
    return out


def moyal_generator(spec: PotentialSpec, x, y, z: float, epsilon: float):
    """Full kick generator G(x, y, z) = [U(x+eps*y/2) - U(x-eps*y/2)]/eps.

    ``x`` and ``y`` may be broadcastable arrays (typically a column of
    positions against a row of spectral frequencies conjugate to p).  The
    shift expansion terminates at the polynomial degree, so the value is
    exact up to round-off.
    """
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise BeamPhaseError(f"epsilon must be positive and finite, got {epsilon}")
    j_max = spec.degree if spec.degree % 2 == 1 else spec.degree - 1
    if j_max < 1:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))
    return _shift_series(spec, x, y, z, epsilon, j_max)


def moyal_generator_truncated(
    spec: PotentialSpec, x, y, z: float, epsilon: float, max_order: int
):
    """Kick generator truncated at odd order ``max_order`` in the shift.

    ``max_order = 1`` is the classical Liouville generator and returns
    exactly ``eval_gradient(spec, x, z) * y``.
    """
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise BeamPhaseError(f"epsilon must be positive and finite, got {epsilon}")
    if isinstance(max_order, bool) or not isinstance(max_order, (int, np.integer)):
        raise BeamPhaseError(f"max_order must be an odd integer >= 1, got {max_order!r}")
    if max_order < 1 or max_order % 2 == 0:
        raise BeamPhaseError(f"max_order must be an odd integer >= 1, got {max_order}")
    j_max = spec.degree if spec.degree % 2 == 1 else spec.degree - 1
    j_max = min(j_max, int(max_order))
    if j_max < 1:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))
    return _shift_series(spec, x, y, z, epsilon, j_max)
