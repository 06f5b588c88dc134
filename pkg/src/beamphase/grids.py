"""Uniform periodic grids and the scaled-coordinate context.

All solvers in this package work on FFT-ready axes: ``n`` a power of two,
points covering ``[center - length/2, center + length/2)`` with the right
edge open, and an implied spectral axis of spacing ``2*pi/length``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import GridError

__all__ = [
    "AxisGrid",
    "PhaseGrid",
    "ScaleContext",
    "make_axis_grid",
    "to_scaled",
    "from_scaled",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class AxisGrid:
    """Uniform periodic axis.

    Parameters
    ----------
    n : int
        Number of points, a power of two, at least 8.
    length : float
        Domain length (positive). The grid covers
        ``[center - length/2, center + length/2)``.
    center : float, optional
        Domain midpoint.
    """

    n: int
    length: float
    center: float = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise GridError(f"axis point count must be an integer, got {self.n!r}")
        if self.n < 8 or not _is_power_of_two(int(self.n)):
            raise GridError(
                f"axis point count must be a power of two >= 8, got {self.n}"
            )
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise GridError(f"axis length must be positive and finite, got {self.length}")
        if not math.isfinite(self.center):
            raise GridError(f"axis center must be finite, got {self.center}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "center", float(self.center))

    @property
    def spacing(self) -> float:
        return self.length / self.n

    def points(self) -> np.ndarray:
        """Grid points, ascending; the right domain edge is excluded."""
        return self.center - 0.5 * self.length + self.spacing * np.arange(self.n)

    def frequencies(self) -> np.ndarray:
        """Angular frequencies of the conjugate spectral axis, FFT order.

        Spacing is ``2*pi/length`` and the extreme value is ``-pi/spacing``.
        """
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)


def make_axis_grid(n: int, length: float, center: float = 0.0) -> AxisGrid:
    """Build an :class:`AxisGrid`; see the class for the validation rules."""
    return AxisGrid(n, length, center)


@dataclass(frozen=True)
class PhaseGrid:
    """Tensor product of a position axis and a momentum axis.

    Grid functions are stored as arrays of shape ``(x_axis.n, p_axis.n)``
    with x along rows.
    """

    x_axis: AxisGrid
    p_axis: AxisGrid

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x_axis.n, self.p_axis.n)

    @property
    def cell_area(self) -> float:
        return self.x_axis.spacing * self.p_axis.spacing

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable (column x, row p) coordinate arrays."""
        return self.x_axis.points()[:, None], self.p_axis.points()[None, :]


@dataclass(frozen=True)
class ScaleContext:
    """Reference beam width and deformation scale for coordinate scaling.

    ``eta = epsilon / (2 * sigma0)`` is the dimensionless deformation
    parameter; scaled coordinates are ``x / (2 * sigma0)`` for both the
    transverse coordinate and the propagation distance.
    """

    sigma0: float
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma0) and self.sigma0 > 0.0):
            raise GridError(f"sigma0 must be positive and finite, got {self.sigma0}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise GridError(f"epsilon must be positive and finite, got {self.epsilon}")

    @property
    def eta(self) -> float:
        return self.epsilon / (2.0 * self.sigma0)


def to_scaled(value, context: ScaleContext):
    """Map a physical length-like coordinate (x or z) to scaled units.

    Works elementwise on scalars and arrays.
    """
    return value / (2.0 * context.sigma0)


def from_scaled(value, context: ScaleContext):
    """Inverse of :func:`to_scaled`."""
    return value * (2.0 * context.sigma0)
