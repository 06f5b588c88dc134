"""Beam state containers and constructors.

Three representations of the same transverse beam:

* :class:`WaveField` -- complex envelope Psi(x) of the thermal wave model,
  normalized so that integral |Psi|^2 dx = 1.
* :class:`QuasiDistribution` -- real phase-space density rho(x, p) on a
  :class:`~beamphase.grids.PhaseGrid`, unit mass; ``kind`` records whether
  it is a genuine (non-negative) classical density or a Wigner-type
  quasi-density that may go negative.
* :class:`RayEnsemble` -- Monte-Carlo sample of phase-space points.

All solvers assume periodic grids, so the constructors refuse grids on
which the state has not decayed to 1e-12 of its peak at the domain edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import GridError, SamplingError, StateError
from .grids import AxisGrid, PhaseGrid

__all__ = [
    "WaveField",
    "QuasiDistribution",
    "RayEnsemble",
    "RNG_ALGORITHM",
    "gaussian_wavefield",
    "superposition_wavefield",
    "gaussian_quasidist",
    "superposition_quasidist",
    "sample_rays",
]

# Relative boundary decay demanded of freshly constructed states.
BOUNDARY_DECAY = 1e-12

# Mass / norm agreement demanded of any state payload.
NORM_TOL = 1e-6

# Most negative value (relative to the peak) tolerated in a classical density.
CLASSICAL_FLOOR = 1e-9

# Negative-mass fraction above which ray sampling refuses the input.
SAMPLING_NEGATIVE_TOL = 1e-6

RNG_ALGORITHM = "pcg64"


def _frozen_array(obj, name, array):
    array.setflags(write=False)
    object.__setattr__(obj, name, array)


@dataclass(frozen=True)
class WaveField:
    """Complex beam envelope on an :class:`AxisGrid`.

    ``epsilon`` is the deformation scale (emittance-like, units of length)
    entering the transport equation
    ``i*eps*dPsi/dz = -(eps^2/2)*d2Psi/dx2 + U*Psi``.
    """

    grid: AxisGrid
    values: np.ndarray
    epsilon: float
    z: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).copy()
        if values.shape != (self.grid.n,):
            raise StateError(
                f"wavefield shape {values.shape} does not match grid ({self.grid.n},)"
            )
        if not np.all(np.isfinite(values.real)) or not np.all(np.isfinite(values.imag)):
            raise StateError("wavefield contains non-finite values")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise StateError(f"epsilon must be positive and finite, got {self.epsilon}")
        norm = np.sum(np.abs(values) ** 2) * self.grid.spacing
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"wavefield norm is {norm!r}, expected 1 within {NORM_TOL}")
        _frozen_array(self, "values", values)

    def density(self) -> np.ndarray:
        """|Psi(x)|^2 on the grid."""
        return np.abs(self.values) ** 2

    def with_values(self, values: np.ndarray, z: float) -> "WaveField":
        return WaveField(self.grid, values, self.epsilon, z)


@dataclass(frozen=True)
class QuasiDistribution:
    """Real phase-space density on a :class:`PhaseGrid`.

    ``kind`` is ``"classical"`` for genuine probability densities (checked
    non-negative up to round-off ringing) or ``"wigner"`` for quasi-densities
    that are allowed to go negative.
    """

    grid: PhaseGrid
    values: np.ndarray
    z: float = 0.0
    kind: str = "classical"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).copy()
        if values.shape != self.grid.shape:
            raise StateError(
                f"density shape {values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise StateError("density contains non-finite values")
        if self.kind not in ("classical", "wigner"):
            raise StateError(f"kind must be 'classical' or 'wigner', got {self.kind!r}")
        mass = float(np.sum(values)) * self.grid.cell_area
        if abs(mass - 1.0) > NORM_TOL:
            raise StateError(f"density mass is {mass!r}, expected 1 within {NORM_TOL}")
        if self.kind == "classical":
            floor = -CLASSICAL_FLOOR * max(1.0, float(values.max(initial=0.0)))
            if float(values.min()) < floor:
                raise StateError(
                    "classical density has negative values beyond round-off "
                    f"(min {values.min()!r})"
                )
        _frozen_array(self, "values", values)

    @property
    def mass(self) -> float:
        return float(np.sum(self.values)) * self.grid.cell_area

    def with_values(self, values: np.ndarray, z: float, kind: str | None = None) -> "QuasiDistribution":
        return QuasiDistribution(self.grid, values, z, kind or self.kind)


@dataclass(frozen=True)
class RayEnsemble:
    """Monte-Carlo sample of (x, p) phase-space points at a common z.

    ``clipped_mass`` records the fraction of (negative) density mass that was
    clipped before sampling; ``algorithm`` names the RNG for reproducibility.
    """

    positions: np.ndarray
    momenta: np.ndarray
    z: float = 0.0
    seed: int | None = None
    clipped_mass: float = 0.0
    algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float).copy()
        momenta = np.asarray(self.momenta, dtype=float).copy()
        if positions.ndim != 1 or positions.shape != momenta.shape:
            raise StateError("positions and momenta must be equal-length 1-d arrays")
        if positions.size < 1:
            raise StateError("ray ensemble must contain at least one ray")
        if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(momenta))):
            raise StateError("ray ensemble contains non-finite values")
        _frozen_array(self, "positions", positions)
        _frozen_array(self, "momenta", momenta)

    @property
    def count(self) -> int:
        return self.positions.size


def _check_boundary_decay(magnitudes: np.ndarray, what: str):
    peak = float(magnitudes.max())
    if peak <= 0.0:
        raise StateError(f"{what} is identically zero")
    edge = max(float(magnitudes[0]), float(magnitudes[-1]))
    if edge > BOUNDARY_DECAY * peak:
        raise GridError(
            f"grid too narrow for {what}: boundary level {edge / peak:.3e} of peak "
            f"exceeds {BOUNDARY_DECAY}"
        )


def gaussian_wavefield(
    grid: AxisGrid,
    sigma: float,
    epsilon: float,
    x0: float = 0.0,
    p0: float = 0.0,
    z: float = 0.0,
) -> WaveField:
    """Coherent Gaussian envelope with rms width sigma and mean momentum p0.

    Psi(x) is proportional to
    ``exp(-(x - x0)**2 / (4 sigma**2) + i p0 (x - x0) / epsilon)``,
    normalized on the grid.  The implied momentum spread is
    ``epsilon / (2 sigma)``, i.e. the minimum-uncertainty value.
    """
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise StateError(f"sigma must be positive and finite, got {sigma}")
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise StateError(f"epsilon must be positive and finite, got {epsilon}")
    x = grid.points()
    envelope = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2))
    _check_boundary_decay(envelope, "gaussian wavefield")
    values = envelope * np.exp(1j * p0 * (x - x0) / epsilon)
    values /= math.sqrt(float(np.sum(np.abs(values) ** 2)) * grid.spacing)
    return WaveField(grid, values, epsilon, z)


def superposition_wavefield(
    grid: AxisGrid,
    sigma: float,
    separation: float,
    epsilon: float,
    x0: float = 0.0,
    p0: float = 0.0,
    z: float = 0.0,
) -> WaveField:
    """Coherent superposition of two Gaussians with peak-to-peak separation."""
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise StateError(f"sigma must be positive and finite, got {sigma}")
    if not (math.isfinite(separation) and separation > 0.0):
        raise StateError(f"separation must be positive and finite, got {separation}")
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise StateError(f"epsilon must be positive and finite, got {epsilon}")
    x = grid.points()
    half = 0.5 * separation
    envelope = np.exp(-((x - x0 - half) ** 2) / (4.0 * sigma**2)) + np.exp(
        -((x - x0 + half) ** 2) / (4.0 * sigma**2)
    )
    _check_boundary_decay(envelope, "superposition wavefield")
    values = envelope * np.exp(1j * p0 * (x - x0) / epsilon)
    values /= math.sqrt(float(np.sum(np.abs(values) ** 2)) * grid.spacing)
    return WaveField(grid, values, epsilon, z)


def _bivariate_gaussian(grid, sigma_x, sigma_p, sigma_xp, x0, p0):
    det = sigma_x**2 * sigma_p**2 - sigma_xp**2
    if not (det > 0.0 and sigma_x > 0.0 and sigma_p > 0.0):
        raise StateError(
            "covariance matrix must be positive definite "
            f"(sigma_x={sigma_x}, sigma_p={sigma_p}, sigma_xp={sigma_xp})"
        )
    x, p = grid.meshes()
    dx = x - x0
    dp = p - p0
    quad = (sigma_p**2 * dx**2 - 2.0 * sigma_xp * dx * dp + sigma_x**2 * dp**2) / det
    return np.exp(-0.5 * quad)


def gaussian_quasidist(
    grid: PhaseGrid,
    sigma_x: float,
    sigma_p: float,
    sigma_xp: float = 0.0,
    x0: float = 0.0,
    p0: float = 0.0,
    z: float = 0.0,
    kind: str = "classical",
) -> QuasiDistribution:
    """Bivariate Gaussian density, normalized to unit mass on the grid."""
    values = _bivariate_gaussian(grid, sigma_x, sigma_p, sigma_xp, x0, p0)
    _check_boundary_decay(values.max(axis=1), "gaussian quasi-distribution (x axis)")
    _check_boundary_decay(values.max(axis=0), "gaussian quasi-distribution (p axis)")
    values /= float(np.sum(values)) * grid.cell_area
    return QuasiDistribution(grid, values, z, kind)


def superposition_quasidist(
    grid: PhaseGrid,
    sigma_x: float,
    sigma_p: float,
    separation: float,
    x0: float = 0.0,
    p0: float = 0.0,
    z: float = 0.0,
) -> QuasiDistribution:
    """Equal-weight two-peak Gaussian mixture (a non-negative density).

    This is the classical analogue of :func:`superposition_wavefield`: same
    peak locations, no interference fringes.
    """
    half = 0.5 * separation
    values = _bivariate_gaussian(grid, sigma_x, sigma_p, 0.0, x0 - half, p0)
    values = values + _bivariate_gaussian(grid, sigma_x, sigma_p, 0.0, x0 + half, p0)
    _check_boundary_decay(values.max(axis=1), "superposition quasi-distribution (x axis)")
    _check_boundary_decay(values.max(axis=0), "superposition quasi-distribution (p axis)")
    values /= float(np.sum(values)) * grid.cell_area
    return QuasiDistribution(grid, values, z, "classical")


def sample_rays(quasidist: QuasiDistribution, count: int, seed: int) -> RayEnsemble:
    """Draw a ray ensemble from a classical density.

    Negative grid values are clipped to zero before sampling and the clipped
    mass fraction is recorded on the ensemble; if that fraction exceeds
    1e-6 of the total (a Wigner-type state in disguise) the draw is refused.
    Sampling is exact for the piecewise-constant grid density: inverse CDF
    over cell masses, then a uniform jitter inside the selected cell.
    """
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 1:
        raise SamplingError(f"ray count must be a positive integer, got {count!r}")
    if quasidist.kind != "classical":
        raise SamplingError(
            "refusing to sample a wigner-kind quasi-distribution; "
            "sample a classical density instead"
        )
    values = quasidist.values
    clipped = np.clip(values, 0.0, None)
    total = float(values.sum())
    negative = float(clipped.sum()) - total
    if negative > SAMPLING_NEGATIVE_TOL * total:
        raise SamplingError(
            f"refusing to sample: negative mass fraction {negative / total:.3e} "
            f"exceeds {SAMPLING_NEGATIVE_TOL}"
        )
    rng = np.random.default_rng(seed)
    masses = (clipped / clipped.sum()).ravel()
    cdf = np.cumsum(masses)
    cdf[-1] = 1.0
    flat = np.searchsorted(cdf, rng.random(int(count)), side="right")
    ix, ip = np.unravel_index(flat, values.shape)
    x_axis = quasidist.grid.x_axis
    p_axis = quasidist.grid.p_axis
    x = x_axis.points()[ix] + (rng.random(int(count)) - 0.5) * x_axis.spacing
    p = p_axis.points()[ip] + (rng.random(int(count)) - 0.5) * p_axis.spacing
    return RayEnsemble(
        positions=x,
        momenta=p,
        z=quasidist.z,
        seed=int(seed),
        clipped_mass=negative / total,
    )
