"""Spectral transforms between beam representations.

* :func:`momentum_wavefield` -- scaled Fourier transform
  ``Phi(p) = (2 pi eps)**-0.5 * integral Psi(x) exp(-i p x / eps) dx``.
* :func:`wigner_transform` -- phase-space quasi-density
  ``rho_w(x, p) = (pi eps)**-1 * integral Psi(x+s) Psi*(x-s) exp(-2 i p s / eps) ds``
  whose marginals are |Psi(x)|^2 and |Phi(p)|^2.
* :func:`tomogram` -- line-integral projection
  ``w(X; mu, nu) = integral rho(x, p) delta(X - mu x - nu p) dx dp``
  evaluated through the projection-slice identity.

The Wigner integral is discretized on the shift grid conjugate to the
requested momentum axis (``ds = pi * eps / p_length``), which makes the
p-integrated marginal identity hold to round-off by construction; the
x-integrated identity then holds whenever the momentum axis actually
resolves and covers the state, and is checked.
"""

from __future__ import annotations

import math

import numpy as np

from dataclasses import dataclass

from .exceptions import TransformError
from .grids import AxisGrid, PhaseGrid
from .states import QuasiDistribution, WaveField

__all__ = [
    "momentum_wavefield",
    "wigner_transform",
    "tomogram",
    "tomogram_axis",
    "Tomogram",
]

# Imaginary residue (relative to the output peak) tolerated when taking the
# real part of a nominally real spectral reconstruction.
REALNESS_TOL = 1e-10

MARGINAL_TOL = 1e-10


def momentum_wavefield(psi: WaveField, p_axis: AxisGrid | None = None) -> WaveField:
    """Momentum-representation field of a wavefield.

    Returns a :class:`WaveField` whose grid is the *momentum* axis; its
    ``values`` are ``Phi(p)`` and its density is the momentum distribution.
    With the default (conjugate) axis, ``p = eps * k`` with k the spectral
    frequencies of the input grid, Parseval holds to round-off.
    """
    grid = psi.grid
    eps = psi.epsilon
    if p_axis is None:
        p_axis = AxisGrid(grid.n, 2.0 * math.pi * eps / grid.spacing, 0.0)
    x = grid.points()
    p = p_axis.points()
    scale = grid.spacing / math.sqrt(2.0 * math.pi * eps)
    conjugate_length = 2.0 * math.pi * eps / grid.spacing
    if p_axis.n == grid.n and p_axis.length == conjugate_length:
        # Fast path: the requested axis is the conjugate grid up to a center
        # offset, so a single FFT plus phase ramps evaluates the sum exactly.
        ramp = np.exp(-1j * p[0] * x / eps)
        spectrum = np.fft.fft(psi.values * ramp)
        k = np.arange(grid.n)
        phase = np.exp(-2j * math.pi * k * (x[0] / grid.length))
        values = scale * spectrum * phase
    else:
        kernel = np.exp(-1j * np.outer(p, x) / eps)
        values = scale * (kernel @ psi.values)
    return WaveField(p_axis, values, eps, psi.z)


def wigner_transform(
    psi: WaveField, p_axis: AxisGrid, marginal_tol: float = MARGINAL_TOL
) -> QuasiDistribution:
    """Wigner quasi-density of a wavefield on ``(psi.grid, p_axis)``.

    The output is real (the imaginary residue is measured and discarded,
    error above ``1e-10`` of the peak) and carries unit mass inherited from
    the wavefield.  Raises :class:`TransformError` if the momentum axis is
    too coarse or too narrow for the marginal identity
    ``integral rho_w dx = |Phi(p)|**2`` to hold within ``marginal_tol``.
    """
    grid = psi.grid
    eps = psi.epsilon
    n_p = p_axis.n
    ds = math.pi * eps / p_axis.length
    # Shift samples in FFT index order: m = 0, 1, ..., -1 times ds.
    m = np.fft.fftfreq(n_p, d=1.0 / n_p)
    s = m * ds
    # On the periodic box the correlation Psi(x+s) Psi*(x-s) is genuine only
    # while the shifted copies stay clear of their periodic images; beyond
    # |s| = L/4 a state wider than half the box would fold onto itself, so
    # those rows (where a valid state has no correlation left anyway) are
    # dropped.  The unpaired -n/2 row goes too: it has no +s partner and
    # would break the Hermitian symmetry that makes the output real.  The
    # s = 0 row is always kept, so the p-marginal identity stays exact.
    keep = np.abs(s) <= 0.25 * grid.length
    keep[n_p // 2] = False
    s_kept = s[keep]
    k = grid.frequencies()
    spectrum = np.fft.fft(psi.values)
    # Psi(x + s) for every kept s, via the spectral shift theorem (rows: s).
    plus = np.fft.ifft(spectrum[None, :] * np.exp(1j * np.outer(s_kept, k)), axis=1)
    minus = np.fft.ifft(spectrum[None, :] * np.exp(-1j * np.outer(s_kept, k)), axis=1)
    p0 = p_axis.points()[0]
    corr = np.zeros((n_p, grid.n), dtype=complex)
    # exp(-2 i p s / eps) split into the first-point ramp and a pure DFT.
    corr[keep] = plus * np.conj(minus) * np.exp(-2j * p0 * s_kept / eps)[:, None]
    values = np.fft.fft(corr, axis=0) * (ds / (math.pi * eps))
    values = values.transpose()
    peak = float(np.abs(values.real).max())
    residue = float(np.abs(values.imag).max())
    if residue > REALNESS_TOL * peak:
        raise TransformError(
            f"wigner transform imaginary residue {residue:.3e} exceeds "
            f"{REALNESS_TOL} of peak {peak:.3e}"
        )
    values = np.ascontiguousarray(values.real)
    phase_grid = PhaseGrid(grid, p_axis)
    marginal_x = values.sum(axis=0) * grid.spacing
    reference = momentum_wavefield(psi, p_axis).density()
    defect = float(np.abs(marginal_x - reference).max())
    if defect > marginal_tol * max(1.0, float(reference.max())):
        raise TransformError(
            f"momentum axis too coarse or too narrow: marginal identity "
            f"defect {defect:.3e} exceeds tolerance"
        )
    return QuasiDistribution(phase_grid, values, psi.z, "wigner")


@dataclass(frozen=True)
class Tomogram:
    """Projection of a quasi-density onto X = mu*x + nu*p."""

    mu: float
    nu: float
    axis: AxisGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def mass(self) -> float:
        return float(self.values.sum()) * self.axis.spacing


def tomogram_axis(grid: PhaseGrid, mu: float, nu: float, n: int = 1024) -> AxisGrid:
    """Default output axis: the projection of the phase-space box."""
    length = abs(mu) * grid.x_axis.length + abs(nu) * grid.p_axis.length
    center = mu * grid.x_axis.center + nu * grid.p_axis.center
    return AxisGrid(n, length, center)


def tomogram(
    rho: QuasiDistribution, mu: float, nu: float, axis: AxisGrid | None = None
) -> Tomogram:
    """Line-integral projection w(X; mu, nu) of a phase-space density.

    Uses the projection-slice identity: the Fourier transform of w along X
    equals the two-dimensional transform of rho sampled along the ray
    ``(xi*mu, xi*nu)``, here evaluated by direct phase sums (a rotation plus
    spectral interpolation rather than histogram binning).  The projection
    inherits the mass of ``rho`` exactly; for (mu, nu) = (1, 0) or (0, 1) it
    reduces to the corresponding marginal.
    """
    if mu == 0.0 and nu == 0.0:
        raise TransformError("tomogram direction (mu, nu) must not be (0, 0)")
    if not (math.isfinite(mu) and math.isfinite(nu)):
        raise TransformError(f"tomogram direction must be finite, got ({mu}, {nu})")
    if axis is None:
        axis = tomogram_axis(rho.grid, mu, nu)
    x = rho.grid.x_axis.points()
    p = rho.grid.p_axis.points()
    # Frequencies conjugate to the output axis, FFT order.
    xi = axis.frequencies()
    # Discrete phase sums over the grid alias with period 2 pi / spacing in
    # each direction, so the slice is only trustworthy while the sampling ray
    # (xi mu, xi nu) stays inside the grid's own spectral band.  Outside it
    # the true transform of a resolved state has already decayed; evaluating
    # there would fold in spurious copies, so those slice samples are zero.
    band = np.abs(xi * mu) <= math.pi / rho.grid.x_axis.spacing
    band &= np.abs(xi * nu) <= math.pi / rho.grid.p_axis.spacing
    xi_band = xi[band]
    # slice(l) = sum_{x,p} rho * exp(-i xi_l (mu x + nu p)) dx dp
    phase_p = np.exp(-1j * np.outer(p, xi_band * nu))
    partial = rho.values @ phase_p
    phase_x = np.exp(-1j * np.outer(x, xi_band * mu))
    slice_values = np.zeros(axis.n, dtype=complex)
    slice_values[band] = (
        np.einsum("il,il->l", phase_x, partial) * rho.grid.cell_area
    )
    # Invert onto the requested axis: w(X_i) = (1/2 pi) integral e^{i xi X}.
    x_first = axis.points()[0]
    values = np.fft.ifft(slice_values * np.exp(1j * xi * x_first)) / axis.spacing
    peak = float(np.abs(values.real).max())
    residue = float(np.abs(values.imag).max())
    if peak > 0.0 and residue > REALNESS_TOL * peak:
        raise TransformError(
            f"tomogram imaginary residue {residue:.3e} exceeds "
            f"{REALNESS_TOL} of peak {peak:.3e}"
        )
    return Tomogram(float(mu), float(nu), axis, values.real)
