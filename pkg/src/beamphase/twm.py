"""Split-step spectral solver for the thermal wave model.

Advances i eps dPsi/dz = -(eps^2/2) d^2Psi/dx^2 + U(x, z) Psi by Strang
splitting: a half potential phase, the exact kinetic flow in the spectral
variable k conjugate to x, and a second half potential phase.  The scaled
emittance eps plays the role hbar has in quantum mechanics and is read from
the wavefield itself, never from configuration.

The potential ordering here is the mirror image of the drift ordering in
the phase-space grid solver; both are second order in dz, so cross-solver
disagreement is pure splitting error and shrinks by four when dz is halved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import BeamMoments, moments_of
from .exceptions import BeamPhaseError, SolverError
from .phasespace import StepPlan, _as_count
from .potentials import ConstantProfile, PotentialSpec, eval_potential
from .states import WaveField

__all__ = [
    "TwmTrajectory",
    "step_twm",
    "evolve_twm",
    "matched_width",
    "free_gaussian_sigma",
]


@dataclass(frozen=True)
class TwmTrajectory:
    """Wavefield evolution record: moments every step, fields at snapshots."""

    snapshots: tuple[WaveField, ...]
    snapshot_steps: tuple[int, ...]
    moments: tuple[BeamMoments, ...]

    @property
    def final(self) -> WaveField:
        return self.snapshots[-1]


class _TwmKernel:
    """Spectral phases for repeated steps of one plan on one grid."""

    def __init__(self, psi: WaveField, spec: PotentialSpec, plan: StepPlan):
        self.spec = spec
        self.plan = plan
        self.epsilon = psi.epsilon
        self.x = psi.grid.points()
        k = psi.grid.frequencies()
        kinetic_angle = 0.5 * self.epsilon * k**2 * plan.dz
        guard = float(kinetic_angle.max())
        if guard >= math.pi:
            raise SolverError(
                f"kinetic phase overflow: max |eps k^2 dz / 2| = {guard:.3e} >= pi "
                "(the complex exponential would alias); reduce dz or refine the grid"
            )
        self.kinetic_phase = np.exp(-1j * kinetic_angle)
        self.static = all(isinstance(profile, ConstantProfile) for _, profile in spec.terms)
        self._cached_half = None

    def _half_potential(self, z_mid: float):
        if self.static and self._cached_half is not None:
            return self._cached_half
        if self.spec.degree < 0:
            half = None
        else:
            u = eval_potential(self.spec, self.x, z_mid)
            half = np.exp(-1j * u * (0.5 * self.plan.dz / self.epsilon))
        if self.static:
            self._cached_half = half
        return half

    def apply(self, psi: np.ndarray, z: float) -> np.ndarray:
        half = self._half_potential(z + 0.5 * self.plan.dz)
        if half is not None:
            psi = psi * half
        psi = np.fft.ifft(np.fft.fft(psi) * self.kinetic_phase)
        if half is not None:
            psi = psi * half
        if not np.isfinite(psi).all():
            raise SolverError("wavefield became non-finite during a step")
        return psi


def step_twm(psi: WaveField, spec: PotentialSpec, plan: StepPlan) -> WaveField:
    """Advance a wavefield by one Strang step of size ``plan.dz``.

    The potential is sampled at the step midpoint for both half phases.
    The kinetic phase at the largest wavenumber must stay below pi, else a
    :class:`SolverError` is raised.  The norm is preserved to round-off.
    """
    kernel = _TwmKernel(psi, spec, plan)
    values = kernel.apply(psi.values.astype(complex), psi.z)
    return WaveField(psi.grid, values, psi.epsilon, psi.z + plan.dz)


def evolve_twm(
    psi: WaveField,
    spec: PotentialSpec,
    plan: StepPlan,
    snapshot_every: int | None = None,
) -> TwmTrajectory:
    """Advance ``plan.n_steps`` steps, recording moments and snapshots.

    Same recording contract as the phase-space solver: moments at every
    step including the initial one, full fields at the snapshot cadence
    plus the initial and final states, ``n_steps = 0`` is the identity.
    """
    if snapshot_every is None:
        snapshot_every = max(plan.n_steps, 1)
    snapshot_every = _as_count(snapshot_every, "snapshot_every", 1)
    kernel = _TwmKernel(psi, spec, plan)
    values = psi.values.astype(complex)
    snapshots = [psi]
    snapshot_steps = [0]
    moments = [moments_of(psi)]
    for step in range(1, plan.n_steps + 1):
        try:
            values = kernel.apply(values, psi.z + (step - 1) * plan.dz)
        except SolverError as exc:
            raise SolverError(f"step {step}/{plan.n_steps}: {exc}") from None
        current = WaveField(psi.grid, values, psi.epsilon, psi.z + step * plan.dz)
        moments.append(moments_of(current))
        if step % snapshot_every == 0 or step == plan.n_steps:
            snapshots.append(current)
            snapshot_steps.append(step)
    return TwmTrajectory(tuple(snapshots), tuple(snapshot_steps), tuple(moments))


def matched_width(spec: PotentialSpec, epsilon: float) -> float:
    """Equilibrium width sqrt(eps / (2 sqrt(K))) of a linear lens U = K x^2 / 2.

    Requires a z-independent focusing term: the x^2 coefficient must be a
    positive constant and no higher power may be present.
    """
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise BeamPhaseError(f"epsilon must be positive and finite, got {epsilon!r}")
    if spec.degree > 2:
        raise BeamPhaseError("matched width is defined only for a linear lens (degree 2)")
    term = {power: profile for power, profile in spec.terms}.get(2)
    if term is None or not isinstance(term, ConstantProfile):
        raise BeamPhaseError("matched width needs a constant x^2 focusing term")
    k_strength = 2.0 * term(0.0)
    if k_strength <= 0.0:
        raise BeamPhaseError(f"lens is not focusing: K = {k_strength!r}")
    return math.sqrt(epsilon / (2.0 * math.sqrt(k_strength)))


def free_gaussian_sigma(sigma0: float, epsilon: float, z: float) -> float:
    """Width of a free coherent Gaussian: sigma0 sqrt(1 + (eps z / 2 sigma0^2)^2)."""
    if not (math.isfinite(sigma0) and sigma0 > 0.0):
        raise BeamPhaseError(f"sigma0 must be positive and finite, got {sigma0!r}")
    spread = epsilon * z / (2.0 * sigma0**2)
    return sigma0 * math.sqrt(1.0 + spread * spread)
