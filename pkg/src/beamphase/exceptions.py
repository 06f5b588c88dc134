"""Exception taxonomy for beamphase.

Configuration problems (bad scenario files, bad CLI input) raise
:class:`ConfigError`, which the CLI maps to exit code 2.  Everything else
derives from :class:`BeamPhaseError` and maps to exit code 1.
"""


class BeamPhaseError(Exception):
    """Base class for all beamphase errors."""


class GridError(BeamPhaseError, ValueError):
    """Invalid grid construction (point count, length, coverage)."""


class StateError(BeamPhaseError, ValueError):
    """Invalid state payload: shape, normalization, finiteness, positivity."""


class SamplingError(BeamPhaseError, ValueError):
    """Ray sampling refused (negative mass, wrong kind, bad count)."""


class SolverError(BeamPhaseError, RuntimeError):
    """A propagation step violated one of its guards."""


class TransformError(BeamPhaseError, ValueError):
    """A spectral transform could not meet its contract."""


class ConfigError(BeamPhaseError, ValueError):
    """Scenario file or CLI input failed validation."""
