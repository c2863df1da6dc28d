"""Exception types raised by the simulation and analysis pipeline."""


class OpticsError(Exception):
    """Base class for errors raised by this package."""


class SamplingError(OpticsError):
    """The grid cannot faithfully represent the requested field or fringes."""


class GeometryError(OpticsError):
    """Inputs refer to incompatible grids or out-of-range geometry."""


class DemodulationError(OpticsError):
    """Carrier and baseband spectral lobes cannot be separated."""


class UnreliableLoopError(OpticsError):
    """A winding-number loop passed through a region with no usable phase."""


class ConfigError(OpticsError):
    """A scenario configuration is malformed or inconsistent."""
