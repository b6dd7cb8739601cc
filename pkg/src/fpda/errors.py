"""Exception hierarchy shared by the fabric simulator."""


class FpdaError(Exception):
    """Base class for all simulator errors."""

    kind = "fpda"


class ConfigurationError(FpdaError):
    """A programming or wiring mistake, e.g. mixing fixed-point formats."""

    kind = "configuration"


class CapacityError(FpdaError):
    """A resource demand exceeds what a module or pool can hold."""

    kind = "capacity"

    def __init__(self, message, cm_kind=None, needed=None, available=None):
        super().__init__(message)
        self.cm_kind = cm_kind
        self.needed = needed
        self.available = available


class OccupancyError(FpdaError):
    """The fabric already holds an active configuration."""

    kind = "occupancy"


class FrameFormatError(FpdaError):
    """A signal frame does not match the active configuration."""

    kind = "frame"
