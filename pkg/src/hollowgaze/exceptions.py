"""Exception hierarchy. Everything derives from ValueError so callers can catch broadly."""


class HollowGazeError(ValueError):
    pass


class GeometryError(HollowGazeError):
    """Input outside the domain of a geometric construction."""


class ModelError(HollowGazeError):
    """The perceptual model is undefined for the given inputs."""


class DesignError(HollowGazeError):
    """A template cannot be built from the requested design."""


class ConfigError(HollowGazeError):
    """A configuration file or mapping failed validation."""
