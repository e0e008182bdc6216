"""Exception types shared by configuration loading and validation."""


class ConfigError(Exception):
    """A configuration value violates a documented constraint.

    ``field`` names the offending entry so CLI users can find it without
    reading a traceback.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class ScenarioFormatError(ConfigError):
    """A scenario document could not be parsed at all."""


class UnknownReferenceError(ConfigError):
    """A scenario names an aircraft or constellation that is not defined."""
