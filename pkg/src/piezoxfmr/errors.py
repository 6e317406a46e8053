class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending key path."""


class NumericalError(RuntimeError):
    """A solver failed to converge or a search found nothing to converge to."""
