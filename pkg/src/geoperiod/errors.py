"""Exception taxonomy shared across modules.

ConfigError marks bad user input (CLI exit code 2); NumericalError marks
a computation that could not be carried out at the requested accuracy or
budget (CLI exit code 3).  Hypothesis failures are ordinary results, not
exceptions: callers inspect report objects and the CLI maps them to exit
code 1.
"""


class ConfigError(ValueError):
    """Invalid configuration value, key, or file."""


class NumericalError(ValueError):
    """Computation exceeded a budget or failed to reach requested accuracy."""
