"""Exception hierarchy shared by all modules."""


class WeylWalkError(Exception):
    """Base class for library errors."""


class ConfigError(WeylWalkError, ValueError):
    """Invalid input; the CLI maps these to exit code 2."""


class CapExceeded(WeylWalkError):
    """A configured resource cap was hit; the CLI maps these to exit code 3."""


class UnsupportedType(ConfigError):
    pass


class NotInRootSpan(ConfigError):
    pass


class NotMinuscule(ConfigError):
    pass


class NotDominant(ConfigError):
    pass


class DriftNotInterior(ConfigError):
    pass


class NonPositiveH(ConfigError):
    pass


class DegenerateWindow(ConfigError):
    pass


class NonStochasticRow(ConfigError):
    pass


class SingularPoint(ConfigError):
    pass


class SolveFailed(WeylWalkError):
    pass


class OrbitCapExceeded(CapExceeded):
    pass


class GroupCapExceeded(CapExceeded):
    pass


class StateCapExceeded(CapExceeded):
    pass
