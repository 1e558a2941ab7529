"""Exception types raised across the package."""


class EarthquakeLabError(Exception):
    """Base class for every error raised by earthquake_lab."""


class DegenerateGeodesic(EarthquakeLabError, ValueError):
    pass


class DegenerateTriple(EarthquakeLabError, ValueError):
    pass


class OrientationMismatch(EarthquakeLabError, ValueError):
    pass


class GeodesicsCross(EarthquakeLabError, ValueError):
    pass


class DegenerateQuadruple(EarthquakeLabError, ValueError):
    pass


class DegenerateBox(EarthquakeLabError, ValueError):
    """A box with a point side. Its Liouville measure is 0 by convention."""

    def __init__(self, message, value=0.0):
        super().__init__(message)
        self.value = value


class NotLogTwoBox(EarthquakeLabError, ValueError):
    pass


class BudgetExhausted(EarthquakeLabError):
    """The search budget ran out. ``best`` holds the best result so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BasePointOnLeaf(EarthquakeLabError, ValueError):
    pass


class CrossingLeaves(EarthquakeLabError, ValueError):
    pass


class NotAnEarthquake(EarthquakeLabError, ValueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class BadExponent(EarthquakeLabError, ValueError):
    pass


class NonFinite(EarthquakeLabError, ValueError):
    pass


class OracleInconsistent(EarthquakeLabError, RuntimeError):
    pass


class WindowRequired(EarthquakeLabError, ValueError):
    pass


class ConfigError(EarthquakeLabError, ValueError):
    pass


class InputParseError(EarthquakeLabError, ValueError):
    pass
