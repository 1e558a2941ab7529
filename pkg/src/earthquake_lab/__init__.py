"""Earthquakes, measured laminations and their norms on the hyperbolic plane."""

from .boxes import LOG2, OMEGA0, Q_STAR, Q_STAR_0, GeodesicBox, liouville, minimal_box
from .earthquake import CircleMap, FiniteEarthquake, PiecewiseMobius, build_earthquake, extract_measure
from .hyp_core import BoundaryPoint, Geodesic, dp, hp, hyperbolic_translation, mobius_from_triples
from .infinitesimal import dot_E, fd_check, tail_report
from .laminations import BandLamination, DiscreteLamination, SumLamination, box_sup, thurston_norm

__version__ = "0.1.0"

__all__ = [
    "LOG2", "OMEGA0", "Q_STAR", "Q_STAR_0", "GeodesicBox", "liouville", "minimal_box",
    "CircleMap", "FiniteEarthquake", "PiecewiseMobius", "build_earthquake", "extract_measure",
    "BoundaryPoint", "Geodesic", "dp", "hp", "hyperbolic_translation", "mobius_from_triples",
    "dot_E", "fd_check", "tail_report",
    "BandLamination", "DiscreteLamination", "SumLamination", "box_sup", "thurston_norm",
]
