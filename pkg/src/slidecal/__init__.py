"""Sliding-boundary minimal cones in the half-space.

Library for the weighted area functional J_alpha on triangulated surfaces
in {z >= 0}, the one- and two-dimensional sliding minimal cone catalogs,
paired-calibration verification, the pinched competitor family of the
half-T cone with its threshold sqrt(2/3), spherical-network checks, and a
projected-gradient minimizer under the sliding constraint.
"""

__version__ = "0.1.0"

from . import calib, compete, cones1d, cones2d, evolve, geom, spherenet
from .geom import Mesh, SlidingEnergy, energy, read_off, rotate_y, triangle_area, write_off

__all__ = [
    "__version__",
    "calib", "compete", "cones1d", "cones2d", "evolve", "geom", "spherenet",
    "Mesh", "SlidingEnergy", "energy", "read_off", "rotate_y",
    "triangle_area", "write_off",
]
