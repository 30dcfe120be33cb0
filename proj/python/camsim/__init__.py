"""Behavioral simulator for CAM-based Hamming-distance similarity search."""

from camsim._core import *  # noqa: F401,F403
from camsim._core import __doc__  # noqa: F401
