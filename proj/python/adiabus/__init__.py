"""Simulator for adiabatic quantum data buses on J1-J2, XXZ and XYZ spin chains."""

from ._adiabus import *  # noqa: F401,F403
from ._adiabus import AdiabusError, __version__

CARDINAL_BLOCH = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
