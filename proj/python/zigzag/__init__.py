"""Chaotic-map TRNG simulator: maps, orbit dynamics, density/Markov analysis,
post-processing and a NIST SP 800-22 subset battery, backed by the C++ core."""

from ._zigzag import *  # noqa: F401,F403
from ._zigzag import __version__  # noqa: F401
