"""Shell-model Hamiltonians to low-T-count Clifford+T circuits.

Thin re-export of the pybind11 core: DMRG ground/excited states, MPS
compression, staircase circuit compilation, KAK lowering, Clifford+T
synthesis and the overlap-bound analysis helpers.
"""

from tnprep._core import *  # noqa: F401,F403
from tnprep._core import __all__  # noqa: F401
