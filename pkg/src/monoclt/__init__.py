"""monoclt: exact statistics and simulation oracles for monochromatic
edge/triangle counts under uniformly random vertex colorings.

Subpackages:
    graph         graph type, edge-list I/O, family generators
    census        triangle census, pyramid counts, 4-cycle and 4-walk statistics
    moments       closed-form moments and CLT error-bound brackets
    fourthmoment  exact fourth-moment decomposition over configuration classes
    sim           Monte Carlo sampler, exhaustive enumeration, KS diagnostics
    cli           command-line front end
"""

__version__ = "0.1.0"

from .errors import MonocltError

__all__ = ["MonocltError", "__version__"]
