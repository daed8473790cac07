"""ndslab: exact verification toolkit for non-autonomous map sequences on
symbolic, finite, and rotational phase spaces."""

__version__ = "0.1.0"

from . import chaos, checkers, convergence, corpus, hitting, maps, ndsl, spaces  # noqa: F401
