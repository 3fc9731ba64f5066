"""Dissipative Camassa-Holm solver in Lagrangian coordinates."""

try:
    from ._chdis import *  # noqa: F401,F403  (installed layout)
    from ._chdis import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension on PYTHONPATH
    from _chdis import *  # noqa: F401,F403
    from _chdis import __version__  # noqa: F401
