"""Signalized-intersection simulator and signal-timing controller suite.

Thin wrapper over the C++ core. The installed wheel carries the extension
inside this package; a development checkout may have it on PYTHONPATH from
the CMake build tree instead.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # build-tree layout
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
