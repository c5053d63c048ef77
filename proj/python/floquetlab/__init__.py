"""Kicked-rotor Floquet operators and quantum-chaos diagnostics.

The heavy lifting lives in the C++ extension ``_core``; this package re-exports
its surface. Works both as an installed wheel (extension inside the package)
and from a plain CMake build tree (extension as a top-level module on
``sys.path``).
"""

try:
    from floquetlab._core import *  # noqa: F401,F403
    from floquetlab._core import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
