"""Local regularity diagnostics for periodic incompressible flow fields.

Thin pure-python facade over the compiled ``_ckn`` extension. Installed
wheels carry the extension inside this package; in a plain CMake build tree
the extension sits next to the build outputs and is found on ``sys.path``
(the test harness points there via ``CKN_EXT_DIR``).
"""

try:
    from ._ckn import *  # noqa: F401,F403  (wheel layout)
    from ._ckn import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _ckn import *  # noqa: F401,F403
    from _ckn import __version__  # noqa: F401
