import os
import sys

# CMake runs the smoke tests before installation: CKN_EXT_DIR points at the
# directory holding the compiled _ckn extension, CKN_PKG_DIR at python/ so
# that `import cknlab` resolves to the source package.
for var in ("CKN_EXT_DIR", "CKN_PKG_DIR"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)
