"""Check that the version string is consistent.

The version string ends up in the package metadata, in the package itself
and in the documentation configuration. This script lists all of them and
exits with an error code if they don't all match.

"""

import sys
from pathlib import Path
import importlib.metadata

import spraycheck

if __name__ == "__main__":
    root = Path(__file__).absolute().parent.parent

    package_version = importlib.metadata.version("spraycheck")
    print(root / "setup.cfg", package_version)

    py_version = spraycheck.__version__
    print(spraycheck.__file__, py_version)

    docs = root / "docs"
    sys.path.append(str(docs))
    from conf import release

    print(docs / "conf.py", release)

    if not (package_version.strip() == py_version.strip() == release.strip()):
        sys.exit(1)
