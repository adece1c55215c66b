"""Builds the optional compiled tracing kernel; the package works without it."""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QUADSTAB_NO_EXT", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("quadstab._trace", ["src/quadstab/_trace.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
