import os

from setuptools import Extension, setup

# The edit-distance kernel is compiled with Cython when possible; altkit.align
# falls back to a pure-Python kernel at import time if the extension is missing.
# Set ALTKIT_NO_EXT=1 to skip the extension build entirely.
ext_modules = []
if os.environ.get("ALTKIT_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "altkit._align_core",
                    sources=["src/altkit/_align_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
