"""Build script: compiles the optional simplex pivot kernel.

The extension is marked optional; if no C compiler (or Cython) is
available the install still succeeds and splitbin falls back to the
pure-Python kernel in splitbin._kernel_py.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "splitbin._speedups",
                ["src/splitbin/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
