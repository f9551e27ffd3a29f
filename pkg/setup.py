"""Build script.  The compiled kernel is optional: if Cython or a C
compiler is unavailable the package installs pure Python and selects the
numpy backend at import time."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/torusdyn/_fastchain.pyx"], language_level="3"
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
