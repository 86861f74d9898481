from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/tempowl/_refine_core.pyx", language_level=3, quiet=True
    )
except ImportError:
    # No Cython: install with the pure-Python refinement kernel only.
    ext_modules = []

setup(ext_modules=ext_modules)
