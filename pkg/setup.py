"""Builds the optional compiled chain-sampling kernel.

If Cython (or a C compiler) is unavailable the package still installs and
falls back to the pure-Python kernel at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "qmc._chain_cy",
                ["src/qmc/_chain_cy.pyx"],
                # -ffp-contract=off keeps the float ops identical to the
                # pure-Python fallback (no FMA contraction), so both
                # backends produce bit-identical results.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
