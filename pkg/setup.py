"""Build script for the compiled fusion kernels.

The extension is optional: when Cython (or a C compiler) is unavailable the
package falls back to the pure-Python kernels in ``eprm._pykernels`` at
import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "eprm._ckernels",
                ["src/eprm/_ckernels.pyx"],
                # -ffp-contract=off keeps float results bit-identical to the
                # pure-Python kernels, which the parity tests rely on.
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
