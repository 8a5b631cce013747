import os

from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or a C compiler) the
# package installs with the pure-Python fallback only.
try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    cython_directives = {
        "language_level": 3,
        "boundscheck": False,
        "wraparound": False,
        "cdivision": True,
        "initializedcheck": False,
    }
    ext_modules = cythonize(
        [
            Extension(
                "corrframes._ckernels",
                [os.path.join("src", "corrframes", "_ckernels.pyx")],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives=cython_directives,
    )

setup(ext_modules=ext_modules)
