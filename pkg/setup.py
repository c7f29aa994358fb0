"""Builds the optional compiled count kernels; the package works without them."""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("QCOUNTSIM_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "qcountsim.pathcount._kernels",
                    ["src/qcountsim/pathcount/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
