import numpy as np
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
                "modframe._kernels._jacobi",
                ["src/modframe/_kernels/_jacobi.pyx"],
                include_dirs=[np.get_include()],
            )
        ]
    )

setup(ext_modules=ext_modules)
