import os

from setuptools import Extension, setup

ext_modules = []
pyx = os.path.join("src", "trackline", "_core.pyx")
if os.path.exists(pyx):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "trackline._core",
                    [pyx],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level="3",
        )
    except ImportError:
        # No Cython available; the package falls back to the NumPy kernels.
        ext_modules = []

setup(ext_modules=ext_modules)
