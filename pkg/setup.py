from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python kernels only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "causalat.kernels._ckernels",
                ["src/causalat/kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "embedsignature": True,
        },
    )

setup(ext_modules=ext_modules)
