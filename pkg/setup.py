import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QUADTOPE_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "quadtope.homology._reduce",
                    ["src/quadtope/homology/_reduce.pyx"],
                    include_dirs=[np.get_include()],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
