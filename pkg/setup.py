import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

ext_modules = [
    Extension(
        "mfir._conv_ext",
        ["src/mfir/_conv_ext.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffast-math"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level=3))
