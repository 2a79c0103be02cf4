from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or a C compiler) the
# package installs pure-Python and uavcell.kernels falls back to numpy.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("uavcell.kernels._core", ["src/uavcell/kernels/_core.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
