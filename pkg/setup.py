from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernel is used instead
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("ricci_stiefel._kernels", ["src/ricci_stiefel/_kernels.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
