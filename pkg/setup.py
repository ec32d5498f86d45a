from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: the pure-Python kernel is used
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("adelab._zeta_fast", ["src/adelab/_zeta_fast.pyx"], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
