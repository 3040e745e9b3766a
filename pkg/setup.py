import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("AFFQ_NO_CYTHON", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("affq._ckernels", ["src/affq/_ckernels.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
