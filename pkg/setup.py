"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so a missing compiler or Cython only costs speed.
"""

import os

from setuptools import Extension, setup

PYX = os.path.join("src", "forestvol", "_kernel.pyx")

ext_modules = []
if os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "forestvol._kernel",
                    [PYX],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
