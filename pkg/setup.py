"""Build script for the optional compiled sampling kernel.

The package is fully functional without the extension; ``redsim.oracle``
falls back to the pure-Python kernel when the compiled one is missing.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Try to build the accelerator; install pure-Python on any failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain, ...
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        warnings.warn(
            f"compiled sampler unavailable ({exc}); "
            "redsim will use the pure-Python fallback kernel"
        )


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not installed; building without the compiled sampler")
        return []
    return cythonize(
        [Extension("redsim._sampler_cy", ["src/redsim/_sampler_cy.pyx"])],
        language_level="3",
    )


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
