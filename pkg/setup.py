"""Build script.

The enumeration kernels compile to a C extension when Cython and a C
compiler are available.  Both are optional: the package falls back to the
pure-Python kernels at import time, so a failed extension build must not
fail the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    return cythonize(
        [Extension("mmskit._kernels", ["src/mmskit/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )


class optional_build_ext(build_ext):
    """Degrade to the pure-Python backend when compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "warning: building the mmskit._kernels extension failed (%s); "
            "the pure-Python kernels will be used instead" % exc,
            file=sys.stderr,
        )


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
