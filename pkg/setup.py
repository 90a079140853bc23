"""Build the optional compiled core. Falls back to a pure install if Cython
or a C compiler is unavailable; ``sobker._pycore`` is then used at import."""
import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"sobker: compiled core disabled ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"sobker: compiled core disabled ({exc})", file=sys.stderr)


ext_modules = []
if os.environ.get("SOBKER_NO_EXT", "0") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sobker._core",
                    ["src/sobker/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-fopenmp"],
                    extra_link_args=["-fopenmp"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"sobker: compiled core disabled ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
