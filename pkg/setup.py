"""Build script: compiles the optional Metropolis-Hastings stepper extension.

The package is fully functional without the extension (a pure-Python
mirror of the kernel is selected at import time), so compilation
failures degrade gracefully instead of aborting the install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"levicat: skipping compiled kernel ({exc}); "
                  "pure-Python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"levicat: skipping {ext.name} ({exc}); "
                  "pure-Python backend will be used")


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - build environment dependent
        return []
    ext = Extension(
        "levicat._kernels._mh",
        ["src/levicat/_kernels/_mh.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off keeps the compiled arithmetic bit-identical to
        # the pure-Python mirror (no fused multiply-add contraction).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
