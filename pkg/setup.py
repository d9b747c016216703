from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install still works: chaos_lab.kernels falls back to the
    # numpy reference implementation when the extension is absent.
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "chaos_lab.kernels._fast",
                ["src/chaos_lab/kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
