"""Build the optional compiled tree kernel.

The package works without it: ``discomplex.learn`` falls back to a numpy
implementation when ``_tree_ext`` cannot be imported.
"""

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "discomplex.learn._tree_ext",
                ["src/discomplex/learn/_tree_ext.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no -ffast-math: split scores must match the numpy backend bit for bit
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
