from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

# -ffp-contract=off keeps the compiled kernels bit-compatible with the
# NumPy fallback (no FMA contraction), which the backend-equivalence
# tests rely on.
ext = Extension(
    "swetbc._kernels_cy",
    ["src/swetbc/_kernels_cy.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3", "-ffp-contract=off"],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(
    ext_modules=cythonize([ext], compiler_directives={"language_level": "3"}),
)
