import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: the compiled kernel must be arithmetic-identical to the
# pure-Python fallback (bit-reproducible counts), so FMA contraction is disabled.
extensions = [
    Extension(
        "photonfcs.trajectories._kernel_cy",
        ["src/photonfcs/trajectories/_kernel_cy.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
