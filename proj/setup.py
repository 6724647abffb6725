from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext_modules = [
    Pybind11Extension(
        "brokerlab._core",
        sources=[
            "python/src/bindings.cpp",
            "src/measure.cpp",
            "src/rho.cpp",
            "src/instances.cpp",
            "src/learners.cpp",
            "src/harness.cpp",
            "src/serialize.cpp",
            "src/config.cpp",
            "src/verify.cpp",
        ],
        include_dirs=["include", "vendor"],
        cxx_std=20,
    )
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
