import re
from pathlib import Path
from setuptools import setup, find_packages

BASE_DIR = Path(__file__).parent
PACKAGE_VERSION = BASE_DIR / "src" / "mtcf" / "version.py"

def read_version() -> str:
    match = re.search(r"__version__\s*=\s*['\"]([^'\"]+)['\"]", PACKAGE_VERSION.read_text())
    if not match:
        raise RuntimeError("Unable to determine package version")
    return match.group(1)

setup(
    name="mtcf",
    version=read_version(),
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    install_requires=[
        "numpy>=1.22",
        "sympy>=1.13",
    ],
    extras_require={
        "test": ["pytest>=7"],
    },
    entry_points={
        'console_scripts': [
            'mtcf=mtcf:main',
        ],
    },
    description="Exact workbench for Grossman-Izumi modular data, condensation and fusion-ring identification",
    long_description=(BASE_DIR / "README.md").read_text(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
)
