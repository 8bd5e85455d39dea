#!/usr/bin/env python3
"""
Setup script for trace-rearrange.
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README
readme_path = Path(__file__).parent / "README.md"
long_description = readme_path.read_text() if readme_path.exists() else ""

setup(
    name="trace-rearrange",
    version="1.0.0",
    author="trace-rearrange developers",
    description="Seeded numerical verification and counterexample search for Schatten-norm and trace inequalities",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["trace_rearrange", "trace_rearrange.*"]),
    install_requires=[
        "numpy>=1.22.0",
        "scipy>=1.8.0",
        "PyYAML>=6.0",
    ],
    extras_require={
        "test": ["pytest>=7.4.0", "hypothesis>=6.80.0"],
    },
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "trace-rearrange=trace_rearrange.main:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    keywords="matrix analysis schatten norm trace inequality verification",
)
