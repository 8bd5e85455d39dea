"""
trace-rearrange - numerical verification of Schatten-norm rearrangement and
trace inequalities.

This package provides spectral primitives, a registry of inequality checkers,
seeded random matrix ensembles, a counterexample hunter and a CLI harness
that runs verification suites and writes machine-readable reports.
"""

__version__ = "1.0.0"
__author__ = "trace-rearrange developers"
__description__ = "Trace-rearrange - seeded verification and counterexample search for matrix trace inequalities"
