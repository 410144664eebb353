"""Kernelization, branching search and HAC filtering for AtMost-NValue constraints."""

from .instance_io import ParseError, parse_instance, serialize_instance
from .kernel import KernelResult, apply_reduction_rules, kernelize, lift_solution
from .model import Instance, Interval, VarDomain, canonicalize, count_holes, sort_intervals
from .propagate import PropagationResult, enforce_hac, has_support
from .solver import Verdict, min_hitting_oracle, solve, solve_fpt

__version__ = "0.1.0"
