"""Exact computations with monoid valuations, supervaluations and totally
ordered supertropical semirings over small computable carriers."""

__version__ = "0.1.0"
