"""Exact engine for nilpotent Leibniz superalgebra families.

Builds the two-parameter families with characteristic sequence (n | m-1, 1),
verifies their defining identities and invariants over Q(i), and decides
isomorphism with machine-checked base-change witnesses.
"""

from .scalar import GaussianRational, Rational, kth_root, power_product

__all__ = ["GaussianRational", "Rational", "kth_root", "power_product"]
