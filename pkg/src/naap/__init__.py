"""Accuracy prediction for NAS candidates on the NAAP-440e table.

Scheme features, dataset splits, a regression suite, monotonicity-aware
metrics and a budgeted feature-subset search, plus a reporting harness.
"""

__version__ = "0.1.0"
