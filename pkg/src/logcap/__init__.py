"""ℓ-adic invariants of number fields: logarithmic valuations and class groups, capitulation."""

__version__ = "0.1.0"
