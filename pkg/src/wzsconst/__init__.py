"""Exact (A,B)-weighted zero-sum constants over Z_m^r."""

__version__ = "0.1.0"
