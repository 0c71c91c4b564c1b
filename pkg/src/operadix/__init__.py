"""operadix: exact computations with dg operads and conilpotent curved cooperads."""

__version__ = "0.1.0"
