"""Exact and certified tools for trinomial by t-nomial systems, their
univariate fewnomial reduction, Wronskian bounds and real dessins."""

__version__ = "0.1.0"
