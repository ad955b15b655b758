"""
Unit-fraction decompositions of 4/n
Identity families, divisor-pair split search, parametric search and a
reproducible sieve harness
"""

__version__ = "1.0.0"
