"""
Test package for unitfrac
"""
