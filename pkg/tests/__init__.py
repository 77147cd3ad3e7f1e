"""
Test suite for cskit.
"""
