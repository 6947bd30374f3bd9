"""
Test suite for sim-doa.
"""
