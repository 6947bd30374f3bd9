"""
Integration tests for sim-doa.
"""
