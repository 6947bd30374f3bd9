"""
Unit tests for sim-doa.
"""
