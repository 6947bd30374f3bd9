"""
Test fixtures for sim-doa.
"""
