"""
Tests package for HRCP-Incremental.
"""
