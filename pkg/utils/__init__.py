"""
Utilities package for HRCP-Incremental.

This package contains the readers and writers for instance, label and
solution files.
"""

__all__ = []
