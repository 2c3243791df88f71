"""
Instance generation module for HRCP-Incremental.

Provides the seeded synthetic generator with ground-truth labels.
"""

from .instance_gen import GenParams, GeneratedInstance, generate, labels_to_clustering

__all__ = ['GenParams', 'GeneratedInstance', 'generate', 'labels_to_clustering']
