"""
Plotting module for HRCP-Incremental.

Renders 2-D instances and their cluster boxes as SVG documents.
"""

from .svg_plot import CLUSTER_COLORS, SvgCanvas, plot_svg

__all__ = [
    'CLUSTER_COLORS',
    'SvgCanvas',
    'plot_svg'
]
