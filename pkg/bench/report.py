"""
HTML report of a benchmark table.

Four panels against the number of points, one line per method: mean solve
time, mean gap, mean share of points used and mean iteration count.
"""

from typing import Optional

import numpy as np
import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots


# Line colour per method; unknown methods fall back to grey.
METHOD_COLORS = {
    'exact': '#1F2937',
    'nm': '#2563EB',
    'em': '#16A34A',
    'dm': '#DC2626',
    'rs': '#9333EA',
}

PANELS = (
    ('time_ms', 'Mean time (ms)', 1, 1),
    ('gap', 'Mean gap', 1, 2),
    ('points_pct', 'Points used (%)', 2, 1),
    ('iterations', 'Iterations', 2, 2),
)


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Per-method, per-n means of the reported quantities.

    Error rows are left out; infinite gaps are left out of the gap mean.
    """
    data = frame[frame['status'] != 'Error'].copy()
    data['points_pct'] = 100.0 * data['points_used'] / data['n']
    data['gap'] = data['gap'].replace([np.inf, -np.inf], np.nan)
    return (
        data.groupby(['method', 'n'], sort=True)[['time_ms', 'gap', 'points_pct', 'iterations']]
        .mean()
        .reset_index()
    )


def build_report(frame: pd.DataFrame, title: Optional[str] = None) -> go.Figure:
    """Create the four-panel figure for a benchmark table."""
    summary = summarize(frame)
    fig = make_subplots(
        rows=2, cols=2,
        subplot_titles=tuple(label for _, label, _, _ in PANELS)
    )

    for method in dict.fromkeys(frame['method']):
        rows = summary[summary['method'] == method]
        color = METHOD_COLORS.get(method, '#808080')
        for k, (column, _, row, col) in enumerate(PANELS):
            fig.add_trace(
                go.Scatter(x=rows['n'], y=rows[column], name=method,
                           mode='lines+markers', line=dict(color=color),
                           legendgroup=method, showlegend=(k == 0)),
                row=row, col=col
            )

    fig.update_layout(height=700, showlegend=True, title_text=title or 'HRCP benchmark')
    fig.update_xaxes(title_text="Number of points")
    return fig


def write_report(frame: pd.DataFrame, destination: str, title: Optional[str] = None):
    """Write the benchmark report as a standalone HTML page."""
    build_report(frame, title).write_html(destination, include_plotlyjs='cdn')
