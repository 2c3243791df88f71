"""
SVG rendering of 2-D instances and clusterings.

Points are drawn as dots and every nonempty cluster box as an axis-parallel
rectangle. The viewport extends 5% beyond the data extremes on each axis.
All numbers are written with fixed precision so equal inputs give
byte-identical documents.
"""

from typing import Optional, Tuple

from model.errors import UnsupportedDimensionError
from model.geometry import Clustering, Instance
from utils.instance_io import Destination, text_stream


# Cluster colours, cycled by cluster index
CLUSTER_COLORS = (
    "#1F77B4",  # Blue
    "#FF7F0E",  # Orange
    "#2CA02C",  # Green
    "#D62728",  # Red
    "#9467BD",  # Purple
    "#8C564B",  # Brown
    "#E377C2",  # Pink
    "#17BECF",  # Cyan
)
UNASSIGNED_COLOR = "#808080"

CANVAS_SIZE = 600
POINT_RADIUS = 3.0
VIEW_PADDING = 0.05


class SvgCanvas:
    """Accumulates SVG elements in drawing order."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>\n',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n',
        ]

    def rectangle(self, x1: float, y1: float, x2: float, y2: float, stroke: str):
        self.parts.append(
            f'<rect x="{x1:.3f}" y="{y1:.3f}" width="{x2 - x1:.3f}" height="{y2 - y1:.3f}" '
            f'fill="{stroke}" fill-opacity="0.12" stroke="{stroke}" stroke-width="1.5"/>\n'
        )

    def circle(self, cx: float, cy: float, r: float, fill: str):
        self.parts.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.1f}" fill="{fill}"/>\n')

    def document(self) -> str:
        return "".join(self.parts) + "</svg>\n"


def _axis_range(low: float, high: float) -> Tuple[float, float]:
    """Padded data range of one axis; a flat axis gets half-width 0.5."""
    if high - low <= 0:
        return low - 0.5, high + 0.5
    pad = VIEW_PADDING * (high - low)
    return low - pad, high + pad


def plot_svg(
    instance: Instance,
    clustering: Optional[Clustering] = None,
    destination: Optional[Destination] = None,
) -> str:
    """
    Render a 2-D instance and optionally a clustering of it.

    Args:
        instance: Points to draw (d must be 2)
        clustering: Clustering whose nonempty boxes are drawn
        destination: Path or writable text stream (text is only returned when None)

    Returns:
        The SVG document

    Raises:
        UnsupportedDimensionError: If the instance is not 2-dimensional
    """
    if instance.d != 2:
        raise UnsupportedDimensionError(f"SVG plots need d == 2, got d == {instance.d}")

    x_low, x_high = _axis_range(float(instance.lo[0]), float(instance.hi[0]))
    y_low, y_high = _axis_range(float(instance.lo[1]), float(instance.hi[1]))
    size = float(CANVAS_SIZE)

    def to_canvas(x: float, y: float) -> Tuple[float, float]:
        # SVG y grows downwards
        return (
            (x - x_low) / (x_high - x_low) * size,
            (y_high - y) / (y_high - y_low) * size,
        )

    canvas = SvgCanvas(CANVAS_SIZE, CANVAS_SIZE)
    cluster_of = clustering.assignment if clustering is not None else {}

    if clustering is not None:
        for c, box in enumerate(clustering.boxes):
            if box is None:
                continue
            x1, y1 = to_canvas(box.l[0], box.r[1])
            x2, y2 = to_canvas(box.r[0], box.l[1])
            canvas.rectangle(x1, y1, x2, y2, CLUSTER_COLORS[c % len(CLUSTER_COLORS)])

    for index, (x, y) in enumerate(instance.points):
        cx, cy = to_canvas(x, y)
        cluster = cluster_of.get(index)
        color = UNASSIGNED_COLOR if cluster is None else CLUSTER_COLORS[cluster % len(CLUSTER_COLORS)]
        canvas.circle(cx, cy, POINT_RADIUS, color)

    text = canvas.document()
    if destination is not None:
        with text_stream(destination, "w") as out:
            out.write(text)
    return text
