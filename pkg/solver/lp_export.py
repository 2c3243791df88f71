"""
Writer for the compact mixed-integer formulation in LP text format.

Variables (0-based indices):
    z_i_c  binary, point i assigned to cluster c
    l_t_c  lower bound of cluster c on coordinate t
    r_t_c  upper bound of cluster c on coordinate t

Rows:
    assign_i     sum_c z_i_c = 1
    lo_i_c_t     l_t_c + (max_t - x_it) z_i_c <= max_t
    hi_i_c_t     r_t_c + (min_t - x_it) z_i_c >= min_t
    cross_c_t    l_t_c - r_t_c <= 0

The objective minimises sum_c sum_t (r_t_c - l_t_c); every l and r variable
is bounded to [min_t, max_t].
"""

from typing import List, Optional, Tuple

from model.errors import ParameterError
from model.geometry import Instance
from utils.instance_io import Destination, text_stream, format_float


TERMS_PER_LINE = 8


def compact_model_size(n: int, p: int, d: int) -> Tuple[int, int]:
    """Number of (rows, variables) of the compact formulation."""
    return n + 2 * n * p * d + p * d, n * p + 2 * p * d


def _term(coefficient: float, variable: str) -> str:
    sign = "-" if coefficient < 0 else "+"
    return f"{sign} {format_float(abs(coefficient))} {variable}"


def _wrap(head: str, terms: List[str]) -> List[str]:
    """Split a long linear expression over continuation lines."""
    lines = []
    for start in range(0, len(terms), TERMS_PER_LINE):
        chunk = " ".join(terms[start:start + TERMS_PER_LINE])
        lines.append((head if start == 0 else "   ") + " " + chunk)
    return lines


def build_compact_model(instance: Instance, p: int) -> str:
    """
    Render the compact formulation of an instance as LP text.

    Args:
        instance: Points to cluster
        p: Number of clusters

    Returns:
        The model text
    """
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    n, d = instance.n, instance.d
    mins = [float(v) for v in instance.lo]
    maxs = [float(v) for v in instance.hi]
    points = instance.points

    lines = [
        f"\\ HRCP compact formulation: n={n} p={p} d={d}",
        "Minimize",
    ]
    objective = []
    for c in range(p):
        for t in range(d):
            objective.append(f"+ r_{t}_{c}")
            objective.append(f"- l_{t}_{c}")
    objective[0] = objective[0][2:]
    lines.extend(_wrap(" obj:", objective))

    lines.append("Subject To")
    for i in range(n):
        terms = [f"+ z_{i}_{c}" for c in range(p)]
        terms[0] = terms[0][2:]
        wrapped = _wrap(f" assign_{i}:", terms)
        wrapped[-1] += " = 1"
        lines.extend(wrapped)

    for i, x in enumerate(points):
        for c in range(p):
            for t in range(d):
                lines.append(
                    f" lo_{i}_{c}_{t}: l_{t}_{c} {_term(maxs[t] - x[t], f'z_{i}_{c}')}"
                    f" <= {format_float(maxs[t])}"
                )
                lines.append(
                    f" hi_{i}_{c}_{t}: r_{t}_{c} {_term(mins[t] - x[t], f'z_{i}_{c}')}"
                    f" >= {format_float(mins[t])}"
                )

    for c in range(p):
        for t in range(d):
            lines.append(f" cross_{c}_{t}: l_{t}_{c} - r_{t}_{c} <= 0")

    lines.append("Bounds")
    for c in range(p):
        for t in range(d):
            low, high = format_float(mins[t]), format_float(maxs[t])
            lines.append(f" {low} <= l_{t}_{c} <= {high}")
            lines.append(f" {low} <= r_{t}_{c} <= {high}")

    lines.append("Binary")
    binaries = [f"z_{i}_{c}" for i in range(n) for c in range(p)]
    lines.extend(_wrap("", binaries))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_compact_model(instance: Instance, p: int, destination: Optional[Destination] = None) -> str:
    """
    Write the compact formulation to a file and return its text.

    Args:
        instance: Points to cluster
        p: Number of clusters
        destination: Path or writable text stream (text is only returned when None)
    """
    text = build_compact_model(instance, p)
    if destination is not None:
        with text_stream(destination, "w") as out:
            out.write(text)
    return text
