"""
File formats for instances, ground-truth labels and solutions.

Instance files are UTF-8 text:

    hrcp 1
    <n> <d>
    <x_1> ... <x_d>        (n rows)

Lines starting with '#' and blank lines are ignored. Coordinates are written
with Python's shortest round-trip float representation, so reading a written
instance reproduces every coordinate bit for bit. Labels files start with
'hrcp-labels 1' followed by one 0-based integer per line. Solutions are JSON
objects with keys p, span, clusters and boxes, in that order.
"""

from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union
import io
import json
import math

from model.errors import InstanceParseError
from model.geometry import ClusterBox, Clustering, Instance


INSTANCE_MAGIC = ("hrcp", "1")
LABELS_MAGIC = ("hrcp-labels", "1")

Destination = Union[str, Path, io.TextIOBase]


@contextmanager
def text_stream(target, mode: str):
    """Yield a text stream for a path or pass an open stream through."""
    if hasattr(target, "write" if mode == "w" else "read"):
        yield target
    else:
        with open(target, mode, encoding="utf-8", newline="\n" if mode == "w" else None) as handle:
            yield handle


def _content_lines(text: str) -> Tuple[List[Tuple[int, List[str]]], int]:
    """Split text into (line number, tokens) pairs, skipping comments and blanks."""
    lines = text.splitlines()
    content = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        content.append((number, stripped.split()))
    return content, len(lines)


def _read_text(source) -> str:
    """
    Whole text of a path or readable stream.

    Raises:
        InstanceParseError: If a file is not valid UTF-8 (line of the first bad byte)
    """
    if hasattr(source, "read"):
        try:
            return source.read()
        except UnicodeDecodeError as exc:
            raise InstanceParseError(f"invalid UTF-8: {exc.reason}")
    raw = Path(source).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = raw[:exc.start].count(b"\n") + 1
        raise InstanceParseError(f"invalid UTF-8 byte 0x{raw[exc.start]:02x}", line=line)


def format_float(value: float) -> str:
    """Shortest round-trip decimal rendering of a float."""
    return repr(float(value))


def write_instance(instance: Instance, destination: Destination):
    """
    Write an instance file.

    Args:
        instance: Instance to write
        destination: Path or writable text stream
    """
    with text_stream(destination, "w") as out:
        out.write(f"{INSTANCE_MAGIC[0]} {INSTANCE_MAGIC[1]}\n")
        out.write(f"{instance.n} {instance.d}\n")
        for point in instance.points:
            out.write(" ".join(format_float(v) for v in point) + "\n")


def parse_instance(text: str) -> Instance:
    """
    Parse the text of an instance file.

    Raises:
        InstanceParseError: On a malformed header, a wrong coordinate count,
            a non-numeric or non-finite value, or a row count mismatch
    """
    content, line_count = _content_lines(text)
    if not content:
        raise InstanceParseError("empty instance file", line=max(line_count, 1))

    number, tokens = content[0]
    if tuple(tokens) != INSTANCE_MAGIC:
        raise InstanceParseError(f"expected header 'hrcp 1', found '{' '.join(tokens)}'", line=number)

    if len(content) < 2:
        raise InstanceParseError("missing '<n> <d>' line", line=line_count)
    number, tokens = content[1]
    try:
        n, d = (int(t) for t in tokens)
    except ValueError:
        raise InstanceParseError(f"expected '<n> <d>', found '{' '.join(tokens)}'", line=number)
    if n < 1 or d < 1:
        raise InstanceParseError(f"n and d must be positive, found n={n} d={d}", line=number)

    rows = content[2:]
    if len(rows) < n:
        raise InstanceParseError(f"expected {n} rows, found {len(rows)}", line=line_count)
    if len(rows) > n:
        raise InstanceParseError(f"unexpected row beyond the declared {n}", line=rows[n][0])

    points = []
    for number, tokens in rows:
        if len(tokens) != d:
            raise InstanceParseError(f"expected {d} coordinates, found {len(tokens)}", line=number)
        try:
            values = [float(t) for t in tokens]
        except ValueError:
            raise InstanceParseError(f"non-numeric coordinate in '{' '.join(tokens)}'", line=number)
        if not all(math.isfinite(v) for v in values):
            raise InstanceParseError("coordinates must be finite", line=number)
        points.append(values)

    return Instance(points)


def read_instance(source) -> Instance:
    """
    Read an instance file.

    Args:
        source: Path or readable text stream
    """
    return parse_instance(_read_text(source))


def write_labels(labels: Sequence[int], destination: Destination):
    """Write a ground-truth labels file."""
    with text_stream(destination, "w") as out:
        out.write(f"{LABELS_MAGIC[0]} {LABELS_MAGIC[1]}\n")
        for label in labels:
            out.write(f"{int(label)}\n")


def read_labels(source, n: Optional[int] = None) -> List[int]:
    """
    Read a ground-truth labels file.

    Args:
        source: Path or readable text stream
        n: Expected number of labels (not checked when None)
    """
    content, line_count = _content_lines(_read_text(source))
    if not content or tuple(content[0][1]) != LABELS_MAGIC:
        line = content[0][0] if content else max(line_count, 1)
        raise InstanceParseError("expected header 'hrcp-labels 1'", line=line)

    labels = []
    for number, tokens in content[1:]:
        if len(tokens) != 1:
            raise InstanceParseError("expected one label per line", line=number)
        try:
            label = int(tokens[0])
        except ValueError:
            raise InstanceParseError(f"non-integer label '{tokens[0]}'", line=number)
        if label < 0:
            raise InstanceParseError(f"negative label {label}", line=number)
        labels.append(label)

    if n is not None and len(labels) != n:
        raise InstanceParseError(f"expected {n} labels, found {len(labels)}", line=line_count)
    return labels


def solution_to_dict(clustering: Clustering) -> dict:
    """JSON-ready dictionary of a clustering, keys in file order."""
    return {
        "p": clustering.p,
        "span": clustering.span,
        "clusters": [list(members) for members in clustering.clusters],
        "boxes": [
            None if box is None else {"l": list(box.l), "r": list(box.r)}
            for box in clustering.boxes
        ],
    }


def write_solution(clustering: Clustering, destination: Destination):
    """Write a solution JSON file."""
    with text_stream(destination, "w") as out:
        json.dump(solution_to_dict(clustering), out, indent=2)
        out.write("\n")


def read_solution(source) -> Clustering:
    """
    Read a solution JSON file.

    Raises:
        InstanceParseError: If the document lacks a field or is inconsistent
    """
    with text_stream(source, "r") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InstanceParseError(f"invalid JSON: {exc.msg}", line=exc.lineno)

    try:
        p = int(document["p"])
        clusters = [tuple(int(i) for i in members) for members in document["clusters"]]
        boxes = [
            None if box is None else ClusterBox(tuple(box["l"]), tuple(box["r"]))
            for box in document["boxes"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceParseError(f"malformed solution document: {exc}")
    if len(clusters) != len(boxes):
        raise InstanceParseError("clusters and boxes differ in length")
    return Clustering(p=p, clusters=tuple(clusters), boxes=tuple(boxes))
