"""Plain-text frame files.

Format (UTF-8, whitespace separated, ``#`` starts a comment line)::

    # generator: catalog:cube4
    4 3
    0.5 0.5 0.5
    ...

The first non-comment line is the header ``N d``; exactly N rows of d
decimal numbers follow.  Numbers are written with 17 significant digits so
that every double round-trips bit-exactly.
"""

import math
import re

import numpy as np

from .errors import FrameFileError, InvalidInputError
from .frame import Frame, as_frame

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?:inf|infinity|nan)", re.I)
_INT = re.compile(r"\d+")


def format_number(x):
    return format(float(x), ".17g")


def _parse_float(token, line):
    if not _NUMBER.fullmatch(token):
        raise FrameFileError(f"non-numeric token {token!r}", line)
    value = float(token)
    if not math.isfinite(value):
        raise FrameFileError(f"non-finite value {token!r}", line)
    return value


def parse_frame_file(text):
    header = None
    rows = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2 or not all(_INT.fullmatch(t) for t in tokens):
                raise FrameFileError(f"malformed header {line!r}, expected 'N d'", lineno)
            n, d = int(tokens[0]), int(tokens[1])
            if n < 1 or d < 1:
                raise FrameFileError(f"header needs N >= 1 and d >= 1, got {n} {d}", lineno)
            header = (n, d, lineno)
            continue
        n, d, _ = header
        if len(rows) >= n:
            raise FrameFileError(f"expected {n} rows, found more", lineno)
        if len(tokens) != d:
            raise FrameFileError(f"expected {d} values, found {len(tokens)}", lineno)
        rows.append(([_parse_float(t, lineno) for t in tokens], lineno))
    if header is None:
        raise FrameFileError("missing header line 'N d'", max(last_line, 1))
    n, d, header_line = header
    if len(rows) != n:
        raise FrameFileError(f"expected {n} rows, found {len(rows)}", max(last_line, 1))
    if n < d:
        raise FrameFileError(f"a frame needs N >= d, header says N={n}, d={d}", header_line)
    for values, lineno in rows:
        if not any(v != 0.0 for v in values):
            raise FrameFileError("zero vector", lineno)
    try:
        return Frame(np.array([v for v, _ in rows], dtype=np.float64))
    except InvalidInputError as exc:
        raise FrameFileError(str(exc), header_line) from exc


def write_frame_file(F, generator=None):
    F = as_frame(F)
    generator = generator or F.label or "unspecified"
    lines = ["# corrframes frame file", f"# generator: {generator}", f"{F.N} {F.d}"]
    lines += [" ".join(format_number(x) for x in row) for row in F.V]
    return "\n".join(lines) + "\n"


def read_frame(path):
    with open(path, encoding="utf-8") as fh:
        F = parse_frame_file(fh.read())
    return F.with_label(f"file:{path}")


def save_frame(F, path, generator=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_frame_file(F, generator))
