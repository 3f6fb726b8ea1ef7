"""Point set loading, validation, and canonical serialization.

Coordinates are always handled as 64-bit reals; fvecs input (32-bit floats on
disk) is widened on load so downstream tie behavior is reproducible.
"""

import csv
import hashlib
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels


@dataclass
class DatasetMeta:
    name: str = ""
    n: int = 0
    d: int = 0
    source_format: str = ""
    checksum: str = ""


@dataclass
class PointSet:
    """n x d coordinate matrix with optional per-point string labels."""

    coords: np.ndarray
    labels: Optional[list] = None
    meta: DatasetMeta = field(default_factory=DatasetMeta)

    def __post_init__(self):
        self.coords = np.ascontiguousarray(self.coords, dtype=np.float64)
        if self.coords.ndim != 2:
            raise ValueError("coords must be a 2-D array")
        n, d = self.coords.shape
        if n < 1 or d < 1:
            raise ValueError("need at least one point and one dimension")
        if not np.all(np.isfinite(self.coords)):
            raise ValueError("coordinates must be finite (no NaN or infinity)")
        if self.labels is not None:
            self.labels = [str(x) for x in self.labels]
            if len(self.labels) != n:
                raise ValueError("labels length does not match point count")
        self.meta.n = n
        self.meta.d = d

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]


def _checksum(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _parse_float(tok: str, row: int, col: int) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise ValueError(f"row {row}: column {col} is not a number: {tok!r}") from None
    if not np.isfinite(val):
        raise ValueError(f"row {row}: column {col} is not finite: {tok!r}")
    return val


def _looks_like_header(row) -> bool:
    for tok in row:
        try:
            float(tok)
        except ValueError:
            return True
    return False


def load_csv(path, label_column: Optional[str] = None, has_header: Optional[bool] = None,
             name: str = "") -> PointSet:
    """Load a CSV of float rows, optionally with one named label column.

    Header presence is auto-detected (any non-numeric cell in the first row)
    unless has_header is given. Malformed content reports the 1-based row.
    """
    with open(path, "rb") as f:
        raw = f.read()
    if not raw.strip():
        raise ValueError(f"{path}: empty file")
    rows = list(csv.reader(io.StringIO(raw.decode("utf-8"))))
    rows = [r for r in rows if r and any(tok.strip() for tok in r)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    if has_header is None:
        has_header = _looks_like_header(rows[0])
    header = None
    if has_header:
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: no data rows")
    label_idx = None
    if label_column is not None:
        if header is None:
            raise ValueError("label_column requires a header row")
        if label_column not in header:
            raise ValueError(f"label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)

    width = len(rows[0])
    coords = np.empty((len(rows), width - (1 if label_idx is not None else 0)))
    labels = [] if label_idx is not None else None
    for i, row in enumerate(rows):
        rownum = i + (2 if has_header else 1)
        if len(row) != width:
            raise ValueError(f"row {rownum}: expected {width} fields, got {len(row)}")
        k = 0
        for j, tok in enumerate(row):
            if j == label_idx:
                labels.append(tok.strip())
                continue
            coords[i, k] = _parse_float(tok.strip(), rownum, j + 1)
            k += 1
    meta = DatasetMeta(name=name or str(path), source_format="csv", checksum=_checksum(raw))
    return PointSet(coords, labels=labels, meta=meta)


def load_fvecs(path, name: str = "") -> PointSet:
    """Load little-endian fvecs records ([int32 d][d x float32]) widened to float64."""
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) == 0:
        raise ValueError(f"{path}: empty file")
    if len(raw) < 4:
        raise ValueError(f"{path}: truncated record")
    ints = np.frombuffer(raw, dtype="<i4")
    d = int(ints[0])
    if d <= 0:
        raise ValueError(f"{path}: non-positive dimension {d}")
    rec = d + 1
    if ints.shape[0] % rec != 0:
        raise ValueError(f"{path}: truncated record (file size not a multiple of {4 * rec})")
    table = ints.reshape(-1, rec)
    if not np.all(table[:, 0] == d):
        bad = int(np.argmax(table[:, 0] != d))
        raise ValueError(f"{path}: inconsistent dimension at record {bad + 1}")
    floats = np.frombuffer(raw, dtype="<f4").reshape(-1, rec)[:, 1:]
    coords = np.ascontiguousarray(floats, dtype=np.float64)
    if not np.all(np.isfinite(coords)):
        raise ValueError(f"{path}: coordinates must be finite (no NaN or infinity)")
    meta = DatasetMeta(name=name or str(path), source_format="fvecs", checksum=_checksum(raw))
    return PointSet(coords, meta=meta)


def save_csv(ps: PointSet, path) -> None:
    """Write the canonical CSV form: shortest round-trip decimals, header only with labels."""
    lines = []
    if ps.labels is not None:
        lines.append(",".join([f"c{j}" for j in range(ps.d)] + ["label"]))
        for i in range(ps.n):
            lines.append(",".join([repr(float(x)) for x in ps.coords[i]] + [ps.labels[i]]))
    else:
        for i in range(ps.n):
            lines.append(",".join(repr(float(x)) for x in ps.coords[i]))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def euclidean_distance(a, b) -> float:
    """Distance between two coordinate vectors, same arithmetic as the edge kernels."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    pts = np.ascontiguousarray(np.stack([a, b]))
    k = kernels.get_backend()
    return float(k.pair_dists(pts, np.asarray([0]), np.asarray([1]))[0])
