"""Feature datasets: CSV and DCF1 readers/writers and a synthetic domain generator.

DCF1 layout (little-endian)::

    b"DCF1" | N: uint32 | d: uint32 | labels: N x int32 | features: N*d x float32, row-major

Features are stored as float32 and widened to float64 on load.
"""

import csv
import io
import math
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from svmelm.exceptions import (
    BadMagic,
    CountMismatch,
    DimensionMismatch,
    EmptyDataset,
    InvalidConfig,
    ParseError,
    RaggedRows,
    TruncatedFile,
    UnknownLabel,
)
from svmelm.numerics import RngStream, stable_hash

MAGIC = b"DCF1"
HEADER = struct.Struct("<4sII")

# per-domain sizes and per-class training counts of the 4DA benchmark
FOUR_DA_DOMAINS = ("amazon", "dslr", "webcam", "caltech")
FOUR_DA_ABBREV = {"amazon": "A", "dslr": "D", "webcam": "W", "caltech": "C"}
FOUR_DA_SIZES = {"amazon": 958, "dslr": 157, "webcam": 295, "caltech": 1123}
FOUR_DA_SOURCE_PER_CLASS = {"amazon": 20, "dslr": 8, "webcam": 8, "caltech": 8}
FOUR_DA_TARGET_PER_CLASS = 3
FOUR_DA_CLASSES = 10
FOUR_DA_DIM = 4096

LAYERS = ("f6", "f7", "raw")


@dataclass(frozen=True)
class FeatureDataset:
    name: str
    domain: str
    layer: str
    X: np.ndarray
    labels: np.ndarray = field(repr=False)

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise EmptyDataset(f"{self.name}: need N >= 1 and d >= 1, got shape {X.shape}")
        if labels.shape[0] != X.shape[0]:
            raise DimensionMismatch(f"{self.name}: {X.shape[0]} rows but {labels.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise ParseError(f"{self.name}: non-finite feature values")
        if labels.min() < 1:
            raise UnknownLabel(f"{self.name}: labels must be positive integers")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    @property
    def classes(self):
        return np.unique(self.labels)

    def class_counts(self):
        cls, counts = np.unique(self.labels, return_counts=True)
        return dict(zip(cls.tolist(), counts.tolist()))

    def equals(self, other):
        return (
            np.array_equal(self.labels, other.labels)
            and self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
        )


def parse_stem(path):
    """Split ``amazon_f6.dcf1`` into ``("amazon", "f6")``; layer defaults to ``raw``."""
    stem = Path(path).stem
    m = re.fullmatch(r"(.+)_(f6|f7|raw)", stem)
    if m:
        return m.group(1), m.group(2)
    return stem, "raw"


def _meta(path):
    domain, layer = parse_stem(path)
    return Path(path).stem, domain, layer


def _parse_label(text, row):
    try:
        value = float(text)
    except ValueError:
        raise UnknownLabel(f"label {text!r} is not an integer", row=row, column=1) from None
    if not value.is_integer() or value < 1:
        raise UnknownLabel(f"label {text!r} must be a positive integer", row=row, column=1)
    return int(value)


def load_csv(path, labeled=True):
    """Read ``label,f1,...,fd`` rows (or ``f1,...,fd`` with ``labeled=False``).

    Accepts LF or CRLF line endings; blank lines are skipped. Rows and columns
    in error messages are 1-based.
    """
    with open(path, newline="") as fh:
        text = fh.read()
    labels, rows = [], []
    width = None
    for row_no, rec in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not rec or all(not f.strip() for f in rec):
            continue
        fields = rec[1:] if labeled else rec
        if width is None:
            width = len(fields)
            if width < 1:
                raise ParseError("row has no feature fields", row=row_no)
        elif len(fields) != width:
            raise RaggedRows(
                f"expected {width} feature fields, found {len(fields)}", row=row_no
            )
        if labeled:
            labels.append(_parse_label(rec[0].strip(), row_no))
        values = []
        for col, f in enumerate(fields, start=2 if labeled else 1):
            try:
                values.append(float(f))
            except ValueError:
                raise ParseError(f"cannot parse {f!r} as a number", row=row_no, column=col) from None
            if not math.isfinite(values[-1]):
                raise ParseError(f"non-finite value {f!r}", row=row_no, column=col)
        rows.append(values)
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")
    X = np.array(rows, dtype=np.float64)
    if not labeled:
        return X
    name, domain, layer = _meta(path)
    return FeatureDataset(name, domain, layer, X, np.array(labels, dtype=np.int64))


def save_csv(dataset, path):
    """Write one ``label,f1,...,fd`` line per row, shortest round-trip float repr."""
    with open(path, "w", newline="") as fh:
        for lab, row in zip(dataset.labels, dataset.X):
            fh.write(",".join([str(int(lab))] + [repr(float(v)) for v in row]))
            fh.write("\n")


def save_binary(dataset, path):
    n, d = dataset.X.shape
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, n, d))
        fh.write(dataset.labels.astype("<i4").tobytes())
        fh.write(dataset.X.astype("<f4").tobytes())


def load_binary(path):
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"{path}: not a DCF1 file (magic {data[:4]!r})")
    if len(data) < HEADER.size:
        raise TruncatedFile(f"{path}: header is {len(data)} bytes, need {HEADER.size}")
    _, n, d = HEADER.unpack_from(data)
    if n < 1 or d < 1:
        raise CountMismatch(f"{path}: header declares N={n}, d={d}")
    expected = HEADER.size + 4 * n + 4 * n * d
    if len(data) < expected:
        raise TruncatedFile(f"{path}: {len(data)} bytes, header N={n}, d={d} needs {expected}")
    if len(data) > expected:
        raise CountMismatch(f"{path}: {len(data) - expected} trailing bytes after N={n}, d={d}")
    labels = np.frombuffer(data, dtype="<i4", count=n, offset=HEADER.size).astype(np.int64)
    X = np.frombuffer(data, dtype="<f4", count=n * d, offset=HEADER.size + 4 * n)
    name, domain, layer = _meta(path)
    return FeatureDataset(name, domain, layer, X.astype(np.float64).reshape(n, d), labels)


def load_dataset(path):
    """Load by extension: ``.csv`` as CSV, anything else as DCF1."""
    if str(path).lower().endswith(".csv"):
        return load_csv(path)
    return load_binary(path)


def load_features(path):
    """Unlabeled query matrix: CSV of features only, or the features of a DCF1 file."""
    if str(path).lower().endswith(".csv"):
        return load_csv(path, labeled=False)
    return load_binary(path).X


def l2_normalize_rows(X):
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return X / np.where(norms > 0, norms, 1.0)


def generate_synthetic_domains(n_domains, n_classes, d, per_class_counts, shift_magnitude,
                               seed, center_spread=None, blob_std=1.0):
    """Gaussian-blob domains sharing class centers up to a per-domain affine shift.

    Domain 0 draws class k around center ``mu_k``. Domain j > 0 uses
    ``s_j * mu_k + t_j`` where ``t_j`` has norm ``shift_magnitude`` in a random
    direction and ``s_j`` is a per-coordinate scale in [0.8, 1.2]. With
    ``shift_magnitude == 0`` every domain uses the unperturbed centers.

    ``per_class_counts`` is an int (all domains) or one int per domain.
    Centers are drawn with per-coordinate std ``center_spread``, default
    ``4 / sqrt(d)``, which keeps the typical distance between class centers
    near 5.7 blob widths whatever the dimension.
    """
    if n_domains < 1:
        raise InvalidConfig("must be positive", "n_domains")
    if n_classes < 2:
        raise InvalidConfig("need at least two classes", "n_classes")
    if d < 1:
        raise InvalidConfig("must be positive", "d")
    if not shift_magnitude >= 0:
        raise InvalidConfig("must be non-negative", "shift_magnitude")
    counts = per_class_counts
    if np.isscalar(counts):
        counts = [int(counts)] * n_domains
    counts = [int(c) for c in counts]
    if len(counts) != n_domains:
        raise InvalidConfig(f"expected {n_domains} counts, got {len(counts)}", "per_class_counts")
    if min(counts) < 1:
        raise InvalidConfig("counts must be positive", "per_class_counts")

    if center_spread is None:
        center_spread = 4.0 / math.sqrt(d)
    root = RngStream(seed, stable_hash("synthetic", n_domains, n_classes, d))
    centers = root.substream("centers").generator().normal(0.0, center_spread, size=(n_classes, d))
    out = []
    for j in range(n_domains):
        gen = root.substream("domain", j).generator()
        if j == 0 or shift_magnitude == 0:
            mu = centers
        else:
            direction = gen.normal(size=d)
            direction /= np.linalg.norm(direction)
            scale = gen.uniform(0.8, 1.2, size=d)
            mu = centers * scale + shift_magnitude * direction
        labels = np.repeat(np.arange(1, n_classes + 1), counts[j])
        X = mu[labels - 1] + gen.normal(0.0, blob_std, size=(labels.shape[0], d))
        # float32 round so that in-memory data equals its DCF1 round trip
        X = X.astype(np.float32).astype(np.float64)
        name = f"synth{j}"
        out.append(FeatureDataset(name, name, "raw", X, labels))
    return out


def domain_file(data_dir, domain, layer):
    return Path(data_dir) / f"{domain}_{layer}.dcf1"


def find_domain_files(data_dir, layer):
    """Dataset files for one layer in ``data_dir``.

    Returns ``(kind, [(domain, path), ...])``: ``"4da"`` in Table order when
    any of the four 4DA file names is present (missing ones still listed so
    the caller can name them), otherwise ``"synthetic"`` in lexicographic order.
    """
    data_dir = Path(data_dir)
    four = [(dom, domain_file(data_dir, dom, layer)) for dom in FOUR_DA_DOMAINS]
    if any(p.exists() for _, p in four):
        return "4da", four
    found = sorted(data_dir.glob(f"*_{layer}.dcf1")) + sorted(data_dir.glob(f"*_{layer}.csv"))
    return "synthetic", sorted((parse_stem(p)[0], p) for p in found)
