"""Benchmark dataset registry, CSV ingestion, splits and synthetic sources.

Five tabular classification datasets are registered.  Snapshots ship with
the package so everything runs offline; :func:`fetch` re-downloads the four
UCI-hosted files into a local data directory for users who want pristine
copies.  File resolution order: explicit ``data_dir`` argument, then the
``MARK_ICA_DATA_DIR`` environment variable, then the bundled snapshot.

Splits are deliberately unshuffled (first 80% of rows train, rest test) so
results are reproducible from the raw files alone.
"""

import math
import os
import urllib.request
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

ENV_DATA_DIR = "MARK_ICA_DATA_DIR"
UCI_BASE_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases"


@dataclass(frozen=True)
class DatasetSpec:
    """Where a dataset lives and how to read it."""

    name: str
    train_file: str
    n_components: int
    test_file: str | None = None       # present only for pre-partitioned data
    header: bool = False
    label_column: int | str = -1       # index, or name when header is True
    drop_columns: tuple = ()
    label_map: dict = field(default_factory=dict)  # raw label -> class id
    expected_rows: int = 0             # data rows in train_file, for fetch verification
    expected_test_rows: int = 0
    fetch_paths: tuple = ()            # URL paths under the UCI base, "" = not fetchable


DATASETS = {
    "haberman": DatasetSpec(
        name="haberman",
        train_file="haberman.data",
        n_components=2,
        label_column=3,
        label_map={1: 0, 2: 1},        # 1 = survived 5+ years, 2 = died
        expected_rows=306,
        fetch_paths=("haberman/haberman.data",),
    ),
    "heart_failure": DatasetSpec(
        name="heart_failure",
        train_file="heart_failure_clinical_records_dataset.csv",
        n_components=2,
        header=True,
        label_column="DEATH_EVENT",
        expected_rows=299,
        fetch_paths=("00519/heart_failure_clinical_records_dataset.csv",),
    ),
    "parkinsons": DatasetSpec(
        name="parkinsons",
        train_file="parkinsons.data",
        n_components=8,
        header=True,
        label_column="status",
        drop_columns=("name",),
        expected_rows=195,
        fetch_paths=("parkinsons/parkinsons.data",),
    ),
    "breast_cancer": DatasetSpec(
        name="breast_cancer",
        train_file="breast_cancer.csv",
        n_components=16,
        header=True,
        label_column="target",
        expected_rows=569,
        fetch_paths=(),                # bundled snapshot only
    ),
    "spectf": DatasetSpec(
        name="spectf",
        train_file="SPECTF.train",
        test_file="SPECTF.test",
        n_components=43,
        label_column=0,
        expected_rows=80,
        expected_test_rows=187,
        fetch_paths=("spect/SPECTF.train", "spect/SPECTF.test"),
    ),
}

DATASET_ORDER = ("breast_cancer", "heart_failure", "haberman", "parkinsons", "spectf")


def _bundled_path(filename):
    return resources.files("mark_ica") / "_data" / filename


def resolve_file(filename, data_dir=None):
    """Locate a dataset file: data_dir, then $MARK_ICA_DATA_DIR, then bundled."""
    candidates = []
    if data_dir:
        candidates.append(os.path.join(data_dir, filename))
    env_dir = os.environ.get(ENV_DATA_DIR)
    if env_dir:
        candidates.append(os.path.join(env_dir, filename))
    for cand in candidates:
        if os.path.exists(cand):
            return cand
    bundled = _bundled_path(filename)
    if bundled.is_file():
        return str(bundled)
    searched = candidates + [str(bundled)]
    raise FileNotFoundError(
        f"dataset file {filename!r} not found (searched {searched}); "
        f"run `mark-ica fetch` to download it"
    )


def load_table(path, *, header=False, label_column=-1, drop_columns=(), label_map=None):
    """Parse one comma-separated numeric table into features and labels.

    Returns ``(X, y)`` with ``X`` float64 and ``y`` integer class ids.
    Malformed rows and non-numeric feature cells are reported with their
    1-based line number.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path) as fh:
        lines = [ln.rstrip("\n\r") for ln in fh]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: file is empty")

    start = 0
    names = None
    if header:
        names = [c.strip() for c in lines[0].split(",")]
        start = 1
    ncols = len(names) if names else len(lines[start].split(","))

    if isinstance(label_column, str):
        if names is None:
            raise ValueError("label_column by name requires a header")
        if label_column not in names:
            raise ValueError(f"{path}: no column named {label_column!r}")
        label_idx = names.index(label_column)
    else:
        label_idx = label_column % ncols
    drop_idx = set()
    for col in drop_columns:
        if isinstance(col, str):
            if names is None or col not in names:
                raise ValueError(f"{path}: no column named {col!r}")
            drop_idx.add(names.index(col))
        else:
            drop_idx.add(col % ncols)

    feats, labels = [], []
    for lineno, line in enumerate(lines[start:], start=start + 1):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != ncols:
            raise ValueError(
                f"{path}:{lineno}: expected {ncols} fields, found {len(cells)}"
            )
        row = []
        for j, cell in enumerate(cells):
            if j in drop_idx:
                continue
            if j == label_idx:
                continue
            try:
                row.append(float(cell))
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: non-numeric value {cell!r} in column {j}"
                ) from None
        try:
            raw = int(float(cells[label_idx]))
        except ValueError:
            raise ValueError(
                f"{path}:{lineno}: non-numeric label {cells[label_idx]!r}"
            ) from None
        if label_map:
            if raw not in label_map:
                raise ValueError(f"{path}:{lineno}: unexpected label {raw!r}")
            raw = label_map[raw]
        feats.append(row)
        labels.append(raw)

    X = np.array(feats, dtype=np.float64)
    y = np.array(labels, dtype=np.int64)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{path}: non-finite feature values")
    return X, y


def load_dataset(spec, data_dir=None):
    """Load a registered dataset.

    Returns
    -------
    (X_train, y_train), test
        ``test`` is ``(X_test, y_test)`` for pre-partitioned datasets and
        ``None`` otherwise (callers apply :func:`split_80_20`).
    """
    if isinstance(spec, str):
        spec = DATASETS[spec]
    kwargs = dict(
        header=spec.header,
        label_column=spec.label_column,
        drop_columns=spec.drop_columns,
        label_map=spec.label_map,
    )
    train = load_table(resolve_file(spec.train_file, data_dir), **kwargs)
    test = None
    if spec.test_file:
        test = load_table(resolve_file(spec.test_file, data_dir), **kwargs)
    return train, test


def split_80_20(X, y):
    """First 80% of rows for training, remainder for testing; no reordering."""
    X = np.asarray(X)
    y = np.asarray(y)
    n = len(X)
    if n != len(y):
        raise ValueError("X and y length mismatch")
    if n < 5:
        raise ValueError(f"need at least 5 rows to split, got {n}")
    cut = int(math.floor(0.8 * n))
    return (X[:cut], y[:cut]), (X[cut:], y[cut:])


SOURCE_KINDS = ("sine", "square", "sawtooth", "laplace")


def synth_sources(kinds, n_samples, seed):
    """Columns of standardized independent non-Gaussian signals.

    Waveform frequencies and phases (and laplace noise) come from a PRNG
    seeded with ``seed``, so the output is reproducible.  Every column is
    shifted and scaled to zero mean, unit variance.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    rng = np.random.default_rng(seed)
    t = np.arange(n_samples) / n_samples
    cols = []
    freqs = []
    for kind in kinds:
        # many well-separated cycles keep the empirical cross-moments near
        # zero, otherwise the waveforms are measurably dependent
        freq = rng.uniform(30.0, 200.0)
        while any(abs(freq - f) < 10.0 for f in freqs):
            freq = rng.uniform(30.0, 200.0)
        freqs.append(freq)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        if kind == "sine":
            s = np.sin(2.0 * np.pi * freq * t + phase)
        elif kind == "square":
            s = np.sign(np.sin(2.0 * np.pi * freq * t + phase))
        elif kind == "sawtooth":
            s = 2.0 * np.mod(freq * t + phase / (2.0 * np.pi), 1.0) - 1.0
        elif kind == "laplace":
            s = rng.laplace(size=n_samples)
        else:
            raise ValueError(f"unknown source kind {kind!r}; expected one of {SOURCE_KINDS}")
        s = s - s.mean()
        s = s / s.std()
        cols.append(s)
    return np.column_stack(cols)


def fetch(data_dir, base_url=UCI_BASE_URL, timeout=60):
    """Download the four UCI-hosted datasets and verify their row counts.

    The breast-cancer snapshot is bundled with the package and is not
    downloaded.  Returns the list of written file paths.
    """
    os.makedirs(data_dir, exist_ok=True)
    written = []
    for spec in DATASETS.values():
        files = [spec.train_file] + ([spec.test_file] if spec.test_file else [])
        expected = [spec.expected_rows, spec.expected_test_rows]
        for filename, url_path, want in zip(files, spec.fetch_paths, expected):
            url = f"{base_url}/{url_path}"
            dest = os.path.join(data_dir, filename)
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                payload = resp.read()
            text = payload.decode("utf-8")
            n_rows = sum(1 for ln in text.splitlines() if ln.strip())
            if spec.header:
                n_rows -= 1
            if n_rows != want:
                raise ValueError(
                    f"{url}: expected {want} data rows, got {n_rows}; refusing to write"
                )
            with open(dest, "w") as fh:
                fh.write(text)
            written.append(dest)
    return written
