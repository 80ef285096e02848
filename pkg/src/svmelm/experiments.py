"""The three evaluation protocols: single-domain, cross-domain source-only,
and cross-domain with a few labeled target samples.

Every split of every task draws from its own RNG stream keyed by
``(setting, task, split)`` so all methods see the same partition. Method
randomness (ELM hidden weights, LSSVM fold assignment) uses a separate stream
keyed by ``(setting, task, split, method)``. Results therefore do not depend
on the number of worker threads.
"""

import enum
import itertools
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from svmelm import classifiers as clf
from svmelm.dataio import (
    FOUR_DA_ABBREV,
    FOUR_DA_DOMAINS,
    FOUR_DA_SOURCE_PER_CLASS,
    FOUR_DA_TARGET_PER_CLASS,
    l2_normalize_rows,
)
from svmelm.exceptions import (
    EmptyDataset,
    InsufficientClassSize,
    InvalidConfig,
    LengthMismatch,
    SvmElmError,
)
from svmelm.kernels import KernelKind, KernelSpec
from svmelm.numerics import RngStream, stable_hash

log = logging.getLogger(__name__)

METHODS = ("nn", "svm", "lssvm", "elm", "kelm")
METHOD_LABELS = {"nn": "NN", "svm": "SVM", "lssvm": "LSSVM", "elm": "ELM", "kelm": "KELM"}
DOMAIN_LABELS = {"amazon": "Amazon", "dslr": "DSLR", "webcam": "Webcam", "caltech": "Caltech"}
# column order of the published cross-domain tables
FOUR_DA_TASKS = (
    ("amazon", "dslr"), ("caltech", "dslr"), ("webcam", "dslr"),
    ("amazon", "caltech"), ("webcam", "caltech"), ("dslr", "caltech"),
    ("dslr", "amazon"), ("webcam", "amazon"), ("caltech", "amazon"),
    ("caltech", "webcam"), ("dslr", "webcam"), ("amazon", "webcam"),
)
DEFAULT_SOURCE_PER_CLASS = 8


class Setting(enum.IntEnum):
    SINGLE_DOMAIN = 1
    CROSS_SOURCE_ONLY = 2
    CROSS_SOURCE_TARGET = 3


@dataclass(frozen=True)
class MethodParams:
    """Hyperparameters; defaults are the published per-method settings."""

    svm_c: float = 1000.0
    svm_sigma: float = 1.0
    svm_kernel: str = "rbf"
    lssvm_grid_c: tuple = clf.lssvm.GRID_C
    lssvm_grid_sigma: tuple = clf.lssvm.GRID_SIGMA
    lssvm_kernel: str = "rbf"
    lssvm_folds: int = clf.lssvm.CV_FOLDS
    elm_c: float = 100.0
    elm_L: int = 5000
    elm_activation: str = "sigmoid"
    kelm_c: float = 100.0
    kelm_sigma: float = 0.01
    kelm_kernel: str = "rbf"

    def kernel(self, method):
        kind = KernelKind(getattr(self, f"{method}_kernel"))
        if kind is KernelKind.LINEAR:
            return KernelSpec.linear()
        return KernelSpec.rbf(getattr(self, f"{method}_sigma"))


@dataclass(frozen=True)
class ExperimentConfig:
    setting: Setting
    methods: tuple = METHODS
    layer: str = "f6"
    splits: int = 20
    seed: int = 0
    # per-domain n_s/c; domains not listed use the 4DA table or DEFAULT_SOURCE_PER_CLASS
    source_per_class: dict = field(default_factory=dict)
    target_per_class: int = FOUR_DA_TARGET_PER_CLASS
    params: MethodParams = field(default_factory=MethodParams)
    normalize: bool = False
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "setting", Setting(self.setting))
        methods = tuple(self.methods)
        if not methods:
            raise InvalidConfig("at least one method is required", "methods")
        bad = [m for m in methods if m not in METHODS]
        if bad:
            raise InvalidConfig(f"unknown methods {bad}", "methods")
        object.__setattr__(self, "methods", methods)
        if self.splits < 1:
            raise InvalidConfig("must be >= 1", "splits")
        if self.target_per_class < 1:
            raise InvalidConfig("must be >= 1", "target_per_class")
        if self.threads < 1:
            raise InvalidConfig("must be >= 1", "threads")
        for dom, n in dict(self.source_per_class).items():
            if n < 1:
                raise InvalidConfig(f"{dom}: must be >= 1", "source_per_class")

    def source_count(self, domain):
        if domain in self.source_per_class:
            return self.source_per_class[domain]
        return FOUR_DA_SOURCE_PER_CLASS.get(domain, DEFAULT_SOURCE_PER_CLASS)


@dataclass(frozen=True)
class ResultCell:
    mean: float
    std: float
    runs: int


@dataclass
class ResultTable:
    setting: Setting
    layer: str
    methods: tuple
    columns: tuple  # display labels
    cells: dict  # (method, column) -> ResultCell, or None when failed
    diagnostics: list = field(default_factory=list)
    train_sizes: dict = field(default_factory=dict)  # column -> train rows per split

    def cell(self, method, column):
        return self.cells.get((method, column))

    @property
    def complete(self):
        return all(self.cells.get((m, c)) is not None for m in self.methods for c in self.columns)


# -- primitives ---------------------------------------------------------------

def stratified_split(labels, n_per_class, rng, min_test=0):
    """Sample ``n_per_class`` rows of every class for training; the rest is test.

    ``labels`` may also be a :class:`FeatureDataset`. Both index arrays are
    returned sorted. Every class needs ``n_per_class + min_test`` members.
    """
    labels = np.asarray(getattr(labels, "labels", labels)).ravel()
    if n_per_class < 0:
        raise InvalidConfig("must be >= 0", "n_per_class")
    gen = rng.generator()
    train = []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.shape[0] < n_per_class + min_test:
            raise InsufficientClassSize(
                f"class {cls} has {idx.shape[0]} rows, need {n_per_class + min_test}", cls
            )
        train.append(gen.choice(idx, size=n_per_class, replace=False))
    train = np.sort(np.concatenate(train)) if train else np.array([], dtype=np.int64)
    mask = np.ones(labels.shape[0], dtype=bool)
    mask[train] = False
    return train, np.flatnonzero(mask)


def accuracy(predicted, actual):
    predicted = np.asarray(predicted).ravel()
    actual = np.asarray(actual).ravel()
    if predicted.shape[0] != actual.shape[0]:
        raise LengthMismatch(f"{predicted.shape[0]} predictions for {actual.shape[0]} labels")
    if actual.shape[0] == 0:
        raise EmptyDataset("accuracy of an empty prediction set")
    return float(np.mean(predicted == actual))


def aggregate(per_split_accuracies):
    """Mean and population standard deviation."""
    a = np.asarray(per_split_accuracies, dtype=np.float64).ravel()
    if a.shape[0] == 0:
        raise EmptyDataset("no accuracies to aggregate")
    # statistics works in exact rationals, so equal inputs give std exactly 0
    vals = a.tolist()
    return ResultCell(statistics.fmean(vals), statistics.pstdev(vals), len(vals))


def fit_predict(method, X_train, y_train, X_test, params, rng):
    """Train one method and label ``X_test``."""
    if method == "nn":
        return clf.nn_predict(clf.nn_fit(X_train, y_train), X_test)
    if method == "svm":
        model = clf.svm_fit(X_train, y_train, params.kernel("svm"), params.svm_c)
        return clf.svm_predict(model, X_test)
    if method == "lssvm":
        model = clf.lssvm_fit_grid(
            X_train, y_train, rng,
            Cs=params.lssvm_grid_c, sigmas=params.lssvm_grid_sigma,
            kind=params.lssvm_kernel, n_folds=params.lssvm_folds,
        )
        return clf.lssvm_predict(model, X_test)
    if method == "elm":
        model = clf.elm_fit(
            X_train, y_train, L=params.elm_L, C=params.elm_c, rng=rng,
            activation=params.elm_activation,
        )
        return clf.elm_predict(model, X_test)
    if method == "kelm":
        model = clf.kelm_fit(X_train, y_train, params.kernel("kelm"), params.kelm_c)
        return clf.kelm_predict(model, X_test)
    raise InvalidConfig(f"unknown method {method!r}", "methods")


# -- protocols ----------------------------------------------------------------

@dataclass(frozen=True)
class Task:
    label: str
    source: str
    target: str  # equals source in Setting 1


@dataclass(frozen=True)
class Split:
    """Row indices of one train/test partition.

    ``source_train`` indexes the source domain; ``target_train`` and ``test``
    index the target domain (the same domain in Setting 1).
    """

    source_train: np.ndarray
    target_train: np.ndarray
    test: np.ndarray


def index_datasets(datasets):
    by_name = {}
    for ds in datasets:
        if ds.domain in by_name:
            raise InvalidConfig(f"duplicate domain {ds.domain!r}", "datasets")
        by_name[ds.domain] = ds
    if not by_name:
        raise InvalidConfig("no datasets given", "datasets")
    return by_name


def task_list(setting, domains):
    """Tasks in report column order: the published order for the four 4DA
    domains, lexicographic otherwise."""
    setting = Setting(setting)
    four_da = set(domains) == set(FOUR_DA_DOMAINS)
    if setting is Setting.SINGLE_DOMAIN:
        if four_da:
            return [Task(DOMAIN_LABELS[n], n, n) for n in FOUR_DA_DOMAINS]
        return [Task(n, n, n) for n in sorted(domains)]
    if four_da:
        return [Task(f"{FOUR_DA_ABBREV[s]}→{FOUR_DA_ABBREV[t]}", s, t) for s, t in FOUR_DA_TASKS]
    return [Task(f"{s}→{t}", s, t) for s, t in itertools.permutations(sorted(domains), 2)]


def split_rng(config, task, split):
    return RngStream(config.seed, stable_hash("split", int(config.setting), task.label, split))


def make_split(config, task, by_name, split):
    rng = split_rng(config, task, split)
    src = by_name[task.source]
    n_src = config.source_count(task.source)
    empty = np.array([], dtype=np.int64)
    if config.setting is Setting.SINGLE_DOMAIN:
        tr, te = stratified_split(src.labels, n_src, rng, min_test=1)
        return Split(tr, empty, te)
    tgt = by_name[task.target]
    tr, _ = stratified_split(src.labels, n_src, rng.substream("source"))
    if config.setting is Setting.CROSS_SOURCE_ONLY:
        return Split(tr, empty, np.arange(tgt.n))
    ttr, tte = stratified_split(
        tgt.labels, config.target_per_class, rng.substream("target"), min_test=1
    )
    return Split(tr, ttr, tte)


def split_arrays(split, task, by_name):
    """(X_train, y_train, X_test, y_test) for a :class:`Split`."""
    src, tgt = by_name[task.source], by_name[task.target]
    X = np.vstack([src.X[split.source_train], tgt.X[split.target_train]])
    y = np.concatenate([src.labels[split.source_train], tgt.labels[split.target_train]])
    return X, y, tgt.X[split.test], tgt.labels[split.test]


def _run_unit(config, task, split, by_name):
    """All methods on one split of one task: {method: accuracy or exception}."""
    try:
        X_tr, y_tr, X_te, y_te = split_arrays(make_split(config, task, by_name, split), task, by_name)
    except (SvmElmError, ValueError, ArithmeticError) as exc:
        return {m: exc for m in config.methods}, None
    out = {}
    for method in config.methods:
        rng = RngStream(
            config.seed, stable_hash("method", int(config.setting), task.label, split, method)
        )
        try:
            pred = fit_predict(method, X_tr, y_tr, X_te, config.params, rng)
            out[method] = accuracy(pred, y_te)
        except (SvmElmError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            out[method] = exc
    return out, (X_tr.shape[0], X_te.shape[0])


def run_protocol(config, datasets):
    """Run ``config.setting`` over ``datasets`` (one FeatureDataset per domain)."""
    by_name = index_datasets(datasets)
    if config.normalize:
        by_name = {k: replace(v, X=l2_normalize_rows(v.X)) for k, v in by_name.items()}
    if config.setting is not Setting.SINGLE_DOMAIN and len(by_name) < 2:
        raise InvalidConfig("cross-domain settings need at least two domains", "datasets")
    tasks = task_list(config.setting, by_name)
    units = [(t, r) for t in tasks for r in range(config.splits)]

    def work(unit):
        return _run_unit(config, unit[0], unit[1], by_name)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, units))
    else:
        results = [work(u) for u in units]

    cells, diagnostics, sizes = {}, [], {}
    for task in tasks:
        for method in config.methods:
            accs, errors = [], []
            for (t, r), (res, size) in zip(units, results):
                if t is not task:
                    continue
                value = res[method]
                if isinstance(value, Exception):
                    errors.append((r, value))
                else:
                    accs.append(value)
            if errors:
                r, exc = errors[0]
                cells[(method, task.label)] = None
                diagnostics.append(
                    f"{METHOD_LABELS[method]} {task.label}: {len(errors)} of {config.splits} "
                    f"splits failed; split {r}: {type(exc).__name__}: {exc}"
                )
            else:
                cells[(method, task.label)] = aggregate(accs)
        task_sizes = {s for (t, _), (_, s) in zip(units, results) if t is task and s}
        if task_sizes:
            sizes[task.label] = sorted(task_sizes)[0]
    return ResultTable(
        setting=config.setting,
        layer=config.layer,
        methods=config.methods,
        columns=tuple(t.label for t in tasks),
        cells=cells,
        diagnostics=diagnostics,
        train_sizes=sizes,
    )


def run_single_domain(config, datasets):
    return run_protocol(replace(config, setting=Setting.SINGLE_DOMAIN), datasets)


def run_cross_source_only(config, datasets):
    return run_protocol(replace(config, setting=Setting.CROSS_SOURCE_ONLY), datasets)


def run_cross_source_target(config, datasets):
    return run_protocol(replace(config, setting=Setting.CROSS_SOURCE_TARGET), datasets)
