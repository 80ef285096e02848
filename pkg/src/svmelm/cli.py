"""Command-line front end: ``svmelm {bench,synth,convert,train,predict}``.

Exit codes: 0 success, 1 configuration or I/O error, 2 benchmark finished with
failed cells.
"""

import argparse
import shlex
import sys
import time
from pathlib import Path

import numpy as np

from svmelm import BACKEND, __version__
from svmelm import classifiers as clf
from svmelm.dataio import (
    find_domain_files,
    generate_synthetic_domains,
    l2_normalize_rows,
    load_binary,
    load_csv,
    load_dataset,
    load_features,
    save_binary,
    save_csv,
)
from svmelm.exceptions import InvalidConfig, SvmElmError
from svmelm.experiments import METHODS, ExperimentConfig, MethodParams, accuracy, run_protocol
from svmelm.kernels import KernelKind, KernelSpec
from svmelm.numerics import RngStream
from svmelm.report import render_chart, render_table

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2
DEFAULTS = MethodParams()


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def _header(command, resolved):
    """Reproducibility header: version, backend and the fully resolved command line."""
    parts = ["svmelm", command]
    for flag, value in resolved:
        if value is True:
            parts.append(flag)
        elif value is not False and value is not None:
            parts += [flag, str(value)]
    print(f"# svmelm {__version__} (backend: {BACKEND})", file=sys.stderr)
    print(f"# command: {shlex.join(parts)}", file=sys.stderr)


def parse_methods(text):
    names = [m.strip().lower() for m in text.split(",") if m.strip()]
    if names == ["all"] or not names:
        return METHODS
    bad = [m for m in names if m not in METHODS]
    if bad:
        raise InvalidConfig(f"unknown method(s) {', '.join(bad)}", "--methods")
    # keep the canonical row order
    return tuple(m for m in METHODS if m in names)


def parse_per_class(text):
    """``8`` (every domain) or ``amazon=20,dslr=8``; returns (default, mapping)."""
    if text is None:
        return None, {}
    default, mapping = None, {}
    for item in text.split(","):
        item = item.strip()
        try:
            if "=" in item:
                k, v = item.split("=", 1)
                mapping[k.strip()] = int(v)
            else:
                default = int(item)
        except ValueError:
            raise InvalidConfig(f"cannot parse {item!r}", "--source-per-class") from None
    return default, mapping


def _positive(name, value):
    if value is not None and not value > 0:
        raise InvalidConfig(f"must be positive, got {value}", name)


# -- bench --------------------------------------------------------------------

def cmd_bench(args):
    methods = parse_methods(args.methods)
    for flag in ("svm_c", "svm_sigma", "elm_c", "kelm_c", "kelm_sigma", "splits", "threads"):
        _positive("--" + flag.replace("_", "-"), getattr(args, flag))
    _positive("--elm-L", args.elm_L)
    params = MethodParams(
        svm_c=args.svm_c, svm_sigma=args.svm_sigma, svm_kernel=args.svm_kernel,
        lssvm_kernel=args.lssvm_kernel,
        elm_c=args.elm_c, elm_L=args.elm_L,
        kelm_c=args.kelm_c, kelm_sigma=args.kelm_sigma, kelm_kernel=args.kelm_kernel,
    )
    kind, files = find_domain_files(args.data_dir, args.layer)
    missing = [str(p) for _, p in files if not p.exists()]
    if missing:
        raise InvalidConfig(f"missing domain file(s): {', '.join(missing)}", "--data-dir")
    if not files:
        raise InvalidConfig(
            f"no *_{args.layer}.dcf1 or *_{args.layer}.csv files in {args.data_dir}", "--data-dir"
        )
    datasets = [load_dataset(p) for _, p in files]
    default_n, per_domain = parse_per_class(args.source_per_class)
    if default_n is not None:
        per_domain = {**{ds.domain: default_n for ds in datasets}, **per_domain}
    config = ExperimentConfig(
        setting=args.setting, methods=methods, layer=args.layer, splits=args.splits,
        seed=args.seed, source_per_class=per_domain, target_per_class=args.target_per_class,
        params=params, normalize=args.normalize, threads=args.threads,
    )
    _header("bench", [
        ("--setting", args.setting), ("--methods", ",".join(methods)), ("--layer", args.layer),
        ("--splits", args.splits), ("--seed", args.seed), ("--data-dir", args.data_dir),
        ("--out", args.out), ("--chart", args.chart), ("--format", args.format),
        ("--threads", args.threads),
        ("--source-per-class", ",".join(f"{ds.domain}={config.source_count(ds.domain)}"
                                        for ds in datasets)),
        ("--target-per-class", args.target_per_class),
        ("--svm-c", args.svm_c), ("--svm-sigma", args.svm_sigma), ("--svm-kernel", args.svm_kernel),
        ("--lssvm-kernel", args.lssvm_kernel),
        ("--elm-c", args.elm_c), ("--elm-L", args.elm_L),
        ("--kelm-c", args.kelm_c), ("--kelm-sigma", args.kelm_sigma),
        ("--kelm-kernel", args.kelm_kernel), ("--normalize", args.normalize),
    ])
    print(f"# corpus: {kind}, domains: {', '.join(d.domain for d in datasets)}", file=sys.stderr)
    start = time.perf_counter()
    table = run_protocol(config, datasets)
    print(f"# elapsed: {time.perf_counter() - start:.1f}s", file=sys.stderr)
    text = render_table(table, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.chart:
        render_chart(table, args.chart)
    for line in table.diagnostics:
        print(f"# failed: {line}", file=sys.stderr)
    return EXIT_OK if table.complete else EXIT_PARTIAL


# -- synth / convert ------------------------------------------------------------

def cmd_synth(args):
    counts = [int(c) for c in str(args.per_class).split(",")]
    if len(counts) == 1:
        counts = counts[0]
    for name in ("domains", "classes", "dim"):
        if getattr(args, name) < 1:
            raise InvalidConfig("must be positive", f"--{name}")
    datasets = generate_synthetic_domains(
        args.domains, args.classes, args.dim, counts, args.shift, args.seed,
        center_spread=args.spread,
    )
    _header("synth", [
        ("--domains", args.domains), ("--classes", args.classes), ("--dim", args.dim),
        ("--per-class", args.per_class), ("--shift", args.shift), ("--seed", args.seed),
        ("--spread", args.spread), ("--out-dir", args.out_dir),
    ])
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for ds in datasets:
        path = out / f"{ds.domain}_{ds.layer}.dcf1"
        save_binary(ds, path)
        print(f"{path}\t{ds.n} rows\t{ds.dim} dims", file=sys.stderr)
    return EXIT_OK


def cmd_convert(args):
    src, dst = Path(args.input), Path(args.output)
    ds = load_csv(src) if src.suffix.lower() == ".csv" else load_binary(src)
    if dst.suffix.lower() == ".csv":
        save_csv(ds, dst)
    else:
        save_binary(ds, dst)
    print(f"{src} -> {dst}: {ds.n} rows, {ds.dim} dims", file=sys.stderr)
    return EXIT_OK


# -- train / predict -----------------------------------------------------------

def _resolved_method_args(args):
    m = args.method
    C = args.C
    sigma = args.sigma
    if m == "svm":
        C = C if C is not None else DEFAULTS.svm_c
        sigma = sigma if sigma is not None else DEFAULTS.svm_sigma
    elif m == "elm":
        C = C if C is not None else DEFAULTS.elm_c
    elif m == "kelm":
        C = C if C is not None else DEFAULTS.kelm_c
        sigma = sigma if sigma is not None else DEFAULTS.kelm_sigma
    L = (args.L if args.L is not None else DEFAULTS.elm_L) if m == "elm" else None
    return C, sigma, L


def _fit(args, X, y):
    """Fit the requested method; returns a predict callable."""
    C, sigma, L = _resolved_method_args(args)
    _positive("--C", C)
    _positive("--sigma", sigma)
    _positive("--L", L)
    kind = KernelKind(args.kernel)
    spec = KernelSpec.linear() if kind is KernelKind.LINEAR else KernelSpec.rbf(sigma or 1.0)
    rng = RngStream(args.seed, 0)
    if args.method == "nn":
        model = clf.nn_fit(X, y)
        return lambda Q: clf.nn_predict(model, Q)
    if args.method == "svm":
        model = clf.svm_fit(X, y, spec, C)
        return lambda Q: clf.svm_predict(model, Q)
    if args.method == "lssvm":
        if C is None or (sigma is None and kind is KernelKind.RBF):
            model = clf.lssvm_fit_grid(X, y, rng, kind=kind)
            print(f"# lssvm grid search picked C={model.C:g}, kernel={model.spec}", file=sys.stderr)
        else:
            model = clf.lssvm_fit(X, y, spec, C)
        return lambda Q: clf.lssvm_predict(model, Q)
    if args.method == "elm":
        model = clf.elm_fit(X, y, L=L, C=C, rng=rng)
        return lambda Q: clf.elm_predict(model, Q)
    model = clf.kelm_fit(X, y, spec, C)
    return lambda Q: clf.kelm_predict(model, Q)


def _train_header(command, args, extra):
    C, sigma, L = _resolved_method_args(args)
    _header(command, [
        ("--data", args.data), *extra, ("--method", args.method), ("--C", C),
        ("--sigma", sigma), ("--L", L), ("--kernel", args.kernel), ("--seed", args.seed),
        ("--normalize", args.normalize),
    ])


def _load_training(args):
    ds = load_dataset(args.data)
    X = l2_normalize_rows(ds.X) if args.normalize else ds.X
    return ds, X


def cmd_train(args):
    _train_header("train", args, [("--eval", args.eval)])
    ds, X = _load_training(args)
    start = time.perf_counter()
    predict = _fit(args, X, ds.labels)
    fit_s = time.perf_counter() - start
    train_acc = accuracy(predict(X), ds.labels)
    print(f"train_accuracy\t{train_acc:.6f}")
    print(f"fit_seconds\t{fit_s:.3f}")
    if args.eval:
        ev = load_dataset(args.eval)
        Xe = l2_normalize_rows(ev.X) if args.normalize else ev.X
        if Xe.shape[1] != X.shape[1]:
            raise InvalidConfig(
                f"{args.eval} has {Xe.shape[1]} features, training data has {X.shape[1]}", "--eval"
            )
        print(f"eval_accuracy\t{accuracy(predict(Xe), ev.labels):.6f}")
    return EXIT_OK


def cmd_predict(args):
    _train_header("predict", args, [("--query", args.query)])
    ds, X = _load_training(args)
    Q = load_features(args.query)
    if args.normalize:
        Q = l2_normalize_rows(Q)
    if Q.shape[1] != X.shape[1]:
        raise InvalidConfig(
            f"{args.query} has {Q.shape[1]} features, training data has {X.shape[1]}", "--query"
        )
    predict = _fit(args, X, ds.labels)
    sys.stdout.write("".join(f"{int(c)}\n" for c in predict(Q)))
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="svmelm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"svmelm {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a benchmark protocol over a directory of domain files")
    b.add_argument("--setting", type=int, choices=(1, 2, 3), required=True)
    b.add_argument("--methods", default="all", help="comma list of nn,svm,lssvm,elm,kelm or 'all'")
    b.add_argument("--layer", choices=("f6", "f7", "raw"), default="f6")
    b.add_argument("--splits", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--data-dir", required=True)
    b.add_argument("--out", help="table file (default: stdout)")
    b.add_argument("--chart", help="SVG bar chart path")
    b.add_argument("--format", choices=("tsv", "markdown"), default="tsv")
    b.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
    b.add_argument("--source-per-class", help="training rows per class: INT or dom=INT,...")
    b.add_argument("--target-per-class", type=int, default=3)
    b.add_argument("--svm-c", type=float, default=DEFAULTS.svm_c)
    b.add_argument("--svm-sigma", type=float, default=DEFAULTS.svm_sigma)
    b.add_argument("--svm-kernel", choices=("rbf", "linear"), default=DEFAULTS.svm_kernel)
    b.add_argument("--lssvm-kernel", choices=("rbf", "linear"), default=DEFAULTS.lssvm_kernel)
    b.add_argument("--elm-c", type=float, default=DEFAULTS.elm_c)
    b.add_argument("--elm-L", type=int, default=DEFAULTS.elm_L)
    b.add_argument("--kelm-c", type=float, default=DEFAULTS.kelm_c)
    b.add_argument("--kelm-sigma", type=float, default=DEFAULTS.kelm_sigma)
    b.add_argument("--kelm-kernel", choices=("rbf", "linear"), default=DEFAULTS.kelm_kernel)
    b.add_argument("--normalize", action="store_true", help="L2-normalize every feature row")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("synth", help="write synthetic shifted domains as DCF1 files")
    s.add_argument("--domains", type=int, default=4)
    s.add_argument("--classes", type=int, default=10)
    s.add_argument("--dim", type=int, default=64)
    s.add_argument("--per-class", default="30", help="INT or one INT per domain, comma separated")
    s.add_argument("--shift", type=float, default=3.0)
    s.add_argument("--spread", type=float, default=None, help="class-center std (default 4/sqrt(dim))")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("convert", help="convert CSV <-> DCF1 (by file extension)")
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_convert)

    for name, func, help_ in (
        ("train", cmd_train, "fit one classifier and report accuracy"),
        ("predict", cmd_predict, "fit one classifier and label a query file"),
    ):
        t = sub.add_parser(name, help=help_)
        t.add_argument("--data", required=True, help="labeled training file (.dcf1 or .csv)")
        if name == "train":
            t.add_argument("--eval", help="labeled file to evaluate after fitting")
        else:
            t.add_argument("--query", required=True, help="features-only CSV or a .dcf1 file")
        t.add_argument("--method", choices=METHODS, required=True)
        t.add_argument("--C", type=float, default=None)
        t.add_argument("--sigma", type=float, default=None)
        t.add_argument("--L", type=int, default=None)
        t.add_argument("--kernel", choices=("rbf", "linear"), default="rbf")
        t.add_argument("--seed", type=int, default=0)
        t.add_argument("--normalize", action="store_true")
        t.set_defaults(func=func)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SvmElmError, OSError) as exc:
        _err(exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
