"""Command-line interface: fetch, extract, bench, bss-demo, serve.

Every subcommand is a thin wrapper over the library; ``serve`` starts the
FastAPI service.  The data directory defaults to $MARK_ICA_DATA_DIR and
falls back to the snapshots bundled with the package.
"""

import argparse
import sys

from . import benchmark, datasets, fastica
from .contrast import CONTRAST_NAMES, ContrastFunction


def _add_data_dir(parser):
    parser.add_argument(
        "--data-dir",
        default=None,
        help="directory with the dataset files (default: $MARK_ICA_DATA_DIR, "
        "then the bundled snapshots)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mark-ica",
        description="FastICA feature extraction with the m-arcsinh contrast "
        "function, plus the five-dataset classification benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="download the UCI dataset files")
    p.add_argument("--data-dir", required=True, help="directory to write the files into")
    p.add_argument("--base-url", default=datasets.UCI_BASE_URL, help=argparse.SUPPRESS)

    p = sub.add_parser("extract", help="fit an extraction and write transformed features")
    p.add_argument("--dataset", required=True, choices=sorted(datasets.DATASETS))
    p.add_argument("--fun", default="m_arcsinh", choices=CONTRAST_NAMES)
    p.add_argument("--n-components", type=int, default=None,
                   help="components to extract (default: the dataset's benchmark value)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output csv path")
    _add_data_dir(p)

    p = sub.add_parser("bench", help="run the benchmark grid and emit a report")
    _add_data_dir(p)
    p.add_argument("--format", default="csv", choices=("csv", "markdown"))
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--mlp-max-iter", type=int, default=250)
    p.add_argument("--ica-seed", type=int, default=42)
    p.add_argument("--mlp-seed", type=int, default=1)
    p.add_argument("--datasets", nargs="+", default=None,
                   choices=sorted(datasets.DATASETS), help="restrict to these datasets")

    p = sub.add_parser("bss-demo", help="separate synthetic mixed signals, print the Amari index")
    p.add_argument("--fun", default="m_arcsinh", choices=CONTRAST_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=10000)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def cmd_fetch(args):
    written = datasets.fetch(args.data_dir, base_url=args.base_url)
    for path in written:
        print(f"fetched {path}")
    return 0


def cmd_extract(args):
    spec = datasets.DATASETS[args.dataset]
    k = args.n_components if args.n_components is not None else spec.n_components
    train, test = datasets.load_dataset(spec, args.data_dir)
    if test is None:
        train, test = datasets.split_80_20(*train)
    (X_train, y_train), (X_test, y_test) = train, test
    config = fastica.FastICAConfig(n_components=k, fun=ContrastFunction(args.fun), seed=args.seed)
    model = fastica.fit(X_train, config)
    header = "partition,label," + ",".join(f"c{i + 1}" for i in range(k))
    lines = [header]
    for part, X, y in (("train", X_train, y_train), ("test", X_test, y_test)):
        S = fastica.transform(model, X)
        for label, row in zip(y, S):
            values = ",".join(format(v, ".17g") for v in row)
            lines.append(f"{part},{label},{values}")
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    status = "converged" if model.converged else "did not converge"
    print(f"extracted {k} components from {args.dataset} with {args.fun} "
          f"({status} after {model.n_iter} iterations) -> {args.out}")
    return 0


def cmd_bench(args):
    rows = benchmark.run_benchmark(
        specs=args.datasets,
        data_dir=args.data_dir,
        ica_seed=args.ica_seed,
        mlp_seed=args.mlp_seed,
        mlp_max_iter=args.mlp_max_iter,
        log=True,
    )
    report = benchmark.emit_report(rows, format=args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        print(report, end="")
    failures = [r for r in rows if r.error]
    if failures:
        for r in failures:
            print(f"error: {r.dataset}/{r.extraction}/{r.activation}: {r.error}",
                  file=sys.stderr)
        return 1
    return 0


def cmd_bss_demo(args):
    out = benchmark.bss_demo(args.fun, args.seed, n_samples=args.n_samples)
    status = "converged" if out["converged"] else "did not converge"
    print(f"amari_index={out['amari_index']:.6f} fun={args.fun} seed={args.seed} "
          f"({status} after {out['n_iter']} iterations)")
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {
        "fetch": cmd_fetch,
        "extract": cmd_extract,
        "bench": cmd_bench,
        "bss-demo": cmd_bss_demo,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
