"""``overlapctl``: resample, sweep, complexity and evaluate commands.

Exit status: 0 success, 1 usage error, 2 data error, 3 sampler exhaustion.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from dataclasses import asdict, dataclass

from mgru import __version__
from mgru._backend import BACKEND
from mgru._parallel import resolve_threads
from mgru.complexity import onb_avg
from mgru.core import INDEX_COLUMN, mgru_fit, undersample
from mgru.dataset import FORMATS, atomic_write_text, format_csv, imbalance_ratio, load_dataset
from mgru.errors import DataError, ExhaustionError
from mgru.evaluation.validation import (
    MGRU_METHODS,
    SAMPLERS,
    SamplerConfig,
    ScorerConfig,
    cross_validate,
    greedy_threshold_search,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_EXHAUSTED = 0, 1, 2, 3
COMMANDS = ("resample", "sweep", "complexity", "evaluate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    format: str | None = None
    label: str = "last"
    positive_label: str | None = None
    method: str = "null"
    threshold: int | None = None
    target_ir: float | None = None
    classifier: str = "tree"
    max_depth: int = 25
    min_leaf: int = 1
    knn_k: int = 5
    folds: int = 10
    metric: str = "auc"
    seed: int = 42
    output: str | None = None
    threads: int | None = None

    def __post_init__(self):
        mgru = self.method in MGRU_METHODS
        if self.command == "resample" and mgru and self.threshold is None:
            raise UsageError(f"--threshold is required for {self.method}")
        if self.method == "rus" and self.target_ir is None:
            raise UsageError("--target-ir is required for rus")
        if self.method != "rus" and self.target_ir is not None:
            raise UsageError("--target-ir only applies to rus")
        if self.command == "sweep":
            if not mgru:
                raise UsageError("sweep needs --method mgru-md or mgru-sed")
            if self.threshold is not None:
                raise UsageError("sweep chooses the threshold itself; drop --threshold")
        elif self.threshold is not None and not mgru:
            raise UsageError("--threshold only applies to mgru-md / mgru-sed")
        elif mgru and self.threshold is None:
            raise UsageError(f"--threshold is required for {self.method} (or use sweep)")
        if self.threshold is not None and self.threshold < 1:
            raise UsageError("--threshold must be >= 1")

    def echo(self) -> dict:
        """Resolved settings that affect results (not threads or output path)."""
        d = asdict(self)
        d.pop("threads")
        d.pop("output")
        return d

    def sampler(self) -> SamplerConfig:
        return SamplerConfig(self.method, self.threshold, self.target_ir)

    def scorer(self) -> ScorerConfig:
        return ScorerConfig(self.classifier, self.max_depth, self.min_leaf, self.knn_k)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="overlapctl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, method_default="null"):
        p.add_argument("--input", required=True, help="CSV or KEEL .dat file")
        p.add_argument("--format", choices=FORMATS, default=None,
                       help="input format (default: from the file extension)")
        p.add_argument("--label", default="last", help="label column name, or 'last'")
        p.add_argument("--positive-label", default=None, help="force the minority label")
        p.add_argument("--method", choices=SAMPLERS, default=method_default)
        p.add_argument("--threshold", type=int, default=None, help="MGRU relabel threshold K")
        p.add_argument("--target-ir", type=float, default=None, help="target IR for rus")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads, 0 = all CPUs (env OVERLAPCTL_THREADS)")
        p.add_argument("--output", default=None, help="output file (default: stdout)")

    def scoring(p):
        p.add_argument("--classifier", choices=("tree", "knn"), default="tree")
        p.add_argument("--max-depth", type=int, default=25)
        p.add_argument("--min-leaf", type=int, default=1)
        p.add_argument("--knn-k", type=int, default=5)
        p.add_argument("--folds", type=int, default=10)
        p.add_argument("--metric", choices=("auc", "aupr"), default="auc")

    common(sub.add_parser("resample", help="under-sample a dataset"), method_default=None)
    p = sub.add_parser("sweep", help="cross-validated MGRU threshold sweep")
    common(p, method_default="mgru-sed")
    scoring(p)
    common(sub.add_parser("complexity", help="ONB_avg class-overlap complexity"))
    p = sub.add_parser("evaluate", help="cross-validated score of one sampler")
    common(p)
    scoring(p)
    return parser


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _report(cfg: RunConfig, ds, body: dict) -> dict:
    return {
        "version": __version__,
        "command": cfg.command,
        "config": cfg.echo(),
        "seed": cfg.seed,
        "dataset": ds.fingerprint(),
        "backend": BACKEND,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        **body,
    }


def _dump(report: dict, one_line: bool) -> str:
    report = _clean(report)
    if one_line:
        return json.dumps(report, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def _resample(cfg: RunConfig, ds, threads: int) -> str:
    if cfg.method in MGRU_METHODS:
        _, phi = mgru_fit(ds, MGRU_METHODS[cfg.method], threads)
        kept = ~((ds.y == 0) & (phi.values >= cfg.threshold))
        out = undersample(ds, phi, cfg.threshold)
        csv_text = format_csv(out, {INDEX_COLUMN: phi.values[kept]})
    else:
        out = cfg.sampler().apply(ds, cfg.seed, threads)
        csv_text = format_csv(out)
    _emit(csv_text, cfg.output)
    summary = _report(cfg, ds, {
        "n_before": ds.n,
        "n_after": out.n,
        "deleted": ds.n - out.n,
        "ir_before": imbalance_ratio(ds),
        "ir_after": imbalance_ratio(out),
    })
    return _dump(summary, one_line=True)


def execute(cfg: RunConfig) -> str:
    """Run one command; returns the report text (already written if needed)."""
    threads = resolve_threads(cfg.threads)
    ds = load_dataset(cfg.input, cfg.format, cfg.label, cfg.positive_label)

    if cfg.command == "resample":
        text = _resample(cfg, ds, threads)
        if cfg.output is None:
            sys.stderr.write(text)
        else:
            sys.stdout.write(text)
        return text

    if cfg.command == "complexity":
        sampled = cfg.sampler().apply(ds, cfg.seed, threads)
        body = onb_avg(sampled).to_record()
        body["n_sampled"] = sampled.n
        text = _dump(_report(cfg, ds, body), one_line=True)
    elif cfg.command == "sweep":
        rep = greedy_threshold_search(
            ds, MGRU_METHODS[cfg.method], cfg.scorer(), cfg.folds, cfg.seed, cfg.metric, threads
        )
        text = _dump(_report(cfg, ds, rep.to_dict()), one_line=False)
    else:
        res = cross_validate(
            ds, cfg.sampler(), cfg.scorer(), cfg.folds, cfg.metric, cfg.seed, threads
        )
        body = res.to_dict()
        body.update(metric=cfg.metric, sampling="in-fold", stratified=True)
        text = _dump(_report(cfg, ds, body), one_line=False)
    _emit(text, cfg.output)
    return text


def _config_from_args(args) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    fields = {k.replace("-", "_"): v for k, v in fields.items()}
    if args.command == "resample" and "method" not in fields:
        raise UsageError("resample needs --method")
    return RunConfig(**fields)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config_from_args(args)
        execute(cfg)
    except UsageError as exc:
        print(f"overlapctl: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExhaustionError as exc:
        print(f"overlapctl: sampler exhausted the majority class: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (DataError, OSError) as exc:
        print(f"overlapctl: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # remaining precondition violations (e.g. threshold above m, k > n)
        print(f"overlapctl: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
