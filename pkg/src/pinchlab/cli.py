"""Command-line driver: ``pinchlab {verify,scan,volume,gluing}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
arguments, bad configuration or an invalid graph file.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from . import report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    family: int = 1
    l: int = 1
    m: int = 1
    n: int = 3
    a: float = 7.0
    b: float = 1.0
    r_range: tuple = (-10.0, 10.0)
    t_range: tuple = (-10.0, 10.0)
    w: float = 0.0
    grid: int = 256
    scan_grid: int = 64
    planes_per_point: int = 32
    seed: int = 0
    r_min: float = -30.0
    threads: int | None = None
    flat: bool = False

    def validate(self):
        if self.flat:
            if self.n < 1:
                raise ConfigError("flat metric needs n >= 1")
        elif self.family == 1:
            if self.l < 0 or self.m < 0 or self.l + self.m < 1:
                raise ConfigError("family 1 needs l, m >= 0 and l + m >= 1")
            if not self.b > 0:
                raise ConfigError("b must be positive")
        elif self.family == 2:
            if self.n < 2:
                raise ConfigError("family 2 needs n >= 2")
            if not self.a > 5:
                raise ConfigError("family 2 needs a > 5")
            if self.n == 2 and self.w != 0.0:
                raise ConfigError("family 2 with n = 2 has no w coordinate")
        else:
            raise ConfigError("family must be 1 or 2")
        for name in ("r_range", "t_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ConfigError(f"{name} must satisfy lo < hi")
        if self.grid < 2 or self.scan_grid < 2:
            raise ConfigError("grid counts must be >= 2")
        if self.planes_per_point < 0:
            raise ConfigError("planes per point must be >= 0")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.r_min > -1:
            raise ConfigError("r_min must be <= -1")
        return self

    @property
    def box(self):
        from .metrics import DomainBox
        if self.flat:
            names = [f"x_{i + 1}" for i in range(min(self.n, 2))]
            ranges = [self.r_range, self.t_range][: len(names)]
            return DomainBox(dict(zip(names, ranges)), {k: self.scan_grid for k in names})
        bounds = {"r": tuple(self.r_range), "t": tuple(self.t_range)}
        if self.family == 2 and self.w != 0.0:
            bounds["w"] = (self.w, self.w)
        return DomainBox(bounds, {"r": self.scan_grid, "t": self.scan_grid})


def _config(args) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: getattr(args, k) for k in keys if getattr(args, k, None) is not None})
    return cfg.validate()


def _common(p, grid=True):
    p.add_argument("--family", type=int, choices=(1, 2), default=1)
    p.add_argument("--l", type=int, default=1, help="number of rho circles (family 1)")
    p.add_argument("--m", type=int, default=1, help="number of tau circles (family 1)")
    p.add_argument("--n", type=int, default=3, help="dimension parameter (family 2, flat)")
    p.add_argument("--a", type=float, default=7.0, help="fiber parameter (family 2)")
    p.add_argument("--b", type=float, default=1.0, help="scale parameter (family 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for scans (default: $PINCHLAB_THREADS, else min(8, cpus))")
    p.add_argument("--out", "-o", default=None, help="write the JSON report here as well as stdout")
    p.add_argument("--quiet", "-q", action="store_true", help="do not print JSON to stdout")
    if grid:
        p.add_argument("--scan-grid", dest="scan_grid", type=int, default=64,
                       help="points per axis for curvature scans")
        p.add_argument("--planes", dest="planes_per_point", type=int, default=32,
                       help="random planes per grid point")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pinchlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run every lemma and proposition check for a family")
    _common(p)
    p.add_argument("--grid", type=int, default=256, help="points per axis for the lemma grid")

    p = sub.add_parser("scan", help="sample sectional curvatures over an (r, t) box")
    _common(p)
    p.add_argument("--flat", action="store_true", help="scan the flat metric on R^n instead")
    p.add_argument("--r-range", dest="r_range", type=float, nargs=2, default=(-10.0, 10.0))
    p.add_argument("--t-range", dest="t_range", type=float, nargs=2, default=(-10.0, 10.0))
    p.add_argument("--w", type=float, default=0.0, help="fixed w coordinate (family 2)")
    p.add_argument("--csv", default=None, help="write every sample as r,t,w,plane,K")

    p = sub.add_parser("volume", help="volume of the cusp region or of a piece")
    _common(p, grid=False)
    p.add_argument("--kind", choices=("cusp", "piece"), default="cusp")
    p.add_argument("--L", type=float, default=1.0, help="boundary circle length (piece)")
    p.add_argument("--r-min", dest="r_min", type=float, default=-30.0,
                   help="quadrature cutoff; the rest is covered by the tail cap")

    p = sub.add_parser("gluing", help="check a gluing graph file")
    p.add_argument("path", help="graph JSON, or the name of a bundled example")
    p.add_argument("--r-samples", dest="r_samples", type=float, nargs="+", default=None)
    p.add_argument("--out", "-o", default=None)
    p.add_argument("--quiet", "-q", action="store_true")
    return ap


def _emit(args, payload):
    report.write(payload, path=args.out, stream=None if args.quiet else sys.stdout)


def cmd_verify(args) -> int:
    from .verify import run_suite
    cfg = _config(args)
    reps = run_suite(cfg.family, l=cfg.l, m=cfg.m, b=cfg.b, n=cfg.n, a=cfg.a, grid=cfg.grid,
                     scan_counts=cfg.scan_grid, planes=cfg.planes_per_point, seed=cfg.seed,
                     threads=cfg.threads)
    ok = all(r.passed for r in reps)
    for r in reps:
        print(r.line(), file=sys.stderr)
    _emit(args, {"command": "verify", "family": cfg.family,
                 "params": _params(cfg), "passed": ok, "checks": reps})
    return EXIT_OK if ok else EXIT_FAIL


def _params(cfg):
    if cfg.flat:
        return {"n": cfg.n}
    if cfg.family == 1:
        return {"l": cfg.l, "m": cfg.m, "b": cfg.b}
    return {"n": cfg.n, "a": cfg.a}


def cmd_scan(args) -> int:
    from . import curvature as cv
    from .metrics import family1_metric, family2_metric, flat_metric
    from .verify import TOL
    cfg = _config(args)
    if cfg.flat:
        metric = flat_metric(cfg.n)
    elif cfg.family == 1:
        metric = family1_metric(cfg.l, cfg.m, cfg.b)
    else:
        metric = family2_metric(cfg.n, cfg.a)
    rep = cv.pinch_scan(metric, cfg.box, cfg.planes_per_point, cfg.seed, cfg.threads,
                        keep_values=args.csv is not None)
    if cfg.flat:
        ok = max(abs(rep.min_K), abs(rep.max_K)) <= TOL
    else:
        ok = rep.max_K < 0
    if args.csv:
        _write_csv(args.csv, metric, rep)
    _emit(args, {"command": "scan", "passed": ok, "report": rep})
    return EXIT_OK if ok else EXIT_FAIL


def _write_csv(path, metric, rep):
    """One row per (point, plane).  Flat coordinates x_1, x_2, x_3 fill the r, t, w columns."""
    from .curvature import bivector_index
    roles = list(metric.roles)
    names = ("x_1", "x_2", "x_3") if metric.family == "flat" else ("r", "t", "w")
    cols = [rep.points[:, roles.index(nm)] if nm in roles else np.zeros(len(rep.points))
            for nm in names]
    pairs = bivector_index(metric.n)
    labels = [f"{roles[i]}^{roles[j]}" for i, j in pairs]
    labels += [f"random_{k}" for k in range(rep.values.shape[1] - len(pairs))]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["r", "t", "w", "plane", "K"])
        for ip in range(rep.values.shape[0]):
            coords = [format(float(c[ip]), ".17g") for c in cols]
            for k, lab in enumerate(labels):
                wr.writerow(coords + [lab, format(float(rep.values[ip, k]), ".17g")])


def cmd_volume(args) -> int:
    from . import volume as vol
    cfg = _config(args)
    if args.kind == "cusp":
        if cfg.family == 1:
            if cfg.l < 1:
                raise ConfigError("the cusp volume needs l >= 1")
            res = vol.volume_family1(cfg.l, cfg.m, cfg.b, cfg.r_min)
        else:
            res = vol.volume_family2(cfg.n, cfg.a, cfg.r_min)
    else:
        if not args.L > 0:
            raise ConfigError("L must be positive")
        if cfg.family == 1:
            res = vol.piece_volume_factor(args.L, cfg.b)
        else:
            res = vol.piece_volume_factor2(cfg.n, args.L, cfg.b)
    _emit(args, {"command": "volume", "kind": args.kind, "family": cfg.family, "result": res})
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_gluing(args) -> int:
    from . import gluing
    graph = gluing.load_graph(args.path)
    res = gluing.check_geometrization(graph, args.r_samples)
    _emit(args, {"command": "gluing", "path": str(args.path), **res.to_dict()})
    return EXIT_OK if res.passed else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "scan": cmd_scan, "volume": cmd_volume, "gluing": cmd_gluing}


def main(argv=None) -> int:
    from .gluing import GraphError
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, GraphError, FileNotFoundError) as exc:
        print(f"pinchlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
