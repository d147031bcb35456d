"""Command line runner: ``bergman-qha <suite> [options]``.

Exit status: 0 when every check of the suite passes, 1 when a check fails
(the failing checks are listed on stderr), 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config, parse_r_grid
from .suites import SUITES

EXIT_OK, EXIT_CONTRACT, EXIT_CONFIG = 0, 1, 2


def _fmt(x):
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def write_outputs(result, out_dir):
    """``<suite>.csv`` (data table) and ``<suite>_checks.csv``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = result.name.replace("-", "_")
    data = out_dir / f"{stem}.csv"
    checks = out_dir / f"{stem}_checks.csv"
    write_csv(data, result.header, result.rows)
    write_csv(checks, ["check", "value", "threshold", "contract", "ok"],
              [[c.name, float(c.value), float(c.threshold), c.contract, c.ok] for c in result.checks])
    return data, checks


def write_convergence_plot(result, path):
    """Static SVG of ``err_opnorm`` and the bound against ``r`` (log scale)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    col = {h: i for i, h in enumerate(result.header)}
    r = [row[col["r"]] for row in result.rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(r, [row[col["err_opnorm"]] for row in result.rows], "o-", label="err_opnorm")
    ax.semilogy(r, [row[col["bound"]] for row in result.rows], "s--", label="bound")
    ax.set_xlabel("r")
    ax.legend()
    fig.tight_layout()
    # fixed metadata keeps the file reproducible
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def build_parser():
    p = argparse.ArgumentParser(prog="bergman-qha", description=__doc__.splitlines()[0])
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--out", type=Path, help="output directory (default: config output_path)")
    p.add_argument("--seed", type=int)
    p.add_argument("--degree", type=int, help="truncation degree N")
    p.add_argument("--beta", type=float)
    p.add_argument("--r-grid", help="comma-separated radii, e.g. 0.5,0.7,0.9")
    p.add_argument("--plot", action="store_true", help="also write an SVG plot (convergence only)")
    return p


def resolve_config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    return cfg.with_overrides(
        seed=args.seed,
        truncation_degree=args.degree,
        beta=args.beta,
        r_grid=parse_r_grid(args.r_grid) if args.r_grid is not None else None,
        output_path=str(args.out) if args.out is not None else None,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    result = SUITES[args.suite](cfg)
    paths = write_outputs(result, cfg.output_path)
    if args.plot and args.suite == "convergence":
        svg = Path(cfg.output_path) / "convergence.svg"
        write_convergence_plot(result, svg)
        paths += (svg,)

    for c in result.checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.value:.3e} (threshold {c.threshold:.3e})")
    print("wrote " + ", ".join(str(p) for p in paths))
    if not result.passed:
        print(f"{args.suite}: {len(result.failures)} check(s) failed:", file=sys.stderr)
        for c in result.failures:
            print(f"  {c.name}: {c.value!r} > {c.threshold!r}", file=sys.stderr)
        return EXIT_CONTRACT
    print(f"{args.suite}: all {len(result.checks)} checks passed")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
