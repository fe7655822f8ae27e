"""Command-line driver for the experiment sweeps.

Subcommands: dim-frontier, sparsity-phase, lemma-suite, regress-demo.
Common flags: --out, --seed, --trials, grid flags --d/--m/--s/--eps
(comma-separated), --n, --jobs, and --config pointing at a plain key=value
file. Explicit flags override file values. Exit codes: 0 success, 2 on a
lemma-suite violation, 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .sweeps import ExperimentConfig, run_lemma_suite, run_sweep, write_csv

_GRID_KEYS = {"d": int, "m": int, "s": int, "eps": float}
_SCALAR_KEYS = {"n": int, "seed": int, "trials": int, "jobs": int}


def _parse_grid(text: str, cast):
    try:
        values = tuple(cast(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValueError(f"bad grid value in {text!r}: {exc}") from exc
    if not values:
        raise ValueError(f"empty grid {text!r}")
    return values


def _read_config_file(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment; grids are comma lists."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _GRID_KEYS:
            out[key] = _parse_grid(value, _GRID_KEYS[key])
        elif key in _SCALAR_KEYS:
            out[key] = _SCALAR_KEYS[key](value)
        elif key in ("out", "kind"):
            out[key] = value
        else:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oselab", description=__doc__)
    sub = parser.add_subparsers(dest="sweep", required=True)
    for name in ("dim-frontier", "sparsity-phase", "lemma-suite", "regress-demo"):
        p = sub.add_parser(name)
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--seed", type=int, help="master seed (default 42)")
        p.add_argument("--trials", type=int, help="trials per cell (default 1000)")
        p.add_argument("--n", type=int, help="ambient dimension")
        p.add_argument("--jobs", type=int, help="concurrent cells (default 1)")
        p.add_argument("--d", help="comma-separated d grid")
        p.add_argument("--m", help="comma-separated m grid")
        p.add_argument("--s", help="comma-separated s grid")
        p.add_argument("--eps", help="comma-separated eps grid")
        if name == "regress-demo":
            p.add_argument("--kind", choices=("gaussian", "sparse", "identity"),
                           help="sketch family for the demo (default gaussian)")
    return parser


def _build_config(args) -> tuple[ExperimentConfig, str]:
    settings = {}
    if args.config:
        settings.update(_read_config_file(args.config))
    for key, cast in _GRID_KEYS.items():
        flag = getattr(args, key)
        if flag is not None:
            settings[key] = _parse_grid(flag, cast)
    for key in _SCALAR_KEYS:
        flag = getattr(args, key)
        if flag is not None:
            settings[key] = flag
    if args.out is not None:
        settings["out"] = args.out
    kind = settings.pop("kind", "gaussian")
    if getattr(args, "kind", None):
        kind = args.kind
    defaults = dict(trials=1000, seed=42, jobs=1)
    defaults.update(settings)
    config = ExperimentConfig(
        sweep=args.sweep,
        n=defaults.get("n"),
        d_grid=defaults.get("d", (10,) if args.sweep != "sparsity-phase" else (20,)),
        m_grid=defaults.get("m", ()),
        s_grid=defaults.get("s", (1,)),
        eps_grid=defaults.get("eps", (0.3,)),
        trials=defaults["trials"],
        master_seed=defaults["seed"],
        out=defaults.get("out"),
        jobs=defaults["jobs"],
    )
    return config, kind


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for lemma violations.
        return 0 if exc.code == 0 else 1
    try:
        config, kind = _build_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.out is None:
        print("error: --out is required (or set out= in the config file)", file=sys.stderr)
        return 1

    violation = False
    try:
        if config.sweep == "lemma-suite":
            records, outcomes = run_lemma_suite(config)
            width = max(len(o.name) for o in outcomes)
            for o in outcomes:
                verdict = "pass" if o.passed else "FAIL"
                print(f"{o.name:<{width}}  statistic={o.statistic:.6g} "
                      f"{o.comparison} bound={o.bound:.6g}  [{verdict}]  {o.detail}")
            violation = any(not o.passed for o in outcomes)
            print("lemma suite:", "all checks passed" if not violation else "VIOLATIONS found")
        elif config.sweep == "regress-demo":
            from .sweeps import run_regress_demo

            records = run_regress_demo(config, kind=kind)
        else:
            records = run_sweep(config)
        write_csv(config.out, records)
    except OSError as exc:
        print(f"error writing {config.out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(records)} rows to {config.out}")
    return 2 if violation else 0


def entrypoint() -> None:
    raise SystemExit(main())
