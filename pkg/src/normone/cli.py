"""Batch command-line front end.

    normone <field-info|enumerate|weyl|discrepancy|lcheck|oracle|accept> [--flags]

Every command writes deterministic CSV (header row, ``\\n`` line endings)
plus a JSON summary into ``--out`` when given, and prints a short summary.
Exit codes: 0 ok, 1 usage, 2 config / input / I/O, 3 resource, 4 acceptance
or oracle mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .errors import ConfigError, InvalidInput, NormOneError, ResourceError
from .field import MIN_PRECISION, builtin_field, default_precision, load_field
from .hilbert90 import DEFAULT_MAX_BOX_POINTS, brute_force_oracle, enumerate_visible
from .units import unit_system

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RESOURCE, EXIT_FAILED = 0, 1, 2, 3, 4
COMMANDS = ("field-info", "enumerate", "weyl", "discrepancy", "lcheck", "oracle", "accept")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    field: str = "builtin:sqrt2"
    bounds: tuple[float, ...] = (1e3,)
    ks: tuple[tuple[int, ...], ...] = ((1,),)
    s: tuple[float, ...] = (2.0,)
    cutoffs: tuple[float, ...] = (1e4,)
    grid: int = 256
    precision: int = dc_field(default_factory=default_precision)
    out: Path | None = None
    workers: int = 1
    max_box_points: int = DEFAULT_MAX_BOX_POINTS
    box: int = 50
    tol: float = 1e-8

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise UsageError(f"--precision must be >= {MIN_PRECISION}")
        if any(b >= a for a, b in zip(self.bounds[1:], self.bounds)):
            raise UsageError("--bounds must be strictly increasing")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.grid < 1:
            raise UsageError("--grid must be >= 1")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _characters(text: str) -> tuple[tuple[int, ...], ...]:
    """'1,2' -> ((1,), (2,)); '1:0,0:1' -> ((1, 0), (0, 1))."""
    try:
        return tuple(tuple(int(c) for c in item.split(":")) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected characters like 1,2 or 1:0,0:1, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="normone", description="Norm-one torus points of cyclic number fields.",
                allow_abbrev=False)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--field", default="builtin:sqrt2", help="builtin:sqrt2, builtin:cubic13, ... or a JSON config path")
    p.add_argument("--bounds", type=_floats, default=(1e3,), help="norm bounds r, e.g. 1e3,1e4,1e5")
    p.add_argument("--k", type=_characters, default=((1,),), help="characters: 1,2 or 1:0,0:1")
    p.add_argument("--s", type=_floats, default=(2.0,))
    p.add_argument("--cutoff", type=_floats, default=(1e4,))
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--out", type=Path)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--precision", type=int, default=None, help="bits (default: $NORMONE_PRECISION_BITS or 192)")
    p.add_argument("--max-box-points", type=float, default=DEFAULT_MAX_BOX_POINTS)
    p.add_argument("--box", type=int, default=50, help="oracle box radius")
    p.add_argument("--tol", type=float, default=1e-8, help="collision tolerance for enumerate")
    return p


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(command=ns.command, field=ns.field, bounds=ns.bounds, ks=ns.k, s=ns.s,
                     cutoffs=ns.cutoff, grid=ns.grid,
                     precision=ns.precision if ns.precision is not None else default_precision(),
                     out=ns.out, workers=ns.workers, max_box_points=int(ns.max_box_points),
                     box=ns.box, tol=ns.tol)


# -- helpers -------------------------------------------------------------------

def load(cfg: RunConfig):
    src = cfg.field
    if src.startswith("builtin:"):
        return builtin_field(src, cfg.precision)
    if not Path(src).exists():
        raise FileNotFoundError(f"field config not found: {src}")
    return load_field(src, cfg.precision)


def _bound_label(r: float) -> str:
    return str(int(r)) if float(r).is_integer() else repr(float(r))


def _csv(header, rows) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(cfg: RunConfig, name: str, text: str) -> None:
    if cfg.out is None:
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    with open(cfg.out / name, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _summary(cfg: RunConfig, name: str, payload: dict) -> None:
    _write(cfg, name, json.dumps(payload, indent=1, sort_keys=True) + "\n")


def _reports(cfg: RunConfig, units):
    return [enumerate_visible(units, r, workers=cfg.workers, max_box_points=cfg.max_box_points)
            for r in cfg.bounds]


def _check_k(units, ks):
    for k in ks:
        if len(k) != units.rank:
            raise InvalidInput(f"character {k} has dimension {len(k)}, torus has {units.rank}")


# -- commands ------------------------------------------------------------------

def cmd_field_info(cfg: RunConfig, out=print) -> int:
    K = load(cfg)
    U = unit_system(K)
    info = {"field": K.describe(), "units": U.describe()}
    out(json.dumps(info, indent=1, sort_keys=True))
    _summary(cfg, "field_info.json", info)
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, out=print) -> int:
    from .hilbert90 import collision_scan

    U = unit_system(load(cfg))
    summary = []
    for rep in _reports(cfg, U):
        label = _bound_label(rep.bound)
        _write(cfg, f"enumerate_r{label}.csv", rep.to_csv())
        groups = collision_scan(rep, cfg.tol)
        out(f"r={label}: {rep.count} classes, {len(groups)} collision groups, {rep.wall_clock:.2f}s")
        summary.append({"r": rep.bound, "count": rep.count, "box_radius": list(rep.box_radius),
                        "collisions": [[c.h for c in g] for g in groups], "assumptions": list(rep.assumptions)})
    _summary(cfg, "enumerate.json", {"field": U.field.name, "runs": summary})
    return EXIT_OK


def cmd_weyl(cfg: RunConfig, out=print) -> int:
    from .torus import weyl_sum

    U = unit_system(load(cfg))
    _check_k(U, cfg.ks)
    rows = []
    for rep in _reports(cfg, U):
        for k in cfg.ks:
            w = weyl_sum(rep, k)
            rows.append(w.csv_row())
            out(f"r={_bound_label(rep.bound)} k={k}: |S|={abs(w.S):.6g}, |S|/count={w.normalized:.6g} ({w.count} classes)")
    rank = U.rank
    header = ["r", *(f"k_{i + 1}" for i in range(rank)), "re_S", "im_S", "norm_mag", "count"]
    _write(cfg, "weyl.csv", _csv(header, rows))
    _summary(cfg, "weyl.json", {"field": U.field.name, "bounds": list(cfg.bounds), "k": [list(k) for k in cfg.ks],
                                "rows": len(rows)})
    return EXIT_OK


def cmd_discrepancy(cfg: RunConfig, out=print) -> int:
    from .torus import star_discrepancy

    U = unit_system(load(cfg))
    if U.rank == 0:
        raise InvalidInput("the torus is trivial for this field; discrepancy is undefined")
    rows = []
    for rep in _reports(cfg, U):
        if rep.count == 0:
            raise InvalidInput(f"no classes below r={rep.bound:g}")
        D = star_discrepancy(rep, cfg.grid)
        exact = U.rank == 1
        rows.append([repr(float(rep.bound)), rep.count, repr(D), "exact" if exact else f"grid{cfg.grid}"])
        out(f"r={_bound_label(rep.bound)}: D* = {D:.6g} ({rep.count} points, {'exact' if exact else f'grid {cfg.grid}'})")
    _write(cfg, "discrepancy.csv", _csv(["r", "count", "star_discrepancy", "method"], rows))
    _summary(cfg, "discrepancy.json", {"field": U.field.name, "rows": len(rows)})
    return EXIT_OK


def cmd_lcheck(cfg: RunConfig, out=print) -> int:
    from .lseries import identity_check

    for s in cfg.s:
        if not s > 1:
            raise InvalidInput(f"series needs s > 1, got {s}")
    U = unit_system(load(cfg))
    ks = tuple(k for k in cfg.ks) or ((0,) * U.rank,)
    _check_k(U, ks)
    X_max = max(cfg.cutoffs)
    rep = enumerate_visible(U, int(X_max) + 1, workers=cfg.workers, max_box_points=cfg.max_box_points)
    rows, checks = [], []
    for k in ks:
        for s in cfg.s:
            for X in cfg.cutoffs:
                chk = identity_check(rep, k, s, X)
                rows.append(chk.csv_row())
                flag = " (insufficient cutoff)" if chk.insufficient_cutoff else ""
                out(f"k={k} s={s:g} X={X:g}: |ratio-1|={chk.residual:.3e}, |ratio/2-1|={chk.residual2:.3e}, "
                    f"matches {chk.verdict}{flag}")
                checks.append({"k": list(k), "s": s, "X": X, "ratio": [chk.ratio.real, chk.ratio.imag],
                               "verdict": chk.verdict, "insufficient_cutoff": chk.insufficient_cutoff,
                               "tail_heuristic": chk.L.tail})
    header = [*(f"k_{i + 1}" for i in range(U.rank)), "s", "X", "re_value", "im_value", "tail", "ratio"]
    _write(cfg, "lcheck.csv", _csv(header, rows))
    _summary(cfg, "lcheck.json", {"field": U.field.name, "checks": checks})
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, out=print) -> int:
    U = unit_system(load(cfg))
    failed = False
    runs = []
    for r in cfg.bounds:
        want = brute_force_oracle(U, cfg.box, r)
        got = enumerate_visible(U, r, workers=cfg.workers, max_box_points=cfg.max_box_points)
        diff = sorted(want.class_keys() ^ got.class_keys())
        failed |= bool(diff)
        out(f"r={_bound_label(r)}: enumerate {got.count}, oracle {want.count}, {len(diff)} differing classes")
        runs.append({"r": r, "enumerate": got.count, "oracle": want.count,
                     "differences": [[h, list(c)] for h, c in diff]})
    _summary(cfg, "oracle.json", {"field": U.field.name, "box": cfg.box, "runs": runs})
    return EXIT_FAILED if failed else EXIT_OK


def cmd_accept(cfg: RunConfig, out=print) -> int:
    from .acceptance import run_all

    results = run_all(echo=out)
    passed = sum(r.passed for r in results)
    out(f"{passed}/{len(results)} criteria passed")
    rows = [[r.number, r.name, "pass" if r.passed else "fail", r.detail] for r in results]
    _write(cfg, "acceptance.csv", _csv(["criterion", "name", "result", "detail"], rows))
    return EXIT_OK if passed == len(results) else EXIT_FAILED


HANDLERS = {
    "field-info": cmd_field_info,
    "enumerate": cmd_enumerate,
    "weyl": cmd_weyl,
    "discrepancy": cmd_discrepancy,
    "lcheck": cmd_lcheck,
    "oracle": cmd_oracle,
    "accept": cmd_accept,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    err = lambda msg: print(f"normone: {msg}", file=sys.stderr)
    try:
        cfg = parse_config(argv)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        err(f"usage error: {exc}")
        return EXIT_USAGE
    except ConfigError as exc:
        err(f"config error [{exc.invariant}]: {exc}")
        return EXIT_CONFIG
    except ResourceError as exc:
        err(f"resource error: {exc} (box volume {exc.box_volume})")
        return EXIT_RESOURCE
    except (InvalidInput, OSError) as exc:
        err(f"error: {exc}")
        return EXIT_CONFIG
    except NormOneError as exc:
        err(f"error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
