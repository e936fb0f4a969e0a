"""``infharm2d`` command line: field sampling, phase maps, interfaces and verification.

Exit codes: 0 success, 1 verification failure, 2 usage, config or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ._accel import configure_threads
from .config import ConfigError, RunConfig
from .interface import extract_interface
from .io import (
    interface_report_lines,
    phase_image,
    write_field_csv,
    write_interface_csv,
    write_phase_csv,
    write_ppm,
)
from .operator import grid_residual
from .phase import build_phase_map
from .quadrature import QuadratureError

log = logging.getLogger("infharm2d")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_field(cfg: RunConfig) -> int:
    m = cfg.build_map()
    jets = m.grid_jets(cfg.grid.xs, cfg.grid.ys)
    res = grid_residual(m, cfg.grid, cfg.rank_tol, jets)
    pm = build_phase_map(m, cfg.grid, cfg.rank_tol, jets)
    path = write_field_csv(_out_dir(cfg) / "field.csv", cfg.grid, jets.u, jets.Du, res.value, pm.rank_indicator)
    print(f"wrote {path} ({cfg.grid.nx * cfg.grid.ny} rows, max |residual| = {res.max_norm:.3e})")
    return EXIT_OK


def cmd_phase(cfg: RunConfig) -> int:
    pm = build_phase_map(cfg.build_map(), cfg.grid, cfg.rank_tol)
    out = _out_dir(cfg)
    img = write_ppm(out / "phase.ppm", phase_image(pm))
    dump = write_phase_csv(out / "phase.csv", pm)
    counts = ", ".join(f"{lab.display}={n}" for lab, n in pm.counts().items())
    print(f"wrote {img} and {dump} ({counts})")
    return EXIT_OK


def cmd_interface(cfg: RunConfig) -> int:
    pm = build_phase_map(cfg.build_map(), cfg.grid, cfg.rank_tol)
    ifg = extract_interface(pm, cfg.corner_deg, cfg.merge_deg)
    out = _out_dir(cfg)
    csv_path = write_interface_csv(out / "interface.csv", ifg)
    lines = interface_report_lines(ifg)
    (out / "interface_report.txt").write_text("".join(line + "\n" for line in lines))
    for line in lines:
        print(line)
    print(f"wrote {csv_path}: {len(ifg.polylines)} polylines, "
          f"{len(ifg.junctions)} junctions, {len(ifg.corners)} corners")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import run_verification

    results = run_verification(cfg)
    lines = [r.line() for r in results]
    failed = [r.name for r in results if not r.passed]
    lines.append(f"SUMMARY {len(results) - len(failed)}/{len(results)} passed"
                 + (f"; failed: {', '.join(failed)}" if failed else ""))
    (_out_dir(cfg) / "verify_report.txt").write_text("".join(line + "\n" for line in lines))
    for line in lines:
        print(line)
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"field": cmd_field, "phase": cmd_phase, "interface": cmd_interface, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infharm2d", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="config file, or a bundled name (case_a, case_b, exp_diag, negative_control)")
    p.add_argument("--out", help="output directory (overrides out.dir)")
    p.add_argument("--nx", help="grid nodes along x (overrides grid.nx)")
    p.add_argument("--ny", help="grid nodes along y (overrides grid.ny)")
    p.add_argument("--tol-rank", help="relative rank tolerance (overrides tol.rank)")
    p.add_argument("--fd-step", help="finite-difference step (overrides tol.fd_step)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    overrides = {
        "out.dir": args.out,
        "grid.nx": args.nx,
        "grid.ny": args.ny,
        "tol.rank": args.tol_rank,
        "tol.fd_step": args.fd_step,
    }
    try:
        cfg = RunConfig.from_file(args.config, overrides)
    except ConfigError as exc:
        print(f"infharm2d: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"infharm2d: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.debug("numba threads: %d", configure_threads())
    try:
        return COMMANDS[args.command](cfg)
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"infharm2d: I/O error{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, QuadratureError) as exc:
        print(f"infharm2d: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
