"""The ordered verification suite behind ``infharm2d verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import (
    check_prop2_affine,
    check_prop2_dichotomy,
    check_rank1_characterization,
    projection_jump,
)
from .config import RunConfig
from .interface import extract_interface
from .maps import Sign, sup_k_check
from .operator import e_infinity_estimate, fd_convergence, grid_residual, grid_residual_separated
from .phase import PhaseLabel, build_phase_map, oracle_agreement, oracle_sigma_samples

RESIDUAL_MAX = 1e-10
NEGATIVE_FLOOR = 1e-2
JUMP_DELTAS = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name:<22} measured={self.measured:.6e}  threshold {self.threshold}{extra}"


def run_verification(cfg: RunConfig) -> list[CheckResult]:
    m = cfg.build_map()
    grid = cfg.grid
    tol = cfg.rank_tol
    results: list[CheckResult] = []
    add = results.append

    interval = (min(grid.xmin, grid.ymin), max(grid.xmax, grid.ymax))
    profiles = [m.fcurve.profile] + ([m.gcurve.profile] if m.gcurve is not m.fcurve else [])
    sup = max((sup_k_check(p, interval, 10_000) for p in profiles), key=lambda r: r.max_abs_k)
    add(CheckResult("sup_k", sup.max_abs_k, "< pi/2", sup.ok, f"argmax t={sup.argmax:.6g}"))

    jets = m.grid_jets(grid.xs, grid.ys, values=False)
    res = grid_residual(m, grid, tol, jets)
    sep = grid_residual_separated(m, grid, tol)
    sep_max = float(np.hypot(sep[..., 0], sep[..., 1]).max())
    diff = float(np.abs(res.value - sep).max())
    if cfg.expect_solution:
        add(CheckResult("residual_index", res.max_norm, f"<= {RESIDUAL_MAX:g}", res.max_norm <= RESIDUAL_MAX))
        add(CheckResult("residual_separated", sep_max, f"<= {RESIDUAL_MAX:g}", sep_max <= RESIDUAL_MAX))
    else:
        add(CheckResult("residual_floor", res.max_norm, f">= {NEGATIVE_FLOOR:g}", res.max_norm >= NEGATIVE_FLOOR,
                        "non-solution must be flagged"))
    add(CheckResult("form_equivalence", diff, f"<= {RESIDUAL_MAX:g}", diff <= RESIDUAL_MAX))

    if m.gsign is Sign.MINUS_F:
        e_inf = e_infinity_estimate(m, grid)
        err = abs(e_inf - math.sqrt(2.0))
        add(CheckResult("e_infinity", err, "|E - sqrt2| <= 1e-14", err <= 1e-14, f"E={e_inf:.17g}"))

    h = cfg.fd_step
    probe = fd_convergence(m, *cfg.fd_point, steps=(h, h / 2, h / 4))
    if probe.exact:
        add(CheckResult("fd_convergence", max(probe.errors), "exact (affine point)", True))
    else:
        lo, hi = (0.8, math.inf) if probe.reduced_order else (1.8, 2.2)
        ok = all(lo <= o <= hi for o in probe.orders)
        add(CheckResult("fd_convergence", min(probe.orders), f"order in [{lo}, {hi}]", ok,
                        "orders=" + ",".join(f"{o:.4f}" for o in probe.orders)
                        + (" reduced-order stencil" if probe.reduced_order else "")))

    if not cfg.expect_solution:
        return results

    pm = build_phase_map(m, grid, tol, jets)
    if cfg.case is not None:
        agree = oracle_agreement(pm, cfg.case)
        add(CheckResult("oracle_agreement", agree.mismatches, "== 0 mismatches", agree.ok,
                        f"checked {agree.checked} nodes beyond {agree.margin:g}"))

    affine = check_prop2_affine(m, pm.points(pm.interior(PhaseLabel.ONE_DIM)))
    add(CheckResult("prop2_affine", affine.max_second_derivative, f"<= {affine.threshold:g}", affine.ok,
                    f"{affine.samples} samples, {affine.status}"))

    closure = pm.labels != PhaseLabel.TWO_DIM
    eps_grid = cfg.rank1_c * grid.h
    r1 = check_rank1_characterization(m, pm.points(closure), eps_grid)
    add(CheckResult("rank1_grid", r1.worst, f"<= {eps_grid:g}", r1.ok, f"{r1.samples} samples"))
    if cfg.case is not None:
        pts = oracle_sigma_samples(cfg.case, 50, min(abs(grid.xmin), grid.xmax, abs(grid.ymin), grid.ymax))
        r1o = check_rank1_characterization(m, pts, 1e-8)
        add(CheckResult("rank1_oracle", r1o.worst, "<= 1e-08", r1o.ok, f"{r1o.samples} samples on analytic interface"))

    ifg = extract_interface(pm, cfg.corner_deg, cfg.merge_deg)
    dich = check_prop2_dichotomy(ifg, m)
    branches = ",".join(p.branch for p in dich.pieces)
    add(CheckResult("prop2_dichotomy", dich.failures, "== 0 failing pieces", dich.ok,
                    f"{len(dich.pieces)} pieces [{branches}], {dich.skipped} skipped"))

    worst_dev = 0.0
    probes = 0
    normal = np.array([1.0, -1.0]) / math.sqrt(2.0)
    for p in dich.pieces:
        if not p.diagonal:
            continue
        piece = next(v for v in ifg.smooth_pieces if tuple(v[0]) == p.start and tuple(v[-1]) == p.end)
        mid = piece[len(piece) // 2]
        n = normal if p.slope > 0 else np.array([1.0, 1.0]) / math.sqrt(2.0)
        for d in JUMP_DELTAS:
            worst_dev = max(worst_dev, abs(projection_jump(m, mid, n, d, tol) - 1.0))
            probes += 1
    interior_pts = [pm.points(pm.interior(lab))[:1] for lab in (PhaseLabel.ONE_DIM, PhaseLabel.TWO_DIM)]
    interior_pts = [q[0] for q in interior_pts if len(q)]
    interior_jump = max((projection_jump(m, q, normal, 1e-3, tol) for q in interior_pts), default=0.0)
    add(CheckResult("projection_jump", worst_dev, "|jump - 1| <= 1e-2 on diagonal pieces",
                    worst_dev <= 1e-2, f"{probes} probes"))
    add(CheckResult("projection_interior", interior_jump, "<= 1e-10", interior_jump <= 1e-10,
                    f"{len(interior_pts)} interior probes"))

    if cfg.negative_control:
        twin = cfg.twin_plus_g()
        floor = grid_residual(twin, grid, tol).max_norm
        add(CheckResult("negative_control", floor, f">= {NEGATIVE_FLOOR:g}", floor >= NEGATIVE_FLOOR,
                        "residual of f(x)+f(y)"))
    return results
