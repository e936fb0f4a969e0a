"""Run configuration: flat ``section.key = value`` files with ``#`` comments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .maps import KProfile, SeparatedMap, Sign, load_profile
from .operator import GridSpec
from .phase import OracleCase


class ConfigError(ValueError):
    """Invalid or incomplete configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


DEFAULTS = {
    "k.slope": "1.0",
    "map.sign": "minus_f",
    "tol.rank": "1e-8",
    "tol.quad": "1e-12",
    "tol.fd_step": "1e-2",
    "out.dir": ".",
    "verify.case": "none",
    "verify.expect": "solution",
    "verify.fd_point": "2, 3",
    "verify.negative_control": "true",
    "verify.rank1_c": "1.0",
    "interface.corner_deg": "20",
    "interface.merge_deg": "1",
}
REQUIRED = ("k.kind", "grid.xmin", "grid.xmax", "grid.ymin", "grid.ymax", "grid.nx", "grid.ny")
OPTIONAL = ("k.knots_file", "g.kind", "g.slope", "g.knots_file")
KNOWN = frozenset(DEFAULTS) | frozenset(REQUIRED) | frozenset(OPTIONAL)
BUNDLED = ("case_a", "case_b", "exp_diag", "negative_control")


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'section.key = value' in {source}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN:
            raise ConfigError(key, f"unknown key in {source}")
        entries[key] = value
    return entries


def resolve_config_path(name: str) -> Path:
    """A filesystem path, or the name of a bundled config (``case_a`` etc.)."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name[:-4] if p.name.endswith(".cfg") else p.name
    if stem in BUNDLED and p.parent == Path("."):
        return Path(str(resources.files("infharm2d") / "configs" / f"{stem}.cfg"))
    raise FileNotFoundError(f"config file not found: {name}")


@dataclass(frozen=True)
class RunConfig:
    profile: KProfile
    sign: Sign
    gprofile: KProfile | None
    grid: GridSpec
    rank_tol: float = 1e-8
    quad_tol: float = 1e-12
    fd_step: float = 1e-2
    out_dir: Path = Path(".")
    case: OracleCase | None = None
    expect_solution: bool = True
    fd_point: tuple[float, float] = (2.0, 3.0)
    negative_control: bool = True
    rank1_c: float = 1.0
    corner_deg: float = 20.0
    merge_deg: float = 1.0
    source: Path | None = field(default=None, compare=False)

    @property
    def support(self) -> tuple[float, float]:
        # covers the grid, FD stencils and jump probes around it
        g = self.grid
        pad = 1.0 + 4 * self.fd_step
        return (min(g.xmin, g.ymin) - pad, max(g.xmax, g.ymax) + pad)

    def build_map(self) -> SeparatedMap:
        if self.sign is Sign.MINUS_F:
            return SeparatedMap.minus_f(self.profile, self.support, self.quad_tol)
        return SeparatedMap.plus_g(self.profile, self.gprofile, self.support, self.quad_tol)

    def twin_plus_g(self) -> SeparatedMap:
        """The non-solution ``f(x) + f(y)`` built from the same profile."""
        return SeparatedMap.plus_g(self.profile, None, self.support, self.quad_tol)

    @classmethod
    def from_file(cls, path, overrides: dict[str, str] | None = None) -> "RunConfig":
        path = resolve_config_path(str(path))
        entries = parse_config_text(path.read_text(), str(path))
        entries.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_entries(entries, path)

    @classmethod
    def from_entries(cls, entries: dict[str, str], source: Path | None = None) -> "RunConfig":
        merged = dict(DEFAULTS)
        merged.update(entries)
        for key in REQUIRED:
            if key not in merged or merged[key] == "":
                raise ConfigError(key, "missing required key")
        base = source.parent if source is not None else Path(".")

        def num(key, kind=float, positive=False):
            try:
                v = kind(merged[key])
            except ValueError:
                raise ConfigError(key, f"not a valid {kind.__name__}: {merged[key]!r}") from None
            if kind is float and not math.isfinite(v):
                raise ConfigError(key, "must be finite")
            if positive and not v > 0:
                raise ConfigError(key, "must be positive")
            return v

        def profile(section):
            kind = merged.get(f"{section}.kind", merged["k.kind"])
            knots = merged.get(f"{section}.knots_file", merged.get("k.knots_file"))
            if knots is not None:
                knots = base / knots
                if not knots.exists():
                    raise ConfigError(f"{section}.knots_file", f"file not found: {knots}")
            slope_key = f"{section}.slope" if f"{section}.slope" in merged else "k.slope"
            try:
                return load_profile(kind, num(slope_key), knots)
            except (ValueError, OSError) as exc:
                raise ConfigError(f"{section}.kind", str(exc)) from None

        try:
            sign = Sign(merged["map.sign"].strip().lower())
        except ValueError:
            raise ConfigError("map.sign", "expected minus_f or plus_g") from None
        fprof = profile("k")
        gprof = profile("g") if sign is Sign.PLUS_G and "g.kind" in merged else None

        try:
            grid = GridSpec(num("grid.xmin"), num("grid.xmax"), num("grid.ymin"), num("grid.ymax"),
                            num("grid.nx", int), num("grid.ny", int))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("grid", str(exc)) from None

        case_raw = merged["verify.case"].strip().lower()
        try:
            case = None if case_raw in ("", "none") else OracleCase.parse(case_raw)
        except ValueError:
            raise ConfigError("verify.case", "expected a, b, diag or none") from None
        expect = merged["verify.expect"].strip().lower()
        if expect not in ("solution", "non_solution"):
            raise ConfigError("verify.expect", "expected solution or non_solution")
        try:
            fx, fy = (float(v) for v in merged["verify.fd_point"].split(","))
        except ValueError:
            raise ConfigError("verify.fd_point", "expected 'x, y'") from None
        neg = merged["verify.negative_control"].strip().lower()
        if neg not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError("verify.negative_control", "expected true or false")

        return cls(
            profile=fprof,
            sign=sign,
            gprofile=gprof,
            grid=grid,
            rank_tol=num("tol.rank", positive=True),
            quad_tol=num("tol.quad", positive=True),
            fd_step=num("tol.fd_step", positive=True),
            out_dir=Path(merged["out.dir"]),
            case=case,
            expect_solution=expect == "solution",
            fd_point=(fx, fy),
            negative_control=neg in ("true", "1", "yes"),
            rank1_c=num("verify.rank1_c", positive=True),
            corner_deg=num("interface.corner_deg", positive=True),
            merge_deg=num("interface.merge_deg", positive=True),
            source=source,
        )
