"""Run configuration: domain presets, config files and flag merging.

Config files are flat key/value text in INI form with a single ``[run]``
section (``configparser`` syntax); every key has a command-line flag of the
same name, and flags override file values.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .grid import FACE_TOKENS
from .spectra import VARIANT_TAGS

DOMAIN_PRESETS = {
    "cube": (((0, 0, 0), (1, 1, 1)),),
    "lshape": (((0, 0, 0), (2, 1, 1)), ((0, 1, 0), (1, 2, 1))),
    "slab": (((0, 0, 0), (2, 1, 1)),),
}

CONFIG_KEYS = ("domain", "h", "variant", "bc", "gamma", "seed", "out",
               "format", "report", "n_fields", "only")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    domain: str = "cube"
    boxes: tuple = DOMAIN_PRESETS["cube"]
    h_list: tuple = (Fraction(1, 8),)
    variants: tuple = ("dS_dC",)
    bc: str = "none"
    seed: int = 0
    out_dir: Path = Path("out")
    fmt: str = "csv"
    report: Path | None = None
    n_fields: int = 50
    only: str | None = None
    inject_fault: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def gamma_spec(self) -> str:
        return {"none": "none", "full": "all"}.get(self.bc, self.bc)


def parse_h_list(text: str) -> tuple:
    out = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            h = Fraction(tok)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse spacing {tok!r}") from exc
        if h <= 0:
            raise ConfigError(f"spacing must be positive, got {tok}")
        out.append(h)
    if not out:
        raise ConfigError("at least one spacing h is required")
    return tuple(sorted(out, reverse=True))


def parse_domain(text: str) -> tuple:
    """Preset name, or explicit boxes 'x0,y0,z0,x1,y1,z1[;...]' with
    rational corners."""
    text = str(text).strip()
    if text in DOMAIN_PRESETS:
        return text, DOMAIN_PRESETS[text]
    boxes = []
    for part in text.split(";"):
        vals = [v.strip() for v in part.split(",")]
        if len(vals) != 6:
            raise ConfigError(
                f"explicit box needs 6 rational corners, got {part!r}")
        try:
            nums = [Fraction(v) for v in vals]
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad box corner in {part!r}") from exc
        boxes.append((tuple(nums[:3]), tuple(nums[3:])))
    return "custom", tuple(boxes)


def parse_variants(text: str) -> tuple:
    out = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in VARIANT_TAGS:
            raise ConfigError(f"unknown variant {tok!r} "
                              f"(expected one of {VARIANT_TAGS})")
        out.append(tok)
    if not out:
        raise ConfigError("at least one variant is required")
    return tuple(out)


def parse_bc(bc: str, gamma: str | None) -> str:
    bc = (bc or "none").strip()
    if bc == "gamma":
        if not gamma:
            raise ConfigError("bc=gamma requires --gamma with face tokens")
        for tok in gamma.split(","):
            if tok.strip() not in FACE_TOKENS:
                raise ConfigError(f"unknown face token {tok.strip()!r}")
        return gamma.strip()
    if bc not in ("none", "full"):
        raise ConfigError(f"bc must be none, full or gamma, got {bc!r}")
    return bc


def load_config_file(path) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file {path} not found or unreadable")
    if "run" not in parser:
        raise ConfigError("config file must contain a [run] section")
    values = {}
    for key, val in parser["run"].items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = val
    return values


def build_config(command: str, cli_values: dict) -> RunConfig:
    """Merge config-file values with CLI flags (flags win) into a RunConfig."""
    merged = {}
    if cli_values.get("config"):
        merged.update(load_config_file(cli_values["config"]))
    for key in CONFIG_KEYS:
        if cli_values.get(key) is not None:
            merged[key] = cli_values[key]

    domain_name, boxes = parse_domain(merged.get("domain", "cube"))
    h_list = parse_h_list(merged.get("h", "1/8"))
    variants = parse_variants(merged.get("variant", "dS_C,S_dC,dS_dC,S_C"))
    bc = parse_bc(merged.get("bc", "none"), merged.get("gamma"))
    try:
        seed = int(merged.get("seed", 0))
        n_fields = int(merged.get("n_fields", 50))
    except ValueError as exc:
        raise ConfigError(f"bad integer option: {exc}") from exc
    fmt = str(merged.get("format", "csv"))
    if fmt not in ("csv", "svg", "both"):
        raise ConfigError(f"format must be csv, svg or both, got {fmt!r}")
    report = merged.get("report")
    return RunConfig(
        command=command,
        domain=domain_name,
        boxes=boxes,
        h_list=h_list,
        variants=variants,
        bc=bc,
        seed=seed,
        out_dir=Path(merged.get("out", "out")),
        fmt=fmt,
        report=Path(report) if report else None,
        n_fields=n_fields,
        only=merged.get("only"),
        inject_fault=bool(cli_values.get("inject_fault", False)),
    )
