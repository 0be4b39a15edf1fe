"""Command line front end.

Commands
--------
identities : run the exact identity suites, print PASS/FAIL per identity
kernels    : spectral kernel counts per variant and grid (no boundary mask)
constant   : coercivity / norm-equivalence constants under a boundary mask
babykorn   : factor-2 gradient bound on random zero-boundary fields

Exit codes: 0 success, 1 check failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .config import ConfigError, RunConfig, build_config
from .grid import GridError, build_grid
from .identities import run_identity_suite
from .reportio import fmt, write_csv, write_loglog_svg
from .spectra import (
    KERNEL_DIMS,
    SolverError,
    SpectrumReport,
    baby_korn_check,
    estimate_constant,
    kernel_dimension,
    norm_equivalence_constant,
)

BABY_KORN_BOUND = 2.05


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config file with a [run] section")
    p.add_argument("--domain", help="cube | lshape | slab | 'x0,y0,z0,x1,y1,z1[;...]'")
    p.add_argument("--h", help="comma list of spacings, e.g. '1/4,1/8'")
    p.add_argument("--variant", help="comma list of variant tags")
    p.add_argument("--bc", help="none | full | gamma")
    p.add_argument("--gamma", help="face tokens for bc=gamma, e.g. 'z-' or 'z-,x+'")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--format", dest="format", choices=("csv", "svg", "both"),
                   default=None)
    p.add_argument("--report", help="write a machine-readable result table here")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="devkorn",
        description="Exact incompatible-field calculus checks and "
                    "finite-difference Korn constant estimation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_id = sub.add_parser("identities", help="run the exact identity suites")
    _add_common(p_id)
    p_id.add_argument("--only", help="substring filter on identity names")
    p_id.add_argument("--algebra-cases", type=int, default=1000)
    p_id.add_argument("--field-cases", type=int, default=200)
    p_id.add_argument("--recon-cases", type=int, default=100)
    p_id.add_argument("--inject-fault", action="store_true",
                      help="harness self-test: add a sign-flipped probe that must fail")

    p_k = sub.add_parser("kernels", help="spectral kernel dimensions (bc = none)")
    _add_common(p_k)

    p_c = sub.add_parser("constant", help="constant estimation under a boundary mask")
    _add_common(p_c)

    p_b = sub.add_parser("babykorn", help="factor-2 bound on zero-boundary gradients")
    _add_common(p_b)
    p_b.add_argument("--n-fields", dest="n_fields", type=int, default=None)
    p_b.add_argument("--bound", type=float, default=BABY_KORN_BOUND)
    return parser


def cmd_identities(cfg: RunConfig, args) -> int:
    results = run_identity_suite(
        seed=cfg.seed,
        algebra_cases=args.algebra_cases,
        field_cases=args.field_cases,
        recon_cases=args.recon_cases,
        only=cfg.only,
        inject_fault=cfg.inject_fault,
    )
    if not results:
        print(f"no identity matches filter {cfg.only!r}", file=sys.stderr)
        return 2
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.name:<{width}} [{r.group}] {r.cases} cases"
        if not r.passed:
            failed += 1
            line += f" ({r.failures} failures; {r.detail})"
        print(line)
    print(f"{len(results) - failed}/{len(results)} identities passed")
    if cfg.report:
        rows = [f"{r.name},{r.group},{r.cases},{r.failures},"
                f"{'PASS' if r.passed else 'FAIL'}" for r in results]
        write_csv(cfg.report, "name,group,cases,failures,status", rows)
    return 0 if failed == 0 else 1


def _grids(cfg: RunConfig):
    for h in cfg.h_list:
        yield h, build_grid(cfg.boxes, h, gamma_spec=cfg.gamma_spec)


def cmd_kernels(cfg: RunConfig, args) -> int:
    if cfg.bc != "none":
        print("kernels runs without boundary conditions; use --bc none",
              file=sys.stderr)
        return 2
    tags = [t for t in cfg.variants if t != "devCurl_vs_Curl"]
    if not tags:
        print("kernels needs at least one coercivity variant", file=sys.stderr)
        return 2
    reports: list[SpectrumReport] = []
    ok = True
    for h, grid in _grids(cfg):
        for tag in tags:
            rep, _res, _forms = kernel_dimension(tag, grid, seed=cfg.seed)
            reports.append(rep)
            expected = KERNEL_DIMS[tag]
            good = rep.status == "OK" and rep.kernel_count == expected
            ok = ok and good
            print(f"{tag:>6} {cfg.domain} h={h}: kernel_count={rep.kernel_count} "
                  f"(expected {expected}) gap_ratio={fmt(rep.gap_ratio)} "
                  f"-> {rep.status if good or rep.status != 'OK' else 'MISMATCH'}")
    _write_spectrum_csv(cfg, reports, "kernels.csv")
    return 0 if ok else 1


def cmd_constant(cfg: RunConfig, args) -> int:
    if cfg.bc == "none":
        print("constant estimation needs --bc full or --bc gamma --gamma ...",
              file=sys.stderr)
        return 2
    reports: list[SpectrumReport] = []
    ok = True
    try:
        for h, grid in _grids(cfg):
            for tag in cfg.variants:
                if tag == "devCurl_vs_Curl":
                    rep, _forms = norm_equivalence_constant(grid, bc=cfg.bc,
                                                            seed=cfg.seed)
                else:
                    rep, _res, _forms = estimate_constant(tag, grid, bc=cfg.bc,
                                                          seed=cfg.seed)
                reports.append(rep)
                ok = ok and rep.status == "OK" and rep.kernel_count == 0
                print(f"{tag:>16} {cfg.domain} h={h} bc={cfg.bc}: "
                      f"lambda_min={fmt(rep.lambda_min)} c={fmt(rep.c_estimate)} "
                      f"kernel_count={rep.kernel_count} {rep.status}")
    except SolverError as exc:
        print(f"eigensolver failure: {exc}", file=sys.stderr)
        return 1
    _write_spectrum_csv(cfg, reports, "constant.csv")
    if cfg.fmt in ("svg", "both"):
        series = []
        for tag in cfg.variants:
            pts_l = [(float(r.h), r.lambda_min) for r in reports if r.variant == tag]
            pts_c = [(float(r.h), r.c_estimate) for r in reports if r.variant == tag]
            series.append((f"{tag} lambda_min", pts_l))
            series.append((f"{tag} c", pts_c))
        write_loglog_svg(cfg.out_dir / "constant.svg", series,
                         title=f"constant study: {cfg.domain}, bc={cfg.bc}",
                         xlabel="h", ylabel="lambda_min / c")
    return 0 if ok else 1


def cmd_babykorn(cfg: RunConfig, args) -> int:
    bound = args.bound
    rows = []
    worst = 0.0
    for h, grid in _grids(cfg):
        rep = baby_korn_check(grid, n_fields=cfg.n_fields, seed=cfg.seed,
                              bound=bound)
        worst = max(worst, rep.max_ratio)
        status = "PASS" if rep.passed else "FAIL"
        print(f"{cfg.domain} h={h}: max ratio {rep.max_ratio:.6f} over "
              f"{rep.n_fields} zero-boundary fields (bound {bound}) {status}")
        rows.append(f"{cfg.domain},{h},{rep.n_fields},{fmt(rep.max_ratio)},"
                    f"{fmt(bound)},{status}")
    write_csv(cfg.out_dir / "babykorn.csv",
              "domain,h,n_fields,max_ratio,bound,status", rows)
    return 0 if worst <= bound else 1


def _write_spectrum_csv(cfg: RunConfig, reports, name: str) -> None:
    write_csv(cfg.out_dir / name, SpectrumReport.CSV_HEADER,
              [r.csv_row() for r in reports])
    if cfg.report:
        write_csv(cfg.report, SpectrumReport.CSV_HEADER,
                  [r.csv_row() for r in reports])


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    values = {k: getattr(args, k, None) for k in
              ("config", "domain", "h", "variant", "bc", "gamma", "seed",
               "out", "format", "report", "n_fields", "only")}
    values["inject_fault"] = getattr(args, "inject_fault", False)
    try:
        cfg = build_config(args.command, values)
        if args.command == "identities":
            return cmd_identities(cfg, args)
        if args.command == "kernels":
            return cmd_kernels(cfg, args)
        if args.command == "constant":
            return cmd_constant(cfg, args)
        if args.command == "babykorn":
            return cmd_babykorn(cfg, args)
        parser.error(f"unknown command {args.command}")
    except (ConfigError, GridError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
