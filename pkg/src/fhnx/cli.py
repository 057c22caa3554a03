"""Command-line front end.

    fhnx <list|verify|stability|simulate|figure|constraints>
         [--config FILE] [--param section.key=value ...] [--json] [--out DIR]

Exit codes: 0 pass, 1 verification failure (or blow-up), 2 config error,
3 domain error.  Every command is deterministic given (config, seed): CSV
files are bytewise reproducible, numbers are serialized with 17 significant
digits, and JSON output validates against schemas/cli-output.schema.json.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .core import (
    BlowUp,
    BranchMismatch,
    ComplexResult,
    ConfigError,
    FhnxError,
    NonPositiveParameter,
    OutOfDomain,
    Params,
    SingularParameter,
)
from .simulate import convergence_study, run, write_frames
from .solutions import (
    FIXED_POINT_TAGS,
    closed_form_root_match,
    family_catalog,
    fixed_points,
    nonclassical_k,
    nonclassical_k_squared,
    sample_F,
    symmetry_catalog,
)
from .stability import classify_matrix, dispersion_sweep, jacobian_at
from .verify import (
    check_ansatz_constraints,
    invariant_surface_check,
    residual_system,
    residual_third_order,
)

_DOMAIN_ERRORS = (OutOfDomain, SingularParameter, NonPositiveParameter, ComplexResult)


def _fmt(x) -> str:
    """17 significant digits: round-trip exact for 64-bit floats."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _envelope(command: str, cfg: RunConfig, result: dict, passed: bool | None = None) -> dict:
    payload = {
        "command": command,
        "version": __version__,
        "config": cfg.resolved(),
        "result": result,
    }
    if passed is not None:
        payload["pass"] = bool(passed)
    return payload


def _io_options(args, cfg: RunConfig) -> tuple[bool, Path | None]:
    """(emit JSON to stdout, output directory); flags beat config values."""
    use_json = bool(args.json) or cfg.output_format() == "json"
    target = args.out if args.out is not None else (cfg.output_dir() or None)
    out = None
    if target is not None:
        out = Path(target)
        out.mkdir(parents=True, exist_ok=True)
    return use_json, out


# ---------------------------------------------------------------------------
# list
# ---------------------------------------------------------------------------


def _cmd_list(args) -> int:
    cfg = load_config(args.config, args.param)
    use_json, _ = _io_options(args, cfg)
    catalog = family_catalog()
    if args.family:
        if args.family not in catalog:
            raise ConfigError(f"unknown family {args.family!r}")
        catalog = {args.family: catalog[args.family]}
    if use_json:
        result = {"families": catalog}
        if not args.family:
            result["symmetries"] = list(symmetry_catalog())
        _emit_json(_envelope("list", cfg, result))
        return 0
    for tag, info in catalog.items():
        print(f"{tag}")
        print(f"  formula:   {info['formula']}")
        consts = ", ".join(info["constant_names"]) or "(none)"
        print(f"  constants: {consts}")
        print(f"  domain:    {info['domain']}")
        print(f"  steady:    {info['steady']}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _cmd_verify(args) -> int:
    cfg = load_config(args.config, args.param)
    use_json, out = _io_options(args, cfg)
    p = cfg.params()
    fam = cfg.family(p)
    grid = cfg.grid()

    reports = {
        "system_analytic": residual_system(fam, p, grid, "analytic"),
        "system_fd": residual_system(fam, p, grid, "finite-difference"),
        "third_order_analytic": residual_third_order(fam, p, grid, "analytic"),
    }
    if fam.steady:
        inv_A, inv_B = 0.0, 0.0
    else:
        inv_A, inv_B = fam.decay_rate, 0.0
    inv_defect = invariant_surface_check(fam, inv_A, inv_B, grid)

    root_match = None
    if fam.tag in FIXED_POINT_TAGS:
        idx = closed_form_root_match(p, fam.tag)
        roots = fixed_points(p)
        root_match = {
            "root_index": idx,
            "roots": [{"u": fp.u, "v": fp.v, "multiplicity": fp.multiplicity} for fp in roots],
        }

    checks = [
        ("system linf_u (analytic)", reports["system_analytic"].linf_u, cfg.tol("analytic")),
        ("system linf_v (analytic)", reports["system_analytic"].linf_v, cfg.tol("analytic")),
        ("system linf_u (finite-difference)", reports["system_fd"].linf_u, cfg.tol("finite_difference")),
        ("system linf_v (finite-difference)", reports["system_fd"].linf_v, cfg.tol("finite_difference")),
        ("third-order linf (analytic)", reports["third_order_analytic"].linf_u, cfg.tol("third_order")),
        ("invariant surface defect", inv_defect, cfg.tol("invariant_surface")),
    ]
    passed = all(value <= tol for _, value, tol in checks)

    result = {
        "family": fam.tag,
        "invariant_surface": {"A": inv_A, "B": inv_B, "defect": inv_defect},
        "reports": {name: rep.to_dict() for name, rep in reports.items()},
        "checks": [
            {"name": name, "value": value, "tolerance": tol, "pass": value <= tol}
            for name, value, tol in checks
        ],
    }
    if root_match is not None:
        result["closed_form_root_match"] = root_match

    if out is not None:
        rows = []
        for name, rep in reports.items():
            rows.append((fam.tag, name, "u", rep.method, rep.linf_u, rep.l2_u,
                         rep.worst_point[0], rep.worst_point[1], rep.sample_count))
            rows.append((fam.tag, name, "v", rep.method, rep.linf_v, rep.l2_v,
                         rep.worst_point[0], rep.worst_point[1], rep.sample_count))
        _write_csv(
            out / "residuals.csv",
            ["family", "check", "equation", "method", "linf", "l2",
             "worst_t", "worst_x", "sample_count"],
            rows,
        )
        (out / "verify_report.json").write_text(
            json.dumps(_envelope("verify", cfg, result, passed), sort_keys=True, indent=2) + "\n"
        )

    if use_json:
        _emit_json(_envelope("verify", cfg, result, passed))
    else:
        pr = cfg.section("params")
        gr = cfg.section("grid")
        print(
            "config: D={d} epsilon={epsilon} beta={beta} c={c}; grid "
            "[{x_min},{x_max}]x{nx} t[{t_min},{t_max}]x{nt}".format(**pr, **gr)
        )
        print(f"family: {fam.tag}")
        for note in fam.notes:
            print(f"note: {note}")
        print("boundary conditions: not part of the model; artifact choices are labeled")
        for name, value, tol in checks:
            verdict = "PASS" if value <= tol else "FAIL"
            print(f"{verdict}  {name}: {value:.3e} (tol {tol:.1e})")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------


def _cmd_stability(args) -> int:
    cfg = load_config(args.config, args.param)
    use_json, out = _io_options(args, cfg)
    p = cfg.params()
    s = cfg.section("stability")
    if s["u_star"] == "auto":
        points = [(fp.u, fp.v) for fp in fixed_points(p)]
    else:
        try:
            u_star = float(s["u_star"])
        except ValueError as exc:
            raise ConfigError("stability.u_star must be 'auto' or a number") from exc
        points = [(u_star, u_star / p.beta)]

    k_max, n = s["k_max"], s["n"]
    result_points = []
    for idx, (u_star, v_star) in enumerate(points):
        m = jacobian_at(p, u_star, 0.0)
        eigs, label = classify_matrix(m)
        sweep = dispersion_sweep(p, u_star, k_max, n)
        result_points.append(
            {
                "u_star": u_star,
                "v_star": v_star,
                "jacobian": [[float(m[0, 0]), float(m[0, 1])],
                             [float(m[1, 0]), float(m[1, 1])]],
                "eigenvalues": [[e.real, e.imag] for e in eigs],
                "classification": label,
                "band_edges": list(sweep.band_edges),
            }
        )
        if out is not None:
            _write_csv(
                out / f"dispersion_{idx}.csv",
                ["k", "re_sigma_1", "re_sigma_2", "im_sigma_1", "im_sigma_2"],
                sweep.rows(),
            )

    if use_json:
        _emit_json(_envelope("stability", cfg, {"points": result_points}))
    else:
        for pt in result_points:
            print(
                f"u*={_fmt(pt['u_star'])} v*={_fmt(pt['v_star'])}: "
                f"{pt['classification']}; band edges: "
                + (", ".join(_fmt(e) for e in pt["band_edges"]) or "(none)")
            )
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _cmd_simulate(args) -> int:
    overrides = list(args.param)
    if args.scheme:
        overrides.append(f"sim.scheme={args.scheme}")
    if args.cfl is not None:
        overrides.append(f"sim.cfl_safety={args.cfl!r}")
    if args.refinements is not None:
        overrides.append(f"sim.refinements={args.refinements}")
    cfg = load_config(args.config, overrides)

    use_json, out = _io_options(args, cfg)
    p = cfg.params()
    fam = cfg.family(p)
    sim_cfg = cfg.sim_config()
    sim_cfg.check_cfl(p)  # reject bad explicit steps at startup

    result: dict = {"family": fam.tag, "scheme": sim_cfg.scheme, "bc": sim_cfg.bc}

    refinements = cfg.section("sim")["refinements"]
    if refinements >= 2:
        study = convergence_study(
            fam, p, sim_cfg.grid, refinements,
            scheme=sim_cfg.scheme, bc=sim_cfg.bc, cfl_safety=sim_cfg.cfl_safety,
        )
        result["convergence"] = {
            "levels": list(study.levels),
            "orders": list(study.orders),
            "order_mean": study.order_mean,
        }
        if out is not None:
            _write_csv(
                out / "convergence.csv",
                ["nx", "nt", "dx", "dt", "err_linf_u"],
                [(lv["nx"], lv["nt"], lv["dx"], lv["dt"], lv["err"]) for lv in study.levels],
            )

    sim = run(fam, p, sim_cfg)
    result["max_error_linf_u"] = sim.max_error_u()
    result["max_error_linf_v"] = sim.max_error_v()

    if out is not None:
        _write_csv(
            out / "errors.csv",
            ["t", "linf_u", "l2_u", "linf_v", "l2_v"],
            [(sim.ts[i], *sim.errors[i]) for i in range(len(sim.ts))],
        )
        _write_csv(
            out / "trajectory.csv",
            ["t", "x", "u", "v"],
            (
                (sim.ts[i], sim.xs[j], sim.us[i, j], sim.vs[i, j])
                for i in range(len(sim.ts))
                for j in range(len(sim.xs))
            ),
        )
        write_frames(out / "frames.bin", sim.ts, sim.xs, sim.us, sim.vs)

    if use_json:
        _emit_json(_envelope("simulate", cfg, result))
    else:
        print(f"family: {fam.tag}  scheme: {sim_cfg.scheme}  bc: {sim_cfg.bc}")
        print(f"max Linf error vs exact: u {sim.max_error_u():.3e}, v {sim.max_error_v():.3e}")
        if "convergence" in result:
            orders = ", ".join(f"{o:.3f}" for o in result["convergence"]["orders"])
            print(f"observed spatial orders: {orders}")
    return 0


# ---------------------------------------------------------------------------
# figure
# ---------------------------------------------------------------------------

_GNUPLOT_TEMPLATE = """\
# gnuplot script: solution surface {what}(t, x)
set datafile separator comma
set xlabel 't'
set ylabel 'x'
set zlabel '{what}'
set dgrid3d {nt},{nx}
set hidden3d
splot '{csv}' every ::1 using 1:2:3 with lines notitle
pause -1
"""


def _cmd_figure(args) -> int:
    cfg = load_config(args.config, args.param)
    use_json, out = _io_options(args, cfg)
    p = cfg.params()
    fam = cfg.family(p)
    grid = cfg.grid()
    what = "u" if args.figure == 1 else "v"

    T, X = grid.meshes()
    u, v = fam.eval(T, X)
    field = u if args.figure == 1 else v

    out = out or Path(".")
    csv_name = f"figure{args.figure}_{what}.csv"
    _write_csv(
        out / csv_name,
        ["t", "x", what],
        (
            (T[i, j], X[i, j], field[i, j])
            for i in range(grid.nt)
            for j in range(grid.nx)
        ),
    )
    script = _GNUPLOT_TEMPLATE.format(what=what, nt=grid.nt, nx=grid.nx, csv=csv_name)
    (out / f"figure{args.figure}.gp").write_text(script)

    result = {
        "family": fam.tag,
        "figure": args.figure,
        "csv": str(out / csv_name),
        "script": str(out / f"figure{args.figure}.gp"),
        "origin_value": float(np.asarray(field)[np.argmin(np.abs(grid.ts())), np.argmin(np.abs(grid.xs()))]),
    }
    if use_json:
        _emit_json(_envelope("figure", cfg, result))
    else:
        print(f"wrote {result['csv']} and {result['script']}")
    return 0


# ---------------------------------------------------------------------------
# constraints
# ---------------------------------------------------------------------------


def _cmd_constraints(args) -> int:
    cfg = load_config(args.config, args.param)
    use_json, _ = _io_options(args, cfg)
    p = cfg.params()
    s = cfg.section("ansatz")
    if s["a"] == "auto":
        A = -p.epsilon * p.beta / 3.0
    else:
        try:
            A = float(s["a"])
        except ValueError as exc:
            raise ConfigError("ansatz.a must be 'auto' or a number") from exc
    B = s["b"]
    xs = np.linspace(s["x_min"], s["x_max"], s["n"])
    fam_sec = cfg.section("family")
    samples = sample_F(p, A, B, fam_sec["c1"], fam_sec["c2"], xs)
    report = check_ansatz_constraints(p, A, B, samples)

    # wavenumber identity sweep (seeded)
    rng = np.random.default_rng(cfg.seed())
    worst_rel = 0.0
    for _ in range(s["k_sweep"]):
        q = Params(
            D=rng.uniform(0.1, 5.0),
            epsilon=rng.uniform(0.01, 2.0),
            beta=rng.uniform(0.5, 4.0),
        )
        k = nonclassical_k(q)
        k2 = nonclassical_k_squared(q)
        # relative with absolute floor (cancellation near the zero of k**2)
        rel = abs(k * k - k2) / max(1.0, abs(k2))
        worst_rel = max(worst_rel, rel)

    k_here = nonclassical_k(p)
    tol = cfg.tol("constraint")
    passed = (
        report.eq19 <= 1e-12
        and report.eq20 == 0.0
        and report.eq22 == 0.0
        and report.eq21_reduced <= tol
        and report.eq21_printed <= tol
        and worst_rel <= 1e-12
    )
    result = {
        "A": A,
        "B": B,
        "constraints": report.to_dict(),
        "wavenumber": {
            "k_re": k_here.real,
            "k_im": k_here.imag,
            "k_squared": nonclassical_k_squared(p),
            "imaginary": k_here.real == 0.0 and k_here.imag != 0.0,
            "sweep_count": s["k_sweep"],
            "sweep_worst_rel": worst_rel,
        },
    }
    if use_json:
        _emit_json(_envelope("constraints", cfg, result, passed))
    else:
        print(f"A = {_fmt(A)}, B = {_fmt(B)}")
        for name, value in report.to_dict().items():
            print(f"{name}: {value:.3e}")
        print(f"k = {_fmt(k_here.real)} + {_fmt(k_here.imag)} i, k^2 = {_fmt(nonclassical_k_squared(p))}")
        print(f"wavenumber identity sweep ({s['k_sweep']} draws): worst rel {worst_rel:.3e}")
        print("PASS" if passed else "FAIL")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhnx",
        description=(
            "Exact solutions of the diffusive FitzHugh-Nagumo system: catalog, "
            "residual verification, stability analysis, numerical cross-check. "
            "Elliptic-function arguments use the modulus convention (second "
            "argument k, not the parameter m = k**2)."
        ),
    )
    parser.add_argument("--version", action="version", version=f"fhnx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", type=str, default=None, help="config file path")
        sp.add_argument(
            "--param",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override a config value (repeatable)",
        )
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.add_argument("--out", type=str, default=None, help="directory for output files")

    sp = sub.add_parser("list", help="print the solution-family catalog")
    common(sp)
    sp.add_argument("--family", type=str, default=None, help="restrict to one tag")
    sp.set_defaults(handler=_cmd_list)

    sp = sub.add_parser("verify", help="residual + invariant-surface verification")
    common(sp)
    sp.set_defaults(handler=_cmd_verify)

    sp = sub.add_parser("stability", help="fixed-point classification and dispersion")
    common(sp)
    sp.set_defaults(handler=_cmd_stability)

    sp = sub.add_parser("simulate", help="method-of-lines cross-check run")
    common(sp)
    sp.add_argument("--scheme", choices=["rk4", "semi-implicit"], default=None)
    sp.add_argument("--cfl", type=float, default=None, help="cfl safety factor")
    sp.add_argument("--refinements", type=int, default=None,
                    help="convergence-study refinement count (>= 2 enables the study)")
    sp.set_defaults(handler=_cmd_simulate)

    sp = sub.add_parser("figure", help="emit surface data + gnuplot script")
    common(sp)
    sp.add_argument("--figure", type=int, choices=[1, 2], required=True,
                    help="1: u surface, 2: v surface")
    sp.set_defaults(handler=_cmd_figure)

    sp = sub.add_parser("constraints", help="ansatz constraint residuals + wavenumber identity")
    common(sp)
    sp.set_defaults(handler=_cmd_constraints)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:  # includes CflViolation
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _DOMAIN_ERRORS as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (BlowUp, BranchMismatch) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except FhnxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
