"""Command-line front end: ``pseudobosons <command> [flags]``.

Exit codes: 0 when every check passes, 2 when a check fails, 3 for
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Callable

import numpy as np

from . import bicoherent as bc
from . import dho
from . import gll
from .affine import adjoint, apply_affine, coefficient_distance
from .errors import ConfigError, PseudoBosonError
from .polygauss import gram_matrix, inner_product
from .report import Check, INFO, Report, write_atomic

EXACT_TOL = 1e-14

# kind of each parameter; complex values accept numbers, "a+bj" strings or [re, im]
KINDS = {
    "k1": float, "k2": float, "nmax": int, "lmax": int, "z": complex, "zp": complex,
    "nodes": int, "scale": float, "m": float, "gamma": float, "k": float,
    "Gamma": complex, "delta": complex, "seed": int, "tol": float, "n": int,
}

DEFAULTS: dict[str, dict[str, Any]] = {
    "gll-verify": {"k1": 0.2, "k2": -0.3, "nmax": 6, "lmax": 6, "seed": 0, "tol": 1e-10},
    "gll-coherent": {"k1": 0.1, "k2": 0.1, "z": 1.0, "zp": 1j, "nmax": 16, "lmax": 16, "tol": 1e-10},
    "gll-roi": {"k1": 0.2, "k2": -0.2, "nodes": 24, "scale": 1.0, "n": 1, "seed": 0, "tol": 1e-3},
    "dho-check": {"m": 1.0, "gamma": 0.5, "k": 2.0, "Gamma": 1 + 1j, "delta": None, "seed": 0,
                  "tol": 1e-10},
    "dho-sweep": {"n": 1000, "seed": 0},
    "sll-baseline": {"nmax": 6, "lmax": 6, "nodes": 16, "scale": 1.0, "seed": 0, "tol": 1e-10},
}

FORMATS = ("json", "csv", "both")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _coerce(key: str, value: Any) -> Any:
    kind = KINDS[key]
    if value is None:
        if key == "delta":
            return None
        raise ConfigError(f"{key} may not be null")
    try:
        if kind is complex:
            if isinstance(value, (list, tuple)):
                re, im = value
                return complex(float(re), float(im))
            if isinstance(value, str):
                return complex(value.replace(" ", ""))
            if isinstance(value, bool):
                raise TypeError
            return complex(value)
        if kind is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError
            return int(value)
        if isinstance(value, bool):
            raise TypeError
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot read {value!r} as {kind.__name__}") from None


def resolve_config(command: str, file_cfg: dict | None, overrides: dict) -> dict:
    """Merge defaults, a config file and command-line overrides; reject unknown keys."""
    if command not in DEFAULTS:
        raise ConfigError(f"unknown command {command!r}")
    allowed = DEFAULTS[command]
    params = dict(allowed)
    fmt = "json"
    if file_cfg is not None:
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        file_cfg = dict(file_cfg)
        if "command" in file_cfg and file_cfg.pop("command") != command:
            raise ConfigError("config file is for a different command")
        fmt = file_cfg.pop("format", fmt)
        nested = file_cfg.pop("params", {})
        if not isinstance(nested, dict):
            raise ConfigError("'params' must be an object")
        flat = {**nested, **file_cfg}
        for key, value in flat.items():
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} for {command}")
            params[key] = value
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "format":
            fmt = value
        else:
            params[key] = value
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    params = {key: _coerce(key, params[key]) for key in allowed}
    _validate(command, params)
    return {"command": command, "params": params, "format": fmt}


def _validate(command: str, p: dict) -> None:
    """Range checks that must pass before any computation starts."""
    def need(cond: bool, msg: str):
        if not cond:
            raise ConfigError(msg)

    if "k1" in p:
        _wrap(lambda: gll.GLLParams(p["k1"], p["k2"]))
    for key in ("nmax", "lmax"):
        if key in p:
            need(0 <= p[key] <= gll.MAX_LADDER, f"{key} must lie in [0, {gll.MAX_LADDER}]")
    if "nodes" in p:
        need(8 <= p["nodes"] <= 64, "nodes must lie in [8, 64]")
        need(p["scale"] > 0 and np.isfinite(p["scale"]), "scale must be positive")
    if "tol" in p:
        need(p["tol"] > 0 and np.isfinite(p["tol"]), "tol must be positive")
    if "n" in p:
        need(1 <= p["n"] <= 10 ** 6, "n must lie in [1, 1e6]")
    if "seed" in p:
        need(p["seed"] >= 0, "seed must be non-negative")
    for key in ("z", "zp"):
        if key in p:
            need(np.isfinite(p[key]), f"{key} must be finite")
    if command == "dho-check":
        _wrap(lambda: _dho_params(p))
    if command == "gll-coherent":
        need(min(p["nmax"], p["lmax"]) >= 0, "series truncation must be >= 0")


def _wrap(build: Callable[[], Any]) -> Any:
    try:
        return build()
    except PseudoBosonError as exc:
        raise ConfigError(str(exc)) from None


def _dho_params(p: dict) -> dho.DHOParams:
    delta = p["delta"]
    if delta is None:
        w, _ = dho.frequencies(p["m"], p["gamma"], p["k"])
        delta = dho.solve_ratio_constraint(w, p["Gamma"], 1.0)
    return dho.DHOParams(p["m"], p["gamma"], p["k"], p["Gamma"], delta)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _gll_family_checks(report: Report, params: gll.GLLParams, p: dict) -> gll.FamilyTable:
    tol = p["tol"]
    table = gll.generate_family(params, p["nmax"], p["lmax"])

    tables = gll.gll_commutation_report(params)
    report.add(Check.bound("commutators", "Eq.417", max(t.max_residual for t in tables.values()),
                           EXACT_TOL, rows=[r for t in tables.values() for r in t.rows()]))
    sp = gll.SuperpotentialPair.perturbed(params.k1, params.k2)
    report.add(Check.bound("superpotential_constraints", "Eq.413",
                           gll.check_superpotential_constraints(sp).max_abs(), EXACT_TOL))
    derived = gll.ladder_from_superpotentials(sp, params)
    gap = max(coefficient_distance(u, v) for u, v in zip(derived, gll.build_gll(params)))
    report.add(Check.bound("ladder_from_superpotentials", "Eq.419", gap, EXACT_TOL))

    ops = gll.build_gll(params)
    phi00, psi00 = table.phi[0][0], table.psi[0][0]
    vac = max(apply_affine(ops.A, phi00).max_abs_coeff(), apply_affine(ops.Ap, phi00).max_abs_coeff(),
              apply_affine(adjoint(ops.B), psi00).max_abs_coeff(),
              apply_affine(adjoint(ops.Bp), psi00).max_abs_coeff())
    report.add(Check.bound("vacua", "Eq.420", vac, EXACT_TOL, overlap=inner_product(psi00, phi00)))

    gram = gll.biorthogonality_matrix(table)
    report.add(Check.bound("biorthogonality", "Eq.422", gram.max_residual, tol,
                           size=len(gram.labels)))
    report.tables["gram"] = (gram.labels, gram.matrix)

    eig = gll.eigen_residuals(table)
    report.add(Check.bound("eigenvalues", "Eq.416", max(float(v.max()) for v in eig.values()), tol,
                           per_operator={k: float(v.max()) for k, v in eig.items()}))

    closed = 0.0
    for n in range(1, table.nmax + 1):
        closed = max(closed, gll._relative(table.phi[n][0], gll.closed_form_phi(params, n, 0)),
                     gll._relative(table.psi[n][0], gll.closed_form_psi(params, n, 0)))
    for l in range(1, table.lmax + 1):
        closed = max(closed, gll._relative(table.phi[0][l], gll.closed_form_phi(params, 0, l)),
                     gll._relative(table.psi[0][l], gll.closed_form_psi(params, 0, l)))
    report.add(Check.bound("closed_forms", "Eq.424", closed, tol))

    metric = gll.metric_ops_check(params, table, seed=p["seed"])
    report.add(Check.bound("metric_T", "Eq.426", max(metric.t_phi_residual, metric.t_psi_residual), tol))
    report.add(Check.bound("intertwining", "Eq.427", metric.intertwining_residual, tol))
    report.add(Check.bound("number_intertwining", "Eq.219", metric.number_intertwining_residual, tol))
    report.add(Check.bound("metric_S", "Eq.430", max(metric.s_phi_residual, metric.s_identity_residual),
                           tol, S_phi=metric.s_phi.to_json(), S_psi=metric.s_psi.to_json()))

    r, verdict = gll.riesz_diagnostic(table)
    report.add(Check.info("riesz_diagnostic", "Eq.421", r=r, verdict=verdict,
                          increasing=bool(np.all(np.diff(r) > 0))))
    return table


def cmd_gll_verify(p: dict, report: Report) -> None:
    params = gll.GLLParams(p["k1"], p["k2"])
    report.data["params"] = {"k1": params.k1, "k2": params.k2}
    _gll_family_checks(report, params, p)


def cmd_sll_baseline(p: dict, report: Report) -> None:
    params = gll.GLLParams()
    report.data["params"] = {"k1": 0.0, "k2": 0.0}
    table = _gll_family_checks(report, params, p)
    same = max(gll.distance(a, b) for a, b in zip(table.flat("phi"), table.flat("psi")))
    report.add(Check.bound("phi_equals_psi", "Eq.421", same, p["tol"]))
    phis = table.flat("phi")
    G = gram_matrix(phis, phis)
    report.add(Check.bound("orthonormal", "Eq.422", float(np.max(np.abs(G - np.eye(len(phis))))), p["tol"]))
    ident = [gll.t_phi(params).is_identity(), gll.t_psi(params).is_identity(),
             gll.s_phi(params).is_identity(), gll.s_psi(params).is_identity()]
    report.add(Check.flag("metric_identity", "Eq.430", all(ident)))
    r, _ = gll.riesz_diagnostic(table)
    report.add(Check.bound("r_constant_one", "Eq.421", float(np.max(np.abs(r - 1))), p["tol"], r=r))
    grid = bc.QuadratureGrid4D(p["nodes"], p["scale"])
    f = table.phi[0][0]
    value = bc.weak_resolution_identity(params, f, f, grid)
    target = inner_product(f, f)
    report.add(Check.bound("resolution_of_identity", "Eq.433", abs(value - target), 1e-4,
                           value=value, target=target))


def cmd_gll_coherent(p: dict, report: Report) -> None:
    params = gll.GLLParams(p["k1"], p["k2"])
    pair = _wrap(lambda: bc.bicoherent_pair(params, p["z"], p["zp"]))
    res = pair.eigen_residuals()
    report.data.update({"params": {"k1": params.k1, "k2": params.k2}, "z": pair.z, "zp": pair.zp,
                        "eigen_residuals": res, "overlap": pair.overlap()})
    report.add(Check.bound("eigen_residuals", "Eq.431", max(res.values()), p["tol"]))
    report.add(Check.bound("overlap", "Eq.432", abs(pair.overlap() - 1), p["tol"]))
    N = min(p["nmax"], p["lmax"])
    table = gll.generate_family(params, N, N)
    comparison = bc.series_vs_closed(table, p["z"], p["zp"], N)
    report.data["series_vs_closed"] = comparison
    report.add(Check.info("series_vs_closed", "Eq.33", truncation=N, mappings=comparison))


def cmd_gll_roi(p: dict, report: Report) -> None:
    params = gll.GLLParams(p["k1"], p["k2"])
    grid = bc.QuadratureGrid4D(p["nodes"], p["scale"])
    rng = np.random.default_rng(p["seed"])
    ef, es = gll.phi_exponent(params), gll.psi_exponent(params)
    report.data["params"] = {"k1": params.k1, "k2": params.k2}
    rows = []
    worst = 0.0
    for _ in range(p["n"]):
        f = gll.random_samples(rng, 1, 2, es)[0]
        g = gll.random_samples(rng, 1, 2, ef)[0]
        value = bc.weak_resolution_identity(params, f, g, grid)
        target = inner_product(f, g)
        err = abs(value - target)
        worst = max(worst, err / (1 + abs(target)))
        rows.append({"nodes": grid.nodes, "scale": grid.scale, "value_re": value.real,
                     "value_im": value.imag, "target_re": target.real, "target_im": target.imag,
                     "abs_err": err})
    report.data["roi"] = rows
    report.add(Check.bound("resolution_of_identity", "Eq.433", worst, p["tol"]))


def cmd_dho_check(p: dict, report: Report) -> None:
    params = _dho_params(p)
    d = dho.derive(params)
    alg = dho.dho_algebra_check(params)
    holds, lhs, rhs = dho.ratio_constraint(params)
    vac = dho.vacuum_feasibility(params)
    samples = gll.random_samples(np.random.default_rng(p["seed"]), 5, 3, gll.QuadExponent(0.5, 0.5))
    ham = dho.hamiltonian_identity_check(params, samples)
    report.data.update({
        "params": {"m": params.m, "gamma": params.gamma_damp, "k": params.k,
                   "Gamma": params.Gamma, "delta": params.delta},
        "Omega": d.Omega, "omega_plus": d.omega_plus, "omega_minus": d.omega_minus,
        "commutator_residual_max": alg["commutator_residual_max"],
        "conjugation_ok": alg["conjugation_residual"] <= EXACT_TOL,
        "ratio_residual": abs(lhs - rhs), "re1": vac.re1, "re2": vac.re2,
        "normalizable": vac.normalizable, "hamiltonian_residual_max": ham,
    })
    report.add(Check.bound("commutators", "Eq.53", alg["commutator_residual_max"], EXACT_TOL))
    report.add(Check.bound("conjugation", "Eq.53", alg["conjugation_residual"], EXACT_TOL))
    report.add(Check.bound("compatibility", "Eq.54", alg["compatibility_residual"], EXACT_TOL))
    report.add(Check.bound("explicit_form", "Eq.55", alg["explicit_residual"], EXACT_TOL))
    report.add(Check.bound("ratio_constraint", "Eq.56", abs(lhs - rhs), 1e-12))
    report.add(Check.bound("formal_annihilation", "Eq.56", vac.annihilation_residual, 1e-12))
    report.add(Check.flag("not_normalizable", "Eq.56", not vac.normalizable, re1=vac.re1, re2=vac.re2))
    report.add(Check.bound("hamiltonian_identity", "Eq.53", ham, p["tol"]))


def cmd_dho_sweep(p: dict, report: Report) -> None:
    res = dho.obstruction_sweep(p["n"], p["seed"])
    report.data.update({"n": res.n, "seed": res.seed, "normalizable_count": res.normalizable_count,
                        "sign_pattern": res.sign_pattern})
    report.add(Check.flag("normalizable_none", "Eq.56", res.normalizable_count == 0,
                          count=f"{res.n - res.normalizable_count}/{res.n} non-normalizable"))
    report.add(Check.bound("formal_annihilation", "Eq.56", res.max_annihilation_residual, 1e-12))
    report.add(Check.bound("ratio_constraint", "Eq.56", res.max_ratio_residual, 1e-12))


COMMANDS: dict[str, Callable[[dict, Report], None]] = {
    "gll-verify": cmd_gll_verify,
    "gll-coherent": cmd_gll_coherent,
    "gll-roi": cmd_gll_roi,
    "dho-check": cmd_dho_check,
    "dho-sweep": cmd_dho_sweep,
    "sll-baseline": cmd_sll_baseline,
}


def run(config: dict, timing: bool = False) -> Report:
    report = Report(config["command"], config)
    start = time.perf_counter()
    COMMANDS[config["command"]](config["params"], report)
    if timing:
        report.wall_time_ms = (time.perf_counter() - start) * 1e3
    return report


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pseudobosons", description="Verification suites for two-dimensional pseudo-bosons.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, defaults in DEFAULTS.items():
        sp = sub.add_parser(name)
        for key in defaults:
            kind = KINDS[key]
            sp.add_argument(f"--{key}", type=str if kind is complex else kind, default=None,
                            help=f"default {defaults[key]!r}")
        sp.add_argument("--config", help="JSON file with the same keys")
        sp.add_argument("--output", help="report path (stdout when omitted)")
        sp.add_argument("--format", choices=FORMATS, default=None)
        sp.add_argument("--timing", action="store_true", help="include wall time in the report")
    return parser


def _emit(report: Report, fmt: str, output: str | None) -> None:
    outputs = []
    if fmt in ("json", "both"):
        outputs.append((output, report.to_json()))
    if fmt in ("csv", "both"):
        path = None
        if output:
            path = output[:-5] + ".csv" if output.endswith(".json") else output + ".csv"
            if fmt == "csv":
                path = output
        outputs.append((path, report.to_csv()))
    for path, text in outputs:
        if path:
            write_atomic(path, text)
        else:
            sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors exit with 3, --help with 0
        return int(exc.code or 0)
    overrides = {key: getattr(args, key) for key in DEFAULTS[args.command]}
    overrides["format"] = args.format
    try:
        file_cfg = None
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    file_cfg = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
        config = resolve_config(args.command, file_cfg, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    report = run(config, timing=args.timing)
    _emit(report, config["format"], args.output)
    for c in report.checks:
        if c.status != INFO:
            print(f"{c.status.upper():4s} {c.tag:8s} {c.name}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
