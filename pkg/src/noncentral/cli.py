"""Command-line front end.

Verbs: ``spectrum``, ``wavefunction``, ``verify``, ``nu-derive``.
Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 a requested state has no real angular solution, 4 unwritable output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .closed_form import QuantumNumbers, effective_l, full_wavefunction, total_energy
from .config import RunConfig, load_config
from .errors import ComplexUError, ConfigError
from .model import reduce
from .nu import angular_problem, derive, radial_problem, solve_eigenvalue
from .verify import Check, default_suite, verify_configs

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_COMPLEX_U, EXIT_OUTPUT = 0, 1, 2, 3, 4


class OutputError(OSError):
    pass


def fmt(x) -> str:
    """12 significant digits; scientific below 1e-3 in magnitude."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0:
        return "0"
    if abs(x) < 1e-3:
        return f"{x:.11e}"
    return f"{x:.12g}"


def _num(x):
    """JSON value rounded the same way as ``fmt``."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else float(fmt(x))


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _write(out: Optional[Path], name: str, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / name, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {out / name}: {exc.strerror}") from None


# -- spectrum -----------------------------------------------------------------------------


def run_spectrum(cfg: RunConfig) -> tuple[list[dict], bool]:
    """Rows sorted by energy then (N, n, |m|, m); flag is True if any triple had complex u."""
    rc = reduce(cfg.params, 0.0, cfg.units)
    ok_rows, bad_rows = [], []
    for N, n, m in cfg.triples():
        try:
            e = total_energy(cfg.params, QuantumNumbers(N, n, m), cfg.units)
        except ComplexUError:
            bad_rows.append({"N": N, "n": n, "m": m, "l_eff": math.nan, "energy": math.nan, "status": "complex_u"})
            continue
        ok_rows.append(
            {"N": N, "n": n, "m": m, "l_eff": effective_l(m, rc.beta_t, rc.gamma_t, n), "energy": e, "status": "ok"}
        )
    ok_rows.sort(key=lambda r: (r["energy"], r["N"], r["n"], abs(r["m"]), r["m"]))
    bad_rows.sort(key=lambda r: (r["N"], r["n"], abs(r["m"]), r["m"]))
    return ok_rows + bad_rows, bool(bad_rows)


def _spectrum_cmd(args, cfg: RunConfig) -> int:
    rows, complex_u = run_spectrum(cfg)
    keys = ("N", "n", "m", "l_eff", "energy", "status")
    if args.format == "json":
        doc = {
            "potential": cfg.label(),
            "units": _units(cfg),
            "rows": [{k: (r[k] if k == "status" else _num(r[k])) for k in keys} for r in rows],
        }
        _write(args.out, "spectrum.json", _json(doc))
    else:
        _write(args.out, "spectrum.csv", _csv(keys, ([r[k] for k in keys] for r in rows)))
    return EXIT_COMPLEX_U if complex_u else EXIT_OK


def _units(cfg: RunConfig) -> dict:
    u = cfg.units
    return {"hbar": _num(u.hbar), "mass": _num(u.mass), "charge": _num(u.charge)}


# -- wavefunction -------------------------------------------------------------------------


def run_wavefunction(cfg: RunConfig, qn: QuantumNumbers, samples: int, out: Path, r_max: Optional[float] = None) -> dict:
    state = full_wavefunction(cfg.params, qn, cfg.units)
    if r_max is None:
        bohr = cfg.units.bohr_radius
        Z = cfg.params.coulomb_charge(cfg.units)
        r_max = math.ceil(10 * state.n_prime**2 / Z) * bohr
    idx = np.arange(samples + 1)
    r = idx * r_max / samples
    x = (2 * idx - samples) / samples
    phi = idx * (2 * math.pi) / samples
    F = state.radial(r)
    H = state.polar(x)
    P = state.azimuthal(phi)
    _write(out, "radial.csv", _csv(("r", "F"), zip(r, F)))
    _write(out, "polar.csv", _csv(("cos_theta", "H"), zip(x, H)))
    _write(out, "azimuthal.csv", _csv(("phi", "re_Phi", "im_Phi"), zip(phi, P.real, P.imag)))
    meta = {
        "potential": cfg.label(),
        "units": _units(cfg),
        "energy": _num(state.energy),
        "N": qn.N,
        "n": qn.n,
        "m": qn.m,
        "l_eff": _num(state.l_eff),
        "n_prime": _num(state.n_prime),
        "u": _num(state.angular.u),
        "B": _num(state.angular.B),
        "C": _num(state.angular.C),
        "radial_norm": _num(state.radial.norm),
        "angular_norm": _num(state.polar.norm),
        "azimuthal_norm": _num(1 / math.sqrt(2 * math.pi)),
        "r_max": _num(r_max),
        "samples": samples,
        "warnings": list(state.warnings),
    }
    _write(out, "metadata.json", _json(meta))
    return meta


def _triple(args, cfg: RunConfig) -> QuantumNumbers:
    N = cfg.N.start if args.N is None else args.N
    n = cfg.n.start if args.n is None else args.n
    m = cfg.m.start if args.m is None else args.m
    if N not in cfg.N or n not in cfg.n or m not in cfg.m:
        raise ConfigError(f"triple (N={N}, n={n}, m={m}) outside the configured ranges")
    return QuantumNumbers(N, n, m)


def _wavefunction_cmd(args, cfg: RunConfig) -> int:
    qn = _triple(args, cfg)
    samples = args.samples or cfg.wavefunction.samples
    try:
        run_wavefunction(cfg, qn, samples, args.out or Path("."), cfg.wavefunction.r_max)
    except ComplexUError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPLEX_U
    return EXIT_OK


# -- verify -------------------------------------------------------------------------------

_REPORT_KEYS = ("potential", "N", "n", "m", "quantity", "closed_form", "oracle", "discrepancy", "tolerance", "result")


def _report_row(c: Check) -> list:
    result = c.status if c.status else ("pass" if c.passed else "FAIL")
    return [c.label, c.N, c.n, c.m, c.quantity, c.closed_form, c.oracle, c.discrepancy, c.tolerance, result]


def run_verify(configs: Sequence[RunConfig]) -> tuple[list[Check], int]:
    checks = verify_configs(configs)
    if any(not c.passed and not c.status for c in checks):
        return checks, EXIT_FAIL
    if any(c.status for c in checks):
        return checks, EXIT_COMPLEX_U
    return checks, EXIT_OK


def _verify_cmd(args, cfg: Optional[RunConfig]) -> int:
    configs = [cfg] if cfg is not None else default_suite(args.suite)
    checks, code = run_verify(configs)
    rows = [_report_row(c) for c in checks]
    if args.format == "json":
        doc = {
            "checks": [
                {k: (v if isinstance(v, str) else _num(v)) for k, v in zip(_REPORT_KEYS, row)} for row in rows
            ],
            "passed": code == EXIT_OK,
        }
        _write(args.out, "verify.json", _json(doc))
    else:
        _write(args.out, "verify.csv", _csv(_REPORT_KEYS, rows))
    failed = sum(1 for c in checks if not c.passed)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=sys.stderr)
    return code


# -- nu-derive ----------------------------------------------------------------------------


def run_nu_derive(cfg: RunConfig, qn: QuantumNumbers) -> dict:
    """Engine solutions of the polar then the radial problem, with derivation traces at the roots."""
    rc = reduce(cfg.params, 0.0, cfg.units)
    ap = angular_problem(qn.m, rc.beta_t, rc.gamma_t, qn.n)
    lam = solve_eigenvalue(ap)
    ell = max(0.0, 0.5 * (math.sqrt(1 + 4 * lam) - 1))
    rp = radial_problem(cfg.params, ell, qn.N, cfg.units)
    energy = solve_eigenvalue(rp)
    return {
        "potential": cfg.label(),
        "N": qn.N,
        "n": qn.n,
        "m": qn.m,
        "angular": derive(ap, lam),
        "l_eff": ell,
        "radial": derive(rp, energy),
        "energy": energy,
        "energy_closed_form": total_energy(cfg.params, qn, cfg.units),
    }


def _poly_text(c) -> str:
    return " + ".join(f"({fmt(v)})s^{i}" if i else f"({fmt(v)})" for i, v in enumerate(c))


def _trace_text(doc: dict) -> str:
    lines = [f"potential: {doc['potential']}  N={doc['N']} n={doc['n']} m={doc['m']}"]
    for key, what in (("angular", "lambda"), ("radial", "E")):
        t = doc[key]
        lines.append(f"[{key}] level={t['level']} {what}={fmt(t['value'])}")
        lines.append(f"  sigma       = {_poly_text(t['sigma'])}")
        lines.append(f"  tau_tilde   = {_poly_text(t['tau_tilde'])}")
        lines.append(f"  sigma_tilde = {_poly_text(t['sigma_tilde'])}")
        lines.append(f"  k candidates: {', '.join(fmt(k) for k in t['k_candidates'])}")
        for i, b in enumerate(t["branches"]):
            mark = "*" if i == t["selected"] else " "
            lines.append(
                f"  {mark} branch {i}: k={fmt(b['k'])} sign={'+' if b['sign'] > 0 else '-'} "
                f"pi={_poly_text(b['pi'])} tau={_poly_text(b['tau'])} tau'={fmt(b['tau_slope'])} "
                f"lambda_bar={fmt(b['lambda_bar'])}"
            )
        lines.append(f"  selected branch {t['selected']}: lambda_bar={fmt(t['lambda_bar'])} lambda_n={fmt(t['lambda_n'])}")
        for w in t["warnings"]:
            lines.append(f"  warning: {w}")
    lines.append(f"l_eff = {fmt(doc['l_eff'])}")
    lines.append(f"energy (engine) = {fmt(doc['energy'])}")
    lines.append(f"energy (closed form) = {fmt(doc['energy_closed_form'])}")
    return "\n".join(lines) + "\n"


def _rounded(obj):
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_rounded(v) for v in obj]
    if isinstance(obj, float):
        return _num(obj)
    return obj


def _nu_derive_cmd(args, cfg: RunConfig) -> int:
    qn = _triple(args, cfg)
    try:
        doc = run_nu_derive(cfg, qn)
    except ComplexUError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPLEX_U
    if args.format == "json":
        _write(args.out, "nu_derive.json", _json(_rounded(doc)))
    else:
        _write(args.out, "nu_derive.txt", _trace_text(doc))
    return EXIT_OK


# -- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noncentral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("csv", "json"), config_required=True):
        if config_required:
            p.add_argument("config", type=Path, help="INI run configuration")
        else:
            p.add_argument("config", type=Path, nargs="?", help="INI run configuration (default suite if omitted)")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--out", type=Path, default=None, help="output directory (stdout if omitted)")

    def triple(p):
        p.add_argument("--N", type=int, default=None, help="radial quantum number")
        p.add_argument("--n", type=int, default=None, help="polar quantum number")
        p.add_argument("--m", type=int, default=None, help="magnetic quantum number")

    common(sub.add_parser("spectrum", help="tabulate bound-state energies"))
    wf = sub.add_parser("wavefunction", help="sample F(r), H(cos theta), Phi(phi)")
    wf.add_argument("config", type=Path)
    wf.add_argument("--out", type=Path, default=None)
    wf.add_argument("--samples", type=int, default=None)
    triple(wf)
    v = sub.add_parser("verify", help="compare closed forms with finite-difference and quadrature oracles")
    common(v, config_required=False)
    v.add_argument("--suite", choices=("coulomb", "hartmann"), default="coulomb")
    d = sub.add_parser("nu-derive", help="print the Nikiforov-Uvarov derivation trace")
    common(d, formats=("text", "json"))
    triple(d)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config is not None else None
        handler = {
            "spectrum": _spectrum_cmd,
            "wavefunction": _wavefunction_cmd,
            "verify": _verify_cmd,
            "nu-derive": _nu_derive_cmd,
        }[args.command]
        return handler(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT


if __name__ == "__main__":
    sys.exit(main())
