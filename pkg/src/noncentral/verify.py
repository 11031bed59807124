"""Closed form versus oracle, state by state."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .closed_form import QuantumNumbers, full_wavefunction
from .config import RunConfig, VerifyOptions
from .errors import ComplexUError
from .model import HartmannParams, hartmann_to_noncentral, reduce
from .oracle import (
    Grid1D,
    PolarEquation,
    RadialEquation,
    ode_residual,
    product_oracle_energy,
    quadrature_inner_product,
)


@dataclass(frozen=True)
class Check:
    label: str
    N: int
    n: int
    m: int
    quantity: str
    closed_form: float
    oracle: float
    tolerance: float
    status: str = ""

    @property
    def discrepancy(self) -> float:
        return abs(self.closed_form - self.oracle)

    @property
    def passed(self) -> bool:
        return self.status == "" and self.discrepancy <= self.tolerance


def _hartmann_config(eta, sigma, q, N, n, m) -> RunConfig:
    h = HartmannParams(eta, sigma, q)
    return RunConfig(params=hartmann_to_noncentral(h), N=N, n=n, m=m, hartmann=h)


def default_suite(name: str = "coulomb") -> list[RunConfig]:
    if name == "coulomb":
        return [_hartmann_config(eta, 1, 0, range(3), range(2), range(3)) for eta in (1, 2)]
    if name == "hartmann":
        return [
            _hartmann_config(eta, 1, q, range(2), range(2), range(2))
            for eta in (1, 2)
            for q in (0, 1)
        ]
    raise ValueError(f"unknown suite {name!r}")


def verify_state(cfg: RunConfig, N: int, n: int, m: int, opts: Optional[VerifyOptions] = None) -> list[Check]:
    opts = opts or cfg.verify
    label = cfg.label()
    units = cfg.units
    rc = reduce(cfg.params, 0.0, units)
    try:
        state = full_wavefunction(cfg.params, QuantumNumbers(N, n, m), units, check_norm=False)
    except ComplexUError:
        return [Check(label, N, n, m, "complex_u", math.nan, math.nan, 0.0, status="complex_u")]

    Z = cfg.params.coulomb_charge(units)
    po = product_oracle_energy(
        Z, rc.beta_t, rc.gamma_t, m, n, N, polar_points=opts.polar_points, radial_spacing=opts.radial_spacing
    )
    lam_closed = state.l_eff * (state.l_eff + 1)
    checks = [
        Check(label, N, n, m, "lambda", lam_closed, po.lam, opts.lambda_tol),
        Check(label, N, n, m, "energy", state.energy, po.energy * units.hartree, opts.energy_tol),
    ]

    scale = state.n_prime / (2 * state.radial.k)
    rn = quadrature_inner_product(state.radial, state.radial, (0.0, math.inf), scale=scale).value
    an = quadrature_inner_product(state.polar, state.polar, (-1.0, 1.0)).value
    checks.append(Check(label, N, n, m, "radial_norm", 1.0, rn, opts.norm_tol))
    checks.append(Check(label, N, n, m, "angular_norm", 1.0, an, opts.norm_tol))

    r_grid = Grid1D(0.0, 2 * scale * (N + 6), 400)
    r_res = ode_residual(
        state.radial, RadialEquation(Z, state.l_eff, state.energy, units), r_grid, step=1e-3 * scale / state.n_prime
    )
    p_res = ode_residual(
        state.polar, PolarEquation(rc.beta_t, rc.gamma_t, m, lam_closed), Grid1D(-0.9, 0.9, 400)
    )
    checks.append(Check(label, N, n, m, "radial_residual", 0.0, r_res, opts.residual_tol))
    checks.append(Check(label, N, n, m, "polar_residual", 0.0, p_res, opts.residual_tol))
    return checks


def verify_configs(configs: Iterable[RunConfig]) -> list[Check]:
    rows: list[Check] = []
    for cfg in configs:
        for N, n, m in cfg.triples():
            rows.extend(verify_state(cfg, N, n, m))
    return rows
