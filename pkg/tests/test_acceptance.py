"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest
from scipy.special import lpmv

from noncentral.cli import main
from noncentral.closed_form import (
    QuantumNumbers,
    angular_auxiliaries,
    angular_norm_const,
    angular_wavefunction,
    full_wavefunction,
    hartmann_angular,
    hartmann_angular_sum,
    hartmann_energy,
    radial_wavefunction,
    total_energy,
)
from noncentral.model import HartmannParams, NonCentralParams, hartmann_to_noncentral, reduce
from noncentral.nu import (
    angular_form,
    angular_problem,
    build_branches,
    find_k_candidates,
    radial_form,
    radial_problem,
    select_physical_branch,
    solve_eigenvalue,
)
from noncentral.oracle import (
    Grid1D,
    PolarEquation,
    RadialEquation,
    ode_residual,
    polar_fd_spectrum,
    product_oracle_energy,
    quadrature_inner_product,
    radial_fd_spectrum,
    radial_grid,
)
from noncentral.special import jacobi

pytestmark = pytest.mark.acceptance

COULOMB_Z = (1.0, 2.0)
COULOMB_L = (0, 1, 2)
COULOMB_N = range(5)


def angular_sets():
    """Distinct (m, beta_t, gamma_t) from m in {0,1,2}, beta_t in {0,1,3}, gamma_t in {0, (m^2+beta_t)/2}."""
    out = []
    for m in (0, 1, 2):
        for beta_t in (0.0, 1.0, 3.0):
            for half in (False, True):
                s = m * m + beta_t
                key = (m, beta_t, 0.5 * s if half else 0.0)
                if key not in out:
                    out.append(key)
    return out


def hartmann_states():
    for eta in (1, 2):
        for sigma in (1, 2):
            for q in (0, 1):
                for m in (0, 1):
                    for n in (0, 1):
                        for N in (0, 1):
                            yield HartmannParams(eta, sigma, q), QuantumNumbers(N, n, m)


def tilde(beta_t, gamma_t, alpha=-1.0):
    return NonCentralParams(alpha, beta_t / 2, gamma_t / 2)


def sign_changes(values):
    v = values[np.abs(values) > 1e-300]
    return int(np.sum(np.sign(v[:-1]) != np.sign(v[1:])))


def test_criterion_1_coulomb_spectrum(report):
    start = time.perf_counter()
    worst = 0.0
    for Z in COULOMB_Z:
        for ell in COULOMB_L:
            grid = radial_grid(Z, max(COULOMB_N) + ell + 1)
            fd = radial_fd_spectrum(Z, ell, grid, len(COULOMB_N))
            for N in COULOMB_N:
                exact = -(Z**2) / (2 * (N + ell + 1) ** 2)
                worst = max(worst, abs(fd.eigenvalues[N] - exact))
    elapsed = time.perf_counter() - start
    ok = report(1, worst <= 1e-4 and elapsed < 10, f"max |E_FD - E| = {worst:.2e} (tol 1e-4), {elapsed:.2f} s (limit 10 s)")
    assert ok


def test_criterion_2_angular_quantization(report):
    start = time.perf_counter()
    sets = angular_sets()
    worst = 0.0
    for m, beta_t, gamma_t in sets:
        _, B, _ = angular_auxiliaries(m, beta_t, gamma_t)
        fd = polar_fd_spectrum(beta_t, gamma_t, m, count=2)
        for n in range(2):
            ell = B + n
            worst = max(worst, abs(fd.eigenvalues[n] - ell * (ell + 1)))
    elapsed = time.perf_counter() - start
    ok = report(
        2,
        worst <= 2e-3 and elapsed < 20 and len(sets) >= 12,
        f"{len(sets)} parameter sets, levels n=0,1: max |lambda_FD - l(l+1)| = {worst:.2e} (tol 2e-3), {elapsed:.2f} s",
    )
    assert ok


def test_criterion_3_full_spectrum(report):
    worst, count = 0.0, 0
    for h, qn in hartmann_states():
        p = hartmann_to_noncentral(h)
        rc = reduce(p, 0.0)
        po = product_oracle_energy(p.coulomb_charge(), rc.beta_t, rc.gamma_t, qn.m, qn.n, qn.N)
        worst = max(worst, abs(po.energy - total_energy(p, qn)))
        count += 1
    ok = report(3, worst <= 2e-4, f"{count} Hartmann states: max |E_oracle - E| = {worst:.2e} (tol 2e-4)")
    assert ok


def test_criterion_4_nu_engine(report):
    k_err, tau_ok, e_err = 0.0, True, 0.0
    for Z in COULOMB_Z:
        for ell in COULOMB_L:
            for N in COULOMB_N:
                exact = -(Z**2) / (2 * (N + ell + 1) ** 2)
                eps = math.sqrt(-2 * exact)
                A = -2 * Z
                form = radial_form(eps * eps, A, ell * (ell + 1))
                expected = sorted([-A - (2 * ell + 1) * eps, -A + (2 * ell + 1) * eps])
                k_err = max(k_err, np.max(np.abs(np.array(find_k_candidates(form)) - expected)))
                tau_ok &= select_physical_branch(build_branches(form), form.sigma).tau_slope < 0
                solved = solve_eigenvalue(radial_problem(NonCentralParams(-Z), ell, N))
                e_err = max(e_err, abs(solved - exact) / abs(exact))
    for m, beta_t, gamma_t in angular_sets():
        u, B, _ = angular_auxiliaries(m, beta_t, gamma_t)
        s = m * m + beta_t
        for n in range(3):
            lam = (B + n) * (B + n + 1)
            form = angular_form(lam, m, beta_t, gamma_t)
            expected = sorted([(2 * lam - s) / 2 - u / 2, (2 * lam - s) / 2 + u / 2])
            k_err = max(k_err, np.max(np.abs(np.array(find_k_candidates(form)) - expected)))
            tau_ok &= select_physical_branch(build_branches(form), form.sigma).tau_slope < 0
            solved = solve_eigenvalue(angular_problem(m, beta_t, gamma_t, n))
            e_err = max(e_err, abs(solved - lam) / max(1.0, lam))
    ok = report(
        4,
        k_err <= 1e-10 and tau_ok and e_err <= 1e-10,
        f"max k error {k_err:.1e} (tol 1e-10), selected tau' < 0: {tau_ok}, max relative eigenvalue error {e_err:.1e} (tol 1e-10)",
    )
    assert ok


def _states_for_wavefunction_checks():
    for Z in COULOMB_Z:
        for ell in COULOMB_L:
            for N in COULOMB_N:
                yield NonCentralParams(-Z), QuantumNumbers(N, 0, ell)
    for m, beta_t, gamma_t in angular_sets():
        for n in range(2):
            yield tilde(beta_t, gamma_t), QuantumNumbers(0, n, m)
    for h, qn in hartmann_states():
        yield hartmann_to_noncentral(h), qn


def test_criterion_5_wavefunctions(report):
    res_worst, norm_worst, const_worst, nodes_ok, count = 0.0, 0.0, 0.0, True, 0
    seen_polar = set()
    for p, qn in _states_for_wavefunction_checks():
        state = full_wavefunction(p, qn, check_norm=False)
        Z = p.coulomb_charge()
        rc = reduce(p, 0.0)
        scale = state.n_prime / (2 * state.radial.k)
        r_grid = Grid1D(0.0, 2 * scale * (qn.N + 6), 400)
        res_worst = max(
            res_worst,
            ode_residual(state.radial, RadialEquation(Z, state.l_eff, state.energy), r_grid, step=1e-3 * scale / state.n_prime),
        )
        rn = quadrature_inner_product(state.radial, state.radial, (0.0, math.inf), scale=scale).value
        norm_worst = max(norm_worst, abs(rn - 1))
        r = np.linspace(1e-6, 6 * state.n_prime**2 / Z, 20001)
        nodes_ok &= sign_changes(state.radial(r)) == qn.N
        key = (qn.m, rc.beta_t, rc.gamma_t, qn.n)
        if key not in seen_polar:
            seen_polar.add(key)
            sol = state.angular
            lam = sol.separation_constant
            res_worst = max(
                res_worst, ode_residual(state.polar, PolarEquation(rc.beta_t, rc.gamma_t, qn.m, lam), Grid1D(-0.9, 0.9, 400))
            )
            an = quadrature_inner_product(state.polar, state.polar, (-1.0, 1.0)).value
            norm_worst = max(norm_worst, abs(an - 1))
            x = np.linspace(-1 + 1e-9, 1 - 1e-9, 20001)
            nodes_ok &= sign_changes(state.polar(x)) == qn.n
            a, b = sol.jacobi_a, sol.jacobi_b
            raw = lambda t, a=a, b=b, n=qn.n: (1 - t) ** (a / 2) * (1 + t) ** (b / 2) * jacobi(n, a, b, t)
            quad_const = 1 / math.sqrt(quadrature_inner_product(raw, raw, (-1.0, 1.0)).value)
            closed = angular_norm_const(sol.B, sol.C, qn.n)
            const_worst = max(const_worst, abs(closed - quad_const) / quad_const)
        count += 1
    ok = report(
        5,
        res_worst <= 1e-7 and norm_worst <= 1e-8 and nodes_ok and const_worst <= 1e-6,
        f"{count} states: max residual {res_worst:.1e} (tol 1e-7), max |norm - 1| {norm_worst:.1e} (tol 1e-8), "
        f"node counts ok: {nodes_ok}, angular constant vs quadrature {const_worst:.1e} (tol 1e-6)",
    )
    assert ok


def test_criterion_6_hartmann_angular(report):
    theta = np.linspace(0.0, math.pi, 101)
    sum_err, legendre_err = 0.0, 0.0
    for mprime in (1, 2):
        for n in range(4):
            a = hartmann_angular(mprime, n)(theta)
            b = hartmann_angular_sum(mprime, n)(theta)
            sum_err = max(sum_err, np.max(np.abs(a - b)))
            ell = mprime + n
            leg = lpmv(mprime, ell, np.cos(theta))
            leg = leg * math.sqrt((2 * ell + 1) / 2 * math.factorial(ell - mprime) / math.factorial(ell + mprime))
            general = angular_wavefunction(NonCentralParams(-1.0), mprime, n)(np.cos(theta))
            for f in (a, b, general):
                sgn = np.sign(np.dot(f, leg))
                legendre_err = max(legendre_err, np.max(np.abs(f - sgn * leg)))
    ok = report(
        6,
        sum_err <= 1e-10 and legendre_err <= 1e-10,
        f"Jacobi form vs power sum {sum_err:.1e}, vs normalized associated Legendre {legendre_err:.1e} (tol 1e-10)",
    )
    assert ok


def test_criterion_7_degeneracy_and_limits(report):
    exact_m = True
    for m, beta_t, gamma_t in angular_sets():
        for N in range(3):
            for n in range(3):
                if m:
                    p = tilde(beta_t, gamma_t)
                    exact_m &= total_energy(p, QuantumNumbers(N, n, m)) == total_energy(p, QuantumNumbers(N, n, -m))
    limit_err = 0.0
    for eta in (1, 2, 3.5):
        for sigma in (1, 1.5, 2):
            Z = eta * sigma**2
            for N in range(3):
                for n in range(3):
                    for m in range(-2, 3):
                        qn = QuantumNumbers(N, n, m)
                        h = hartmann_energy(HartmannParams(eta, sigma, 0.0), qn)
                        c = total_energy(NonCentralParams(-Z), qn)
                        limit_err = max(limit_err, abs(h - c))
                        limit_err = max(limit_err, abs(h + Z**2 / (2 * (N + n + abs(m) + 1) ** 2)))
    ok = report(7, exact_m and limit_err <= 1e-12, f"E(m) == E(-m) exactly: {exact_m}; q=0 vs Coulomb {limit_err:.1e} (tol 1e-12)")
    assert ok


def test_criterion_8_cli(report, tmp_path):
    cfg = tmp_path / "hartmann.ini"
    cfg.write_text("[hartmann]\neta = 2\nsigma = 1\nq = 1\n[quantum]\nN = 0..3\nn = 0..2\nm = -2..2\n")
    codes = [main(["spectrum", str(cfg), "--out", str(tmp_path / d)]) for d in ("a", "b")]
    same = (tmp_path / "a" / "spectrum.csv").read_bytes() == (tmp_path / "b" / "spectrum.csv").read_bytes()
    start = time.perf_counter()
    verify_code = main(["verify", "--out", str(tmp_path / "v")])
    elapsed = time.perf_counter() - start
    ok = report(
        8,
        codes == [0, 0] and same and verify_code == 0 and elapsed < 60,
        f"spectrum byte-identical: {same}; verify exit {verify_code} in {elapsed:.2f} s (limit 60 s)",
    )
    assert ok
