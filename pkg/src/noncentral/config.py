"""Run configuration files (INI syntax).

Example::

    [hartmann]            ; or [noncentral] with alpha, beta, gamma
    eta = 1
    sigma = 1
    q = 1

    [units]               ; optional, atomic units by default
    hbar = 1
    mass = 1
    charge = 1

    [quantum]             ; ranges "lo..hi" or a single integer
    N = 0..1
    n = 0
    m = -1..1

Optional sections ``[wavefunction]`` (samples, r_max) and ``[verify]``
(energy_tol, lambda_tol, norm_tol, residual_tol, tolerance, polar_points,
radial_spacing) tune the corresponding commands.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigError, DomainError
from .model import ATOMIC, HartmannParams, NonCentralParams, UnitsSystem, hartmann_to_noncentral

_POTENTIAL_KEYS = {"noncentral": ("alpha", "beta", "gamma"), "hartmann": ("eta", "sigma", "q")}
_UNIT_KEYS = ("hbar", "mass", "charge")
_RANGE_KEYS = ("N", "n", "m")


@dataclass(frozen=True)
class WavefunctionOptions:
    samples: int = 100
    r_max: Optional[float] = None


@dataclass(frozen=True)
class VerifyOptions:
    energy_tol: float = 2e-4
    lambda_tol: float = 2e-3
    norm_tol: float = 1e-8
    residual_tol: float = 1e-7
    polar_points: int = 2000
    radial_spacing: float = 0.01


@dataclass(frozen=True)
class RunConfig:
    params: NonCentralParams
    N: range
    n: range
    m: range
    units: UnitsSystem = ATOMIC
    hartmann: Optional[HartmannParams] = None
    wavefunction: WavefunctionOptions = field(default_factory=WavefunctionOptions)
    verify: VerifyOptions = field(default_factory=VerifyOptions)

    def label(self) -> str:
        if self.hartmann is not None:
            h = self.hartmann
            return f"hartmann(eta={h.eta:g},sigma={h.sigma:g},q={h.q:g})"
        p = self.params
        return f"noncentral(alpha={p.alpha:g},beta={p.beta:g},gamma={p.gamma:g})"

    def triples(self):
        for N in self.N:
            for n in self.n:
                for m in self.m:
                    yield N, n, m


def parse_range(text: str) -> range:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"bad range {text!r}; expected 'lo..hi' or an integer") from None
    if hi < lo:
        raise ConfigError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _float(section: configparser.SectionProxy, key: str) -> float:
    try:
        return float(section[key])
    except ValueError:
        raise ConfigError(f"[{section.name}] {key} is not a number: {section[key]!r}") from None


def _check_keys(section: configparser.SectionProxy, allowed) -> None:
    extra = set(section.keys()) - set(allowed)
    if extra:
        raise ConfigError(f"unknown keys in [{section.name}]: {', '.join(sorted(extra))}")


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # N and n are different keys
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    known = {"noncentral", "hartmann", "units", "quantum", "wavefunction", "verify"}
    unknown = set(cp.sections()) - known
    if unknown:
        raise ConfigError(f"unknown sections: {', '.join(sorted(unknown))}")
    blocks = [s for s in _POTENTIAL_KEYS if cp.has_section(s)]
    if len(blocks) != 1:
        raise ConfigError("exactly one of [noncentral] or [hartmann] is required")

    units = ATOMIC
    if cp.has_section("units"):
        sec = cp["units"]
        _check_keys(sec, _UNIT_KEYS)
        try:
            units = UnitsSystem(**{k: _float(sec, k) for k in _UNIT_KEYS if k in sec})
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    block = blocks[0]
    sec = cp[block]
    _check_keys(sec, _POTENTIAL_KEYS[block])
    hartmann = None
    try:
        if block == "hartmann":
            missing = [k for k in ("eta", "sigma", "q") if k not in sec]
            if missing:
                raise ConfigError(f"[hartmann] missing {', '.join(missing)}")
            hartmann = HartmannParams(_float(sec, "eta"), _float(sec, "sigma"), _float(sec, "q"))
            params = hartmann_to_noncentral(hartmann, units)
        else:
            if "alpha" not in sec:
                raise ConfigError("[noncentral] needs alpha")
            params = NonCentralParams(
                _float(sec, "alpha"),
                _float(sec, "beta") if "beta" in sec else 0.0,
                _float(sec, "gamma") if "gamma" in sec else 0.0,
            )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if not params.alpha < 0:
        raise ConfigError("alpha must be negative for bound states")

    if not cp.has_section("quantum"):
        raise ConfigError("[quantum] section with N, n, m ranges is required")
    q = cp["quantum"]
    _check_keys(q, _RANGE_KEYS)
    ranges = {k: parse_range(q.get(k, "0")) for k in _RANGE_KEYS}
    if ranges["N"].start < 0 or ranges["n"].start < 0:
        raise ConfigError("N and n must be nonnegative")

    wf = WavefunctionOptions()
    if cp.has_section("wavefunction"):
        sec = cp["wavefunction"]
        _check_keys(sec, ("samples", "r_max"))
        if "samples" in sec:
            wf = replace(wf, samples=int(_float(sec, "samples")))
        if "r_max" in sec:
            wf = replace(wf, r_max=_float(sec, "r_max"))
        if wf.samples < 2:
            raise ConfigError("samples must be at least 2")

    vo = VerifyOptions()
    if cp.has_section("verify"):
        sec = cp["verify"]
        tol_keys = ("energy_tol", "lambda_tol", "norm_tol", "residual_tol")
        _check_keys(sec, tol_keys + ("tolerance", "polar_points", "radial_spacing"))
        if "tolerance" in sec:
            t = _float(sec, "tolerance")
            vo = replace(vo, **{k: t for k in tol_keys})
        vo = replace(vo, **{k: _float(sec, k) for k in tol_keys if k in sec})
        if "polar_points" in sec:
            vo = replace(vo, polar_points=int(_float(sec, "polar_points")))
        if "radial_spacing" in sec:
            vo = replace(vo, radial_spacing=_float(sec, "radial_spacing"))

    return RunConfig(
        params=params,
        N=ranges["N"],
        n=ranges["n"],
        m=ranges["m"],
        units=units,
        hartmann=hartmann,
        wavefunction=wf,
        verify=vo,
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)
