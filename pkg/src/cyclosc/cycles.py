"""Closed frequency cycles, gain-factor scans, and resonance bookkeeping.

A cycle takes omega from its initial value out to omega/lambda and back.
For the inverse-linear family both legs are closed-form:

    S_cyc = S(omega0/lambda, -v, 1/lambda) . S(omega0, v, lambda),

i.e. the return leg is the member of the same family that starts where the
outbound leg stopped and runs at rate -v until the scale is back to 1.  For
the power-law and exponential families only the outbound leg has a closed
form; the return leg runs the outbound profile backwards in time and is
integrated numerically.

All gains are computed in cycle-normalized units omega(0) = 1: a physical
omega0 is absorbed by rescaling t -> omega0 t, v -> v/omega0, under which
the gain factor is invariant.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from .closed_form import (
    propagate_exponential,
    propagate_inverse_linear,
    propagate_power_law,
)
from .core import EvolutionMatrix, compose, gain_factor
from .errors import DomainError, IntegrationError
from .ode import DEFAULT_CONFIG, IntegratorConfig, propagate_ode
from .profiles import (
    Custom,
    Exponential,
    FrequencyProfile,
    InverseLinear,
    Piecewise,
    PowerLaw,
    TimeReversed,
)

__all__ = [
    "FAMILIES",
    "CycleSpec",
    "GridAxis",
    "ScanRow",
    "ScanResult",
    "build_cycle",
    "cycle_gain",
    "scan_gain",
    "find_unity_points",
    "random_fourier_profile",
    "random_piecewise_cycle",
    "random_cycle_gain",
]

FAMILIES = ("inverse-linear", "power-law", "exponential", "custom")


@dataclass(frozen=True)
class CycleSpec:
    """One closed cycle: out to scale lambda and back, repeated n_cycles times.

    v is the outbound rate magnitude; its sign is fixed by the geometry of
    the family (lambda > 1 expands an inverse-linear profile but contracts
    the exponential z, and so on).  k only matters for the power-law family.
    For family "custom", profile must itself close (omega(duration) =
    omega(0)) and is integrated numerically as-is.
    """

    family: str
    v: float = 1.0
    lam: float = 2.0
    omega0: float = 1.0
    n_cycles: int = 1
    k: float = -2.0
    profile: Optional[FrequencyProfile] = None
    duration: Optional[float] = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not self.lam > 0.0:
            raise DomainError(f"lambda must be positive, got {self.lam!r}")
        if not self.omega0 > 0.0:
            raise DomainError(f"omega0 must be positive, got {self.omega0!r}")
        if self.n_cycles < 1:
            raise DomainError(f"n_cycles must be >= 1, got {self.n_cycles!r}")
        if self.family == "custom":
            if self.profile is None or self.duration is None:
                raise DomainError("custom cycles need a profile and a duration")
        elif not self.v > 0.0:
            raise DomainError(f"v must be a positive rate magnitude, got {self.v!r}")
        if self.family == "power-law" and self.k in (0.0, 2.0):
            # k = 2 is constant frequency (no scale is reachable); k = 0 is a
            # different one-parameter family handled by "inverse-linear".
            raise DomainError(f"power-law cycles need k not in {{0, 2}}, got {self.k!r}")


def _one_cycle(spec: CycleSpec, cfg: IntegratorConfig) -> EvolutionMatrix:
    lam = spec.lam
    if spec.family == "custom":
        return propagate_ode(spec.profile, spec.duration, cfg)
    u = spec.v / spec.omega0  # normalized rate; gain is invariant under this rescaling
    if lam == 1.0:
        return EvolutionMatrix.identity()
    if spec.family == "inverse-linear":
        u_out = u if lam > 1.0 else -u
        out = propagate_inverse_linear(1.0, u_out, lam)
        back = propagate_inverse_linear(1.0 / lam, -u_out, 1.0 / lam)
        return compose(back, out)
    if spec.family == "power-law":
        z_t = lam ** (-2.0 / (spec.k - 2.0))
        u_out = u if z_t > 1.0 else -u
        out = propagate_power_law(spec.k, u_out, z_t)
        t_out = (z_t - 1.0) / u_out
        back_profile = TimeReversed(PowerLaw(spec.k, u_out), t_out)
        back = propagate_ode(back_profile, t_out, cfg)
        return compose(back, out)
    # exponential: omega = e^(u t), turning scale z_t = 1/lambda
    z_t = 1.0 / lam
    u_out = u if z_t > 1.0 else -u
    out = propagate_exponential(u_out, z_t)
    t_out = math.log(z_t) / u_out
    back = propagate_ode(TimeReversed(Exponential(u_out), t_out), t_out, cfg)
    return compose(back, out)


def build_cycle(spec: CycleSpec, cfg: IntegratorConfig = DEFAULT_CONFIG) -> EvolutionMatrix:
    """Evolution matrix of the full (possibly repeated) cycle."""
    once = _one_cycle(spec, cfg)
    total = once
    for _ in range(spec.n_cycles - 1):
        total = compose(once, total)
    return total


def cycle_gain(spec: CycleSpec, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    return gain_factor(build_cycle(spec, cfg))


@dataclass(frozen=True)
class GridAxis:
    """start/stop/count axis, linear or log spaced."""

    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.count < 1:
            raise DomainError(f"count must be >= 1, got {self.count!r}")
        if self.count == 1:
            return np.array([self.start])
        if self.spacing == "linear":
            return np.linspace(self.start, self.stop, self.count)
        if self.spacing == "log":
            if not (self.start > 0.0 and self.stop > 0.0):
                raise DomainError("log spacing needs positive endpoints")
            return np.geomspace(self.start, self.stop, self.count)
        raise DomainError(f"unknown spacing {self.spacing!r}")


@dataclass(frozen=True)
class ScanRow:
    index: int
    v: float
    lam: float
    omega0: float
    n_cycles: int
    gain: float
    det_err: float
    error: str = ""


@dataclass(frozen=True)
class ScanResult:
    family: str
    k: float
    rows: Tuple[ScanRow, ...] = field(default_factory=tuple)


def _scan_point(args) -> ScanRow:
    index, family, k, v, lam, omega0, n_cycles = args
    try:
        spec = CycleSpec(family=family, v=v, lam=lam, omega0=omega0, n_cycles=n_cycles, k=k)
        s = build_cycle(spec)
        return ScanRow(index, v, lam, omega0, n_cycles, gain_factor(s), s.det_error())
    except (DomainError, IntegrationError) as exc:
        # Failed points are kept in place so grids stay rectangular.
        return ScanRow(index, v, lam, omega0, n_cycles, math.nan, math.nan, str(exc))


def scan_gain(
    family: str,
    v_axis: GridAxis,
    lam_axis: GridAxis,
    omega0_axis: GridAxis = GridAxis(1.0, 1.0, 1),
    n_cycles: int = 1,
    k: float = -2.0,
    workers: int = 1,
) -> ScanResult:
    """Gain factor over the grid omega0 x lambda x v (v fastest).

    Every grid point is an independent cycle computation, so the result is
    identical for any worker count; rows are ordered by grid index.
    """
    jobs = []
    index = 0
    for omega0 in omega0_axis.values():
        for lam in lam_axis.values():
            for v in v_axis.values():
                jobs.append((index, family, k, float(v), float(lam), float(omega0), n_cycles))
                index += 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_point, jobs, chunksize=32))
    else:
        rows = [_scan_point(j) for j in jobs]
    return ScanResult(family=family, k=k, rows=tuple(rows))


def _golden_min(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> Tuple[float, float]:
    """Golden-section minimum of f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


def find_unity_points(
    result: ScanResult,
    tol: float = 1e-6,
    refine: bool = True,
    v_resolution: float = 1e-6,
) -> Tuple[Tuple[float, float, float], ...]:
    """(v, lambda, gain) triples where the gain dips back to 1 within tol.

    Local minima of the sampled R(v) at fixed (omega0, lambda) are located
    by sign changes of the discrete derivative and then sharpened by a
    golden-section search; a monotone sweep yields nothing.
    """
    found = []
    groups: dict = {}
    for row in result.rows:
        if row.error:
            continue
        groups.setdefault((row.omega0, row.lam, row.n_cycles), []).append(row)
    for (omega0, lam, n_cycles), rows in sorted(groups.items()):
        rows = sorted(rows, key=lambda r: r.v)
        def gain_at(v: float) -> float:
            return cycle_gain(
                CycleSpec(
                    family=result.family, v=v, lam=lam, omega0=omega0,
                    n_cycles=n_cycles, k=result.k,
                )
            )
        for i in range(1, len(rows) - 1):
            g_prev, g_here, g_next = rows[i - 1].gain, rows[i].gain, rows[i + 1].gain
            if not (g_here <= g_prev and g_here <= g_next):
                continue
            if g_here == g_prev and g_here == g_next:
                continue
            v_min, g_min = rows[i].v, g_here
            if refine:
                v_min, g_min = _golden_min(gain_at, rows[i - 1].v, rows[i + 1].v, v_resolution)
            if g_min - 1.0 < tol:
                found.append((v_min, lam, g_min))
    return tuple(found)


def random_fourier_profile(
    rng: np.random.Generator,
    n_harmonics: int = 4,
    amplitude: float = 0.4,
    duration_range: Tuple[float, float] = (2.0, 8.0),
) -> Custom:
    """Smooth random cycle profile omega(t) = exp(sum_j c_j sin(pi j t / T)).

    The sine basis pins omega(0) = omega(T) = 1 exactly and exponentiation
    keeps the frequency positive.
    """
    t0 = rng.uniform(*duration_range)
    coef = rng.normal(0.0, amplitude, size=n_harmonics) / np.arange(1, n_harmonics + 1)

    def omega_sq(t: float) -> float:
        phase = math.pi * t / t0
        s = 0.0
        for j, c in enumerate(coef, start=1):
            s += c * math.sin(j * phase)
        return math.exp(2.0 * s)

    return Custom(omega_sq, duration=t0)


def random_piecewise_cycle(rng: np.random.Generator, max_segments: int = 3) -> Piecewise:
    """Random palindromic piecewise profile; closes at omega = 1, may jump inside."""
    n = int(rng.integers(1, max_segments + 1))
    forward = []
    for _ in range(n):
        kind = rng.integers(0, 3)
        if kind == 0:
            v = rng.uniform(0.2, 1.5) * rng.choice([-1.0, 1.0])
            dur = rng.uniform(0.2, 1.5)
            if 1.0 + v * dur <= 0.05:
                dur = 0.5 / abs(v)
            forward.append((InverseLinear(1.0, v), dur))
        elif kind == 1:
            v = rng.uniform(0.2, 1.0) * rng.choice([-1.0, 1.0])
            forward.append((Exponential(v), rng.uniform(0.2, 1.5)))
        else:
            k = rng.choice([-3.0, -2.0, 1.0, 3.0])
            v = rng.uniform(0.2, 1.0)
            forward.append((PowerLaw(k, v), rng.uniform(0.2, 1.5)))
    mirrored = [(TimeReversed(p, d), d) for p, d in reversed(forward)]
    return Piecewise(tuple(forward + mirrored))


def random_cycle_gain(
    rng: np.random.Generator, cfg: IntegratorConfig = DEFAULT_CONFIG
) -> Tuple[CycleSpec, float, float]:
    """Draw a random closed cycle, mixing all families; return (spec, gain, det_err).

    Closed-form families use the full advertised parameter ranges; the
    families whose return leg is integrated numerically are drawn from
    ranges that keep the accumulated phase (and hence runtime) moderate.
    """
    kind = rng.integers(0, 4)
    if kind == 0:
        spec = CycleSpec(
            "inverse-linear",
            v=10.0 ** rng.uniform(-2.0, 2.0),
            lam=10.0 ** rng.uniform(-2.0, 2.0),
            omega0=10.0 ** rng.uniform(-1.0, 1.0),
        )
    elif kind == 1:
        spec = CycleSpec(
            "power-law",
            v=10.0 ** rng.uniform(-0.5, 2.0),
            lam=10.0 ** rng.uniform(-1.0, 1.0),
            omega0=10.0 ** rng.uniform(-0.5, 0.5),
            k=float(rng.choice([-4.0, -3.0, -2.0, -1.0, 1.0, 3.0])),
        )
    elif kind == 2:
        spec = CycleSpec(
            "exponential",
            v=10.0 ** rng.uniform(-0.5, 2.0),
            lam=10.0 ** rng.uniform(-1.0, 1.0),
            omega0=10.0 ** rng.uniform(-0.5, 0.5),
        )
    else:
        if rng.uniform() < 0.5:
            profile: FrequencyProfile = random_fourier_profile(rng)
            duration = profile.duration
        else:
            profile = random_piecewise_cycle(rng)
            duration = profile.duration
        spec = CycleSpec("custom", profile=profile, duration=duration)
    s = build_cycle(spec, cfg)
    return spec, gain_factor(s), s.det_error()
