"""Time-dependent frequency profiles omega(t) for H = p^2/2 + omega(t)^2 q^2 / 2.

Natural units: every family is normalized so omega(0) equals its nominal
initial frequency (1 unless stated otherwise).  Profiles only describe the
frequency; durations are passed to the propagators separately, except for
the container types (Piecewise, Tabulated, Custom, TimeReversed) that carry
an intrinsic domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

__all__ = [
    "FrequencyProfile",
    "InverseLinear",
    "PowerLaw",
    "Exponential",
    "Piecewise",
    "Tabulated",
    "Custom",
    "TimeReversed",
]


class FrequencyProfile:
    """Base type: subclasses provide omega_sq(t) and a domain check."""

    def omega_sq(self, t: float) -> float:
        raise NotImplementedError

    def omega(self, t: float) -> float:
        return math.sqrt(self.omega_sq(t))

    def check_domain(self, t_final: float) -> None:
        """Raise DomainError if [0, t_final] leaves the validity domain."""
        if not (t_final >= 0.0 and math.isfinite(t_final)):
            raise DomainError(f"t_final must be finite and >= 0, got {t_final!r}")


@dataclass(frozen=True)
class InverseLinear(FrequencyProfile):
    """omega(t) = omega0 / (1 + v t); the scale lambda(t) = 1 + v t."""

    omega0: float = 1.0
    v: float = 1.0

    def __post_init__(self) -> None:
        if not self.omega0 > 0.0:
            raise DomainError(f"omega0 must be positive, got {self.omega0!r}")

    def omega(self, t: float) -> float:
        return self.omega0 / (1.0 + self.v * t)

    def omega_sq(self, t: float) -> float:
        return self.omega(t) ** 2

    def t_for_scale(self, lam: float) -> float:
        """Time at which 1 + v t = lam."""
        if self.v == 0.0:
            if lam == 1.0:
                return 0.0
            raise DomainError("v = 0 profile never leaves lambda = 1")
        t = (lam - 1.0) / self.v
        if t < 0.0:
            raise DomainError(
                f"scale {lam!r} is not reachable with rate v = {self.v!r}"
            )
        return t

    def check_domain(self, t_final: float) -> None:
        super().check_domain(t_final)
        if 1.0 + self.v * t_final <= 0.0:
            raise DomainError(
                f"1 + v t vanishes before t_final = {t_final!r} (v = {self.v!r})"
            )


@dataclass(frozen=True)
class PowerLaw(FrequencyProfile):
    """omega(t)^2 = omega0^2 z^(k-2) with z = 1 + v t.

    k = 2 is a constant frequency; k = 0 would reproduce the inverse-linear
    family but is excluded here because the closed form uses Bessel order
    1/k (use InverseLinear instead).
    """

    k: float
    v: float
    omega0: float = 1.0

    def __post_init__(self) -> None:
        if self.k == 0.0:
            raise DomainError("k = 0 is the inverse-linear family; use InverseLinear")
        if not self.omega0 > 0.0:
            raise DomainError(f"omega0 must be positive, got {self.omega0!r}")

    def omega_sq(self, t: float) -> float:
        z = 1.0 + self.v * t
        return self.omega0**2 * z ** (self.k - 2.0)

    def t_for_z(self, z_final: float) -> float:
        if not z_final > 0.0:
            raise DomainError(f"z_final must be positive, got {z_final!r}")
        if self.v == 0.0:
            if z_final == 1.0:
                return 0.0
            raise DomainError("v = 0 profile never leaves z = 1")
        t = (z_final - 1.0) / self.v
        if t < 0.0:
            raise DomainError(
                f"z_final = {z_final!r} is not reachable with rate v = {self.v!r}"
            )
        return t

    def check_domain(self, t_final: float) -> None:
        super().check_domain(t_final)
        if 1.0 + self.v * t_final <= 0.0:
            raise DomainError(
                f"z = 1 + v t vanishes before t_final = {t_final!r} (v = {self.v!r})"
            )


@dataclass(frozen=True)
class Exponential(FrequencyProfile):
    """omega(t) = exp(v t); z = exp(v t) plays the role of the running scale."""

    v: float

    def omega(self, t: float) -> float:
        return math.exp(self.v * t)

    def omega_sq(self, t: float) -> float:
        return math.exp(2.0 * self.v * t)

    def t_for_z(self, z_final: float) -> float:
        if not z_final > 0.0:
            raise DomainError(f"z_final must be positive, got {z_final!r}")
        if self.v == 0.0:
            if z_final == 1.0:
                return 0.0
            raise DomainError("v = 0 profile never leaves z = 1")
        t = math.log(z_final) / self.v
        if t < 0.0:
            raise DomainError(
                f"z_final = {z_final!r} is not reachable with rate v = {self.v!r}"
            )
        return t


@dataclass(frozen=True)
class Piecewise(FrequencyProfile):
    """Segments (profile, duration) glued in time; each segment uses its own clock.

    omega may jump at breakpoints (a sudden frequency change); q and p stay
    continuous across the joint.
    """

    segments: Tuple[Tuple[FrequencyProfile, float], ...]

    def __post_init__(self) -> None:
        if len(self.segments) == 0:
            raise DomainError("Piecewise needs at least one segment")
        for prof, dur in self.segments:
            if not (dur > 0.0 and math.isfinite(dur)):
                raise DomainError(f"segment duration must be positive, got {dur!r}")
            prof.check_domain(dur)

    @property
    def duration(self) -> float:
        return float(sum(dur for _, dur in self.segments))

    def omega_sq(self, t: float) -> float:
        rem = t
        for prof, dur in self.segments:
            if rem <= dur:
                return prof.omega_sq(rem)
            rem -= dur
        raise DomainError(f"t = {t!r} beyond the piecewise domain [0, {self.duration!r}]")

    def check_domain(self, t_final: float) -> None:
        super().check_domain(t_final)
        if t_final > self.duration * (1.0 + 1e-12):
            raise DomainError(
                f"t_final = {t_final!r} beyond the piecewise domain [0, {self.duration!r}]"
            )


@dataclass(frozen=True)
class Tabulated(FrequencyProfile):
    """Sampled omega(t_i) > 0 on an increasing grid, monotone-cubic interpolated.

    Only the numeric propagator understands this profile.
    """

    times: Tuple[float, ...]
    omegas: Tuple[float, ...]
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        w = np.asarray(self.omegas, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size < 2:
            raise DomainError("need matching 1-d time and omega samples, at least 2")
        if t[0] != 0.0:
            raise DomainError(f"the sample grid must start at t = 0, got {t[0]!r}")
        if np.any(np.diff(t) <= 0.0):
            raise DomainError("sample times must be strictly increasing")
        if np.any(w <= 0.0):
            raise DomainError("omega samples must be positive")
        # PCHIP does not overshoot beyond neighboring samples, so positivity
        # of the samples keeps the interpolant positive.
        object.__setattr__(self, "_interp", PchipInterpolator(t, w, extrapolate=False))

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def omega(self, t: float) -> float:
        return float(self._interp(t))

    def omega_sq(self, t: float) -> float:
        return self.omega(t) ** 2

    def check_domain(self, t_final: float) -> None:
        super().check_domain(t_final)
        if t_final > self.duration * (1.0 + 1e-12):
            raise DomainError(
                f"t_final = {t_final!r} beyond the tabulated domain [0, {self.duration!r}]"
            )


@dataclass(frozen=True)
class Custom(FrequencyProfile):
    """omega^2 given by an arbitrary callable; numeric propagator only."""

    omega_sq_fn: Callable[[float], float]
    duration: float = math.inf

    def omega_sq(self, t: float) -> float:
        return float(self.omega_sq_fn(t))

    def check_domain(self, t_final: float) -> None:
        super().check_domain(t_final)
        if t_final > self.duration * (1.0 + 1e-12):
            raise DomainError(
                f"t_final = {t_final!r} beyond the profile domain [0, {self.duration!r}]"
            )


@dataclass(frozen=True)
class TimeReversed(FrequencyProfile):
    """The profile run backwards: omega_sq(t) = base.omega_sq(duration - t)."""

    base: FrequencyProfile
    duration: float

    def __post_init__(self) -> None:
        if not (self.duration > 0.0 and math.isfinite(self.duration)):
            raise DomainError(f"duration must be positive, got {self.duration!r}")
        self.base.check_domain(self.duration)

    def omega_sq(self, t: float) -> float:
        # Clamp to kill roundoff excursions just outside [0, duration].
        s = min(max(self.duration - t, 0.0), self.duration)
        return self.base.omega_sq(s)

    def check_domain(self, t_final: float) -> None:
        super().check_domain(t_final)
        if t_final > self.duration * (1.0 + 1e-12):
            raise DomainError(
                f"t_final = {t_final!r} beyond the reversed domain [0, {self.duration!r}]"
            )
