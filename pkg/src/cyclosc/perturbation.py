"""First-order transitions driven by a weak x^N perturbation.

The oscillator basis is omega0 = 1, so E_n = n + 1/2 and the position
matrix is tridiagonal with <n+1|x|n> = sqrt((n+1)/2).  The perturbation is

    Delta V(t) = (delta(t) / 2) x^N,

with delta(t) the (squared-frequency, for N = 2) drive, vanishing at both
endpoints.  First order in delta gives

    P(n -> f) = | integral dt (delta(t)/2) e^(i (f-n) t) |^2 |(x^N)_fn|^2.

Powers of x are computed on a truncated basis; entries within N rows of the
truncation edge are polluted by the cutoff and are never reported, which is
why every routine takes (or derives) a cutoff comfortably above the states
it touches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError, QuadratureError

__all__ = [
    "DEFAULT_CUTOFF_MARGIN",
    "OperatorMatrix",
    "Drive",
    "x_power_matrix",
    "transition_probability",
    "check_inequality",
    "InequalityReport",
    "first_order_energy_shift",
]

# Rows this far below the truncation edge are unaffected by it: a length-N
# ladder walk from row n cannot feel the edge unless n + N reaches it.
DEFAULT_CUTOFF_MARGIN = 32


@dataclass(frozen=True)
class OperatorMatrix:
    """x^N on a truncated number basis; rows >= usable_dim are edge-polluted."""

    matrix: np.ndarray
    power: int
    usable_dim: int

    def element(self, m: int, n: int) -> float:
        if min(m, n) < 0:
            raise DomainError(f"negative state index in ({m}, {n})")
        if max(m, n) >= self.usable_dim:
            raise DomainError(
                f"element ({m}, {n}) is within {self.power} rows of the cutoff "
                f"{self.matrix.shape[0]}; raise the cutoff"
            )
        return float(self.matrix[m, n])


def _default_cutoff(n_max: int, power: int) -> int:
    return n_max + power + DEFAULT_CUTOFF_MARGIN


def x_power_matrix(power: int, cutoff: int) -> OperatorMatrix:
    """Matrix of x^power on the states |0> .. |cutoff-1>.

    Selection rules of the result: (x^N)_mn = 0 unless |m - n| <= N and
    m - n has the parity of N.
    """
    if power < 1:
        raise DomainError(f"power must be >= 1, got {power!r}")
    if cutoff <= power:
        raise DomainError(f"cutoff {cutoff!r} leaves no usable rows for power {power!r}")
    n = np.arange(1, cutoff)
    x = np.zeros((cutoff, cutoff))
    off = np.sqrt(n / 2.0)
    x[n, n - 1] = off
    x[n - 1, n] = off
    return OperatorMatrix(np.linalg.matrix_power(x, power), power, cutoff - power)


@dataclass(frozen=True)
class Drive:
    """Uniformly sampled drive delta(t) on [0, T] with delta(0) = delta(T) = 0.

    The sample count is 4m + 1 so composite Simpson can be compared against
    its half-resolution restriction (Richardson check).
    """

    times: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        w = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != w.shape:
            raise DomainError("times and values must be matching 1-d sequences")
        if t.size < 5 or (t.size - 1) % 4 != 0:
            raise DomainError(
                f"need 4m + 1 uniform samples with m >= 1, got {t.size}"
            )
        if t[0] != 0.0:
            raise DomainError(f"drive must start at t = 0, got {t[0]!r}")
        steps = np.diff(t)
        if np.any(steps <= 0.0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise DomainError("drive samples must be uniform and increasing")
        scale = float(np.max(np.abs(w)))
        if scale > 0.0 and (abs(w[0]) > 1e-12 * scale or abs(w[-1]) > 1e-12 * scale):
            raise DomainError(
                f"drive must vanish at the endpoints, got {w[0]!r} and {w[-1]!r}"
            )

    @classmethod
    def from_callable(
        cls, fn: Callable[[float], float], t_final: float, n_samples: int = 4097
    ) -> "Drive":
        if not t_final > 0.0:
            raise DomainError(f"t_final must be positive, got {t_final!r}")
        t = np.linspace(0.0, t_final, n_samples)
        w = np.array([float(fn(x)) for x in t])
        # Off-grid probes catch carriers the grid aliases onto a smooth
        # curve, which no check on the samples alone can ever see.
        scale = float(np.max(np.abs(w)))
        if scale > 0.0:
            golden = 0.6180339887498949
            probes = t_final * ((np.arange(1, 17) * golden) % 1.0)
            dev = float(
                np.max(np.abs([fn(x) for x in probes] - np.interp(probes, t, w)))
            )
            if dev > 1e-2 * scale:
                raise QuadratureError(
                    f"drive deviates from its sampled interpolant by {dev!r} "
                    f"(scale {scale!r}); raise n_samples to resolve the carrier"
                )
        return cls(tuple(t), tuple(w))

    @property
    def t_final(self) -> float:
        return self.times[-1]

    def scale(self) -> float:
        return float(np.max(np.abs(self.values)))


def _simpson(values: np.ndarray, h: float) -> complex:
    return (
        h / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum())
    )


def _oscillatory_integral(drive: Drive, omega_fi: float) -> complex:
    """integral dt (delta(t)/2) exp(i omega_fi t), Simpson with a half-grid check."""
    t = np.asarray(drive.times)
    w = np.asarray(drive.values)
    # Sample-to-sample swings of order the drive scale mean the carrier is
    # not resolved; grid halving alone cannot see this when the alias lands
    # on a smooth curve, so it is checked directly.
    jump = float(np.max(np.abs(np.diff(w)), initial=0.0))
    if jump > 0.5 * drive.scale():
        raise QuadratureError(
            f"drive swings by {jump!r} between adjacent samples (scale "
            f"{drive.scale()!r}); sample the drive more densely"
        )
    f = 0.5 * w * np.exp(1j * omega_fi * t)
    h = t[1] - t[0]
    full = _simpson(f, h)
    half = _simpson(f[::2], 2.0 * h)
    err = abs(full - half) / 15.0
    # compare against the a priori magnitude scale, not |full|: the integral
    # may legitimately cancel to zero at a frequency the drive barely excites
    floor = 0.5 * drive.scale() * drive.t_final
    if err > 1e-10 * max(abs(full), floor):
        raise QuadratureError(
            f"Simpson error estimate {err!r} exceeds the 1e-10 relative target; "
            "sample the drive more densely"
        )
    return full


def transition_probability(
    drive: Drive,
    n_from: int,
    n_to: int,
    power: int,
    cutoff: Optional[int] = None,
) -> float:
    """First-order probability of |n_from> -> |n_to> under (delta/2) x^power.

    Zero exactly when the selection rule |n_to - n_from| <= power with
    matching parity fails.
    """
    if min(n_from, n_to) < 0:
        raise DomainError("state indices must be nonnegative")
    dm = n_to - n_from
    if abs(dm) > power or (power - dm) % 2 != 0:
        return 0.0
    if cutoff is None:
        cutoff = _default_cutoff(max(n_from, n_to), power)
    op = x_power_matrix(power, cutoff)
    element = op.element(n_to, n_from)
    amp = _oscillatory_integral(drive, float(dm))
    return abs(amp) ** 2 * element**2


@dataclass(frozen=True)
class InequalityReport:
    power: int
    n_max: int
    checked: int
    violations: Tuple[Tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0


def check_inequality(
    power: int, n_max: int, cutoff: Optional[int] = None
) -> InequalityReport:
    """Exhaustively verify |(x^N)_{n+m,n}| >= |(x^N)_{n-m,n}| for n <= n_max.

    Upward matrix elements dominate their downward mirrors; this is the
    mechanism that makes the first-order energy shift nonnegative.
    """
    if cutoff is None:
        cutoff = _default_cutoff(n_max + power, power)
    op = x_power_matrix(power, cutoff)
    checked = 0
    violations = []
    for n in range(n_max + 1):
        for m in range(1, power + 1):
            if (power - m) % 2 != 0:
                continue
            if n - m < 0:
                continue
            up = abs(op.element(n + m, n))
            down = abs(op.element(n - m, n))
            checked += 1
            if up < down * (1.0 - 1e-12):
                violations.append((n, m))
    return InequalityReport(power, n_max, checked, tuple(violations))


def first_order_energy_shift(
    drive: Drive, n: int, power: int, cutoff: Optional[int] = None
) -> float:
    """sum_f (E_f - E_n) P(n -> f) at first order.

    Nonnegative for any real drive: the +m and -m time integrals have equal
    modulus, so each pair contributes m (P_up - P_down) >= 0 by the matrix
    element inequality.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if cutoff is None:
        cutoff = _default_cutoff(n + power, power)
    op = x_power_matrix(power, cutoff)
    shift = 0.0
    for m in range(-power, power + 1):
        if m == 0 or (power - m) % 2 != 0:
            continue
        f = n + m
        if f < 0:
            continue
        element = op.element(f, n)
        if element == 0.0:
            continue
        amp = _oscillatory_integral(drive, float(m))
        shift += m * abs(amp) ** 2 * element**2
    return shift
