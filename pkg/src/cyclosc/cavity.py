"""Multimode Bogoliubov maps and the contracting-cavity Planck spectrum.

The multimode half integrates a quadratic Hamiltonian

    H = 1/2 sum_i p_i^2 + 1/2 sum_ij W_ij(t) q_i q_j,

whose endpoints must be diagonal in the mode basis, and converts the
resulting 2N x 2N fundamental matrix into the mode map

    a_i(final) = sum_k A_ik a_k + B_ik a_k^dagger,

with A A^dagger - B B^dagger = 1 and A B^T - B A^T = 0.  The phonon number
sum_i <a_i^dagger a_i> never decreases: the final value is

    N_f = sum_k n_k + sum_ik |B_ik|^2 (2 n_k + 1).

The cavity half works in CGS units.  An adiabatic contraction of a cavity
by lambda maps each mode nu -> nu/lambda and each mode energy E -> E/lambda,
which carries a Planck spectrum at T exactly onto the Planck spectrum at
T/lambda.  The sonoluminescence numbers are order-of-magnitude estimates of
that mechanism at bubble scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .errors import DomainError, IntegrationError
from .ode import DEFAULT_CONFIG, IntegratorConfig

__all__ = [
    "PLANCK_H",
    "BOLTZMANN_K",
    "LIGHT_C",
    "STEFAN_SIGMA",
    "WIEN_X",
    "MultimodeBogoliubov",
    "multimode_from_hamiltonian",
    "phonon_number_final",
    "thermal_occupation",
    "thermal_gain",
    "CavitySpec",
    "SpectrumSample",
    "PlanckShift",
    "planck_density",
    "shift_planck_spectrum",
    "SonoEstimate",
    "sonoluminescence_estimate",
    "random_coupling",
]

# CGS values as used in the source estimates.
PLANCK_H = 6.626e-27      # erg s
BOLTZMANN_K = 1.381e-16   # erg / K
LIGHT_C = 2.998e10        # cm / s
# Radiation density constant, erg cm^-3 K^-4.  The value implied by the
# constants above is 7.566e-15; the rounded 7.64e-15 is kept because every
# downstream number is an order-of-magnitude estimate.
STEFAN_SIGMA = 7.64e-15
# Root of 3 (1 - e^-x) = x: peak of the Planck density at h nu = WIEN_X k T.
WIEN_X = 2.8214393721220787

# Visible-light effective temperatures: a single visible photon carries
# h nu ~ k T with T in this band (~1e-12 erg at the low end).
_T_VISIBLE_LOW = 1.0e4   # K
_T_VISIBLE_HIGH = 1.0e5  # K


@dataclass(frozen=True)
class MultimodeBogoliubov:
    """Mode map a_i -> sum_k A_ik a_k + B_ik a_k^dagger (annihilation convention)."""

    A: np.ndarray
    B: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.A.shape[0]

    def unitarity_error(self) -> float:
        """max deviation in A A^+ - B B^+ = 1 and A B^T - B A^T = 0."""
        eye = np.eye(self.n_modes)
        e1 = np.max(np.abs(self.A @ self.A.conj().T - self.B @ self.B.conj().T - eye))
        e2 = np.max(np.abs(self.A @ self.B.T - self.B @ self.A.T))
        return float(max(e1, e2))


def multimode_from_hamiltonian(
    coupling: Callable[[float], np.ndarray],
    t_final: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> MultimodeBogoliubov:
    """Integrate the quadratic Hamiltonian with frequency matrix coupling(t).

    coupling must return a symmetric N x N array of squared frequencies,
    diagonal (with positive diagonal) at t = 0 and t = t_final so the mode
    operators are defined at both ends.
    """
    if not t_final > 0.0:
        raise DomainError(f"t_final must be positive, got {t_final!r}")
    w_start = np.asarray(coupling(0.0), dtype=float)
    w_end = np.asarray(coupling(t_final), dtype=float)
    n = w_start.shape[0]
    if w_start.shape != (n, n) or w_end.shape != (n, n):
        raise DomainError("coupling must return a square matrix of fixed size")
    if np.max(np.abs(w_start - w_start.T)) > 1e-9 * max(1.0, np.max(np.abs(w_start))):
        raise DomainError("coupling matrix must be symmetric")
    for tag, w in (("initial", w_start), ("final", w_end)):
        off = w - np.diag(np.diag(w))
        if np.max(np.abs(off)) > 1e-9 * max(1.0, np.max(np.abs(np.diag(w)))):
            raise DomainError(f"{tag} coupling matrix must be diagonal in the mode basis")
        if np.any(np.diag(w) <= 0.0):
            raise DomainError(f"{tag} squared frequencies must be positive")

    def rhs(t, y):
        m = y.reshape(2 * n, 2 * n)
        w = np.asarray(coupling(t), dtype=float)
        out = np.empty_like(m)
        out[:n] = m[n:]
        out[n:] = -w @ m[:n]
        return out.ravel()

    y0 = np.eye(2 * n).ravel()
    sol = solve_ivp(
        rhs, (0.0, t_final), y0, method=cfg.method, rtol=cfg.rtol, atol=cfg.atol
    )
    if not sol.success:
        raise IntegrationError(f"multimode integration failed: {sol.message}")
    s = sol.y[:, -1].reshape(2 * n, 2 * n)
    sqq, sqp = s[:n, :n], s[:n, n:]
    spq, spp = s[n:, :n], s[n:, n:]
    s0 = np.sqrt(np.sqrt(np.diag(w_start)))[None, :]  # omega0_k ** (1/2), row
    sf = np.sqrt(np.sqrt(np.diag(w_end)))[:, None]    # omegaf_i ** (1/2), column
    ratio = sf / s0
    prod = sf * s0
    a_mat = 0.5 * (ratio * sqq + spp / ratio + 1j * (spq / prod - prod * sqp))
    b_mat = 0.5 * (ratio * sqq - spp / ratio + 1j * (spq / prod + prod * sqp))
    return MultimodeBogoliubov(a_mat, b_mat)


def phonon_number_final(bg: MultimodeBogoliubov, occupations: Sequence[float]) -> float:
    """N_f = sum_k n_k + sum_ik |B_ik|^2 (2 n_k + 1); never below sum_k n_k."""
    occ = np.asarray(occupations, dtype=float)
    if occ.shape != (bg.n_modes,):
        raise DomainError(
            f"need {bg.n_modes} occupation numbers, got shape {occ.shape}"
        )
    if np.any(occ < 0.0):
        raise DomainError("occupation numbers must be nonnegative")
    return float(occ.sum() + (np.abs(bg.B) ** 2 @ (2.0 * occ + 1.0)).sum())


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein mean occupation at natural-unit temperature (k_B = 1)."""
    if not (omega > 0.0 and temperature > 0.0):
        raise DomainError("omega and temperature must be positive")
    return 1.0 / math.expm1(omega / temperature)


def thermal_gain(
    omegas: Sequence[float], temperature: float, gains: Sequence[float]
) -> Tuple[float, float]:
    """(E_initial, E_final) for independently cycled thermal modes.

    Each mode starts in its thermal state, E_i = omega_i (n_i + 1/2), and is
    multiplied by its cycle gain; since every R_i >= 1, E_final >= E_initial.
    """
    w = np.asarray(omegas, dtype=float)
    r = np.asarray(gains, dtype=float)
    if w.shape != r.shape:
        raise DomainError("omegas and gains must have matching shapes")
    occ = np.array([thermal_occupation(x, temperature) for x in w])
    e0 = w * (occ + 0.5)
    return float(e0.sum()), float((r * e0).sum())


@dataclass(frozen=True)
class CavitySpec:
    """Contracting cavity: edge L0 (cm), wall temperature T (K), scale lambda,
    fractional contraction rate v (1/s), and mode cutoff n_max."""

    L0: float
    T: float
    lam: float
    v: float
    n_max: int = 100

    def __post_init__(self) -> None:
        if not (self.L0 > 0.0 and self.T > 0.0 and self.lam > 0.0):
            raise DomainError("L0, T, lambda must be positive")
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")
        if abs(self.wall_speed) / LIGHT_C >= 1e-3:
            raise DomainError(
                f"wall speed |V| = {abs(self.wall_speed)!r} cm/s is not small "
                "compared to c (needs |V|/c < 1e-3)"
            )

    @property
    def wall_speed(self) -> float:
        return self.L0 * self.v

    def mode_adiabaticity(self, n: int) -> float:
        """Omega_n = pi n c / |V|; the n-th mode is adiabatic when this is large."""
        if self.v == 0.0:
            return math.inf
        return math.pi * n * LIGHT_C / abs(self.wall_speed)


@dataclass(frozen=True)
class SpectrumSample:
    nu: float
    u: float


@dataclass(frozen=True)
class PlanckShift:
    before: Tuple[SpectrumSample, ...]
    after: Tuple[SpectrumSample, ...]
    fitted_temperature: float


def planck_density(nu, temperature: float):
    """Spectral energy density u(nu) = (8 pi h / c^3) nu^3 / (e^(h nu / k T) - 1)."""
    nu = np.asarray(nu, dtype=float)
    x = PLANCK_H * nu / (BOLTZMANN_K * temperature)
    return 8.0 * math.pi * PLANCK_H / LIGHT_C**3 * nu**3 / np.expm1(x)


def _fit_planck_temperature(nus: np.ndarray, us: np.ndarray) -> float:
    """Wien-peak seed plus least squares on log u."""
    seed = PLANCK_H * nus[np.argmax(us)] / (BOLTZMANN_K * WIEN_X)
    logu = np.log(us)

    def cost(t: float) -> float:
        return float(np.sum((np.log(planck_density(nus, t)) - logu) ** 2))

    res = minimize_scalar(cost, bounds=(0.5 * seed, 2.0 * seed), method="bounded",
                          options={"xatol": seed * 1e-12})
    return float(res.x)


def shift_planck_spectrum(spec: CavitySpec, n_points: int = 257) -> PlanckShift:
    """Planck spectrum before and after the adiabatic rescaling nu -> nu/lambda.

    Every mode up to n_max must be adiabatic (Omega_n > 1e3); the slowest
    mode fails first.  Mode energies scale by 1/lambda while occupation
    numbers freeze, which is exactly a Planck spectrum at T/lambda (the
    fitted temperature returned alongside the samples).
    """
    for n in range(1, spec.n_max + 1):
        if spec.mode_adiabaticity(n) <= 1e3:
            raise DomainError(
                f"mode n = {n} is not adiabatic: Omega_n = "
                f"{spec.mode_adiabaticity(n)!r} <= 1e3"
            )
        break  # Omega_n grows with n, so only n = 1 can fail.
    if n_points < 16:
        raise DomainError("n_points too small to resolve the spectrum")
    scale = BOLTZMANN_K * spec.T / PLANCK_H
    nus = np.geomspace(0.01 * scale, 20.0 * scale, n_points)
    us = planck_density(nus, spec.T)
    # Mode-by-mode: nu -> nu/lambda, energy -> energy/lambda, volume -> lambda^3 V,
    # so the spectral density transforms as u'(nu/lambda) = u(nu) / lambda^3.
    nus_after = nus / spec.lam
    us_after = us / spec.lam**3
    fitted = _fit_planck_temperature(nus_after, us_after)
    before = tuple(SpectrumSample(float(n_), float(u_)) for n_, u_ in zip(nus, us))
    after = tuple(SpectrumSample(float(n_), float(u_)) for n_, u_ in zip(nus_after, us_after))
    return PlanckShift(before, after, fitted)


@dataclass(frozen=True)
class SonoEstimate:
    excess_energy: float            # erg
    photon_count_range: Tuple[float, float]
    effective_temperature: float    # K


def sonoluminescence_estimate(
    lam: float, temperature: float = 300.0, size: float = 7.0e-3
) -> SonoEstimate:
    """Order-of-magnitude photon yield of a cavity contraction by lam < 1.

    The stored thermal energy sigma T^4 size^3 is multiplied by 1/lam, and
    the excess is assumed radiated as visible photons (h nu ~ k T with T in
    the 1e4..1e5 K band, i.e. ~1e-12 erg each).  The effective temperature
    of the compressed spectrum is T / lam.  Defaults are bubble scale:
    70 um at room temperature.
    """
    if not 0.0 < lam < 1.0:
        raise DomainError(f"the estimate describes a contraction; need 0 < lam < 1, got {lam!r}")
    if not (temperature > 0.0 and size > 0.0):
        raise DomainError("temperature and size must be positive")
    stored = STEFAN_SIGMA * temperature**4 * size**3
    excess = stored * (1.0 / lam - 1.0)
    count_low = excess / (BOLTZMANN_K * _T_VISIBLE_HIGH)
    count_high = excess / (BOLTZMANN_K * _T_VISIBLE_LOW)
    return SonoEstimate(excess, (count_low, count_high), temperature / lam)


def random_coupling(
    rng: np.random.Generator, n_modes: int, t_final: float
) -> Callable[[float], np.ndarray]:
    """Random endpoint-diagonal coupling: smooth diagonal drift plus a
    sin^2-windowed symmetric off-diagonal mixing, kept diagonally dominant."""
    d0 = rng.uniform(0.5, 2.0, size=n_modes) ** 2
    d1 = rng.uniform(0.5, 2.0, size=n_modes) ** 2
    c = rng.normal(0.0, 1.0, size=(n_modes, n_modes))
    c = 0.5 * (c + c.T)
    np.fill_diagonal(c, 0.0)
    strength = 0.3 * min(d0.min(), d1.min()) / max(n_modes - 1, 1)
    if np.max(np.abs(c)) > 0.0:
        c *= strength / np.max(np.abs(c))

    def coupling(t: float) -> np.ndarray:
        s = math.sin(0.5 * math.pi * min(max(t / t_final, 0.0), 1.0)) ** 2
        window = math.sin(math.pi * min(max(t / t_final, 0.0), 1.0)) ** 2
        return np.diag(d0 + (d1 - d0) * s) + window * c

    return coupling
