"""Condensate analogue: Bogoliubov bath, tweezer-built two-level atoms, the
impurity-phonon coupling tensor, and the mapping onto the detector model.

Units: hbar = k_B = 1 throughout; a sensible normalization is boson mass
m = 1 and chemical potential mu = 1, which makes the healing-length and
mu-energy scales order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ConfigError, DivergenceError, DomainError, NoRootError
from .kinematics import AtomSpec, FrameConfig


@dataclass(frozen=True)
class BogoliubovBath:
    """Quasi-1D condensate parameters.

    mu is not forced to equal u0*n0; the mismatch is a reportable diagnostic.
    """

    m: float
    mu: float
    n0: float
    L: float
    u0: float
    T: float

    def __post_init__(self):
        for name in ("m", "mu", "n0", "L", "u0", "T"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")

    def mu_mismatch(self) -> float:
        """Relative deviation of mu from the interaction estimate u0*n0."""
        return abs(self.mu - self.u0 * self.n0) / self.mu


@dataclass(frozen=True)
class BogoliubovMode:
    k: float
    E: float
    u: float
    v: float
    S: float


@dataclass(frozen=True)
class TweezerSpec:
    """One optical tweezer holding an impurity: depth, waist, impurity mass,
    laboratory position, impurity-boson coupling."""

    V0: float
    w: float
    M: float
    x: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        if self.V0 <= 0 or self.w <= 0 or self.M <= 0:
            raise DomainError("V0, w and M must all be > 0")
        if self.g < 0:
            raise DomainError(f"coupling g must be >= 0, got {self.g}")


@dataclass(frozen=True)
class TwoLevelResult:
    a0: float
    Omega: float
    n_b: int


def bogoliubov_mode(bath: BogoliubovBath, k: float) -> BogoliubovMode:
    """Energy, coefficients and structure factor of one Bogoliubov mode.

    E = sqrt(eps(eps + 2 mu)) with eps = k^2/(2m); u,v = ((eps+mu)/(2E) +- 1/2)^(1/2);
    S = u - v.
    """
    if k == 0:
        raise DivergenceError("Bogoliubov coefficients diverge at k = 0")
    eps = k * k / (2.0 * bath.m)
    E = math.sqrt(eps * (eps + 2.0 * bath.mu))
    ratio = (eps + bath.mu) / (2.0 * E)
    u = math.sqrt(ratio + 0.5)
    v = math.sqrt(ratio - 0.5)
    return BogoliubovMode(k=k, E=E, u=u, v=v, S=u - v)


def bound_state_count(tweezer: TweezerSpec, grid_points: int = 1501) -> tuple[int, int]:
    """Number of tweezer bound states: (closed-form estimate, numeric count).

    The WKB-style closed form floor(2*sqrt(V0*M/(pi*w)) - 1/2), taken as given
    in natural units despite its odd dimensional structure, ships next to an
    independent numeric count (finite-difference Gaussian-well eigenproblem,
    negative eigenvalues) which is the authoritative one. Disagreements are
    for the caller to report, not to reconcile silently.
    """
    n_closed = math.floor(2.0 * math.sqrt(tweezer.V0 * tweezer.M / (math.pi * tweezer.w)) - 0.5)

    # box wide enough for weakly bound states: decay length 1/kappa with the
    # shallow-well estimate kappa ~ M * integral(V) = M V0 w sqrt(pi)
    kappa = tweezer.M * tweezer.V0 * tweezer.w * math.sqrt(math.pi)
    half_width = min(max(15.0 * tweezer.w, 10.0 / kappa), 2000.0 * tweezer.w)
    x, h = np.linspace(-half_width, half_width, grid_points, retstep=True)
    v_diag = -tweezer.V0 * np.exp(-(x / tweezer.w) ** 2)
    kin = 1.0 / (2.0 * tweezer.M * h * h)
    diag = v_diag + 2.0 * kin
    off = np.full(grid_points - 1, -kin)
    evals = eigvalsh_tridiagonal(diag, off, select="v",
                                 select_range=(-2.0 * tweezer.V0, 0.0))
    n_numeric = int(np.sum(evals < 0.0))
    return n_closed, n_numeric


def two_level_window(V0: float, M: float) -> tuple[float, float]:
    """Waist interval (w_min, w_max) in which the tweezer holds exactly two
    bound states: ((4/5) sqrt(M V0 / pi), (4/3) sqrt(M V0 / pi))."""
    if V0 <= 0 or M <= 0:
        raise DomainError("V0 and M must be > 0")
    root = math.sqrt(M * V0 / math.pi)
    return 0.8 * root, (4.0 / 3.0) * root


def _width_residual(a0: float, tweezer: TweezerSpec) -> float:
    w2 = tweezer.w * tweezer.w
    lhs = w2 * w2 / (2.0 * a0 * a0) * (2.0 / (a0 * a0) + 1.0 / w2) ** 3
    return lhs - (tweezer.V0 * tweezer.M) ** 2


def variational_width(tweezer: TweezerSpec) -> float:
    """Bound-state width a0 from the Gaussian variational condition

        w^4/(2 a0^2) * (2/a0^2 + 1/w^2)^3 = (V0 M)^2,

    solved by bracketed bisection on a0 in (1e-3 w, 1e3 w)."""
    lo, hi = 1e-3 * tweezer.w, 1e3 * tweezer.w
    f_lo, f_hi = _width_residual(lo, tweezer), _width_residual(hi, tweezer)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise NoRootError(
            f"no variational-width root in ({lo:.3e}, {hi:.3e}); the configuration "
            "is outside the validity range of the Gaussian ansatz")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = _width_residual(mid, tweezer)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo <= 1e-16 * mid:
            break
    return 0.5 * (lo + hi)


def transition_energy(tweezer: TweezerSpec, a0: float) -> float:
    """Two-level transition energy for bound-state width a0:

        Omega = 2/(M a0^2) - sqrt(2) V0 sqrt(2 a0^4 + a0^6/w^2) / (a0^2 + 2 w^2)^2.
    """
    if a0 <= 0:
        raise DomainError(f"a0 must be > 0, got {a0}")
    w2 = tweezer.w * tweezer.w
    a2 = a0 * a0
    kinetic = 2.0 / (tweezer.M * a2)
    potential = math.sqrt(2.0) * tweezer.V0 * math.sqrt(2.0 * a2 * a2 + a2 * a2 * a2 / w2) \
        / (a2 + 2.0 * w2) ** 2
    return kinetic - potential


def two_level_atom(tweezer: TweezerSpec) -> TwoLevelResult:
    """Convenience bundle: variational width, transition energy, bound count."""
    a0 = variational_width(tweezer)
    n_closed, n_numeric = bound_state_count(tweezer)
    return TwoLevelResult(a0=a0, Omega=transition_energy(tweezer, a0), n_b=n_numeric)


def coupling_tensor(bath: BogoliubovBath, mode: BogoliubovMode, a0: float,
                    g: float) -> tuple[complex, complex, complex]:
    """Impurity-phonon coupling components (G00, G11, G10) for one mode:

        G00 = g sqrt(n0 S(k)/L) exp(-k^2 a0^2/2), G11 = (1 - a0^2 k^2/2) G00,
        G10 = i a0 k G00  (and G01 = conj(G10)).
    """
    if a0 <= 0:
        raise DomainError(f"a0 must be > 0, got {a0}")
    g00 = g * math.sqrt(bath.n0 * mode.S / bath.L) * math.exp(-mode.k**2 * a0**2 / 2.0)
    g11 = (1.0 - a0**2 * mode.k**2 / 2.0) * g00
    g10 = 1j * a0 * mode.k * g00
    return complex(g00), complex(g11), g10


def resonant_wavenumber(bath: BogoliubovBath, omega: float) -> float:
    """Invert the Bogoliubov dispersion: the k > 0 with E_k = omega."""
    if omega <= 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    eps = -bath.mu + math.sqrt(bath.mu**2 + omega**2)
    return math.sqrt(2.0 * bath.m * eps)


@dataclass(frozen=True)
class DetectorModelMap:
    """Detector-model inputs produced from a laboratory configuration.

    positions override the conformal coordinates (the analogue places atoms
    freely while the detector model ties position to acceleration);
    stark_shift = g*n0 is the uniform level renormalization (it cancels in
    every transition energy).
    """

    frame: FrameConfig
    atoms: tuple[AtomSpec, ...]
    positions: tuple[float, ...]
    resonant_k: tuple[float, ...]
    couplings: tuple[complex, ...]
    stark_shift: float
    warnings: tuple[str, ...]


def map_to_detector_model(bath: BogoliubovBath, tweezers: Sequence[TweezerSpec],
                          eps_res: float = 1e-6) -> DetectorModelMap:
    """Map tweezers in a condensate onto detector-model inputs.

    Identifications: laboratory position x_i -> conformal position xi_i; the
    bath temperature sets the frame via beta = 1/T (a = 2*pi*T); transition
    energies become the proper frequencies (red-shift 1 for every atom); the
    inter-band coupling G10 at the resonant wave number sets the per-atom
    weight s_i = |C_i|/|C_1| with the overall scale gamma0 = |C_1|^2.
    """
    if not tweezers:
        raise ConfigError(["at least one tweezer is required"])
    warnings: list[str] = []
    omegas, ks, cs = [], [], []
    for idx, tw in enumerate(tweezers):
        w_min, w_max = two_level_window(tw.V0, tw.M)
        if not w_min < tw.w < w_max:
            raise ConfigError([
                f"tweezer {idx}: waist w={tw.w:g} outside the two-level window "
                f"({w_min:g}, {w_max:g}) for V0={tw.V0:g}, M={tw.M:g}"])
        a0 = variational_width(tw)
        omega = transition_energy(tw, a0)
        if omega <= 0:
            raise ConfigError([f"tweezer {idx}: non-positive transition energy {omega:g}"])
        k_res = resonant_wavenumber(bath, omega)
        eps_k = k_res**2 / (2.0 * bath.m)
        if eps_k >= bath.mu:
            warnings.append(
                f"tweezer {idx}: resonant mode eps_k={eps_k:g} >= mu={bath.mu:g}; "
                "outside the near-linear region of the dispersion")
        mode = bogoliubov_mode(bath, k_res)
        c10 = coupling_tensor(bath, mode, a0, tw.g)[2]
        omegas.append(omega)
        ks.append(k_res)
        cs.append(c10)

    a = 2.0 * math.pi * bath.T  # beta = 2*pi/a = 1/T
    c_ref = abs(cs[0])
    gamma0 = c_ref**2
    weights = [abs(c) / c_ref if c_ref > 0 else 0.0 for c in cs]
    frame = FrameConfig(a=a, eps_res=eps_res, gamma0=gamma0)
    atoms = tuple(AtomSpec(omega=w, alpha=a, wedge="I", g=s)
                  for w, s in zip(omegas, weights))
    return DetectorModelMap(frame=frame, atoms=atoms,
                            positions=tuple(tw.x for tw in tweezers),
                            resonant_k=tuple(ks), couplings=tuple(cs),
                            stark_shift=tweezers[0].g * bath.n0,
                            warnings=tuple(warnings))
