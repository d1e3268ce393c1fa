"""Long-time (Markovian, secular) dissipative rate matrices.

For co-accelerating atoms j, n the two normal channels are

    gamma_minus_plus[j, n] = gamma0 * s_j * s_n * (n(k0_j)+1) * Ind * exp(i k0_j (xi_j - xi_n))
    gamma_plus_minus[j, n] = gamma0 * s_j * s_n *  n(k0_j)    * Ind * exp(i k0_j (xi_j - xi_n))

with s_i = (a/alpha_i)*g_i the red-shift-weighted coupling, k0_j = Omega_j the
resonant wave number, n() the occupation at beta = 2*pi/a and Ind the secular
indicator |Omega_j - Omega_n| < eps_res that replaces the frequency delta (its
dimensional normalization, like every overall rate factor, is a pure time-unit
choice absorbed into gamma0). Counter-accelerating ensembles additionally
carry anomalous inter-wedge channels with prefactor sqrt(n(1+n)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .kinematics import AtomSpec, FrameConfig, kinematic_state, thermal_occupation, unruh_beta


@dataclass(frozen=True)
class RateSet:
    """Assembled rate matrices for one atom configuration.

    gamma_minus_plus: emission channel (prefactor n+1), full N x N.
    gamma_plus_minus: absorption channel (prefactor n), full N x N.
    cross_pp / cross_mm: anomalous inter-wedge channels, N_I x N_II
        (cross_mm is the conjugate channel, cross_mm = conj(cross_pp)).
    wedge_partition: (indices in wedge I, indices in wedge II).
    """

    gamma_minus_plus: np.ndarray
    gamma_plus_minus: np.ndarray
    cross_pp: np.ndarray
    cross_mm: np.ndarray
    wedge_partition: tuple[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        for arr in (self.gamma_minus_plus, self.gamma_plus_minus, self.cross_pp, self.cross_mm):
            arr.setflags(write=False)

    @property
    def n_atoms(self) -> int:
        return self.gamma_minus_plus.shape[0]

    @property
    def has_cross(self) -> bool:
        return self.cross_pp.size > 0


def coupling_weight(frame: FrameConfig, atom: AtomSpec) -> float:
    """Red-shift-weighted coupling s = (dtau_i/dtau) * g = (a/alpha) * g."""
    return kinematic_state(frame, atom).redshift * atom.g


def _kinematics_arrays(frame, atoms, xi_override):
    states = [kinematic_state(frame, atom) for atom in atoms]
    omega = np.array([st.Omega for st in states])
    if np.any(omega <= 0):
        raise DomainError("all red-shifted frequencies must be > 0")
    if xi_override is None:
        xi = np.array([st.xi for st in states])
    else:
        xi = np.asarray(xi_override, dtype=float)
        if xi.shape != (len(atoms),):
            raise DomainError(f"xi override must have length {len(atoms)}, got shape {xi.shape}")
    s = np.array([st.redshift * at.g for st, at in zip(states, atoms)])
    return omega, xi, s


def _normal_channels(frame, omega, xi, s, beta):
    nbar = np.array([thermal_occupation(beta, w) for w in omega])
    resonant = np.abs(omega[:, None] - omega[None, :]) < frame.eps_res
    phase = np.exp(1j * omega[:, None] * (xi[:, None] - xi[None, :]))
    base = frame.gamma0 * np.outer(s, s) * resonant * phase
    return base * (nbar + 1.0)[:, None], base * nbar[:, None]


def same_wedge_rates(frame: FrameConfig, atoms: Sequence[AtomSpec],
                     xi: Sequence[float] | None = None) -> RateSet:
    """Rates for atoms sharing one wedge.

    `xi` optionally overrides the conformal positions (used by the thermal
    static construction and the condensate analogue, where positions are free
    parameters instead of being slaved to the acceleration).
    """
    if not atoms:
        raise DomainError("need at least one atom")
    wedges = {atom.wedge for atom in atoms}
    if len(wedges) != 1:
        raise DomainError("same_wedge_rates requires all atoms in one wedge")
    omega, xis, s = _kinematics_arrays(frame, atoms, xi)
    gmp, gpm = _normal_channels(frame, omega, xis, s, unruh_beta(frame))
    n = len(atoms)
    empty = np.zeros((n, 0), dtype=complex) if "I" in wedges else np.zeros((0, n), dtype=complex)
    part = (tuple(range(n)), ()) if "I" in wedges else ((), tuple(range(n)))
    return RateSet(gmp, gpm, empty, empty.copy(), part)


def cross_wedge_rates(frame: FrameConfig, atoms_I: Sequence[AtomSpec],
                      atoms_II: Sequence[AtomSpec],
                      xi_I: Sequence[float] | None = None,
                      xi_II: Sequence[float] | None = None) -> RateSet:
    """Full rate set for a counter-accelerating ensemble (wedge I atoms first).

    The normal channels act within each wedge only; the anomalous channels
    couple wedge-I atom i to wedge-II atom kappa with magnitude
    gamma0 * s_i * s_kappa * sqrt(n(k0_i)(1+n(k0_i))) and phase
    exp(i k0_i (xi_i - xi_kappa)).
    """
    if not atoms_I or not atoms_II:
        raise DomainError("cross_wedge_rates requires atoms in both wedges")
    if any(a.wedge != "I" for a in atoms_I) or any(a.wedge != "II" for a in atoms_II):
        raise DomainError("wedge labels must match the atom lists")
    beta = unruh_beta(frame)
    om1, xi1, s1 = _kinematics_arrays(frame, atoms_I, xi_I)
    om2, xi2, s2 = _kinematics_arrays(frame, atoms_II, xi_II)
    gmp1, gpm1 = _normal_channels(frame, om1, xi1, s1, beta)
    gmp2, gpm2 = _normal_channels(frame, om2, xi2, s2, beta)

    n1, n2 = len(atoms_I), len(atoms_II)
    gmp = np.zeros((n1 + n2, n1 + n2), dtype=complex)
    gpm = np.zeros_like(gmp)
    gmp[:n1, :n1], gmp[n1:, n1:] = gmp1, gmp2
    gpm[:n1, :n1], gpm[n1:, n1:] = gpm1, gpm2

    nbar1 = np.array([thermal_occupation(beta, w) for w in om1])
    resonant = np.abs(om1[:, None] - om2[None, :]) < frame.eps_res
    phase = np.exp(1j * om1[:, None] * (xi1[:, None] - xi2[None, :]))
    cross = (frame.gamma0 * np.outer(s1, s2)
             * np.sqrt(nbar1 * (nbar1 + 1.0))[:, None] * resonant * phase)
    return RateSet(gmp, gpm, cross, cross.conj(),
                   (tuple(range(n1)), tuple(range(n1, n1 + n2))))


def thermal_static_rates(beta: float, omegas: Sequence[float], positions: Sequence[float],
                         couplings: Sequence[float] | None = None,
                         gamma0: float = 0.1, eps_res: float = 1e-6) -> RateSet:
    """Rates for static atoms at given positions in a thermal field.

    Equivalent, by the thermal-purification argument, to co-accelerating atoms
    at beta = 2*pi/a; exposed separately so the equivalence is testable and so
    the condensate analogue can feed laboratory positions straight in.
    """
    if beta <= 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    frame = FrameConfig(a=2.0 * np.pi / beta, eps_res=eps_res, gamma0=gamma0)
    if couplings is None:
        couplings = [1.0] * len(omegas)
    atoms = [AtomSpec(omega=w, alpha=frame.a, wedge="I", g=c)
             for w, c in zip(omegas, couplings)]
    return same_wedge_rates(frame, atoms, xi=positions)


def kossakowski_matrix(rates: RateSet) -> np.ndarray:
    """Hermitian coefficient matrix in the jump basis (sigma_1^-, ..., sigma_N^-,
    sigma_1^+, ..., sigma_N^+).

    Normal blocks are the channel matrices transposed; the anomalous channels
    enter off-diagonally with a minus sign (they appear subtracted in the
    counter-accelerating master equation).
    """
    n = rates.n_atoms
    k = np.zeros((2 * n, 2 * n), dtype=complex)
    k[:n, :n] = rates.gamma_minus_plus.T
    k[n:, n:] = rates.gamma_plus_minus.T
    if rates.has_cross:
        idx_i, idx_k = rates.wedge_partition
        for a, gi in enumerate(idx_i):
            for b, gk in enumerate(idx_k):
                x = rates.cross_pp[a, b]
                # sigma_i^+ rho sigma_k^+ pairs (i,+) with (k,-); likewise swapped
                k[n + gi, gk] += -x
                k[gk, n + gi] += -np.conj(x)
                k[n + gk, gi] += -x
                k[gi, n + gk] += -np.conj(x)
    return k


def kossakowski_min_eig(rates: RateSet) -> float:
    """Minimum eigenvalue of the full coefficient matrix; >= 0 (to roundoff)
    certifies that the generator is completely positive."""
    return float(np.linalg.eigvalsh(kossakowski_matrix(rates)).min())
