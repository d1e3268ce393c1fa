"""System Hamiltonian, Lindblad generator, superoperator and spectral analysis.

The master equation implemented here, in the Schroedinger picture for a
single-wedge (co-accelerating) ensemble, is

    drho/dt = -i[H, rho]
              + sum_ij gamma_plus_minus[i,j] [sigma_j^+ rho, sigma_i^-]
              + sum_ij gamma_minus_plus[i,j] [sigma_j^- rho, sigma_i^+] + h.c.

For counter-accelerating ensembles the Hamiltonian commutator is omitted: the
relative sign of the wedge-II atomic Hamiltonian makes a Schroedinger-picture
form ambiguous, so that evolution is generated in the interaction picture
(populations and coherence magnitudes are picture-invariant). Four anomalous
inter-wedge terms then enter with minus signs, pairing raising with raising
and lowering with lowering operators across the wedges:

    - sum_{i,kappa} cross_pp[i,kappa] ([sigma_i^+ rho, sigma_kappa^+]
                                       + [sigma_kappa^+ rho, sigma_i^+])
    - sum_{i,kappa} cross_mm[i,kappa] ([sigma_i^- rho, sigma_kappa^-]
                                       + [sigma_kappa^- rho, sigma_i^-]) + h.c.

cross_pairing="literal" switches to an alternative normal-labelled inter-wedge
pairing (sigma^+ with sigma^-), kept only so the two structures can be
compared; the anomalous pairing is the primary one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, DomainError
from .kinematics import AtomSpec, FrameConfig, kinematic_state
from .operators import sigma_minus, sigma_plus
from .rates import RateSet

N_MAX_DENSE_DEFAULT = 4
N_MAX_DENSE_HARD_CAP = 6
_SPARSE_DIM = 32  # use sparse operator algebra from 5 atoms up
_RANK_TOL = 1e-13


def hamiltonian_from_omegas(omegas: Sequence[float]) -> np.ndarray:
    """Diagonal H = sum_j Omega_j sigma_j^+ sigma_j^- in the computational basis."""
    omegas = np.asarray(omegas, dtype=float)
    n = len(omegas)
    b = np.arange(2**n)
    diag = np.zeros(2**n)
    for j in range(n):
        diag += omegas[j] * ((b >> j) & 1)
    return np.diag(diag).astype(complex)


def build_hamiltonian(atoms: Sequence[AtomSpec], frame: FrameConfig) -> np.ndarray:
    """System Hamiltonian of a co-accelerating (single wedge) ensemble."""
    if len({atom.wedge for atom in atoms}) > 1:
        raise DomainError("Schroedinger-picture Hamiltonian is only defined for a "
                          "single-wedge configuration")
    return hamiltonian_from_omegas([kinematic_state(frame, a).Omega for a in atoms])


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                         trace_tol: float = 1e-10, eig_floor: float = -1e-9) -> None:
    """Raise DomainError unless rho is Hermitian, unit trace and positive
    within the stated tolerances."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise DomainError(f"density matrix not Hermitian (max deviation {herm:.3e})")
    tr_err = abs(rho.trace() - 1.0)
    if tr_err > trace_tol:
        raise DomainError(f"density matrix trace off by {tr_err:.3e}")
    min_eig = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
    if min_eig < eig_floor:
        raise DomainError(f"density matrix has eigenvalue {min_eig:.3e} below {eig_floor}")


def thermal_state(H: np.ndarray, beta: float) -> np.ndarray:
    """Gibbs state exp(-beta H)/Z (computed in the eigenbasis for stability)."""
    evals, evecs = np.linalg.eigh(np.asarray(H))
    w = np.exp(-beta * (evals - evals.min()))
    w /= w.sum()
    return (evecs * w) @ evecs.conj().T


def _cross_terms(rates: RateSet, n: int, cross_pairing: str):
    """Inter-wedge commutator terms as (coef, B, C) triples for coef*[B rho, C]."""
    terms = []
    idx_i, idx_k = rates.wedge_partition
    for a, gi in enumerate(idx_i):
        for b, gk in enumerate(idx_k):
            pp = rates.cross_pp[a, b]
            mm = rates.cross_mm[a, b]
            if pp == 0 and mm == 0:
                continue
            spi, smi = sigma_plus(gi, n), sigma_minus(gi, n)
            spk, smk = sigma_plus(gk, n), sigma_minus(gk, n)
            if cross_pairing == "anomalous":
                terms.append((-pp, spi, spk))
                terms.append((-pp, spk, spi))
                terms.append((-mm, smi, smk))
                terms.append((-mm, smk, smi))
            else:
                terms.append((-pp, spi, smk))
                terms.append((-pp, smi, spk))
                terms.append((-pp, spk, smi))
                terms.append((-pp, smk, spi))
    return terms


def _generator_terms(rates: RateSet, cross_pairing: str = "anomalous"):
    """All dissipative terms as (coef, B, C) with the convention coef*[B rho, C];
    the Hermitian conjugate of the whole sum is added by the caller."""
    if cross_pairing not in ("anomalous", "literal"):
        raise DomainError(f"unknown cross_pairing {cross_pairing!r}")
    n = rates.n_atoms
    terms = []
    for i in range(n):
        for j in range(n):
            gpm = rates.gamma_plus_minus[i, j]
            gmp = rates.gamma_minus_plus[i, j]
            if gpm != 0:
                terms.append((gpm, sigma_plus(j, n), sigma_minus(i, n)))
            if gmp != 0:
                terms.append((gmp, sigma_minus(j, n), sigma_plus(i, n)))
    terms.extend(_cross_terms(rates, n, cross_pairing))
    return terms


def _rank_factors(channel: np.ndarray, lowering: bool, n: int):
    """Decompose sum_ij M_ij sigma_j^x rho sigma_i^x' into rank-one collective
    jump pairs; falls back to one pair per matrix row if M is not Hermitian."""
    build = sigma_minus if lowering else sigma_plus
    adj = sigma_plus if lowering else sigma_minus
    w = channel.T
    pairs = []
    if np.abs(channel - channel.conj().T).max() <= 1e-12 * max(1.0, np.abs(channel).max()):
        evals, evecs = np.linalg.eigh(w)
        keep = np.abs(evals) > _RANK_TOL * max(1.0, np.abs(evals).max())
        for lam, vec in zip(evals[keep], evecs[:, keep].T):
            left = sum(vec[j] * build(j, n) for j in range(n))
            pairs.append((lam * left, left.conj().T))
    else:
        for i in range(n):
            row = channel[i]
            if not np.any(row):
                continue
            left = sum(row[j] * build(j, n) for j in range(n))
            pairs.append((left, adj(i, n)))
    return pairs


class LindbladGenerator:
    """Compiled generator: rhs(rho) by direct operator action on the 2^N state.

    Precomputes the no-jump matrix G and a short list of (left, right) jump
    factor pairs so one evaluation costs a handful of (sparse) matrix products;
    rhs(rho) = Y + Y^dagger with Y = G rho + sum left rho right.
    """

    def __init__(self, H: np.ndarray | None, rates: RateSet,
                 cross_pairing: str = "anomalous"):
        if cross_pairing not in ("anomalous", "literal"):
            raise DomainError(f"unknown cross_pairing {cross_pairing!r}")
        n = rates.n_atoms
        dim = 2**n
        self.n_atoms = n
        self.dim = dim
        self.rates = rates
        self.cross_pairing = cross_pairing
        self.H = None if H is None else np.asarray(H, dtype=complex)
        if self.H is not None and self.H.shape != (dim, dim):
            raise DomainError(f"H has shape {self.H.shape}, expected {(dim, dim)}")

        g = np.zeros((dim, dim), dtype=complex)
        if self.H is not None:
            g += -1j * self.H
        gmp, gpm = rates.gamma_minus_plus, rates.gamma_plus_minus
        for i in range(n):
            for j in range(n):
                if gmp[i, j] != 0:
                    g -= gmp[i, j] * (sigma_plus(i, n) @ sigma_minus(j, n))
                if gpm[i, j] != 0:
                    g -= gpm[i, j] * (sigma_minus(i, n) @ sigma_plus(j, n))

        jumps = list(_rank_factors(gmp, lowering=True, n=n))
        jumps += _rank_factors(gpm, lowering=False, n=n)

        for coef, b, c in _cross_terms(rates, n, cross_pairing):
            jumps.append((coef * b, c))
            g -= coef * (c @ b)

        if dim >= _SPARSE_DIM:
            self._g = sp.csr_array(g)
            self._jumps = [(sp.csr_array(l), sp.csr_array(r), sp.csr_array(r.conj().T))
                           for l, r in jumps]
        else:
            self._g = g
            self._jumps = [(l, r, np.ascontiguousarray(r.conj().T)) for l, r in jumps]

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        y = self._g @ rho
        for left, right, _ in self._jumps:
            y += (left @ rho) @ right
        return y + y.conj().T

    def rhs_hermitian(self, rho: np.ndarray) -> np.ndarray:
        """rhs() assuming rho is Hermitian; replaces the costly dense-times-
        sparse right multiplications via L rho R = L (R^dagger rho)^dagger."""
        y = self._g @ rho
        for left, _, right_dag in self._jumps:
            y += left @ (right_dag @ rho).conj().T
        return y + y.conj().T


def lindblad_rhs(rho: np.ndarray, H: np.ndarray | None, rates: RateSet,
                 cross_pairing: str = "anomalous") -> np.ndarray:
    """drho/dt for one state; convenience wrapper over LindbladGenerator."""
    rho = np.asarray(rho, dtype=complex)
    gen = LindbladGenerator(H, rates, cross_pairing)
    if rho.shape != (gen.dim, gen.dim):
        raise DomainError(f"state has shape {rho.shape}, expected {(gen.dim, gen.dim)}")
    return gen.rhs(rho)


def build_superoperator(H: np.ndarray | None, rates: RateSet,
                        n_max_dense: int = N_MAX_DENSE_DEFAULT,
                        cross_pairing: str = "anomalous") -> np.ndarray:
    """Dense 4^N x 4^N generator acting on column-stacked density matrices.

    Assembled independently of LindbladGenerator via Kronecker identities
    (vec(A rho B) = (B^T kron A) vec(rho)); kept for spectral analysis only.
    """
    if n_max_dense > N_MAX_DENSE_HARD_CAP:
        raise CapacityError(f"n_max_dense={n_max_dense} exceeds hard cap "
                            f"{N_MAX_DENSE_HARD_CAP}")
    n = rates.n_atoms
    if n > n_max_dense:
        raise CapacityError(f"dense superoperator for N={n} atoms exceeds the "
                            f"configured cap N_max_dense={n_max_dense}")
    dim = 2**n
    eye = np.eye(dim, dtype=complex)
    L = np.zeros((dim * dim, dim * dim), dtype=complex)
    if H is not None:
        H = np.asarray(H, dtype=complex)
        L += -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for coef, b, c in _generator_terms(rates, cross_pairing):
        L += coef * (np.kron(c.T, b) - np.kron(eye, c @ b))
        # Hermitian conjugate of coef*[b rho, c]
        L += np.conj(coef) * (np.kron(b.conj(), c.conj().T)
                              - np.kron(c.conj() @ b.conj(), eye))
    return L


@dataclass(frozen=True)
class SteadyStateAnalysis:
    eigenvalues: np.ndarray
    zero_multiplicity: int
    steady_basis: np.ndarray  # columns: orthonormal null-space vectors (vec form)


def steady_state_analysis(L: np.ndarray, zero_tol: float = 1e-10) -> SteadyStateAnalysis:
    """Full spectrum of the generator plus the (near-)null subspace.

    zero_tol should scale with the rate magnitudes (1e-9 * gamma0 is the
    contract used by the acceptance suite).
    """
    evals, evecs = np.linalg.eig(np.asarray(L))
    null_mask = np.abs(evals) < zero_tol
    multiplicity = int(null_mask.sum())
    if multiplicity:
        basis = np.linalg.qr(evecs[:, null_mask])[0]
    else:
        basis = np.zeros((L.shape[0], 0), dtype=complex)
    return SteadyStateAnalysis(evals, multiplicity, basis)


def thermal_residual(H: np.ndarray, rates: RateSet, beta: float) -> float:
    """Frobenius norm of the generator applied to the Gibbs state of H."""
    if rates.has_cross:
        raise DomainError("thermal_residual applies to co-accelerating "
                          "(single-wedge) configurations")
    rho_th = thermal_state(H, beta)
    return float(np.linalg.norm(lindblad_rhs(rho_th, H, rates)))
