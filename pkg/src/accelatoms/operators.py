"""Multi-qubit ladder operators and product states.

Basis convention (fixed for reproducibility): computational basis index b of
the 2^n space encodes atom j in bit j, with atom 0 the least significant bit;
bit value 1 means excited. So for one atom the basis order is (ground,
excited) and number operators are diag(0, 1).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError

SM2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|
SP2 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |e><g|
N2 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def _embed(op2: np.ndarray, j: int, n: int) -> np.ndarray:
    if not 0 <= j < n:
        raise DomainError(f"atom index {j} out of range for n={n}")
    out = np.kron(np.eye(2 ** (n - 1 - j), dtype=complex), op2)
    out = np.kron(out, np.eye(2**j, dtype=complex))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=512)
def sigma_minus(j: int, n: int) -> np.ndarray:
    return _embed(SM2, j, n)


@lru_cache(maxsize=512)
def sigma_plus(j: int, n: int) -> np.ndarray:
    return _embed(SP2, j, n)


@lru_cache(maxsize=512)
def number_op(j: int, n: int) -> np.ndarray:
    return _embed(N2, j, n)


def product_state(pattern: str) -> np.ndarray:
    """Density matrix of a product state given per-atom letters, e.g. "egg".

    pattern[j] is atom j ('e' excited, 'g' ground).
    """
    if not pattern or any(c not in "eg" for c in pattern):
        raise DomainError(f"pattern must be a nonempty string over 'e'/'g', got {pattern!r}")
    n = len(pattern)
    b = sum(1 << j for j, c in enumerate(pattern) if c == "e")
    rho = np.zeros((2**n, 2**n), dtype=complex)
    rho[b, b] = 1.0
    return rho


def all_excited(n: int) -> np.ndarray:
    return product_state("e" * n)


def all_ground(n: int) -> np.ndarray:
    return product_state("g" * n)
