"""Small dense-matrix helpers: Hermitian functional calculus and norms.

Everything operates on plain complex ndarrays.  Matrix functions go through
eigendecomposition, which is adequate for the desk-scale sizes used here
(N <= 64) and keeps scipy out of the dependency set.
"""

from __future__ import annotations

import numpy as np

# Eigenvalues of nominally positive-semidefinite matrices may dip slightly
# below zero from roundoff; values above -CLAMP_TOL are clamped to zero.
CLAMP_TOL = 1e-14


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude, 0.0 for empty input."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_residual(a: np.ndarray) -> float:
    return max_abs(a - dagger(a))


def func_of_hermitian(a: np.ndarray, f) -> np.ndarray:
    """Apply the scalar function ``f`` to a Hermitian matrix by eigendecomposition."""
    vals, vecs = np.linalg.eigh(a)
    return (vecs * f(vals)) @ dagger(vecs)


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Tiny negative eigenvalues from roundoff are clamped to zero before the
    square root is taken.
    """
    vals, vecs = np.linalg.eigh(a)
    vals = np.where(vals < CLAMP_TOL, np.maximum(vals, 0.0), vals)
    return (vecs * np.sqrt(vals)) @ dagger(vecs)


def inv_sqrt_spd(a: np.ndarray) -> np.ndarray:
    """Inverse Hermitian square root; intended for matrices >= identity."""
    vals, vecs = np.linalg.eigh(a)
    return (vecs / np.sqrt(vals)) @ dagger(vecs)


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(a, 2))


def min_singular_value(a: np.ndarray) -> float:
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def block_2x2(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.block([[a, b], [c, d]])
