"""Generator fields built from Clifford representations.

The two families are the self-adjoint Weyl field  sum_j x_j Gamma_j  and the
Dirac phase  sum_j x_j Gamma_j + i x_(d+1).  Restricted to the unit sphere the
first is a Hermitian unitary and the second a unitary; on Euclidean space they
are the unbounded representatives whose bounded transform and resolvent decay
are computed at the end of this module.
"""

from __future__ import annotations

import numpy as np

from . import clifford
from ._linalg import (
    dagger,
    hermiticity_residual,
    inv_sqrt_spd,
    max_abs,
    operator_norm,
)
from .errors import DimensionMismatchError, NotChiralError
from .fields import EUCLIDEAN, SPHERE, EvaluableField, MatrixPolyField, unit_index

# Coefficient-level anti-commutation threshold for chiral block extraction.
CHIRAL_TOL = 1e-12


def weyl_field(d: int, rep: clifford.CliffordRep, domain: str = SPHERE) -> MatrixPolyField:
    """Weyl Hamiltonian field sum_{j=1}^{d+1} x_j Gamma_j.

    With the sphere tag this is the even-d generator (a self-adjoint unitary
    on S^d, since its square is ||x||^2); with the Euclidean tag the same
    formula is the unbounded representative and d may have either parity.
    """
    if rep.d != d + 1:
        raise DimensionMismatchError(f"need a representation with {d + 1} generators, got {rep.d}")
    if domain == SPHERE and d % 2 != 0:
        raise DimensionMismatchError(f"sphere-restricted Weyl field requires even d, got {d}")
    m = d + 1
    terms = {unit_index(j, m): rep.gammas[j] for j in range(m)}
    return MatrixPolyField(m, rep.N, terms, domain, selfadjoint=True)


def dirac_phase_field(d: int, rep: clifford.CliffordRep, domain: str = SPHERE) -> MatrixPolyField:
    """Dirac phase field sum_{j=1}^{d} x_j Gamma_j + i x_(d+1).

    Unitary on the sphere for odd d; the Euclidean variant is the non-self-
    adjoint unbounded representative.
    """
    if rep.d != d:
        raise DimensionMismatchError(f"need a representation with {d} generators, got {rep.d}")
    if d % 2 != 1:
        raise DimensionMismatchError(f"Dirac phase requires odd d, got {d}")
    m = d + 1
    terms = {unit_index(j, m): rep.gammas[j] for j in range(d)}
    terms[unit_index(d, m)] = 1j * np.eye(rep.N, dtype=complex)
    return MatrixPolyField(m, rep.N, terms, domain, selfadjoint=False)


def dirac_hamiltonian_field(d: int, rep: clifford.CliffordRep):
    """Chiral self-adjoint form of the odd generator.

    Uses d+1 generators (an even count), so the product grading exists and
    anti-commutes with the field; in the grading eigenbasis the field is block
    off-diagonal and :func:`chiral_block` extracts the unitary block.
    Returns ``(field, grading)``.
    """
    if d % 2 != 1:
        raise DimensionMismatchError(f"chiral Dirac Hamiltonian requires odd d, got {d}")
    if rep.d != d + 1:
        raise DimensionMismatchError(f"need a representation with {d + 1} generators, got {rep.d}")
    grading = clifford.grading_of(rep)
    m = d + 1
    terms = {unit_index(j, m): rep.gammas[j] for j in range(m)}
    field = MatrixPolyField(m, rep.N, terms, SPHERE, selfadjoint=True)
    return field, grading


def chiral_lower_block(field: MatrixPolyField, j_matrix) -> MatrixPolyField:
    """Lower-left block of a field in the basis where ``j_matrix`` is diag(1, -1).

    Requires every coefficient of the field to anti-commute with ``j_matrix``
    (checked exactly at coefficient level).  The +1 and -1 eigenspaces must
    have equal dimension for the block to be square.
    """
    j = np.asarray(j_matrix, dtype=complex)
    if j.shape != (field.size, field.size):
        raise DimensionMismatchError("chiral matrix size does not match the field")
    bad = [
        alpha
        for alpha, mat in field.terms.items()
        if max_abs(j @ mat + mat @ j) > CHIRAL_TOL
    ]
    if bad:
        raise NotChiralError(
            f"coefficients at multi-indices {sorted(bad)} do not anti-commute with the grading"
        )

    n = field.size
    eye = np.eye(n, dtype=complex)
    target = np.zeros((n, n), dtype=complex)
    half = n // 2
    target[:half, :half] = np.eye(half)
    target[half:, half:] = -np.eye(half)
    if n % 2 == 0 and max_abs(j - target) < 1e-14:
        w = eye  # already in the normal form; keep blocks on the nose
    else:
        vals, vecs = np.linalg.eigh(j)
        plus = vecs[:, vals > 0]
        minus = vecs[:, vals < 0]
        if plus.shape[1] != minus.shape[1]:
            raise NotChiralError(
                f"chiral eigenspaces have sizes {plus.shape[1]} and {minus.shape[1]}; "
                "off-diagonal block is not square"
            )
        w = np.hstack([plus, minus])
        half = plus.shape[1]

    new_terms = {}
    for alpha, mat in field.terms.items():
        rotated = dagger(w) @ mat @ w
        new_terms[alpha] = rotated[half:, :half]
    return MatrixPolyField(field.ambient_dim, half, new_terms, field.domain, selfadjoint=False)


def chiral_block(field: MatrixPolyField, grading: clifford.Grading) -> MatrixPolyField:
    """Off-diagonal block of a chiral field with respect to a grading."""
    return chiral_lower_block(field, grading.matrix)


def bounded_transform(field: MatrixPolyField) -> EvaluableField:
    """Pointwise bounded transform  T -> T (1 + T*T)^(-1/2).

    The result is a strict contraction everywhere and commutes with T when T
    is self-adjoint.  1 + T*T >= 1, so the inverse square root is safe.
    """

    def evaluator(x):
        t = field.evaluate(x)
        return t @ inv_sqrt_spd(np.eye(field.size, dtype=complex) + dagger(t) @ t)

    return EvaluableField(field.ambient_dim, field.size, evaluator, field.domain)


def compact_resolvent_profile(field: MatrixPolyField, radii, directions: int = 64, seed: int = 7):
    """Decay profile r -> sup over directions of ||(1 + T*T)^(-1)|| at ||x|| = r.

    For the generator fields T*T = ||x||^2 so the profile equals 1/(1 + r^2)
    exactly; a profile that fails to decay flags a field without compact
    resolvent.  Directions are a fixed seeded sample plus the coordinate axes.
    """
    from .sampling import sphere_points

    rng = np.random.default_rng(seed)
    m = field.ambient_dim
    dirs = [sphere_points(m, directions, rng)]
    axes = np.eye(m)
    dirs.append(axes)
    dirs.append(-axes)
    dirs = np.vstack(dirs)

    profile = []
    for r in radii:
        if r < 0:
            raise ValueError(f"radii must be nonnegative, got {r}")
        worst = 0.0
        for u in dirs:
            t = field.evaluate(r * u)
            lam_min = float(np.linalg.eigvalsh(dagger(t) @ t)[0])
            worst = max(worst, 1.0 / (1.0 + max(lam_min, 0.0)))
        profile.append((float(r), worst))
    return profile


def verify_fredholm(samples: int = 50, seed: int = 0) -> dict:
    """Resolvent-decay and bounded-transform identities for the two unbounded
    generator fields (the even Weyl field in three variables and the scalar
    Dirac representative in two).

    Checks ||(1 + T*T)^(-1)|| = 1/(1 + r^2) at r in {0, 1, 7} and
    ||1 - F*F|| = 1/(1 + ||x||^2) for the bounded transform F on random
    probes.  PASS requires agreement to 1e-12.
    """
    rng = np.random.default_rng(seed)
    radii = (0.0, 1.0, 7.0)

    weyl = weyl_field(2, clifford.build_rep(3, clifford.LEFT), domain=EUCLIDEAN)
    dirac = dirac_phase_field(1, clifford.build_rep(1, clifford.LEFT), domain=EUCLIDEAN)

    worst = 0.0
    for fld in (weyl, dirac):
        for r, value in compact_resolvent_profile(fld, radii):
            worst = max(worst, abs(value - 1.0 / (1.0 + r * r)))
        transform = bounded_transform(fld)
        probes = rng.standard_normal((samples, fld.ambient_dim)) * 3.0
        for x in probes:
            f = transform.evaluate(x)
            # The defect identity being positive already forces ||F|| < 1.
            defect = operator_norm(np.eye(fld.size) - dagger(f) @ f)
            expected = 1.0 / (1.0 + float(np.dot(x, x)))
            worst = max(worst, abs(defect - expected))
            t = fld.evaluate(x)
            if fld.selfadjoint:
                worst = max(worst, max_abs(f @ t - t @ f))

    tol = 1e-12
    return {
        "suite": "fredholm",
        "d": None,
        "samples": int(samples),
        "max_residual": float(worst),
        "pass": bool(worst < tol),
        "tolerance": tol,
        "seed": int(seed),
    }


def selfadjointness_residual(field: MatrixPolyField, points) -> float:
    """Max Hermiticity defect of field values over the given points."""
    vals = field.evaluate_batch(points)
    return max(hermiticity_residual(v) for v in vals)
