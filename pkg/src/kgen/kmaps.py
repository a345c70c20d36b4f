"""Coordinate charts and the two K-theory connecting maps as matrix formulas.

The chart composes a radial rescaling of the open unit ball with the inverse
stereographic projection, giving the closed form

    x = (2 y sqrt(1 - ||y||^2), 2 ||y||^2 - 1)        for ||y|| < 1.

The index map sends a unitary boundary value with contraction lift B to the
Hermitian unitary

    V = [[2 B B* - 1,        2 B sqrt(1 - B*B)],
         [2 B* sqrt(1 - BB*), 1 - 2 B*B      ]],

and the exponential map sends a self-adjoint unitary boundary value with
self-adjoint contraction lift B to the invertible field
B sqrt(1 - B^2) + i (1 - 2 B^2) (or its opposite-phase variant; see
:func:`exp_map`).  The verification suites check that these formulas applied
to the generator fields reproduce the generator one dimension up, pointwise
and to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import clifford, generators
from ._linalg import block_2x2, dagger, func_of_hermitian, max_abs, operator_norm, sqrt_psd
from .errors import DomainError, LiftInvalidError, PoleError
from .fields import DISC, EvaluableField
from .sampling import ball_points, sphere_points

# Admissibility tolerance for contraction/self-adjointness of lifts, and the
# pass threshold of the pointwise identity suites.
LIFT_TOL = 1e-10
IDENTITY_TOL = 1e-10

# Chart-based comparisons stay inside ||y|| <= BALL_CUTOFF, away from the
# conditioning loss of sqrt(1 - ||y||^2) at the boundary.
BALL_CUTOFF = 0.999

# Invertibility threshold for the deformation scan.
HOMOTOPY_SV_MIN = 1e-3


@dataclass(frozen=True)
class ChartPoint:
    """One point in all three coordinate systems: open ball, Euclidean space,
    and the sphere one dimension up (minus its north pole)."""

    disc_y: np.ndarray
    euclid_z: np.ndarray
    sphere_x: np.ndarray


@dataclass(frozen=True)
class KGroupTable:
    """Complex K-groups of the d-sphere."""

    d: int
    k0: str
    k1: str
    reduced_k0: str


def chart(y) -> ChartPoint:
    """Map a point of the open unit ball to the punctured sphere.

    z = y / sqrt(1 - ||y||^2), then x is the inverse stereographic image of z;
    the composition is x = (2 y sqrt(1 - ||y||^2), 2 ||y||^2 - 1).
    """
    y = np.asarray(y, dtype=float)
    r2 = float(np.dot(y, y))
    if r2 >= 1.0:
        raise DomainError(f"chart requires ||y|| < 1, got ||y|| = {np.sqrt(r2)}")
    s = np.sqrt(1.0 - r2)
    z = y / s
    x = np.concatenate([2.0 * y * s, [2.0 * r2 - 1.0]])
    return ChartPoint(disc_y=y, euclid_z=z, sphere_x=x)


def chart_inverse(x) -> ChartPoint:
    """Invert :func:`chart`; defined away from the north pole (0, ..., 0, 1)."""
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"chart_inverse requires a unit vector, got ||x|| = {norm}")
    last = float(x[-1])
    if last >= 1.0 - 1e-15:
        raise PoleError("chart_inverse is undefined at the north pole")
    y = x[:-1] / np.sqrt(2.0 * (1.0 - last))
    z = x[:-1] / (1.0 - last)
    return ChartPoint(disc_y=y, euclid_z=z, sphere_x=x)


def _lift_samples(ambient_dim: int, count: int = 120):
    rng = np.random.default_rng(2024)
    interior = ball_points(ambient_dim, count, rng, max_norm=1.0)
    boundary = sphere_points(ambient_dim, count // 2, rng)
    return interior, boundary


def index_map(b_field) -> EvaluableField:
    """Image of a unitary boundary value under the index map.

    ``b_field`` must be a contraction on the closed ball (checked on a fixed
    sample set); for the output to represent a class relative to the boundary,
    its boundary values must in addition be unitary, which is the caller's
    responsibility.  The output V(y) is a Hermitian unitary of doubled size
    that degenerates to diag(1, -1) wherever B is unitary; the two off-diagonal
    blocks agree because B* sqrt(1 - BB*) = sqrt(1 - B*B) B*.
    """
    n = b_field.size
    eye = np.eye(n, dtype=complex)
    interior, boundary = _lift_samples(b_field.ambient_dim)
    worst = max(
        operator_norm(b_field.evaluate(y)) for y in np.vstack([interior, boundary])
    )
    if worst > 1.0 + LIFT_TOL:
        raise LiftInvalidError(f"lift is not a contraction: max norm {worst}")

    def evaluator(y):
        b = b_field.evaluate(y)
        bd = dagger(b)
        s_right = sqrt_psd(eye - bd @ b)  # sqrt(1 - B*B)
        s_left = sqrt_psd(eye - b @ bd)  # sqrt(1 - BB*)
        return block_2x2(
            2.0 * b @ bd - eye,
            2.0 * b @ s_right,
            2.0 * bd @ s_left,
            eye - 2.0 * bd @ b,
        )

    return EvaluableField(b_field.ambient_dim, 2 * n, evaluator, DISC)


def exp_map(b_field, convention: str = "forward") -> EvaluableField:
    """Image of a self-adjoint unitary boundary value under the exponential map.

    Two sign conventions of the image are in circulation; they are pointwise
    adjoints of each other, represent inverse classes, and both are exposed:

      * ``"forward"``:  B sqrt(1 - B^2) + i (2 B^2 - 1)   (default)
      * ``"adjoint"``:  B sqrt(1 - B^2) + i (1 - 2 B^2)

    Only the default reproduces the Dirac phase one dimension up on the nose
    (see :func:`verify_exp_identity`).  The image is invertible everywhere and
    unitary exactly where B^2 is 0 or 1; with b an eigenvalue of B(y), the
    eigenvalue moduli are sqrt(3 b^4 - 3 b^2 + 1) >= 1/2.
    """
    if convention not in ("forward", "adjoint"):
        raise ValueError(f"unknown convention {convention!r}")
    sign = 1.0 if convention == "adjoint" else -1.0
    interior, boundary = _lift_samples(b_field.ambient_dim)
    worst = 0.0
    for y in np.vstack([interior, boundary]):
        b = b_field.evaluate(y)
        worst = max(worst, max_abs(b - dagger(b)))
    if worst > LIFT_TOL:
        raise LiftInvalidError(f"lift is not self-adjoint: residual {worst}")
    worst = max(operator_norm(b_field.evaluate(y)) for y in interior)
    if worst > 1.0 + LIFT_TOL:
        raise LiftInvalidError(f"lift is not a contraction: max norm {worst}")

    def evaluator(y):
        b = b_field.evaluate(y)

        def f(vals):
            vals = np.clip(vals, -1.0, 1.0)
            return vals * np.sqrt(1.0 - vals**2) + 1j * sign * (1.0 - 2.0 * vals**2)

        return func_of_hermitian(b, f)

    return EvaluableField(b_field.ambient_dim, b_field.size, evaluator, DISC)


def homotopy_at(b_field, t: float, y) -> np.ndarray:
    """Deformation between the exponential-map unitary and its algebraic form.

    A_t = (-t cos(pi B) + (1 - t^2)(2 B^2 - 1))
          + i (t sin(pi B) + (1 - t^2) B sqrt(1 - B^2)),

    evaluated by functional calculus of the Hermitian contraction B(y).  At
    t = 1 this is the unitary -cos(pi B) + i sin(pi B); invertibility along the
    whole path is what :func:`homotopy_scan` samples via singular values.
    """
    b = b_field.evaluate(np.asarray(y, dtype=float))

    def f(vals):
        vals = np.clip(vals, -1.0, 1.0)
        real = -t * np.cos(np.pi * vals) + (1.0 - t * t) * (2.0 * vals**2 - 1.0)
        imag = t * np.sin(np.pi * vals) + (1.0 - t * t) * vals * np.sqrt(1.0 - vals**2)
        return real + 1j * imag

    return func_of_hermitian(b, f)


def homotopy_scan(
    d: int = 2,
    t_points: int = 11,
    samples: int = 500,
    seed: int = 0,
    rep: clifford.CliffordRep | None = None,
) -> dict:
    """Minimum singular value of the deformation over a (t, y) grid.

    Uses the Weyl contraction lift in d+1 ball variables.  PASS means the
    smallest singular value over the whole grid stays above 1e-3, i.e. the
    deformation never leaves the invertibles.
    """
    if d % 2 != 0:
        raise ValueError(f"the scanned lift requires even d, got {d}")
    if rep is None:
        rep = clifford.build_rep(d + 1, clifford.LEFT)
    lift = generators.weyl_field(d, rep, domain=DISC)
    rng = np.random.default_rng(seed)
    points = ball_points(d + 1, samples, rng)
    ts = np.linspace(0.0, 1.0, t_points)
    min_sv = np.inf
    for t in ts:
        for y in points:
            sv = np.linalg.svd(homotopy_at(lift, float(t), y), compute_uv=False)[-1]
            min_sv = min(min_sv, float(sv))
    passed = min_sv > HOMOTOPY_SV_MIN
    return {
        "suite": "homotopy",
        "d": int(d),
        "samples": int(samples),
        "t_points": int(t_points),
        "min_singular_value": float(min_sv),
        "threshold": HOMOTOPY_SV_MIN,
        "max_residual": float(max(0.0, HOMOTOPY_SV_MIN - min_sv)),
        "pass": bool(passed),
        "seed": int(seed),
    }


def verify_index_identity(
    d: int,
    rep: clifford.CliffordRep | None = None,
    samples: int = 1000,
    seed: int = 0,
) -> dict:
    """Pointwise check that the index map sends the odd generator to the even one.

    The Dirac phase in d+1 ball variables is fed through the index-map formula;
    pulling sphere samples back through the chart must reproduce the Weyl field
    of the doubled representation entrywise.  Samples in the excluded north-
    pole cap (||y|| > 0.999) are discarded.
    """
    if d % 2 != 1 or d > 5:
        raise ValueError(f"supported odd dimensions are 1, 3, 5; got {d}")
    if rep is None:
        rep = clifford.build_rep(d, clifford.LEFT)
    lift = generators.dirac_phase_field(d, rep, domain=DISC)
    v_field = index_map(lift)
    extended = clifford.extend(rep)
    weyl = generators.weyl_field(d + 1, extended)

    rng = np.random.default_rng(seed)
    kept = 0
    worst = 0.0
    while kept < samples:
        batch = sphere_points(d + 2, max(64, samples), rng)
        for x in batch:
            if kept >= samples:
                break
            point = None
            try:
                point = chart_inverse(x)
            except PoleError:
                continue
            if np.linalg.norm(point.disc_y) > BALL_CUTOFF:
                continue
            residual = max_abs(v_field.evaluate(point.disc_y) - weyl.evaluate(x))
            worst = max(worst, residual)
            kept += 1
    return {
        "suite": "index",
        "d": int(d),
        "samples": int(kept),
        "max_residual": float(worst),
        "pass": bool(worst < IDENTITY_TOL),
        "tolerance": IDENTITY_TOL,
        "seed": int(seed),
    }


def verify_exp_identity(
    d: int,
    rep: clifford.CliffordRep | None = None,
    samples: int = 1000,
    seed: int = 0,
) -> dict:
    """Pointwise check that the exponential map sends the even generator to the
    odd one.

    The Weyl contraction lift in d+1 ball variables goes through
    :func:`exp_map` (default convention); substituting
    x = (y sqrt(1 - ||y||^2), 2 ||y||^2 - 1) into the Dirac phase of the same
    representation must agree entrywise.
    """
    if d % 2 != 0 or d > 4:
        raise ValueError(f"supported even dimensions are 2, 4; got {d}")
    if rep is None:
        rep = clifford.build_rep(d + 1, clifford.LEFT)
    lift = generators.weyl_field(d, rep, domain=DISC)
    image = exp_map(lift, convention="forward")
    dirac = generators.dirac_phase_field(d + 1, rep)

    rng = np.random.default_rng(seed)
    points = ball_points(d + 1, samples, rng, max_norm=BALL_CUTOFF)
    worst = 0.0
    for y in points:
        r2 = float(np.dot(y, y))
        x = np.concatenate([y * np.sqrt(1.0 - r2), [2.0 * r2 - 1.0]])
        worst = max(worst, max_abs(image.evaluate(y) - dirac.evaluate(x)))
    return {
        "suite": "exp",
        "d": int(d),
        "samples": int(samples),
        "max_residual": float(worst),
        "pass": bool(worst < IDENTITY_TOL),
        "tolerance": IDENTITY_TOL,
        "seed": int(seed),
    }


def kgroup_table(d: int) -> KGroupTable:
    """K-groups of the d-sphere: K0 is Z+Z for even d (one summand trivial),
    K1 is Z for odd d, and the reduced K0 keeps only the nontrivial part."""
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"sphere dimension must be a positive integer, got {d!r}")
    if d % 2 == 0:
        return KGroupTable(d=d, k0="Z+Z", k1="0", reduced_k0="Z")
    return KGroupTable(d=d, k0="0", k1="Z", reduced_k0="0")
