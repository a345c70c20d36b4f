"""Integer topological charges of matrix fields on S^1, S^2 and S^3.

Winding numbers of unitary (more generally invertible) fields on S^1 and S^3
use the odd Chern character,

    w_1 = (1 / 2 pi i)   int tr(U^-1 dU),
    w_3 = -(1 / 24 pi^2) int tr((U^-1 dU)^3),

and the charge of a gapped self-adjoint field on S^2 is the Chern number of
its spectral projection below the Fermi level,

    c = (1 / 2 pi i) int tr(P [dP, dP]).

All derivatives are exact: the fields are matrix polynomials, so ambient
partials are index shifts and the pullback to sphere coordinates is a chain
rule through the parametrization stored on the grid.  The projection
derivative uses first-order eigenvector perturbation, which is exact for
gapped Hamiltonians and needs no gauge fixing.

The normalizations above are fixed by requiring integrality, additivity under
direct sums and charge +1 for the scalar winding x1 + i x2.  Which sign the
even generator field produces is a convention that depends on the chosen
Clifford matrices; it is computed once and exposed as ``CHERN_SIGN_WEYL``
rather than hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatchError,
    GapClosedError,
    UnsupportedDimensionError,
)
from .fields import MatrixPolyField

# Invertibility/gap floor at quadrature nodes, integrality threshold for a
# PASS, and the default resolutions per sphere dimension.
GAP_MIN = 1e-8
PASS_RESIDUAL = 0.01
DEFAULT_RESOLUTION = {1: 256, 2: 64, 3: 24}


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature grid on S^dim.

    ``weights`` are surface weights (summing to the sphere area), ``jacobians``
    the surface density relative to the parameter volume, and ``dx_dparam`` the
    tangent vectors d(node)/d(parameter) used to pull ambient derivatives back
    to the parametrization.
    """

    dim: int
    nodes: np.ndarray  # (M, dim + 1)
    weights: np.ndarray  # (M,)
    params: np.ndarray  # (M, dim)
    jacobians: np.ndarray  # (M,)
    dx_dparam: np.ndarray  # (M, dim, dim + 1)

    @property
    def coordinate_weights(self) -> np.ndarray:
        """Weights for integrals over the parameter domain (d theta d phi ...)."""
        return self.weights / self.jacobians


@dataclass(frozen=True)
class ChargeResult:
    """Raw invariant, rounded charge and convergence data."""

    raw: float
    charge: int
    residual: float
    resolution: int
    convergence_pair: tuple
    converged: bool

    def to_payload(self) -> dict:
        return {
            "raw": float(self.raw),
            "charge": int(self.charge),
            "residual": float(self.residual),
            "resolution": int(self.resolution),
            "converged": bool(self.converged),
        }


def sphere_grid(dim: int, n: int) -> SphereGrid:
    """Build the quadrature grid at resolution ``n``.

    S^1: n equispaced angles.  S^2: n Gauss-Legendre nodes in cos(theta) by 2n
    equispaced azimuths (constants integrate exactly).  S^3: Gauss-Legendre in
    the first polar angle psi (weight sin^2 psi), Gauss-Legendre in cos(theta),
    and 2n equispaced azimuths.
    """
    if dim not in (1, 2, 3):
        raise UnsupportedDimensionError(f"supported sphere dimensions are 1, 2, 3; got {dim}")
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"resolution must be an integer >= 4, got {n!r}")

    if dim == 1:
        theta = 2.0 * np.pi * np.arange(n) / n
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        weights = np.full(n, 2.0 * np.pi / n)
        params = theta[:, None]
        jac = np.ones(n)
        dx = np.stack([-np.sin(theta), np.cos(theta)], axis=1)[:, None, :]
        return SphereGrid(1, nodes, weights, params, jac, dx)

    if dim == 2:
        u, wu = np.polynomial.legendre.leggauss(n)
        theta = np.arccos(u)
        phi = 2.0 * np.pi * np.arange(2 * n) / (2 * n)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        wth = np.broadcast_to(wu[:, None], th.shape)
        st, ct = np.sin(th), np.cos(th)
        sp, cp = np.sin(ph), np.cos(ph)
        nodes = np.stack([st * cp, st * sp, ct], axis=-1).reshape(-1, 3)
        weights = (wth * (np.pi / n)).reshape(-1)
        params = np.stack([th, ph], axis=-1).reshape(-1, 2)
        jac = st.reshape(-1)
        d_theta = np.stack([ct * cp, ct * sp, -st], axis=-1)
        d_phi = np.stack([-st * sp, st * cp, np.zeros_like(st)], axis=-1)
        dx = np.stack([d_theta, d_phi], axis=-2).reshape(-1, 2, 3)
        return SphereGrid(2, nodes, weights, params, jac, dx)

    # dim == 3, angles (psi, theta, phi) with
    # x = (sin psi sin theta cos phi, sin psi sin theta sin phi,
    #      sin psi cos theta, cos psi)
    xg, wg = np.polynomial.legendre.leggauss(n)
    psi = 0.5 * np.pi * (xg + 1.0)
    wpsi = 0.5 * np.pi * wg * np.sin(psi) ** 2
    u, wu = np.polynomial.legendre.leggauss(n)
    theta = np.arccos(u)
    phi = 2.0 * np.pi * np.arange(2 * n) / (2 * n)
    ps, th, ph = np.meshgrid(psi, theta, phi, indexing="ij")
    w3 = (
        wpsi[:, None, None] * wu[None, :, None] * np.full((1, 1, 2 * n), np.pi / n)
    )
    sps, cps = np.sin(ps), np.cos(ps)
    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    nodes = np.stack([sps * st * cp, sps * st * sp, sps * ct, cps], axis=-1).reshape(-1, 4)
    weights = w3.reshape(-1)
    params = np.stack([ps, th, ph], axis=-1).reshape(-1, 3)
    jac = (sps**2 * st).reshape(-1)
    d_psi = np.stack([cps * st * cp, cps * st * sp, cps * ct, -sps], axis=-1)
    d_theta = np.stack([sps * ct * cp, sps * ct * sp, -sps * st, np.zeros_like(st)], axis=-1)
    d_phi = np.stack([-sps * st * sp, sps * st * cp, np.zeros_like(st), np.zeros_like(st)], axis=-1)
    dx = np.stack([d_psi, d_theta, d_phi], axis=-2).reshape(-1, 3, 4)
    return SphereGrid(3, nodes, weights, params, jac, dx)


def _tangent_derivatives(field: MatrixPolyField, grid: SphereGrid) -> np.ndarray:
    """Field derivatives along the grid parametrization, shape (M, dim, N, N)."""
    ambient = field.ambient_dim
    partials = np.stack(
        [field.derivative(i).evaluate_batch(grid.nodes) for i in range(ambient)], axis=1
    )  # (M, ambient, N, N)
    return np.einsum("mai,mijk->majk", grid.dx_dparam, partials, optimize=True)


def _check_field(field: MatrixPolyField, dim: int):
    if not isinstance(field, MatrixPolyField):
        raise TypeError("charge computations need exact derivatives; pass a MatrixPolyField")
    if field.ambient_dim != dim + 1:
        raise DimensionMismatchError(
            f"a field on S^{dim} needs ambient dimension {dim + 1}, got {field.ambient_dim}"
        )


def _winding_raw(field: MatrixPolyField, grid: SphereGrid) -> float:
    u = field.evaluate_batch(grid.nodes)
    sv_min = float(np.linalg.svd(u, compute_uv=False)[..., -1].min())
    if sv_min <= GAP_MIN:
        raise GapClosedError(
            f"field is (nearly) singular on the grid: min singular value {sv_min}"
        )
    uinv = np.linalg.inv(u)
    d = _tangent_derivatives(field, grid)
    w = grid.coordinate_weights

    if grid.dim == 1:
        log_deriv = np.einsum("mij,mji->m", uinv, d[:, 0], optimize=True)
        total = np.sum(w * log_deriv)
        return float(np.real(total / (2.0j * np.pi)))

    # dim == 3: antisymmetrized triple product of the Maurer-Cartan pullbacks.
    l1 = uinv @ d[:, 0]
    l2 = uinv @ d[:, 1]
    l3 = uinv @ d[:, 2]
    t123 = np.einsum("mij,mjk,mki->m", l1, l2, l3, optimize=True)
    t132 = np.einsum("mij,mjk,mki->m", l1, l3, l2, optimize=True)
    total = np.sum(w * 3.0 * (t123 - t132))
    return float(np.real(-total / (24.0 * np.pi**2)))


def _chern_raw(field: MatrixPolyField, fermi: float, grid: SphereGrid) -> float:
    h = field.evaluate_batch(grid.nodes)
    vals, vecs = np.linalg.eigh(h)
    gap = float(np.min(np.abs(vals - fermi)))
    if gap <= GAP_MIN:
        raise GapClosedError(f"spectral gap closes on the grid: min |eig - fermi| = {gap}")
    occ = vals < fermi

    d = _tangent_derivatives(field, grid)
    vecs_d = vecs.conj().transpose(0, 2, 1)
    denom = vals[:, :, None] - vals[:, None, :]
    pair = occ[:, :, None] & ~occ[:, None, :]
    safe = np.where(pair, denom, 1.0)

    dp = []
    for a in (0, 1):
        m_eig = vecs_d @ d[:, a] @ vecs
        k = np.where(pair, m_eig / safe, 0.0)
        k = k + k.conj().transpose(0, 2, 1)
        dp.append(vecs @ k @ vecs_d)
    p = np.einsum("mik,mk,mjk->mij", vecs, occ.astype(float), vecs.conj(), optimize=True)

    comm = dp[0] @ dp[1] - dp[1] @ dp[0]
    integrand = np.einsum("mij,mji->m", p, comm, optimize=True)
    total = np.sum(grid.coordinate_weights * integrand)
    return float(np.real(total / (2.0j * np.pi)))


def _assemble(raw_fn, resolution: int) -> ChargeResult:
    raw_n = raw_fn(resolution)
    raw_2n = raw_fn(2 * resolution)
    charge = int(np.rint(raw_n))
    residual = abs(raw_n - charge)
    converged = abs(raw_2n - charge) <= residual + 1e-9 and residual < PASS_RESIDUAL
    return ChargeResult(
        raw=float(raw_n),
        charge=charge,
        residual=float(residual),
        resolution=int(resolution),
        convergence_pair=(float(raw_n), float(raw_2n)),
        converged=bool(converged),
    )


def winding_1(field: MatrixPolyField, resolution: int | None = None) -> ChargeResult:
    """Winding number of an invertible field on the circle."""
    _check_field(field, 1)
    resolution = resolution or DEFAULT_RESOLUTION[1]
    return _assemble(lambda n: _winding_raw(field, sphere_grid(1, n)), resolution)


def chern_2(
    field: MatrixPolyField, fermi: float = 0.0, resolution: int | None = None
) -> ChargeResult:
    """Chern number of the band below ``fermi`` for a gapped field on S^2."""
    _check_field(field, 2)
    if field.coefficient_hermiticity() > 1e-12:
        raise ValueError("Chern number needs a self-adjoint field (Hermitian coefficients)")
    resolution = resolution or DEFAULT_RESOLUTION[2]
    return _assemble(lambda n: _chern_raw(field, fermi, sphere_grid(2, n)), resolution)


def winding_3(field: MatrixPolyField, resolution: int | None = None) -> ChargeResult:
    """Degree-type winding of an invertible field on S^3."""
    _check_field(field, 3)
    resolution = resolution or DEFAULT_RESOLUTION[3]
    return _assemble(lambda n: _winding_raw(field, sphere_grid(3, n)), resolution)


def charge_of(
    field: MatrixPolyField,
    dim: int,
    fermi: float | None = None,
    resolution: int | None = None,
) -> ChargeResult:
    """Dispatch to the invariant matching the sphere dimension."""
    if dim not in (1, 2, 3):
        raise UnsupportedDimensionError(f"supported sphere dimensions are 1, 2, 3; got {dim}")
    if dim == 2:
        return chern_2(field, fermi=0.0 if fermi is None else fermi, resolution=resolution)
    if fermi is not None:
        raise ValueError("fermi level applies only to the S^2 Chern number")
    if field.selfadjoint:
        raise ValueError("self-adjoint fields carry an even charge; use dim = 2")
    return winding_1(field, resolution) if dim == 1 else winding_3(field, resolution)


@lru_cache(maxsize=1)
def chern_sign_weyl() -> int:
    """Sign convention constant: the Chern number this library assigns to the
    even generator field built on the left-handed three-generator
    representation.  Computed once at first use, never hard-coded."""
    from . import clifford, generators

    rep = clifford.build_rep(3, clifford.LEFT)
    field = generators.weyl_field(2, rep)
    result = chern_2(field)
    if abs(result.charge) != 1 or not result.converged:
        raise RuntimeError(f"convention constant did not evaluate to +-1: {result}")
    return result.charge


def __getattr__(name: str):
    if name == "CHERN_SIGN_WEYL":
        return chern_sign_weyl()
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
