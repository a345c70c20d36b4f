"""Matrix-valued fields on spheres, discs, and Euclidean space.

:class:`MatrixPolyField` stores a matrix polynomial as a map from multi-indices
to coefficient matrices.  Evaluation and partial derivatives are exact, which
is what lets the charge quadratures downstream avoid numerical
differentiation altogether.  :class:`EvaluableField` wraps an arbitrary
pointwise evaluator for the non-polynomial objects (bounded transforms,
connecting-map images).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from ._linalg import max_abs
from .errors import DimensionMismatchError
from .sampling import ball_points, sphere_points
from .serialize import terms_from_json, terms_to_json

SPHERE = "sphere"
DISC = "disc"
EUCLIDEAN = "euclidean"
_DOMAINS = (SPHERE, DISC, EUCLIDEAN)


def unit_index(j: int, m: int) -> tuple:
    """Multi-index of the monomial x_j (0-based j) in m variables."""
    alpha = [0] * m
    alpha[j] = 1
    return tuple(alpha)


@dataclass(frozen=True)
class MatrixPolyField:
    """Polynomial field  x -> sum_alpha x^alpha M_alpha  with N x N coefficients."""

    ambient_dim: int
    size: int
    terms: dict
    domain: str = EUCLIDEAN
    selfadjoint: bool = False

    def __post_init__(self):
        if self.domain not in _DOMAINS:
            raise ValueError(f"unknown domain tag {self.domain!r}")
        frozen = {}
        for alpha, mat in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.ambient_dim or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha} for ambient dim {self.ambient_dim}")
            mat = np.array(mat, dtype=complex)
            if mat.shape != (self.size, self.size):
                raise ValueError(f"coefficient of {alpha} has shape {mat.shape}")
            mat.setflags(write=False)
            frozen[alpha] = mat
        object.__setattr__(self, "terms", MappingProxyType(frozen))

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, x) -> np.ndarray:
        return self.evaluate_batch(np.asarray(x, dtype=float)[None, :])[0]

    def evaluate_batch(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.ambient_dim:
            raise DimensionMismatchError(
                f"points must have shape (M, {self.ambient_dim}), got {pts.shape}"
            )
        out = np.zeros((pts.shape[0], self.size, self.size), dtype=complex)
        for alpha, mat in self.terms.items():
            mono = np.ones(pts.shape[0])
            for j, p in enumerate(alpha):
                if p:
                    mono = mono * pts[:, j] ** p
            out += mono[:, None, None] * mat
        return out

    # -- algebra ------------------------------------------------------------

    def derivative(self, j: int) -> "MatrixPolyField":
        """Exact partial derivative with respect to x_j (0-based)."""
        if not 0 <= j < self.ambient_dim:
            raise ValueError(f"axis {j} out of range")
        new_terms: dict = {}
        for alpha, mat in self.terms.items():
            if alpha[j] == 0:
                continue
            beta = list(alpha)
            beta[j] -= 1
            beta = tuple(beta)
            contrib = alpha[j] * mat
            new_terms[beta] = new_terms.get(beta, 0) + contrib
        return MatrixPolyField(
            self.ambient_dim, self.size, new_terms, self.domain, self.selfadjoint
        )

    def gradient(self) -> list:
        return [self.derivative(j) for j in range(self.ambient_dim)]

    def direct_sum(self, other: "MatrixPolyField") -> "MatrixPolyField":
        """Block-diagonal sum; charges of the summands add."""
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("direct sum requires matching ambient dimensions")
        n, m = self.size, other.size
        new_terms: dict = {}
        for alpha, mat in self.terms.items():
            block = np.zeros((n + m, n + m), dtype=complex)
            block[:n, :n] = mat
            new_terms[alpha] = block
        for alpha, mat in other.terms.items():
            block = new_terms.get(alpha)
            if block is None:
                block = np.zeros((n + m, n + m), dtype=complex)
                new_terms[alpha] = block
            else:
                block = np.array(block)
                new_terms[alpha] = block
            block[n:, n:] = mat
        return MatrixPolyField(
            self.ambient_dim,
            n + m,
            new_terms,
            self.domain,
            self.selfadjoint and other.selfadjoint,
        )

    def reflect(self, j: int) -> "MatrixPolyField":
        """Compose with the coordinate reflection x_j -> -x_j."""
        new_terms = {
            alpha: (-mat if alpha[j] % 2 else mat) for alpha, mat in self.terms.items()
        }
        return MatrixPolyField(
            self.ambient_dim, self.size, new_terms, self.domain, self.selfadjoint
        )

    def conjugated_by(self, w) -> "MatrixPolyField":
        """Pointwise conjugation W* F(x) W by a constant matrix W."""
        w = np.asarray(w, dtype=complex)
        wd = w.conj().T
        new_terms = {alpha: wd @ mat @ w for alpha, mat in self.terms.items()}
        return MatrixPolyField(
            self.ambient_dim, self.size, new_terms, self.domain, self.selfadjoint
        )

    def plus(self, other: "MatrixPolyField") -> "MatrixPolyField":
        if (other.ambient_dim, other.size) != (self.ambient_dim, self.size):
            raise DimensionMismatchError("sum requires matching shapes")
        new_terms = dict(self.terms)
        for alpha, mat in other.terms.items():
            new_terms[alpha] = new_terms.get(alpha, 0) + mat
        return MatrixPolyField(
            self.ambient_dim,
            self.size,
            new_terms,
            self.domain,
            self.selfadjoint and other.selfadjoint,
        )

    def affine_pullback(self, center, radius: float) -> "MatrixPolyField":
        """Exact recomposition under x = center + radius * u.

        Restricting a model to a small sphere around a band crossing is this
        pullback followed by evaluation at unit vectors u.
        """
        center = np.asarray(center, dtype=float)
        if center.shape != (self.ambient_dim,):
            raise DimensionMismatchError("center must match the ambient dimension")
        new_terms: dict = {}
        for alpha, mat in self.terms.items():
            ranges = [range(a + 1) for a in alpha]
            for ks in itertools.product(*ranges):
                coeff = 1.0
                for a, k, c in zip(alpha, ks, center):
                    coeff *= math.comb(a, k) * c ** (a - k) * radius**k
                if coeff == 0.0:
                    continue
                beta = tuple(ks)
                new_terms[beta] = new_terms.get(beta, 0) + coeff * mat
        return MatrixPolyField(
            self.ambient_dim, self.size, new_terms, self.domain, self.selfadjoint
        )

    def with_domain(self, domain: str) -> "MatrixPolyField":
        return MatrixPolyField(self.ambient_dim, self.size, dict(self.terms), domain, self.selfadjoint)

    # -- checks and serialization -------------------------------------------

    def coefficient_hermiticity(self) -> float:
        """Largest deviation of any coefficient from Hermiticity."""
        return max((max_abs(m - m.conj().T) for m in self.terms.values()), default=0.0)

    def to_payload(self) -> dict:
        return {
            "dimension": self.ambient_dim,
            "size": self.size,
            "domain": self.domain,
            "selfadjoint": self.selfadjoint,
            "terms": terms_to_json(dict(self.terms)),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "MatrixPolyField":
        ambient = int(payload["dimension"])
        size = int(payload["size"])
        terms = terms_from_json(payload["terms"], ambient, size)
        return cls(
            ambient,
            size,
            terms,
            payload.get("domain", EUCLIDEAN),
            bool(payload.get("selfadjoint", False)),
        )


@dataclass(frozen=True)
class EvaluableField:
    """General matrix-valued function given by a pointwise evaluator."""

    ambient_dim: int
    size: int
    evaluator: object = field(repr=False)
    domain: str = EUCLIDEAN

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise DimensionMismatchError(
                f"point must have shape ({self.ambient_dim},), got {x.shape}"
            )
        out = np.asarray(self.evaluator(x), dtype=complex)
        if out.shape != (self.size, self.size):
            raise DimensionMismatchError(f"evaluator returned shape {out.shape}")
        return out

    def evaluate_batch(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return np.stack([self.evaluate(p) for p in pts])

    def continuity_residual(self, probes: int = 25, step: float = 1e-7, seed: int = 0) -> float:
        """Spot-check continuity: max ||F(x) - F(x + h)|| over random probes."""
        rng = np.random.default_rng(seed)
        if self.domain == SPHERE:
            pts = sphere_points(self.ambient_dim, probes, rng)
        elif self.domain == DISC:
            pts = ball_points(self.ambient_dim, probes, rng, max_norm=1.0 - 10 * step)
        else:
            pts = 3.0 * rng.standard_normal((probes, self.ambient_dim))
        worst = 0.0
        for p in pts:
            bump = rng.standard_normal(self.ambient_dim)
            bump *= step / np.linalg.norm(bump)
            q = p + bump
            if self.domain == SPHERE:
                q = q / np.linalg.norm(q)
            worst = max(worst, max_abs(self.evaluate(p) - self.evaluate(q)))
        return worst
