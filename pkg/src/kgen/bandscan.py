"""Band-crossing detection and charging for momentum-space models.

A model is a Hermitian matrix polynomial h(x) on R^m (m = 2 or 3) with an
optional chiral symmetry J (a Hermitian unitary anti-commuting with h) and a
Fermi level.  Crossings are points where the spectral gap at the Fermi level
closes; each isolated crossing is enclosed by a small sphere and assigned the
integer charge of the restricted field: the S^2 Chern number for m = 3, or the
winding of the chiral off-diagonal block on the enclosing circle for m = 2.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import charge as charge_mod
from . import generators
from ._linalg import dagger, max_abs
from .errors import (
    ChiralSymmetryError,
    EnclosureInvalidError,
    HermiticityError,
    KgenError,
    MissingChiralError,
    ModelFormatError,
)
from .fields import EUCLIDEAN, MatrixPolyField
from .serialize import matrix_from_json, matrix_to_json, terms_from_json, terms_to_json

HERMITICITY_TOL = 1e-12
CHIRAL_TOL = 1e-10
GAP_TOL = 1e-8
MERGE_RADIUS = 1e-3

WEYL = "weyl"
DIRAC_CHIRAL = "dirac-chiral"
TRIVIAL = "trivial"
UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class BandModel:
    """Validated momentum-space Hamiltonian."""

    field: MatrixPolyField
    chiral: np.ndarray | None = None
    fermi: float = 0.0
    name: str | None = None
    comment: str | None = None

    def __post_init__(self):
        if self.field.ambient_dim not in (2, 3):
            raise ModelFormatError(
                f"supported model dimensions are 2 and 3, got {self.field.ambient_dim}"
            )
        bad = [
            alpha
            for alpha, mat in self.field.terms.items()
            if max_abs(mat - dagger(mat)) > HERMITICITY_TOL
        ]
        if bad:
            raise HermiticityError(
                f"non-Hermitian coefficients at multi-indices {sorted(bad)}"
            )
        rng = np.random.default_rng(11)
        probes = 2.0 * rng.standard_normal((40, self.field.ambient_dim))
        worst = generators.selfadjointness_residual(self.field, probes)
        if worst > HERMITICITY_TOL:
            raise HermiticityError(f"sampled Hermiticity residual {worst}")

        if self.chiral is not None:
            j = np.array(self.chiral, dtype=complex)
            j.setflags(write=False)
            object.__setattr__(self, "chiral", j)
            n = self.field.size
            if j.shape != (n, n):
                raise ChiralSymmetryError(f"chiral matrix has shape {j.shape}, expected {(n, n)}")
            if max_abs(j - dagger(j)) > HERMITICITY_TOL:
                raise ChiralSymmetryError("chiral matrix is not Hermitian")
            if max_abs(j @ j - np.eye(n)) > HERMITICITY_TOL:
                raise ChiralSymmetryError("chiral matrix does not square to the identity")
            bad = [
                alpha
                for alpha, mat in self.field.terms.items()
                if max_abs(j @ mat + mat @ j) > CHIRAL_TOL
            ]
            if bad:
                raise ChiralSymmetryError(
                    f"terms at multi-indices {sorted(bad)} do not anti-commute with the chiral matrix"
                )

    @property
    def dimension(self) -> int:
        return self.field.ambient_dim

    @property
    def size(self) -> int:
        return self.field.size

    @property
    def terms(self):
        return self.field.terms

    @classmethod
    def from_field(
        cls,
        field: MatrixPolyField,
        chiral=None,
        fermi: float = 0.0,
        name: str | None = None,
        comment: str | None = None,
    ) -> "BandModel":
        euclidean = field.with_domain(EUCLIDEAN)
        return cls(field=euclidean, chiral=chiral, fermi=fermi, name=name, comment=comment)

    def to_payload(self) -> dict:
        return {
            "dimension": self.dimension,
            "size": self.size,
            "fermi": float(self.fermi),
            "terms": terms_to_json(dict(self.field.terms)),
            "chiral": None if self.chiral is None else matrix_to_json(self.chiral),
            "name": self.name,
            "comment": self.comment,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "BandModel":
        if not isinstance(payload, dict):
            raise ModelFormatError("model file must contain a JSON object")
        for key in ("dimension", "size", "terms"):
            if key not in payload:
                raise ModelFormatError(f"model file is missing the {key!r} key")
        m = payload["dimension"]
        n = payload["size"]
        if not isinstance(m, int) or not isinstance(n, int):
            raise ModelFormatError("'dimension' and 'size' must be integers")
        terms = terms_from_json(payload["terms"], m, n)
        fld = MatrixPolyField(m, n, terms, EUCLIDEAN, selfadjoint=True)
        chiral = payload.get("chiral")
        if chiral is not None:
            chiral = matrix_from_json(chiral)
        return cls(
            field=fld,
            chiral=chiral,
            fermi=float(payload.get("fermi", 0.0)),
            name=payload.get("name"),
            comment=payload.get("comment"),
        )


@dataclass(frozen=True)
class CrossingReport:
    location: tuple
    gap_at_location: float
    enclosure_radius: float | None
    charge: charge_mod.ChargeResult | None
    classification: str
    radius_capped: bool = False
    error: str | None = None

    def to_payload(self) -> dict:
        return {
            "location": [float(v) for v in self.location],
            "gap_at_location": float(self.gap_at_location),
            "enclosure_radius": None
            if self.enclosure_radius is None
            else float(self.enclosure_radius),
            "charge": None if self.charge is None else self.charge.to_payload(),
            "classification": self.classification,
            "radius_capped": bool(self.radius_capped),
            "error": self.error,
        }


@dataclass(frozen=True)
class ScanConfig:
    coarse_n: int = 16
    gap_tol: float = GAP_TOL
    merge_radius: float = MERGE_RADIUS
    resolution: int | None = None
    max_radius: float = 0.5
    threads: int = 1


def load_model(path) -> BandModel:
    """Read and validate a band-model JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from None
    return BandModel.from_payload(payload)


def save_model(model: BandModel, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model.to_payload(), handle, sort_keys=True, indent=2)
        handle.write("\n")


def gap_at(model: BandModel, x) -> float:
    """Distance of the spectrum of h(x) to the Fermi level."""
    vals = np.linalg.eigvalsh(model.field.evaluate(x))
    return float(np.min(np.abs(vals - model.fermi)))


def _gap_batch(model: BandModel, points) -> np.ndarray:
    vals = np.linalg.eigvalsh(model.field.evaluate_batch(points))
    return np.min(np.abs(vals - model.fermi), axis=1)


def _normalize_box(box, dim: int):
    box = [(float(lo), float(hi)) for lo, hi in box]
    if len(box) != dim:
        raise ValueError(f"box must have {dim} (lo, hi) pairs")
    if any(hi <= lo for lo, hi in box):
        raise ValueError("box intervals must be nondegenerate")
    return box


def _pattern_search(func, start, step0, box, max_iter=200, min_step=1e-12, target=None):
    """Derivative-free compass descent with shrinking steps, clipped to the box.

    The objective (a spectral gap) is non-smooth at its zeros, which rules out
    gradient descent; compass polling halves the step whenever no axis move
    improves.
    """
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    x = np.clip(np.asarray(start, dtype=float), lo, hi)
    fx = func(x)
    step = float(step0)
    for _ in range(max_iter):
        if target is not None and fx < target:
            break
        if step < min_step:
            break
        best_x, best_f = None, fx
        for j in range(x.size):
            for sign in (1.0, -1.0):
                cand = x.copy()
                cand[j] = min(max(cand[j] + sign * step, lo[j]), hi[j])
                fc = func(cand)
                if fc < best_f:
                    best_f, best_x = fc, cand
        if best_x is None:
            step *= 0.5
        else:
            x, fx = best_x, best_f
    return x, fx


def _coarse_minima(gaps: np.ndarray) -> list:
    """Indices of grid points that are local minima of the gap array."""
    padded = np.pad(gaps, 1, mode="constant", constant_values=np.inf)
    is_min = np.ones_like(gaps, dtype=bool)
    dim = gaps.ndim
    core = tuple(slice(1, -1) for _ in range(dim))
    for axis in range(dim):
        for shift in (1, -1):
            neighbor = np.roll(padded, shift, axis=axis)[core]
            is_min &= gaps <= neighbor
    return list(zip(*np.nonzero(is_min)))


def find_crossings(
    model: BandModel,
    box,
    coarse_n: int = 16,
    gap_tol: float = GAP_TOL,
    merge_radius: float = MERGE_RADIUS,
) -> list:
    """Locate points where the gap closes, to high precision.

    A coarse grid scan finds candidate local minima of the gap; each candidate
    is refined by pattern search, and refined points are kept only if their gap
    falls below ``gap_tol``.  Nearby duplicates (within ``merge_radius``) are
    merged, keeping the deepest representative.
    """
    if coarse_n < 8:
        raise ValueError(f"coarse grid must have at least 8 points per axis, got {coarse_n}")
    dim = model.dimension
    box = _normalize_box(box, dim)

    axes = [np.linspace(lo, hi, coarse_n) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)
    gaps = _gap_batch(model, points).reshape(mesh[0].shape)

    spacing = max((hi - lo) / (coarse_n - 1) for lo, hi in box)
    candidates = []
    for idx in _coarse_minima(gaps):
        start = np.array([axes[a][idx[a]] for a in range(dim)])
        refined, value = _pattern_search(
            lambda x: gap_at(model, x),
            start,
            spacing,
            box,
            target=gap_tol * 0.1,
        )
        if value < gap_tol:
            candidates.append((value, tuple(refined)))

    candidates.sort(key=lambda c: (c[0], c[1]))
    kept: list = []
    for value, point in candidates:
        if all(
            np.linalg.norm(np.subtract(point, other)) > merge_radius for other in kept
        ):
            kept.append(point)
    kept.sort()
    return [np.array(p) for p in kept]


def min_gap(model: BandModel, box, coarse_n: int = 16):
    """Global minimum of the gap over the box, via the same refinement.

    Returns ``(value, location)``.  Unlike :func:`find_crossings` the result is
    kept even when the gap does not close; used to measure mass gaps.
    """
    dim = model.dimension
    box = _normalize_box(box, dim)
    axes = [np.linspace(lo, hi, coarse_n) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)
    gaps = _gap_batch(model, points).reshape(mesh[0].shape)
    spacing = max((hi - lo) / (coarse_n - 1) for lo, hi in box)

    best_val, best_loc = np.inf, None
    for idx in _coarse_minima(gaps):
        start = np.array([axes[a][idx[a]] for a in range(dim)])
        refined, value = _pattern_search(lambda x: gap_at(model, x), start, spacing, box)
        if value < best_val:
            best_val, best_loc = value, refined
    return float(best_val), best_loc


def charge_crossing(
    model: BandModel,
    point,
    radius: float,
    resolution: int | None = None,
    gap_tol: float = GAP_TOL,
) -> CrossingReport:
    """Assign an integer charge to a crossing by enclosing it with a sphere.

    m = 3: Chern number of the model restricted to the enclosing sphere.
    m = 2: winding of the chiral off-diagonal block on the enclosing circle
    (requires the model to carry a chiral matrix).  The gap must stay open at
    every quadrature node of the enclosure.
    """
    point = np.asarray(point, dtype=float)
    dim = model.dimension
    if point.shape != (dim,):
        raise ValueError(f"point must have shape ({dim},)")
    if radius <= 0:
        raise ValueError("enclosure radius must be positive")
    resolution = resolution or charge_mod.DEFAULT_RESOLUTION[dim - 1]

    grid = charge_mod.sphere_grid(dim - 1, resolution)
    sphere_nodes = point[None, :] + radius * grid.nodes
    node_gap = float(np.min(_gap_batch(model, sphere_nodes)))
    if node_gap <= 10.0 * gap_tol:
        raise EnclosureInvalidError(
            f"gap {node_gap} closes on the enclosing sphere; adjust the radius"
        )

    restricted = model.field.affine_pullback(point, radius)
    if dim == 3:
        result = charge_mod.chern_2(restricted, fermi=model.fermi, resolution=resolution)
        positive = WEYL
    else:
        if model.chiral is None:
            raise MissingChiralError(
                "two-dimensional charges need a chiral symmetry; model has none"
            )
        block = generators.chiral_lower_block(restricted, model.chiral)
        result = charge_mod.winding_1(block, resolution=resolution)
        positive = DIRAC_CHIRAL

    if not result.converged:
        classification = UNCLASSIFIED
    elif abs(result.charge) >= 1:
        classification = positive
    else:
        classification = TRIVIAL
    return CrossingReport(
        location=tuple(float(v) for v in point),
        gap_at_location=gap_at(model, point),
        enclosure_radius=float(radius),
        charge=result,
        classification=classification,
    )


def scan(model: BandModel, box, config: ScanConfig = ScanConfig()) -> list:
    """Find all crossings in the box and charge each one.

    The enclosure radius is half the distance to the nearest other crossing,
    capped by ``config.max_radius`` (the cap is flagged in the report).
    Charging errors are collected per crossing rather than aborting the scan;
    reports come back sorted by location.
    """
    crossings = find_crossings(
        model,
        box,
        coarse_n=config.coarse_n,
        gap_tol=config.gap_tol,
        merge_radius=config.merge_radius,
    )

    def radius_for(i: int):
        if len(crossings) == 1:
            return config.max_radius, True
        nearest = min(
            float(np.linalg.norm(crossings[i] - crossings[j]))
            for j in range(len(crossings))
            if j != i
        )
        auto = 0.5 * nearest
        if auto >= config.max_radius:
            return config.max_radius, True
        return auto, False

    def charge_one(i: int) -> CrossingReport:
        point = crossings[i]
        radius, capped = radius_for(i)
        try:
            report = charge_crossing(
                model, point, radius, resolution=config.resolution, gap_tol=config.gap_tol
            )
            return CrossingReport(
                location=report.location,
                gap_at_location=report.gap_at_location,
                enclosure_radius=report.enclosure_radius,
                charge=report.charge,
                classification=report.classification,
                radius_capped=capped,
            )
        except KgenError as exc:
            return CrossingReport(
                location=tuple(float(v) for v in point),
                gap_at_location=gap_at(model, point),
                enclosure_radius=float(radius),
                charge=None,
                classification=UNCLASSIFIED,
                radius_capped=capped,
                error=f"{type(exc).__name__}: {exc}",
            )

    indices = range(len(crossings))
    if config.threads > 1 and len(crossings) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            reports = list(pool.map(charge_one, indices))
    else:
        reports = [charge_one(i) for i in indices]
    reports.sort(key=lambda r: r.location)
    return reports


def gap_map(model: BandModel, box, n: int) -> np.ndarray:
    """Gap sampled on a regular grid; rows are (x_1, ..., x_m, gap)."""
    dim = model.dimension
    box = _normalize_box(box, dim)
    axes = [np.linspace(lo, hi, n) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)
    gaps = _gap_batch(model, points)
    return np.column_stack([points, gaps])
