"""Batch command-line interface.

Subcommands: clifford, generator, verify, charge, scan.  All output is JSON
(CSV for gap maps) written to stdout or --out, with sorted keys and seeded
randomness so identical invocations produce identical bytes.  Exit codes:
0 success/PASS, 1 numerical failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import bandscan, clifford, generators, kmaps
from .errors import KgenError, ModelFormatError
from .fields import EUCLIDEAN
from .serialize import matrix_to_json, to_jsonable

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Knobs that, together with the thread count, pin down the output bytes."""

    seed: int = 0
    samples: int | None = None
    resolution: int | None = None
    threads: int = 1
    out: str | None = None


def _config_from(args) -> RunConfig:
    threads = getattr(args, "threads", 1)
    env = os.environ.get("K_GEN_THREADS")
    if env is not None and hasattr(args, "threads"):
        try:
            threads = int(env)
        except ValueError:
            raise UsageError(f"K_GEN_THREADS must be an integer, got {env!r}") from None
    if threads < 1:
        raise UsageError("thread count must be >= 1")
    return RunConfig(
        seed=getattr(args, "seed", 0),
        samples=getattr(args, "samples", None),
        resolution=getattr(args, "resolution", None),
        threads=threads,
        out=args.out,
    )


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit_json(payload, out: str | None) -> None:
    _emit(json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n", out)


def _cmd_clifford(args, config: RunConfig) -> int:
    if args.d > clifford.MAX_D:
        raise UsageError(
            f"d = {args.d} exceeds the size guard d <= {clifford.MAX_D} (matrices up to 64 x 64)"
        )
    rep = clifford.build_rep(args.d, args.handedness)
    _emit_json(rep.to_payload(), config.out)
    return EXIT_OK


def _generator_field(kind: str, d: int, handedness: str):
    if kind == "weyl":
        if d % 2 != 0:
            raise UsageError(f"--kind weyl needs even d, got {d}")
        rep = clifford.build_rep(d + 1, handedness)
        return generators.weyl_field(d, rep), None
    if kind == "dirac-phase":
        if d % 2 != 1:
            raise UsageError(f"--kind dirac-phase needs odd d, got {d}")
        rep = clifford.build_rep(d, handedness)
        return generators.dirac_phase_field(d, rep), None
    if kind == "dirac-hamiltonian":
        if d % 2 != 1:
            raise UsageError(f"--kind dirac-hamiltonian needs odd d, got {d}")
        rep = clifford.build_rep(d + 1, handedness)
        field, grading = generators.dirac_hamiltonian_field(d, rep)
        return field, grading
    raise UsageError(f"unknown generator kind {kind!r}")


def _cmd_generator(args, config: RunConfig) -> int:
    if args.d > clifford.MAX_D:
        raise UsageError(f"d = {args.d} exceeds the size guard d <= {clifford.MAX_D}")
    field, grading = _generator_field(args.kind, args.d, args.handedness)

    if args.point is not None:
        if len(args.point) != field.ambient_dim:
            raise UsageError(
                f"--point needs {field.ambient_dim} coordinates, got {len(args.point)}"
            )
        value = field.evaluate(np.asarray(args.point))
        _emit_json({"point": list(args.point), "value": matrix_to_json(value)}, config.out)
        return EXIT_OK

    name = f"{args.kind}-d{args.d}"
    if field.selfadjoint:
        model = bandscan.BandModel.from_field(
            field,
            chiral=None if grading is None else grading.matrix,
            fermi=0.0,
            name=name,
        )
        _emit_json(model.to_payload(), config.out)
    else:
        # The Dirac phase has a non-Hermitian coefficient, so it is emitted in
        # the field schema rather than as a (Hermitian) band model.
        payload = field.with_domain(EUCLIDEAN).to_payload()
        payload["name"] = name
        _emit_json(payload, config.out)
    return EXIT_OK


def _cmd_verify(args, config: RunConfig) -> int:
    suite = args.suite
    if suite == "clifford":
        d_max = args.d if args.d is not None else 9
        if d_max > clifford.MAX_D:
            raise UsageError(f"d = {d_max} exceeds the size guard d <= {clifford.MAX_D}")
        worst = 0.0
        checked = 0
        for d in range(1, d_max + 1):
            variants = (clifford.LEFT, clifford.RIGHT) if d % 2 else (clifford.LEFT,)
            for hand in variants:
                rep = clifford.build_rep(d, hand)
                report = clifford.verify_rep(rep)
                worst = max(worst, report.max_residual)
                if not report.ok:
                    worst = max(worst, max(v.residual for v in report.violations))
                checked += 1
        report = {
            "suite": "clifford",
            "d": int(d_max),
            "samples": checked,
            "max_residual": float(worst),
            "pass": bool(worst == 0.0),
        }
    elif suite == "index":
        d = args.d if args.d is not None else 1
        report = kmaps.verify_index_identity(d, samples=config.samples, seed=config.seed)
    elif suite == "exp":
        d = args.d if args.d is not None else 2
        report = kmaps.verify_exp_identity(d, samples=config.samples, seed=config.seed)
    elif suite == "homotopy":
        d = args.d if args.d is not None else 2
        report = kmaps.homotopy_scan(d, samples=config.samples, seed=config.seed)
    elif suite == "fredholm":
        report = generators.verify_fredholm(samples=config.samples, seed=config.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown suite {suite!r}")

    _emit_json(report, config.out)
    return EXIT_OK if report["pass"] else EXIT_NUMERICAL


def _cmd_charge(args, config: RunConfig) -> int:
    model = bandscan.load_model(args.model)
    center = args.center if args.center is not None else [0.0] * model.dimension
    if len(center) != model.dimension:
        raise UsageError(f"--center needs {model.dimension} coordinates")
    report = bandscan.charge_crossing(
        model, np.asarray(center, dtype=float), args.radius, resolution=config.resolution
    )
    result = report.charge
    _emit_json(result.to_payload(), config.out)
    if not result.converged:
        sys.stderr.write(
            "charge failed the integrality check (residual "
            f"{result.residual:.3g}); the enclosure may touch another crossing\n"
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def _parse_box(values, dim: int):
    if values is None:
        return [(-1.0, 1.0)] * dim
    if len(values) == 2:
        lo, hi = values
        return [(lo, hi)] * dim
    if len(values) == 2 * dim:
        return [(values[2 * i], values[2 * i + 1]) for i in range(dim)]
    raise UsageError(
        f"--box needs 2 or {2 * dim} floats (lo hi per axis), got {len(values)}"
    )


def _cmd_scan(args, config: RunConfig) -> int:
    model = bandscan.load_model(args.model)
    box = _parse_box(args.box, model.dimension)
    scan_config = bandscan.ScanConfig(
        coarse_n=args.grid,
        resolution=config.resolution,
        threads=config.threads,
    )
    reports = bandscan.scan(model, box, scan_config)
    _emit_json([r.to_payload() for r in reports], config.out)

    if args.gap_map is not None:
        rows = bandscan.gap_map(model, box, args.grid)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(model.dimension)] + ["gap"])
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])
        with open(args.gap_map, "w", encoding="utf-8") as handle:
            handle.write(buffer.getvalue())

    if any(r.error is not None for r in reports):
        return EXIT_NUMERICAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgen",
        description=(
            "Clifford representations, generator fields on spheres, K-theory "
            "connecting-map verification, and topological charges of band models."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clifford", help="emit a Clifford representation as JSON")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--handedness", choices=(clifford.LEFT, clifford.RIGHT), default=clifford.LEFT)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_clifford)

    p = sub.add_parser("generator", help="emit a generator field or evaluate it at a point")
    p.add_argument("--kind", choices=("weyl", "dirac-phase", "dirac-hamiltonian"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--handedness", choices=(clifford.LEFT, clifford.RIGHT), default=clifford.LEFT)
    p.add_argument("--point", type=float, nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_generator)

    p = sub.add_parser("verify", help="run a verification suite; exit 0 iff PASS")
    p.add_argument(
        "--suite",
        choices=("clifford", "index", "exp", "homotopy", "fredholm"),
        required=True,
    )
    p.add_argument("--d", type=int)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("charge", help="charge of one enclosing sphere in a band model")
    p.add_argument("model")
    p.add_argument("--center", type=float, nargs="+")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--resolution", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_charge)

    p = sub.add_parser("scan", help="find and charge all band crossings in a box")
    p.add_argument("model")
    p.add_argument("--box", type=float, nargs="+")
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--resolution", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--gap-map")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args, _config_from(args))
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ModelFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except KgenError as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
