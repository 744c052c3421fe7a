"""Command-line interface: queries, checkers, JSON reports and SVG plots.

All commands read a JSON config (charge, model, universe bounds, points,
seed) and print a JSON document with sorted keys.  Exit codes: 0 on
success, 1 when ``check-props`` finds a violation, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .calabi_yau import (
    NonFaithfulChargeError,
    TwistDomainError,
    check_prop_p1,
    check_prop_point,
    cy_class,
    cy_universe,
    line_bundle_expr,
    twist_k,
    twist_obj,
)
from .lattice import (
    Charge,
    InvalidChargeError,
    KClassA,
    is_faithful,
    sample_faithfulness,
)
from .objects import ObjectExpr, ParseError, ProjPoint, class_of, parse_object, parse_point
from .oracle import audit_hn, audit_hom_table, points_mod_p
from .stability import StabilityError, hn, phase, regime, s_equivalent, stable_factors
from .ztilde import (
    UniverseBounds,
    check_fiber_corollaries,
    enumerate_universe,
    fiber,
    pointset_to_json,
    ztilde,
)


class ConfigError(ValueError):
    """Config file violates the schema."""


DEFAULT_BOUNDS = (3, 3)
DEFAULT_SHIFTS = (-1, 1)
DEFAULT_POINTS = ("[1:0]", "[0:1]", "[1:1]")


@dataclass(frozen=True)
class Config:
    charge: Charge
    model: str
    w: int
    bounds: UniverseBounds
    seed: int | None

    @property
    def points(self) -> tuple[ProjPoint, ...]:
        return self.bounds.points


def _require_keys(data: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")
    missing = required - set(data)
    if missing:
        raise ConfigError(f"missing {where} keys: {sorted(missing)}")


def load_config(path: str | Path) -> Config:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    _require_keys(data, {"charge", "model", "w", "bounds", "points", "seed"}, {"charge"}, "config")

    model = data.get("model", "P1")
    if model not in ("P1", "localP1"):
        raise ConfigError("model must be 'P1' or 'localP1'")
    if "w" in data and model != "localP1":
        raise ConfigError("'w' is only meaningful for the localP1 model")
    w = data.get("w", 0)
    if not isinstance(w, int):
        raise ConfigError("'w' must be an integer")

    charge_data = data["charge"]
    if not isinstance(charge_data, dict):
        raise ConfigError("'charge' must be an object")
    try:
        charge = Charge.from_json(charge_data)
    except (InvalidChargeError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad charge: {exc}") from exc

    bounds_data = data.get("bounds", {})
    if not isinstance(bounds_data, dict):
        raise ConfigError("'bounds' must be an object")
    _require_keys(bounds_data, {"max_d1", "max_d2", "shifts"}, set(), "bounds")
    max_d1 = bounds_data.get("max_d1", DEFAULT_BOUNDS[0])
    max_d2 = bounds_data.get("max_d2", DEFAULT_BOUNDS[1])
    shifts = tuple(bounds_data.get("shifts", DEFAULT_SHIFTS))
    if not (isinstance(max_d1, int) and isinstance(max_d2, int)):
        raise ConfigError("bounds must be integers")
    if len(shifts) != 2 or not all(isinstance(s, int) for s in shifts):
        raise ConfigError("shifts must be a [lo, hi] pair of integers")

    points_data = data.get("points", list(DEFAULT_POINTS))
    if not isinstance(points_data, list) or not all(isinstance(p, str) for p in points_data):
        raise ConfigError("'points' must be a list of point strings")
    try:
        points = tuple(parse_point(p) for p in points_data)
    except ParseError as exc:
        raise ConfigError(f"bad point: {exc}") from exc
    if len(set(points)) != len(points):
        raise ConfigError("points must be distinct")

    seed = data.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError("'seed' must be an integer")

    try:
        bounds = UniverseBounds(max_d1, max_d2, shifts, points)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return Config(charge=charge, model=model, w=w, bounds=bounds, seed=seed)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _cmd_hn(cfg: Config, args) -> int:
    x = parse_object(args.object)
    filtration = hn(cfg.charge, x)
    _emit(
        {
            "command": "hn",
            "object": str(x),
            "regime": regime(cfg.charge).value,
            "factors": filtration.to_json(),
        }
    )
    return 0


def _cmd_ztilde(cfg: Config, args) -> int:
    x = parse_object(args.object)
    _emit(
        {
            "command": "ztilde",
            "object": str(x),
            "points": pointset_to_json(ztilde(cfg.charge, x)),
        }
    )
    return 0


def _cmd_fiber(cfg: Config, args) -> int:
    x = parse_object(args.object)
    universe = enumerate_universe(cfg.bounds)
    target = ztilde(cfg.charge, x)
    members = fiber(cfg.charge, target, universe)
    _emit(
        {
            "command": "fiber",
            "object": str(x),
            "target": pointset_to_json(target),
            "universe_size": len(universe),
            "members": [str(m) for m in members],
        }
    )
    return 0


def _cmd_jh(cfg: Config, args) -> int:
    x = parse_object(args.object)
    factors = stable_factors(cfg.charge, x)
    _emit(
        {
            "command": "jh",
            "object": str(x),
            "phase": phase(cfg.charge, x).to_json(),
            "factors": [str(f) for f in factors],
        }
    )
    return 0


def _cmd_sequiv(cfg: Config, args) -> int:
    x = parse_object(args.left)
    y = parse_object(args.right)
    _emit(
        {
            "command": "sequiv",
            "left": str(x),
            "right": str(y),
            "s_equivalent": s_equivalent(cfg.charge, x, y),
            "left_factors": [str(f) for f in stable_factors(cfg.charge, x)],
            "right_factors": [str(f) for f in stable_factors(cfg.charge, y)],
        }
    )
    return 0


def _cmd_faithful_check(cfg: Config, args) -> int:
    faithful = is_faithful(cfg.charge)
    _emit(
        {
            "command": "faithful-check",
            "faithful": faithful,
            "witness": None if faithful else [[1, 0], [0, 1]],
        }
    )
    return 0


def _cmd_sample_faithful(cfg: Config, args) -> int:
    seed = args.seed if args.seed is not None else cfg.seed
    if seed is None:
        raise ConfigError("sample-faithful needs a seed (config or --seed)")
    report = sample_faithfulness(args.grid, args.count, seed)
    _emit(
        {
            "command": "sample-faithful",
            "grid_bound": report.grid_bound,
            "count": report.count,
            "seed": seed,
            "non_faithful": report.non_faithful,
            "fraction_non_faithful": str(report.fraction_non_faithful),
            "witnesses": [w.to_json() for w in report.witnesses],
        }
    )
    return 0


def _cmd_twist(cfg: Config, args) -> int:
    if cfg.model != "localP1":
        raise ConfigError("twist needs the localP1 model (set \"model\": \"localP1\")")
    x = parse_object(args.object)
    result = twist_obj(cfg.w, x)
    before = cy_class(x)
    after = cy_class(result)
    expected = twist_k(cy_class(line_bundle_expr(cfg.w - 1)), before)
    _emit(
        {
            "command": "twist",
            "w": cfg.w,
            "object": str(x),
            "result": str(result),
            "class_before": [before.a, before.b],
            "class_after": [after.a, after.b],
            "k_theory_consistent": after == expected,
        }
    )
    return 0


def _cmd_check_props(cfg: Config, args) -> int:
    Z = cfg.charge
    if not is_faithful(Z):
        raise ConfigError("check-props needs a faithful charge")
    universe = enumerate_universe(cfg.bounds)
    reports = []

    checked, violations = check_fiber_corollaries(Z, universe)
    reports.append(
        {"proposition": "semistable fibers", "checked": checked, "violations": violations}
    )

    point_report = check_prop_point(Z, cy_universe(cfg.bounds, cfg.w))
    reports.append(point_report.to_json())

    p1_report = check_prop_p1(Z, replace(cfg.bounds, points=()), cfg.points)
    reports.append(p1_report.to_json())

    if args.oracle:
        p = 2
        oracle_bounds = UniverseBounds(
            min(cfg.bounds.max_d1, 3), min(cfg.bounds.max_d2, 3), (0, 0), points_mod_p(p)
        )
        compared, hn_violations = audit_hn(Z, enumerate_universe(oracle_bounds), p)
        reports.append(
            {
                "proposition": "oracle HN equivalence",
                "checked": compared,
                "violations": hn_violations,
            }
        )
        for prime in (2, 3):
            compared, hom_violations = audit_hom_table(prime, 3)
            reports.append(
                {
                    "proposition": f"oracle Hom table mod {prime}",
                    "checked": compared,
                    "violations": hom_violations,
                }
            )

    total = sum(len(r["violations"]) for r in reports)
    _emit(
        {
            "command": "check-props",
            "oracle": bool(args.oracle),
            "reports": reports,
            "violations_total": total,
        }
    )
    return 1 if total else 0


def _svg_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _render_svg(points: list[tuple[float, float]], has_infinity: bool) -> str:
    width, height, margin = 640, 480, 60
    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        xlo, xhi = min(xs), max(xs)
        ylo, yhi = min(ys), max(ys)
    else:
        xlo = ylo = -1.0
        xhi = yhi = 1.0
    if xhi - xlo < 1e-9:
        xlo, xhi = xlo - 1.0, xhi + 1.0
    if yhi - ylo < 1e-9:
        ylo, yhi = ylo - 1.0, yhi + 1.0

    def sx(x: float) -> float:
        return margin + (x - xlo) / (xhi - xlo) * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - ylo) / (yhi - ylo) * (height - 2 * margin)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        'stroke="black" stroke-width="1"/>',
        f'<text x="{width // 2}" y="{height - 16}" text-anchor="middle" font-size="14">log mass</text>',
        f'<text x="18" y="{height // 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {height // 2})">pi * phase</text>',
        f'<text x="{margin}" y="{height - margin + 18}" text-anchor="middle" font-size="11">{xlo:.3g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 18}" text-anchor="middle" font-size="11">{xhi:.3g}</text>',
        f'<text x="{margin - 8}" y="{height - margin}" text-anchor="end" font-size="11">{ylo:.3g}</text>',
        f'<text x="{margin - 8}" y="{margin + 4}" text-anchor="end" font-size="11">{yhi:.3g}</text>',
    ]
    for x, y in points:
        parts.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="steelblue" '
            'fill-opacity="0.7" stroke="none"/>'
        )
    if has_infinity:
        parts.append(
            f'<rect x="{width - margin + 10}" y="{margin - 10}" width="8" height="8" fill="crimson"/>'
        )
        parts.append(
            f'<text x="{width - margin + 14}" y="{margin - 16}" text-anchor="middle" '
            'font-size="11">inf</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def _cmd_plot(cfg: Config, args) -> int:
    try:
        lines = Path(args.objects_file).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read objects file: {exc}") from exc
    exprs = [parse_object(line) for line in lines if line.strip()]
    coords: list[tuple[float, float]] = []
    has_infinity = False
    for x in exprs:
        for pt in ztilde(cfg.charge, x):
            if pt.is_infinite:
                has_infinity = True
            else:
                coords.append(pt.coords())
    svg = _render_svg(coords, has_infinity)
    Path(args.out).write_text(svg, encoding="utf-8")
    _emit(
        {
            "command": "plot",
            "out": str(args.out),
            "objects": len(exprs),
            "markers": len(coords),
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabtop",
        description="Exact stability workbench: HN filtrations, charge-sphere "
        "images, fibers, twists, and oracle-backed property checks.",
    )
    parser.add_argument("--config", required=True, help="path to the JSON config")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("hn", help="Harder-Narasimhan filtration of an object")
    p.add_argument("object")
    p.set_defaults(func=_cmd_hn)

    p = sub.add_parser("ztilde", help="sphere image of an object")
    p.add_argument("object")
    p.set_defaults(func=_cmd_ztilde)

    p = sub.add_parser("fiber", help="universe members with the same sphere image")
    p.add_argument("object")
    p.set_defaults(func=_cmd_fiber)

    p = sub.add_parser("jh", help="stable factors of a semistable object")
    p.add_argument("object")
    p.set_defaults(func=_cmd_jh)

    p = sub.add_parser("sequiv", help="S-equivalence of two same-phase semistables")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=_cmd_sequiv)

    p = sub.add_parser("faithful-check", help="exact faithfulness of the configured charge")
    p.set_defaults(func=_cmd_faithful_check)

    p = sub.add_parser("sample-faithful", help="grid-sample charges, report non-faithful fraction")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_sample_faithful)

    p = sub.add_parser("twist", help="spherical twist of a sum of heart generators")
    p.add_argument("object")
    p.set_defaults(func=_cmd_twist)

    p = sub.add_parser("check-props", help="run the proposition checkers over the universe")
    p.add_argument("--oracle", action="store_true", help="also cross-check against the oracle")
    p.set_defaults(func=_cmd_check_props)

    p = sub.add_parser("plot", help="SVG scatter of sphere images")
    p.add_argument("objects_file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(cfg, args)
    except (ConfigError, ParseError, StabilityError, InvalidChargeError,
            NonFaithfulChargeError, TwistDomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
