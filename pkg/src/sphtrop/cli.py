"""Command-line front end.

Subcommands: ``val``, ``snf``, ``check``, ``sample``, ``horn``, ``cone``,
``classify``, ``plot``.  Each reads its payload from inline flags, from a
job file (``key: value`` lines, ``#`` comments), or both, with flags
taking precedence.  Outputs are deterministic: identical inputs and seed
produce byte-identical JSON/CSV/SVG.

Exit codes: 0 success; 1 input error (with a position where available);
2 precision exhaustion, with a hint to rerun at higher --precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import expr as expr_mod
from .horn import HornQuery, enumerate_T, enumerate_U, horn_check
from .matrix import SeriesMatrix, invariant_factors_minors, smith_normal_form
from .series import DEFAULT_PRECISION, IndeterminateValuation
from .trop import (CheckVerdict, GroupSpace, SpaceKind, VarietySpec,
                   DimensionMismatch, MixedSpaces, NotOnSpace,
                   check_on_variety, in_valuation_cone, punctured_curve_classifier,
                   sample_family, val_point)

_MODE_FOR_COMMAND = {
    "val": "point",
    "snf": "point",
    "check": "ideal-check",
    "sample": "family-sweep",
    "horn": "horn",
    "cone": "cone",
    "classify": "classify",
}

_SPACE_KINDS = {
    "torus": SpaceKind.TORUS,
    "punctured_affine": SpaceKind.PUNCTURED_AFFINE,
    "affine": SpaceKind.PUNCTURED_AFFINE,
    "gl": SpaceKind.GL,
    "sl": SpaceKind.SL,
    "pgl": SpaceKind.PGL,
}


class JobError(ValueError):
    pass


def load_job(path: str) -> dict[str, str]:
    job: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise JobError(f"{path}:{lineno}: expected 'key: value'")
            key, value = line.split(":", 1)
            key = key.strip().lower()
            if key in job:
                raise JobError(f"{path}:{lineno}: duplicate key {key!r}")
            job[key] = value.strip()
    return job


def _merged(args, job: dict[str, str], key: str, flag_value):
    return flag_value if flag_value is not None else job.get(key)


def _parse_space(text: str) -> GroupSpace:
    parts = text.replace("_", " ").split()
    if len(parts) != 2:
        raise JobError(f"space must be '<kind> <n>', got {text!r}")
    kind = _SPACE_KINDS.get(parts[0].lower())
    if kind is None:
        raise JobError(f"unknown space kind {parts[0]!r}")
    return GroupSpace(kind, int(parts[1]))


def _free_vars(space: GroupSpace):
    if space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        names = tuple(f"x{i + 1}" for i in range(space.n))
        if space.n == 2:
            names = names + ("x", "y")
        return names
    return ()


def _parse_matrix(text: str, space: GroupSpace, precision) -> SeriesMatrix:
    rows = [r for r in text.split(";") if r.strip()]
    parsed = []
    for row in rows:
        parsed.append([expr_mod.evaluate(expr_mod.parse(cell), {}, precision)
                       for cell in row.split(",")])
    return SeriesMatrix(parsed, precision)


def _parse_vector(text: str, precision):
    return [expr_mod.evaluate(expr_mod.parse(cell), {}, precision)
            for cell in text.split(",")]


def _parse_family(text: str, space: GroupSpace):
    free = _free_vars(space)
    if space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        return tuple(expr_mod.parse(cell, free) for cell in text.split(","))
    return tuple(tuple(expr_mod.parse(cell, free) for cell in row.split(","))
                 for row in text.split(";") if row.strip())


def _parse_generators(text: str, space: GroupSpace):
    free = _free_vars(space)
    return tuple(expr_mod.parse(g, free) for g in text.split(";") if g.strip())


def _parse_box(text: str):
    parts = [p for p in text.split(";") if p.strip()]
    boxes = []
    for part in parts:
        lo, _, hi = part.partition("..")
        try:
            boxes.append((int(lo), int(hi)))
        except ValueError as exc:
            raise JobError(f"bad box {part!r}; expected 'lo..hi'") from exc
    if not boxes:
        raise JobError("empty box")
    return boxes[0] if len(boxes) == 1 else boxes


def _parse_tuple(text: str):
    return tuple(Fraction(p.strip()) for p in text.split(","))


def _rat_list(values):
    return [str(v) for v in values]


def _space_json(space: GroupSpace):
    return {"kind": space.kind.value, "n": space.n}


def _emit(args, payload: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def _require(value, what: str):
    if value is None:
        raise JobError(f"missing {what}")
    return value


# -- subcommand implementations ----------------------------------------------


def _cmd_val(args, job):
    space = _parse_space(_require(_merged(args, job, "space", args.space), "space"))
    precision = Fraction(_merged(args, job, "precision", args.precision) or DEFAULT_PRECISION)
    matrix_text = _merged(args, job, "matrix", args.matrix)
    vector_text = _merged(args, job, "vector", args.vector)
    if space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        point = _parse_vector(_require(vector_text, "vector"), precision)
    else:
        point = _parse_matrix(_require(matrix_text, "matrix"), space, precision)
    pt = val_point(space, point)
    _emit(args, _json_dump({
        "command": "val",
        "space": _space_json(space),
        "coords": _rat_list(pt.coords),
    }))
    return 0


def _cmd_snf(args, job):
    space_text = _merged(args, job, "space", args.space)
    space = _parse_space(space_text) if space_text else None
    precision = Fraction(_merged(args, job, "precision", args.precision) or DEFAULT_PRECISION)
    matrix = _parse_matrix(_require(_merged(args, job, "matrix", args.matrix), "matrix"),
                           space, precision)
    g, d, h = smith_normal_form(matrix)
    alphas = tuple(d.entries[i][i].valuation() for i in range(d.n))
    minor_alphas = invariant_factors_minors(matrix)
    _emit(args, _json_dump({
        "command": "snf",
        "alphas": _rat_list(alphas),
        "g": [[str(e) for e in row] for row in g.entries],
        "d": [[str(e) for e in row] for row in d.entries],
        "h": [[str(e) for e in row] for row in h.entries],
        "agrees_with_minor_method": list(alphas) == list(minor_alphas),
    }))
    return 0


def _cmd_check(args, job):
    space = _parse_space(_require(_merged(args, job, "space", args.space), "space"))
    precision = Fraction(_merged(args, job, "precision", args.precision) or DEFAULT_PRECISION)
    generators = _parse_generators(
        _require(_merged(args, job, "generators", args.generators), "generators"), space)
    matrix_text = _merged(args, job, "matrix", args.matrix)
    vector_text = _merged(args, job, "vector", args.vector)
    if space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        point = _parse_vector(_require(vector_text, "vector"), precision)
    else:
        point = _parse_matrix(_require(matrix_text, "matrix"), space, precision)
    spec = VarietySpec(space, generators=generators)
    result = check_on_variety(spec, point, precision)
    payload = {"command": "check", "verdict": result.verdict.value}
    if result.verdict is CheckVerdict.VIOLATED:
        payload["generator"] = result.generator_index
        payload["valuation"] = str(result.valuation)
    _emit(args, _json_dump(payload))
    return 0


def _cmd_sample(args, job):
    space = _parse_space(_require(_merged(args, job, "space", args.space), "space"))
    precision = Fraction(_merged(args, job, "precision", args.precision) or DEFAULT_PRECISION)
    family = _parse_family(
        _require(_merged(args, job, "family", args.family), "family"), space)
    box = _parse_box(_require(_merged(args, job, "box", args.box), "box"))
    draws = int(_merged(args, job, "draws", args.draws) or 3)
    seed = int(_merged(args, job, "seed", args.seed) or 0)
    threads = int(args.threads or job.get("threads") or 1)
    generators_text = _merged(args, job, "generators", args.generators)
    check_generators = (_parse_generators(generators_text, space)
                        if generators_text else None)
    spec = VarietySpec(space, family=family)
    result = sample_family(spec, box, draws_per_cell=draws, seed=seed,
                           precision=precision, threads=threads,
                           check_generators=check_generators)
    if args.format == "csv":
        lines = [f"# space: {space.kind.value} {space.n}"]
        lines.append(",".join(f"alpha_{i + 1}" for i in range(space.coord_dim)))
        for p in result.points:
            lines.append(",".join(str(c) for c in p.coords))
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit(args, _json_dump({
        "command": "sample",
        "space": _space_json(space),
        "points": [{
            "coords": _rat_list(p.coords),
            "witness": result.witnesses[p.coords],
        } for p in result.points],
        "metadata": {
            "cells": result.cells,
            "skips": result.skips,
            "seed": result.seed,
            "draws_per_cell": result.draws_per_cell,
            "generators_checked": result.generators_checked,
        },
    }))
    return 0


def _cmd_horn(args, job):
    enumerate_text = _merged(args, job, "enumerate", args.enumerate)
    check_text = _merged(args, job, "check", args.check)
    if (enumerate_text is None) == (check_text is None):
        raise JobError("horn needs exactly one of enumerate/check")
    if enumerate_text is not None:
        parts = enumerate_text.split()
        if len(parts) != 2:
            raise JobError("enumerate expects '<n> <r>'")
        n, r = int(parts[0]), int(parts[1])
        family = enumerate_U(n, r) if args.set == "U" else enumerate_T(n, r)
        _emit(args, _json_dump({
            "command": "horn",
            "set": args.set,
            "n": n,
            "r": r,
            "triples": [str(t) for t in family],
        }))
        return 0
    pieces = check_text.split("|")
    if len(pieces) != 3:
        raise JobError("check expects 'alpha | beta | gamma_prime'")
    query = HornQuery(*(_parse_tuple(p) for p in pieces))
    _emit(args, _json_dump({
        "command": "horn",
        "query": {
            "alpha": _rat_list(query.alpha),
            "beta": _rat_list(query.beta),
            "gamma_prime": _rat_list(query.gamma_prime),
        },
        "realizable": horn_check(query),
    }))
    return 0


def _cmd_cone(args, job):
    space = _parse_space(_require(_merged(args, job, "space", args.space), "space"))
    coords = _parse_tuple(_require(_merged(args, job, "coords", args.coords), "coords"))
    _emit(args, _json_dump({
        "command": "cone",
        "space": _space_json(space),
        "coords": _rat_list(coords),
        "inside": in_valuation_cone(space, coords),
    }))
    return 0


def _cmd_classify(args, job):
    curve = _require(_merged(args, job, "curve", args.curve), "curve")
    result = punctured_curve_classifier(curve)
    _emit(args, _json_dump({
        "command": "classify",
        "curve": curve,
        "classification": result.value,
    }))
    return 0


# -- plotting ------------------------------------------------------------------

_CONE_RAYS = {
    (SpaceKind.GL, 2): [(1, 1), (-1, -1)],
    (SpaceKind.SL, 3): [(1, 1), (2, -1)],
    (SpaceKind.PGL, 3): [(1, 1), (1, 0)],
}


def _cmd_plot(args, job):
    with open(args.csv, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    space = None
    points = []
    for line in lines:
        if line.startswith("# space:"):
            space = _parse_space(line.split(":", 1)[1].strip())
            continue
        if not line or line.startswith("#") or line.startswith("alpha_"):
            continue
        points.append(tuple(Fraction(p) for p in line.split(",")))
    if space is None:
        raise JobError("CSV is missing the '# space: <kind> <n>' header")
    if space.coord_dim != 2:
        raise JobError("plot supports 2-dimensional point clouds only")
    _emit(args, _render_svg(space, points))
    return 0


def _render_svg(space: GroupSpace, points) -> str:
    size, margin = 420, 30
    span = Fraction(1)
    for p in points:
        for c in p:
            span = max(span, abs(c))
    scale = Fraction(size - 2 * margin, 2) / span

    def px(x: Fraction) -> str:
        return f"{float(size / 2 + scale * x):.2f}"

    def py(y: Fraction) -> str:
        return f"{float(size / 2 - scale * y):.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{size // 2}" x2="{size}" y2="{size // 2}" '
        'stroke="#cccccc" stroke-width="1"/>',
        f'<line x1="{size // 2}" y1="0" x2="{size // 2}" y2="{size}" '
        'stroke="#cccccc" stroke-width="1"/>',
    ]
    reach = span * 2  # long enough to leave the canvas
    for dx, dy in _CONE_RAYS.get((space.kind, space.n), []):
        out.append(
            f'<line x1="{px(Fraction(0))}" y1="{py(Fraction(0))}" '
            f'x2="{px(reach * dx)}" y2="{py(reach * dy)}" '
            'stroke="#888888" stroke-width="1" stroke-dasharray="5,3"/>')
    for p in sorted(points):
        out.append(f'<circle cx="{px(p[0])}" cy="{py(p[1])}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- entry point ---------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphtrop",
        description="Exact tropicalization of subvarieties of matrix groups and tori.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_payload=True):
        p.add_argument("job", nargs="?", help="job file (key: value lines)")
        p.add_argument("--precision", help="exponent cutoff (rational)")
        p.add_argument("--out", help="write output to this file")
        if with_payload:
            p.add_argument("--space", help="e.g. 'gl 2'")

    p = sub.add_parser("val", help="valuation map of a point")
    common(p)
    p.add_argument("--matrix", help="rows ';'-separated, entries ','-separated")
    p.add_argument("--vector", help="entries ','-separated")
    p.set_defaults(func=_cmd_val)

    p = sub.add_parser("snf", help="Smith normal form and invariant factors")
    common(p)
    p.add_argument("--matrix")
    p.set_defaults(func=_cmd_snf)

    p = sub.add_parser("check", help="ideal membership of a point")
    common(p)
    p.add_argument("--matrix")
    p.add_argument("--vector")
    p.add_argument("--generators", help="';'-separated expressions")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("sample", help="sweep a parametrized family")
    common(p)
    p.add_argument("--family", help="entries in parameters s1, s2, ...")
    p.add_argument("--box", help="'lo..hi' or per-parameter 'lo..hi;lo..hi'")
    p.add_argument("--draws", help="draws per exponent cell")
    p.add_argument("--seed")
    p.add_argument("--threads")
    p.add_argument("--generators",
                   help="optional ideal generators; every witness is re-checked")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("horn", help="enumerate index triples or check a query")
    common(p, with_payload=False)
    p.add_argument("--enumerate", help="'<n> <r>'")
    p.add_argument("--set", choices=["T", "U"], default="T")
    p.add_argument("--check", help="'alpha | beta | gamma_prime'")
    p.set_defaults(func=_cmd_horn)

    p = sub.add_parser("cone", help="valuation-cone membership")
    common(p)
    p.add_argument("--coords", help="','-separated rationals")
    p.set_defaults(func=_cmd_cone)

    p = sub.add_parser("classify", help="punctured-plane curve dichotomy")
    common(p, with_payload=False)
    p.add_argument("--curve", help="polynomial in x and y")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("plot", help="SVG scatter of a sampled CSV")
    p.add_argument("csv", help="CSV produced by 'sample --format csv'")
    p.add_argument("--out", help="write SVG to this file")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    job = {}
    if getattr(args, "job", None):
        try:
            job = load_job(args.job)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except JobError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    expected_mode = _MODE_FOR_COMMAND.get(args.command)
    if job.get("mode") and expected_mode and job["mode"] != expected_mode:
        print(f"error: job mode {job['mode']!r} does not match "
              f"subcommand {args.command!r} (expected {expected_mode!r})",
              file=sys.stderr)
        return 1
    try:
        return args.func(args, job)
    except IndeterminateValuation as exc:
        print(f"error: {exc}\nhint: rerun with a higher --precision",
              file=sys.stderr)
        return 2
    except (JobError, expr_mod.ParseError, expr_mod.MissingAssignment,
            NotOnSpace, DimensionMismatch, MixedSpaces, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
