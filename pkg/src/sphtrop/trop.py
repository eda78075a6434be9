"""Valuation maps, variety membership, family sampling and ray closure.

Five homogeneous spaces are supported, each with a fixed coordinate
basis on the target lattice:

* TORUS(n): points are vectors of invertible series, value is the
  coordinatewise valuation (n coordinates).
* PUNCTURED_AFFINE(n): vectors with at least one invertible coordinate,
  value is the minimum coordinate valuation (1 coordinate).
* GL(n): invertible series matrices, value is the decreasing tuple of
  invariant factors (n coordinates).
* SL(n): determinant-one matrices, the n-1 greatest invariant factors.
* PGL(n): any invertible representative, invariant factors normalised
  by subtracting the smallest and dropping the resulting zero (n-1
  coordinates, independent of the representative chosen).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from random import Random

from . import expr as expr_mod
from .horn import DimensionMismatch
from .matrix import SeriesMatrix, invariant_factors_minors
from .series import DEFAULT_PRECISION, IndeterminateValuation, PuiseuxSeries

__all__ = [
    "SpaceKind", "GroupSpace", "TropPoint", "VarietySpec",
    "NotOnSpace", "DimensionMismatch", "MixedSpaces",
    "CheckVerdict", "CheckResult", "SampleResult", "CurveClass",
    "val_point", "check_on_variety", "sample_family", "ray_closure",
    "in_valuation_cone", "punctured_curve_classifier",
]


class NotOnSpace(ValueError):
    pass


class MixedSpaces(ValueError):
    pass


class SpaceKind(Enum):
    TORUS = "torus"
    PUNCTURED_AFFINE = "punctured_affine"
    GL = "gl"
    SL = "sl"
    PGL = "pgl"


@dataclass(frozen=True)
class GroupSpace:
    kind: SpaceKind
    n: int

    def __post_init__(self):
        minimum = 2 if self.kind in (SpaceKind.SL, SpaceKind.PGL) else 1
        if self.n < minimum:
            raise ValueError(f"{self.kind.value} requires n >= {minimum}")

    @property
    def coord_dim(self) -> int:
        if self.kind in (SpaceKind.TORUS, SpaceKind.GL):
            return self.n
        if self.kind is SpaceKind.PUNCTURED_AFFINE:
            return 1
        return self.n - 1

    def __str__(self):
        return f"{self.kind.value}_{self.n}"


@dataclass(frozen=True)
class TropPoint:
    space: GroupSpace
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.space.coord_dim:
            raise DimensionMismatch(
                f"{self.space} points have {self.space.coord_dim} coordinates")
        if not in_valuation_cone(self.space, coords):
            raise NotOnSpace(f"{coords} is outside the valuation cone of {self.space}")

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def in_valuation_cone(space: GroupSpace, coords) -> bool:
    """Exact membership test for the valuation cone of the space."""
    coords = tuple(Fraction(c) for c in coords)
    if len(coords) != space.coord_dim:
        raise DimensionMismatch(
            f"{space} expects {space.coord_dim} coordinates, got {len(coords)}")
    if space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        return True
    decreasing = all(coords[i] >= coords[i + 1] for i in range(len(coords) - 1))
    if space.kind is SpaceKind.GL:
        return decreasing
    if space.kind is SpaceKind.SL:
        return decreasing and sum(coords) + coords[-1] >= 0
    return decreasing and coords[-1] >= 0  # PGL


def _certified_min_valuation(entries) -> Fraction:
    """Minimum valuation over the entries, guarding indeterminate ones."""
    best = None
    blind = None
    for s in entries:
        if s.terms:
            v = s.valuation()
            if best is None or v < best:
                best = v
        else:
            if blind is None or s.precision < blind:
                blind = s.precision
    if best is None:
        raise IndeterminateValuation("all coordinates are zero to precision",
                                     precision=blind)
    if blind is not None and blind < best:
        raise IndeterminateValuation(
            "a zero-to-precision coordinate may lie below the observed minimum",
            precision=blind)
    return best


def val_point(space: GroupSpace, point) -> TropPoint:
    """Apply the valuation map of the space to a point defined over series."""
    kind = space.kind
    if kind is SpaceKind.TORUS:
        coords = list(point)
        if len(coords) != space.n:
            raise DimensionMismatch(f"expected {space.n} coordinates")
        return TropPoint(space, tuple(c.valuation() for c in coords))
    if kind is SpaceKind.PUNCTURED_AFFINE:
        coords = list(point)
        if len(coords) != space.n:
            raise DimensionMismatch(f"expected {space.n} coordinates")
        return TropPoint(space, (_certified_min_valuation(coords),))
    if not isinstance(point, SeriesMatrix) or point.n != space.n:
        raise DimensionMismatch(f"expected an {space.n}x{space.n} series matrix")
    det = point.determinant()
    if det.is_zero_to_precision:
        raise NotOnSpace("matrix is not invertible to working precision")
    if kind is SpaceKind.SL and not (det - 1).is_zero_to_precision:
        raise NotOnSpace("determinant is not 1 up to working precision")
    alphas = invariant_factors_minors(point)
    if kind is SpaceKind.GL:
        return TropPoint(space, alphas)
    if kind is SpaceKind.SL:
        return TropPoint(space, alphas[:-1])
    last = alphas[-1]
    return TropPoint(space, tuple(a - last for a in alphas[:-1]))


# -- varieties ----------------------------------------------------------------


@dataclass(frozen=True)
class VarietySpec:
    """A subvariety given by ideal generators or a parametrization.

    ``generators`` holds expressions in the ambient coordinates
    (x[i][j] for matrix groups, x1..xn for vector spaces).  ``family``
    holds the parametrized entries: an n-by-n nested sequence for matrix
    groups or a flat sequence for vector spaces, in parameters s1..sm.
    Exactly one of the two is set.
    """
    space: GroupSpace
    generators: tuple | None = None
    family: tuple | None = None

    def __post_init__(self):
        if (self.generators is None) == (self.family is None):
            raise ValueError("specify exactly one of generators/family")
        if self.generators is not None:
            object.__setattr__(self, "generators", tuple(self.generators))
        else:
            fam = self.family
            if self.space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
                object.__setattr__(self, "family", tuple(fam))
            else:
                object.__setattr__(self, "family", tuple(tuple(r) for r in fam))

    @property
    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        entries = self.family if self.family is not None else ()
        flat = entries if self.space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE) \
            else [e for row in entries for e in row]
        for e in flat:
            for v in expr_mod.variables(e):
                if v != "t":
                    names.add(v)
        return tuple(sorted(names, key=lambda s: (len(s), s)))


class CheckVerdict(Enum):
    ON_VARIETY = "OnVariety"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CheckResult:
    verdict: CheckVerdict
    generator_index: int | None = None
    valuation: Fraction | None = None


def _point_assignment(space: GroupSpace, point) -> dict:
    if space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        coords = list(point)
        out = {f"x{i + 1}": coords[i] for i in range(len(coords))}
        if len(coords) == 2:
            out.setdefault("x", coords[0])
            out.setdefault("y", coords[1])
        return out
    return {f"x[{i + 1}][{j + 1}]": point.entries[i][j]
            for i in range(point.n) for j in range(point.n)}


def check_on_variety(spec: VarietySpec, point,
                     precision=DEFAULT_PRECISION) -> CheckResult:
    """Evaluate every generator at the point.

    A generator that is zero to precision counts as satisfied; the first
    generator with a determinate nonzero valuation yields Violated.
    """
    if spec.generators is None:
        raise ValueError("check_on_variety needs an ideal presentation")
    assignment = _point_assignment(spec.space, point)
    for idx, gen in enumerate(spec.generators):
        value = expr_mod.evaluate(gen, assignment, precision)
        if not value.is_zero_to_precision:
            return CheckResult(CheckVerdict.VIOLATED, idx, value.valuation())
    return CheckResult(CheckVerdict.ON_VARIETY)


# -- sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class SampleResult:
    points: tuple[TropPoint, ...]
    witnesses: dict
    cells: int
    skips: int
    seed: int
    draws_per_cell: int
    generators_checked: int = 0

    def coord_set(self) -> set:
        return {p.coords for p in self.points}


def _normalize_box(box, m: int):
    if m == 0:
        return []
    first = box[0] if box else None
    if isinstance(first, (list, tuple)):
        boxes = [tuple(b) for b in box]
        if len(boxes) != m:
            raise ValueError(f"need one exponent box per parameter ({m})")
    else:
        boxes = [tuple(box)] * m
    out = []
    for lo, hi in boxes:
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise ValueError("empty exponent box")
        out.append((lo, hi))
    return out


def _evaluate_family(spec: VarietySpec, assignment, precision):
    if spec.space.kind in (SpaceKind.TORUS, SpaceKind.PUNCTURED_AFFINE):
        return [expr_mod.evaluate(e, assignment, precision) for e in spec.family]
    rows = [[expr_mod.evaluate(e, assignment, precision) for e in row]
            for row in spec.family]
    return SeriesMatrix(rows)


def _sample_cell(spec, params, zero_mask, exps, draws, seed, precision,
                 check_generators):
    rng = Random(f"{seed}|{zero_mask}|{exps}")
    active = [i for i in range(len(params)) if not zero_mask[i]]
    found = []
    skips = 0
    n_draws = draws if active else 1
    for _ in range(n_draws):
        assignment = {}
        for i, name in enumerate(params):
            if zero_mask[i]:
                assignment[name] = PuiseuxSeries.zero(precision)
        for pos, i in enumerate(active):
            c = rng.randint(1, 100) * rng.choice([1, -1])
            assignment[params[i]] = PuiseuxSeries.monomial(c, exps[pos], precision)
        try:
            value = _evaluate_family(spec, assignment, precision)
            pt = val_point(spec.space, value)
        except (NotOnSpace, IndeterminateValuation):
            skips += 1
            continue
        if check_generators:
            ideal = VarietySpec(spec.space, generators=check_generators)
            verdict = check_on_variety(ideal, value, precision)
            if verdict.verdict is not CheckVerdict.ON_VARIETY:
                raise NotOnSpace(
                    f"sampled witness violates generator {verdict.generator_index}: "
                    f"the family does not parametrize the ideal's variety")
        found.append((pt, {name: str(s) for name, s in sorted(assignment.items())}))
    return found, skips


def sample_family(spec: VarietySpec, box, draws_per_cell: int = 3, seed: int = 0,
                  precision=DEFAULT_PRECISION, threads: int = 1,
                  check_generators=None) -> SampleResult:
    """Sweep a parametrized family over integer exponent boxes.

    Parameters are instantiated as c * t^e with nonzero random integer
    coefficients c, for every integer exponent tuple e in the box; for
    each subset of parameters the degenerate instantiation s_i = 0 is
    swept as well, since families may reach boundary strata only there.
    Instantiations violating the ambient-space preconditions are skipped
    and counted.  Every reported point is genuinely attained; coverage
    is complete only relative to the box (an inner approximation).

    When ``check_generators`` supplies ideal generators, every witness is
    re-verified to satisfy them (soundness cross-check); a violation
    means the family does not parametrize the ideal's variety and is an
    error, not a skip.

    Each cell draws from its own seed-derived random stream, so results
    do not depend on scheduling; the output is sorted by coordinates.
    """
    if spec.family is None:
        raise ValueError("sample_family needs a parametrized presentation")
    params = spec.parameters
    m = len(params)
    boxes = _normalize_box(box, m)
    check_generators = tuple(check_generators) if check_generators else None
    cells = []
    for zero_mask in product((False, True), repeat=m):
        active = [i for i in range(m) if not zero_mask[i]]
        ranges = [range(boxes[i][0], boxes[i][1] + 1) for i in active]
        for exps in product(*ranges):
            cells.append((zero_mask, exps))

    def run(cell):
        zero_mask, exps = cell
        return _sample_cell(spec, params, zero_mask, exps, draws_per_cell,
                            seed, precision, check_generators)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]

    skips = 0
    witnesses: dict = {}
    points: dict = {}
    for found, cell_skips in results:
        skips += cell_skips
        for pt, witness in found:
            if pt.coords not in points:
                points[pt.coords] = pt
                witnesses[pt.coords] = witness
    ordered = tuple(points[c] for c in sorted(points))
    return SampleResult(points=ordered, witnesses=witnesses, cells=len(cells),
                        skips=skips, seed=seed, draws_per_cell=draws_per_cell,
                        generators_checked=len(check_generators or ()))


# -- ray closure --------------------------------------------------------------


def _primitive(coords: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    denom = lcm(*(c.denominator for c in coords))
    ints = [int(c * denom) for c in coords]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(Fraction(v, g) for v in ints)


def ray_closure(points) -> tuple[TropPoint, ...]:
    """Close a point cloud under nonnegative rational scaling.

    Returns the origin together with the primitive generator of every
    ray met by the input; the empty cloud stays empty.
    """
    points = list(points)
    if not points:
        return ()
    space = points[0].space
    if any(p.space != space for p in points):
        raise MixedSpaces("ray closure needs points from a single space")
    dim = space.coord_dim
    origin = tuple(Fraction(0) for _ in range(dim))
    out = {origin}
    for p in points:
        if p.coords != origin:
            out.add(_primitive(p.coords))
    return tuple(TropPoint(space, c) for c in sorted(out))


# -- punctured-plane curves ----------------------------------------------------


class CurveClass(Enum):
    RAY_MINUS = "RayMinus"
    FULL_CONE = "FullCone"


def _as_polynomial(e, vars_order):
    """Expand an expression into {exponent tuple: coefficient}."""
    zero_exp = tuple(0 for _ in vars_order)
    if isinstance(e, expr_mod.Num):
        return {zero_exp: e.value} if e.value else {}
    if isinstance(e, expr_mod.Var):
        if e.name not in vars_order:
            raise ValueError(f"curve equations may only use {vars_order}, got {e.name}")
        exp = tuple(1 if v == e.name else 0 for v in vars_order)
        return {exp: Fraction(1)}
    if isinstance(e, expr_mod.Neg):
        return {k: -v for k, v in _as_polynomial(e.arg, vars_order).items()}
    if isinstance(e, (expr_mod.Add, expr_mod.Sub)):
        left = _as_polynomial(e.left, vars_order)
        right = _as_polynomial(e.right, vars_order)
        sign = 1 if isinstance(e, expr_mod.Add) else -1
        out = dict(left)
        for k, v in right.items():
            out[k] = out.get(k, Fraction(0)) + sign * v
            if not out[k]:
                del out[k]
        return out
    if isinstance(e, expr_mod.Mul):
        left = _as_polynomial(e.left, vars_order)
        right = _as_polynomial(e.right, vars_order)
        out: dict = {}
        for k1, v1 in left.items():
            for k2, v2 in right.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, Fraction(0)) + v1 * v2
                if not out[k]:
                    del out[k]
        return out
    if isinstance(e, expr_mod.Div):
        right = _as_polynomial(e.right, vars_order)
        if list(right) != [zero_exp]:
            raise ValueError("polynomial curves cannot divide by a variable")
        c = right[zero_exp]
        return {k: v / c for k, v in _as_polynomial(e.left, vars_order).items()}
    if isinstance(e, expr_mod.Pow):
        if e.exponent.denominator != 1 or e.exponent < 0:
            raise ValueError("curve equations need nonnegative integer exponents")
        out = {zero_exp: Fraction(1)}
        base = _as_polynomial(e.base, vars_order)
        for _ in range(int(e.exponent)):
            nxt: dict = {}
            for k1, v1 in out.items():
                for k2, v2 in base.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    nxt[k] = nxt.get(k, Fraction(0)) + v1 * v2
                    if not nxt[k]:
                        del nxt[k]
            out = nxt
        return out
    raise TypeError(f"not an expression node: {e!r}")


def punctured_curve_classifier(generator) -> CurveClass:
    """Classify the value set of a plane curve off the origin.

    The whole cone is hit exactly when the curve passes through the
    origin, i.e. when the constant term of its equation vanishes;
    otherwise only the nonpositive ray is.
    """
    if isinstance(generator, str):
        generator = expr_mod.parse(generator, free_vars=("x", "y"))
    poly = _as_polynomial(generator, ("x", "y"))
    if not poly:
        raise ValueError("the zero polynomial does not define a curve")
    constant = poly.get((0, 0), Fraction(0))
    return CurveClass.RAY_MINUS if constant else CurveClass.FULL_CONE
