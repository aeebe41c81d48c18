"""Quadratic rescaling of defining functions near isosceles points.

The translation tableaux of the staircase words gen_W(n, k) grow by a
fixed generator tableau translated one step further for each k.  This
module detects that growth, reduces tableaux modulo the kernel of the
evaluation character at the isosceles point, and computes the limits

    G(v) = lim_k F_k(v / k^2)

of the associated defining functions.  The limits are affine; their
coefficients come from 2x2 determinants of tableau values.  Stacking
four of the limit functions cuts out a quadrilateral, the shape of the
rescaled orbit tile, which omega() constructs and cross-checks.

Coordinates: v = X - X0 where X0 is the isosceles point, and u = zeta*v
is the chart in which the quadrilateral has rational vertices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd

from .families import gen_W
from .fourier import FourierTableau, translation_tableau
from .unfolding import ParameterPoint, as_point, unfold

TAU = 2.0 * math.pi

__all__ = [
    "GrowthContext",
    "GrowthFamily",
    "QrtResult",
    "PivotStrip",
    "LimitQuadrilateral",
    "QhFamily",
    "QhPoints",
    "PivotFunction",
    "detect_growth",
    "modular_transform",
    "spine_growth",
    "pair_growth",
    "hinge_growth",
    "qrt",
    "rescaled_value",
    "convergence_report",
    "finite_difference_slopes",
    "limit_function",
    "pivot_strip",
    "omega",
    "qh_points",
    "partner_functions",
    "tile_limit_comparison",
    "w_base_corners",
    "w_step_corners",
    "W_PAIRS",
]


def _signed_value(t: FourierTableau, X) -> complex:
    return t.global_sign * t.evaluate(X)


def _signed_partial(t: FourierTableau, X, j: int) -> complex:
    if j not in (1, 2):
        raise ValueError("coordinate index must be 1 or 2")
    point = as_point(X)
    acc = 0.0j
    for x, y, w in t.terms:
        acc += w * 1j * (x, y)[j - 1] * cmath.exp(1j * point.dot((x, y)))
    return t.global_sign * acc


def _negated(t: FourierTableau) -> FourierTableau:
    return FourierTableau(t.terms, -t.global_sign)


def _difference(a: FourierTableau, b: FourierTableau) -> FourierTableau:
    items = [((x, y), w) for x, y, w in a.signed_terms()]
    items += [((x, y), -w) for x, y, w in b.signed_terms()]
    return FourierTableau.from_terms(items)


# ------------------------------------------------------- growth families

@dataclass(frozen=True)
class GrowthContext:
    """Base point with rational coordinates, the translation step of the
    growing tableaux, and the character data of the base point.

    klass(v) is constant on the fibers of v -> exp(i X0 . v); the step
    must lie in its kernel, so shifting a tableau by the step does not
    change its value at the base point.
    """

    step: tuple[int, int]
    base_point: ParameterPoint
    modulus: int
    weights: tuple[int, int]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be a positive integer")
        if self.klass(self.step) != 0:
            raise ValueError(
                f"step {self.step} is not in the kernel of the base-point "
                "character; its residue class is "
                f"{self.klass(self.step)} mod {self.modulus}")

    @classmethod
    def from_fractions(cls, p1: int, q1: int, p2: int, q2: int,
                       step: tuple[int, int]) -> "GrowthContext":
        """Context at the point 2*pi*(p1/q1, p2/q2)."""
        if q1 < 1 or q2 < 1:
            raise ValueError("denominators must be positive")
        g = gcd(q1, q2)
        modulus = q1 * q2 // g
        weights = (p1 * (q2 // g) % modulus, p2 * (q1 // g) % modulus)
        point = as_point((TAU * p1 / q1, TAU * p2 / q2))
        return cls(tuple(step), point, modulus, weights)

    @classmethod
    def veech(cls, n: int) -> "GrowthContext":
        """Context at the isosceles point (pi/2n, pi/2n) with the
        staircase step (2n-2, -(2n-2))."""
        if n < 2:
            raise ValueError("isosceles points need n >= 2")
        return cls((2 * n - 2, -(2 * n - 2)), ParameterPoint.veech(n),
                   4 * n, (1, 1))

    def klass(self, v) -> int:
        return (self.weights[0] * v[0] + self.weights[1] * v[1]) % self.modulus

    def character(self, klass: int) -> complex:
        return cmath.exp(2j * math.pi * klass / self.modulus)


@dataclass(frozen=True)
class GrowthFamily:
    """Tableau family R_k = base + sum_{j<k} generator shifted j steps."""

    base: FourierTableau
    generator: FourierTableau
    context: GrowthContext

    def tableau(self, k: int) -> FourierTableau:
        if k < 0:
            raise ValueError("index must be nonnegative")
        sx, sy = self.context.step
        items = [((x, y), w) for x, y, w in self.base.signed_terms()]
        for j in range(k):
            items += [((x + j * sx, y + j * sy), w)
                      for x, y, w in self.generator.signed_terms()]
        return FourierTableau.from_terms(items)

    def value(self, k: int, X) -> complex:
        return self.tableau(k).evaluate(X)

    def base_value(self) -> complex:
        return _signed_value(self.base, self.context.base_point)

    def generator_value(self) -> complex:
        return _signed_value(self.generator, self.context.base_point)

    def generator_gradient(self) -> tuple[complex, complex]:
        X0 = self.context.base_point
        return (_signed_partial(self.generator, X0, 1),
                _signed_partial(self.generator, X0, 2))

    def negated(self) -> "GrowthFamily":
        return GrowthFamily(_negated(self.base), _negated(self.generator),
                            self.context)


def detect_growth(tableaux, context: GrowthContext) -> GrowthFamily:
    """Extract (base, generator) from consecutive tableaux, or fail.

    Requires at least three tableaux; the difference of each adjacent
    pair, pulled back by the accumulated step, must be one fixed
    generator.
    """
    tabs = list(tableaux)
    if len(tabs) < 3:
        raise ValueError("need at least three consecutive tableaux to "
                         "detect arithmetic growth")
    sx, sy = context.step
    generator = _difference(tabs[1], tabs[0])
    for k in range(1, len(tabs) - 1):
        step_k = _difference(tabs[k + 1], tabs[k]).shifted(-k * sx, -k * sy)
        if step_k.signed_terms() != generator.signed_terms():
            raise ValueError(
                f"growth is not arithmetic: the difference at index {k} "
                "does not match the difference at index 0")
    return GrowthFamily(tabs[0], generator, context)


def modular_transform(t: FourierTableau, context: GrowthContext):
    """Collapse a tableau to residue classes of the base-point character.

    Returns (masses, value): masses maps each class in Z/modulus to the
    total integer weight in its fiber, and value is the evaluation at
    the base point, sum of mass * character(class).
    """
    masses: dict[int, int] = {}
    for x, y, w in t.signed_terms():
        key = context.klass((x, y))
        masses[key] = masses.get(key, 0) + w
    masses = {k: m for k, m in sorted(masses.items()) if m}
    value = sum(m * context.character(k) for k, m in masses.items())
    return masses, value


# --------------------------------------------- the staircase tableau data

def w_base_corners(n: int) -> list[tuple[int, int]]:
    """Corner labels of the 3-spine square path of gen_W(n, 0)."""
    if n < 3:
        raise ValueError("staircase words need n >= 3")
    M = 2 * n - 2
    return [(0, 1), (M, 1), (M, 1 - M), (2 * M, 1 - M), (2 * M, 1 - 2 * M),
            (M - 2, 1 - 2 * M), (M - 2, 1 - M), (-2, 1 - M),
            (-2, -1 - 2 * M), (M, -1 - 2 * M), (M, -1 - M), (0, -1 - M)]


def w_step_corners(n: int) -> list[tuple[int, int]]:
    """Corner labels gained by the 3-spine square path per staircase step."""
    if n < 3:
        raise ValueError("staircase words need n >= 3")
    M = 2 * n - 2
    return [(3 * M, 1 - 2 * M), (3 * M, 1 - 3 * M), (2 * M - 2, 1 - 3 * M),
            (2 * M - 2, 1 - 2 * M), (M - 2, -1 - 2 * M), (M - 2, -1 - 3 * M),
            (2 * M, -1 - 3 * M), (2 * M, -1 - 2 * M)]


def spine_growth(n: int, d: int = 3, depth: int = 4) -> GrowthFamily:
    """Growth family of the d-spine tableaux of gen_W(n, k), k < depth."""
    context = GrowthContext.veech(n)
    tabs = [translation_tableau(gen_W(n, k), d) for k in range(depth)]
    return detect_growth(tabs, context)


# The three consecutive pivot pairs whose defining functions have
# distinct rescaling limits; each is a slice of the square-path corners.
W_PAIRS = ("a1:b2", "b2:b3", "b3:a4")

_PAIR_SLICES = {
    # pair: (base slice, base sign, step slice, step sign)
    "a1:b2": (slice(0, 5), -1, slice(0, 2), +1),
    "b2:b3": (slice(5, 8), -1, slice(2, 4), -1),
    "b3:a4": (slice(8, 9), +1, slice(4, 6), -1),
}


def pair_growth(n: int, pair: str) -> GrowthFamily:
    """Numerator family of the defining function of one pivot pair.

    The numerator path is the part of the square path joining the two
    pivot vertices, so its corners are a slice of the full corner list.
    """
    if pair not in _PAIR_SLICES:
        raise ValueError(f"unknown pair {pair!r}; choose from {W_PAIRS}")
    base_slice, base_sign, step_slice, step_sign = _PAIR_SLICES[pair]
    base = FourierTableau.from_vertices(w_base_corners(n)[base_slice],
                                        base_sign)
    step = FourierTableau.from_vertices(w_step_corners(n)[step_slice],
                                        step_sign)
    return GrowthFamily(base, step, GrowthContext.veech(n))


def hinge_growth(n: int, label=(0, 0), weight: int = -1) -> GrowthFamily:
    """Constant family: the indicator of a single fixed edge label."""
    context = GrowthContext.veech(n)
    base = FourierTableau.from_terms([(tuple(label), weight)])
    return GrowthFamily(base, FourierTableau.from_terms([]), context)


# ------------------------------------------------------------ the limits

@dataclass(frozen=True)
class QrtResult:
    """Limit data of F_k(v/k^2) for a numerator/denominator family pair.

    limit holds (A, B, C) with G(v) = A + B*v1 + C*v2; slope1/slope2 are
    -B and -C, split into the determinant contributions.
    """

    context: GrowthContext
    f00: float
    delta: float
    delta1: complex
    delta2: complex
    slope1: float
    slope2: float
    limit: tuple[float, float, float]
    imag_residue: float

    def limit_value(self, v) -> float:
        A, B, C = self.limit
        return A + B * v[0] + C * v[1]


def qrt(p_family: GrowthFamily, q_family: GrowthFamily,
        tol: float = 1e-9) -> QrtResult:
    """Rescaling limit of F_k = Im(P_k conj Q_k) near the base point.

    Both generator values and the cross determinant must be real up to
    tol; the quadratic terms of the rescaled function cancel exactly
    when they are, leaving an affine limit.
    """
    if p_family.context != q_family.context:
        raise ValueError("the families live at different base points")
    ctx = p_family.context
    P0 = p_family.base_value()
    Ps = p_family.generator_value()
    Q0 = q_family.base_value()
    Qs = q_family.generator_value()
    dPs = p_family.generator_gradient()
    dQs = q_family.generator_gradient()

    delta_c = P0 * Qs - Ps * Q0
    residues = {
        "numerator generator": Ps.imag,
        "denominator generator": Qs.imag,
        "cross determinant": delta_c.imag,
    }
    for name, im in residues.items():
        if abs(im) > tol:
            raise ValueError(
                f"reality hypothesis fails: the {name} has imaginary "
                f"part {im!r}")

    delta = delta_c.real
    delta1 = Ps * dQs[0] - dPs[0] * Qs
    delta2 = Ps * dQs[1] - dPs[1] * Qs
    slope1 = ctx.step[0] * delta / 2.0 + delta1.imag
    slope2 = ctx.step[1] * delta / 2.0 + delta2.imag
    f00 = (P0 * Q0.conjugate()).imag
    return QrtResult(
        context=ctx, f00=f00, delta=delta, delta1=delta1, delta2=delta2,
        slope1=slope1, slope2=slope2,
        limit=(f00, -slope1, -slope2),
        imag_residue=max(abs(im) for im in residues.values()))


def rescaled_value(p_family: GrowthFamily, q_family: GrowthFamily,
                   k: int, v) -> float:
    """F_k evaluated at base_point + v / k^2."""
    X = p_family.context.base_point.shifted(v[0] / k ** 2, v[1] / k ** 2)
    return (p_family.value(k, X) * q_family.value(k, X).conjugate()).imag


def _unit_disk_grid(side: int):
    pts = []
    for i in range(side):
        for j in range(side):
            vx = -1.0 + 2.0 * i / (side - 1)
            vy = -1.0 + 2.0 * j / (side - 1)
            if math.hypot(vx, vy) <= 1.0:
                pts.append((vx, vy))
    return pts


def convergence_report(p_family: GrowthFamily, q_family: GrowthFamily,
                       ks=(10, 20, 40), side: int = 9):
    """sup |F_k(v/k^2) - G(v)| over a grid in the unit disk, per k."""
    result = qrt(p_family, q_family)
    pts = _unit_disk_grid(side)
    report = []
    for k in ks:
        sup = max(abs(rescaled_value(p_family, q_family, k, v)
                      - result.limit_value(v)) for v in pts)
        report.append((k, sup))
    return report


def finite_difference_slopes(p_family: GrowthFamily,
                             q_family: GrowthFamily,
                             k: int, h: float = 1e-6):
    """Estimate (slope1, slope2) from central differences of F_k.

    The gradient of F_k at the base point is -slope_j * k^2 plus a term
    linear in k, so the plain difference quotient at one k carries an
    O(1/k) error; combining the quotients at k and k/2 cancels the
    linear term and leaves O(1/k^2).
    """
    if k < 2:
        raise ValueError("need k >= 2 for the two-scale difference")
    X0 = p_family.context.base_point

    def quotient(kk):
        def F(X):
            return (p_family.value(kk, X)
                    * q_family.value(kk, X).conjugate()).imag
        out = []
        for e in ((h, 0.0), (0.0, h)):
            hi = F(X0.shifted(e[0], e[1]))
            lo = F(X0.shifted(-e[0], -e[1]))
            out.append(-(hi - lo) / (2.0 * h * kk ** 2))
        return out

    full = quotient(k)
    half = quotient(k // 2)
    w = 1.0 / (1.0 - (k // 2) / k)
    return tuple(w * f + (1.0 - w) * g for f, g in zip(full, half))


def limit_function(n: int, pair: str) -> tuple[float, float, float]:
    """Affine limit (A, B, C) of the defining function of one pivot pair."""
    return qrt(pair_growth(n, pair), spine_growth(n, 3)).limit


# ------------------------------------------------------- the pivot strip

def _oriented(family: GrowthFamily) -> GrowthFamily:
    # the 1-spine path runs against the 2-spine, flipping the tableau sign
    if family.base_value().real < 0:
        return family.negated()
    return family


@dataclass(frozen=True)
class PivotStrip:
    """The diagonal strip |v1 - v2| < half_width containing every tile
    of a stable word whose unfolding keeps a fixed extreme edge."""

    n: int
    half_width: float
    limit: tuple[float, float, float]

    def margin(self, v) -> float:
        return self.half_width - abs(v[0] - v[1])

    def functions(self) -> tuple[tuple[float, float, float],
                                 tuple[float, float, float]]:
        """The two affine functions cutting the strip, northwest hinge
        first; each is positive inside."""
        A, B, C = self.limit
        return (A, B, C), (A, C, B)


def pivot_strip(n: int) -> PivotStrip:
    """Strip limit from the indicator of the fixed hinge edge against
    the 2-spine holonomy."""
    result = qrt(hinge_growth(n), _oriented(spine_growth(n, 2)))
    c, s = math.cos(math.pi / (2 * n)), math.sin(math.pi / (2 * n))
    # G = 8cs (1 + (v1 - v2)/C_n) vanishes on v1 - v2 = -C_n
    half_width = s / ((2 * n - 2) * c)
    expected = (8 * c * s, 8 * c * s / half_width, -8 * c * s / half_width)
    if any(abs(a - b) > 1e-9 * max(1.0, abs(b))
           for a, b in zip(result.limit, expected)):
        raise ValueError(f"hinge limit {result.limit} does not cut a "
                         f"diagonal strip of half width {half_width}")
    return PivotStrip(n, half_width, result.limit)


# ---------------------------------------------- the limit quadrilateral

def _fudge(n: int, spine_type: int) -> float:
    # sin^2 of the angle opposite the spine edge, at the isosceles point
    x = math.pi / (2 * n)
    th = (x, x, 2 * x)[spine_type - 1]
    return math.sin(th) ** 2


def _swap(f):
    return (f[0], f[2], f[1])


def _combine(*pairs):
    return tuple(sum(c * f[i] for c, f in pairs) for i in range(3))


def _is_multiple(f, g, tol=1e-9) -> bool:
    # positive proportionality
    ratio = None
    for a, b in zip(f, g):
        if abs(a) < tol and abs(b) < tol:
            continue
        if abs(b) < tol:
            return False
        r = a / b
        if ratio is None:
            ratio = r
        elif abs(r - ratio) > tol * max(1.0, abs(ratio)):
            return False
    return ratio is not None and ratio > 0


@dataclass(frozen=True)
class LimitQuadrilateral:
    """Rescaled limit shape of the staircase orbit tiles at one
    isosceles point, in the chart u = zeta * (X - X0) * k^2.

    functions are affine (A, B, C), nonnegative exactly on the
    quadrilateral; vertices are listed so that consecutive functions
    share consecutive vertices.
    """

    n: int
    zeta: float
    corner: float
    squeeze: float
    functions: tuple
    vertices: tuple

    def contains(self, u, tol: float = 0.0) -> bool:
        return all(A + B * u[0] + C * u[1] >= -tol
                   for A, B, C in self.functions)

    def area(self) -> float:
        acc = 0.0
        verts = self.vertices
        for i, (x1, y1) in enumerate(verts):
            x2, y2 = verts[(i + 1) % len(verts)]
            acc += x1 * y2 - x2 * y1
        return abs(acc) / 2.0

    def dot_matrix(self):
        return [[A + B * u1 + C * u2 for (u1, u2) in self.vertices]
                for (A, B, C) in self.functions]

    def strip_contact(self) -> tuple[float, float]:
        """min and max of u1 - u2 over the vertices; the quadrilateral
        touches both walls of the rescaled pivot strip when these are
        -1 and +1."""
        diffs = [u1 - u2 for u1, u2 in self.vertices]
        return min(diffs), max(diffs)


def _bracket_table(n: int):
    """All sixteen combined limit functions [i, j], in the normalization
    that makes values of different spine types comparable."""
    f3 = _fudge(n, 3)
    f1 = _fudge(n, 1)
    strip = pivot_strip(n)
    t11 = tuple(f1 * x for x in strip.limit)
    t22 = _swap(t11)
    t12 = tuple(f3 * x for x in limit_function(n, "a1:b2"))
    t43 = tuple(f3 * x for x in limit_function(n, "b3:a4"))
    tbb = tuple(f3 * x for x in limit_function(n, "b2:b3"))

    B = {}
    B[1, 1] = t11
    B[3, 3] = t11
    B[2, 2] = t22
    B[4, 4] = t22
    B[1, 2] = t12
    B[4, 3] = t43
    B[1, 3] = _combine((1, B[1, 2]), (-1, tbb))
    B[4, 2] = _combine((1, B[4, 3]), (1, tbb))
    B[1, 4] = _combine((1, B[1, 3]), (-1, B[4, 3]), (1, B[4, 4]))
    B[2, 1] = _combine((1, B[2, 2]), (-1, B[1, 2]), (1, B[1, 1]))
    B[2, 3] = _combine((1, B[2, 2]), (-1, tbb))
    B[2, 4] = _combine((1, B[2, 3]), (-1, B[4, 3]), (1, B[4, 4]))
    B[3, 1] = _combine((-1, B[1, 3]), (1, B[3, 3]), (1, B[1, 1]))
    B[3, 2] = _combine((1, B[3, 3]), (1, tbb))
    B[3, 4] = _combine((-1, B[4, 3]), (1, B[3, 3]), (1, B[4, 4]))
    B[4, 1] = _combine((1, B[4, 4]), (1, B[1, 1]), (-1, B[1, 4]))
    return B


def _check_bracket_relations(n: int, B, tol=1e-9):
    def close(f, g):
        return all(abs(a - b) <= tol * max(1.0, abs(b))
                   for a, b in zip(f, g))

    checks = [
        ("[42] is the transpose of [13]", close(B[4, 2], _swap(B[1, 3]))),
        ("[31] is the transpose of [24]", close(B[3, 1], _swap(B[2, 4]))),
        ("mean of [13],[42] is [12]",
         close(_combine((0.5, B[1, 3]), (0.5, B[4, 2])), B[1, 2])),
        ("[12] equals [43]", close(B[1, 2], B[4, 3])),
        ("mean of [24],[31] is [21]",
         close(_combine((0.5, B[2, 4]), (0.5, B[3, 1])), B[2, 1])),
        ("[21] equals [34]", close(B[2, 1], B[3, 4])),
        ("mean of [13],[31] is [11]",
         close(_combine((0.5, B[1, 3]), (0.5, B[3, 1])), B[1, 1])),
        ("[22] is the transpose of [11]", close(B[2, 2], _swap(B[1, 1]))),
        ("[14] equals [23]", close(B[1, 4], B[2, 3])),
        ("[32] is the transpose of [14]", close(B[3, 2], _swap(B[1, 4]))),
        ("[32] equals [41]", close(B[3, 2], B[4, 1])),
    ]
    c = math.cos(math.pi / (2 * n))
    t = 2 * c * c / (n - 1)
    checks.append((
        "the hinge functions combine convexly to [14]",
        close(_combine((t, B[1, 1]), (1 - t, B[4, 4])), B[1, 4])))
    for name, ok in checks:
        if not ok:
            raise ValueError(f"bracket relation failed at n={n}: {name}")


def omega(n: int, tol: float = 1e-9) -> LimitQuadrilateral:
    """Construct the limit quadrilateral and verify its defining data.

    The four extreme bracket functions cut the shape; every other
    bracket is a nonnegative combination of them, which the relation
    checks confirm.  The vertices come out of the pairwise zero-line
    intersections, and the function/vertex dot matrix must be
    nonnegative with exactly two zeros in each row and column.
    """
    if n < 3:
        raise ValueError("the limit quadrilateral needs n >= 3")
    B = _bracket_table(n)
    _check_bracket_relations(n, B, tol)

    c, s = math.cos(math.pi / (2 * n)), math.sin(math.pi / (2 * n))
    zeta = 2 * (n - 1) * c / s

    def normalized(f):
        scaled = (f[0], f[1] / zeta, f[2] / zeta)
        return tuple(x / abs(scaled[0]) for x in scaled)

    # listed so that consecutive functions share a vertex
    functions = (normalized(B[4, 2]), normalized(B[2, 4]),
                 normalized(B[3, 1]), normalized(B[1, 3]))

    def meet(f, g):
        det = f[1] * g[2] - f[2] * g[1]
        if abs(det) < tol:
            raise ValueError("zero lines are parallel")
        return ((-f[0] * g[2] + g[0] * f[2]) / det,
                (-g[0] * f[1] + f[0] * g[1]) / det)

    m = len(functions)
    # northwest corner first; function i vanishes on vertices i+1, i+2
    vertices = tuple(meet(functions[(i + 2) % m], functions[(i + 3) % m])
                     for i in range(m))

    matrix = [[f[0] + f[1] * u1 + f[2] * u2 for (u1, u2) in vertices]
              for f in functions]
    for i, row in enumerate(matrix):
        zeros = sum(1 for x in row if abs(x) <= tol)
        if zeros != 2 or any(x < -tol for x in row):
            raise ValueError(f"dot matrix row {i} breaks the hull "
                             f"certificate: {row}")
    for j in range(m):
        col = [matrix[i][j] for i in range(m)]
        if sum(1 for x in col if abs(x) <= tol) != 2:
            raise ValueError(f"dot matrix column {j} breaks the hull "
                             f"certificate: {col}")

    corner = 0.5 - 0.5 / n
    squeeze = 0.5 - math.tan(math.pi / (2 * n)) ** 2 / 2.0
    quad = LimitQuadrilateral(n, zeta, corner, squeeze, functions, vertices)
    lo, hi = quad.strip_contact()
    if abs(lo + 1.0) > tol or abs(hi - 1.0) > tol:
        raise ValueError(f"quadrilateral misses the strip walls: {lo}, {hi}")
    return quad


# --------------------------------------------------- the level edge data

@dataclass(frozen=True)
class QhFamily:
    """One arithmetic family of edge labels that turn horizontal at the
    isosceles point; labels share their coordinate sum and are sorted
    west to east."""

    index: int
    label_sum: int
    labels: tuple
    spine_types: tuple

    @property
    def northwest(self):
        return self.labels[0]

    @property
    def southeast(self):
        return self.labels[-1]

    @property
    def hinge(self):
        # families 1 and 3 hinge at their northwest ends, 2 and 4 at
        # their southeast ends
        return self.northwest if self.index in (1, 3) else self.southeast


@dataclass(frozen=True)
class QhPoints:
    n: int
    k: int
    families: tuple

    def family(self, index: int) -> QhFamily:
        if not 1 <= index <= len(self.families):
            raise ValueError(f"family index must be 1..{len(self.families)}")
        return self.families[index - 1]


def qh_points(n: int, k: int) -> QhPoints:
    """Group the horizontal-at-the-isosceles-point edge labels of
    gen_W(n, k) into their four families."""
    word = gen_W(n, k)
    u = unfold(word, ParameterPoint.veech(n))
    types: dict[tuple, set] = {}
    for (i, d), label in u.edge_labels.items():
        types.setdefault(label, set()).add(d)
    by_sum: dict[int, list] = {}
    for label in types:
        total = label[0] + label[1]
        if total % (2 * n) == 0:
            by_sum.setdefault(total, []).append(label)
    expected = [-4 * n, -2 * n, 0, 2 * n]
    if sorted(by_sum) != expected:
        raise ValueError(f"expected label families with sums {expected}, "
                         f"found {sorted(by_sum)}")
    families = []
    for index, total in enumerate(expected, start=1):
        labels = tuple(sorted(by_sum[total]))
        spine_types = tuple(tuple(sorted(types[lab])) for lab in labels)
        families.append(QhFamily(index, total, labels, spine_types))
    return QhPoints(n, k, tuple(families))


@dataclass(frozen=True)
class PivotFunction:
    """Defining function of one extreme edge: the indicator of its label
    against the holonomy of its own spine type, scaled to be comparable
    across types."""

    label: tuple
    spine_type: int
    tableau: FourierTableau

    def value(self, X) -> float:
        point = as_point(X)
        q = _signed_value(self.tableau, point)
        p = -cmath.exp(1j * point.dot(self.label))
        th = (point.x1, point.x2, point.x1 + point.x2)[self.spine_type - 1]
        return math.sin(th) ** 2 * (p * q.conjugate()).imag


def partner_functions(n: int, k: int, index: int):
    """The extreme-edge functions of one family, northwest then
    southeast.  The two edges have different spine types and the
    functions agree after swapping the coordinates."""
    qh = qh_points(n, k)
    family = qh.family(index)
    word = gen_W(n, k)
    V = ParameterPoint.veech(n)
    out = []
    for label, types in ((family.northwest, family.spine_types[0]),
                         (family.southeast, family.spine_types[-1])):
        if len(types) != 1:
            raise ValueError(f"extreme label {label} has ambiguous "
                             f"spine types {types}")
        d = types[0]
        tab = translation_tableau(word, d)
        if _signed_value(tab, V).real < 0:
            tab = _negated(tab)
        out.append(PivotFunction(label, d, tab))
    return tuple(out)


# ------------------------------------------------- raster cross-checks

def tile_limit_comparison(n: int, k: int, resolution: int = 160,
                          pad: float = 0.2) -> dict:
    """Compare a rescaled orbit-tile raster with the limit quadrilateral.

    Rasters the tile of gen_W(n, k) over the quadrilateral's padded
    bounding box in the u-chart and reports the symmetric difference as
    a fraction of the quadrilateral's area.
    """
    from .tiles import scan

    quad = omega(n)
    word = gen_W(n, k)
    V = ParameterPoint.veech(n)
    scale = quad.zeta * k * k
    u1s = [v[0] for v in quad.vertices]
    u2s = [v[1] for v in quad.vertices]
    span1 = max(u1s) - min(u1s)
    span2 = max(u2s) - min(u2s)
    lo1, hi1 = min(u1s) - pad * span1, max(u1s) + pad * span1
    lo2, hi2 = min(u2s) - pad * span2, max(u2s) + pad * span2
    region = (V.x1 + lo1 / scale, V.x1 + hi1 / scale,
              V.x2 + lo2 / scale, V.x2 + hi2 / scale)
    raster = scan(word, region, resolution)
    cell1, cell2 = raster.cell_size
    cell_area = (cell1 * scale) * (cell2 * scale)
    mismatched = 0
    in_tile_cells = 0
    in_quad_cells = 0
    for i in range(raster.resolution[0]):
        for j in range(raster.resolution[1]):
            x1, x2 = raster.cell_center(i, j)
            u = ((x1 - V.x1) * scale, (x2 - V.x2) * scale)
            in_quad = quad.contains(u)
            in_tile = bool(raster.membership[i, j])
            in_tile_cells += in_tile
            in_quad_cells += in_quad
            mismatched += in_tile != in_quad
    area = quad.area()
    return {
        "n": n,
        "k": k,
        "resolution": resolution,
        "area": area,
        "tile_cells": in_tile_cells,
        "quad_cells": in_quad_cells,
        "symmetric_difference": mismatched * cell_area,
        "fraction": mismatched * cell_area / area,
    }
