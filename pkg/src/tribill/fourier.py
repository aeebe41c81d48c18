"""Integer Fourier tableaux for height comparisons on unfoldings.

Every edge of an unfolding makes, with the first side, an angle X . e
where e is the edge's integer label, so a chain of unit edges of one type
sums to an exponential polynomial with integer frequencies.  Two such sums
matter: Q, taken over the whole d-spine, which evaluates to the direction
of the translation, and P, taken over a sub-path connecting two boundary
vertices p (left) and q (right).  The function

    F(X) = Im(+-P(X) conj(Q(X)))

is then positive exactly when q sits higher than p in the frame where the
translation points right, and vanishes when they are level.  The tableaux
are exact integer data; only evaluation uses floats.

The sign +-1 is (-1)^u where u is the position of P's initial vertex in
Q's alternating colouring; when that vertex does not lie on Q the rule is
undefined and the builder refuses rather than guess.

The second half of the file treats one concrete family: the 20-dart words
near the right-isosceles points.  There the spine exponents are the fixed
integers +-1, +-3, which makes products with conj(Q) exact integer Laurent
polynomials in omega = E(pi/2n); the leader heights, the line on which the
outermost pair stays level, and the nine derivative pairs at the corner
point all reduce to such polynomials and are computed exactly.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

from .families import b_holonomy_exponents, gen_B
from .unfolding import (ParameterPoint, Unfolding, _VertexClasses, as_point,
                        dart_decomposition, spine, _spine_path, unfold)
from .words import Point, Word, as_word, is_stable_parity

__all__ = [
    "TrigConstants", "FourierTableau", "DefiningFunction",
    "UnsupportedStartError", "build_PQ", "translation_tableau", "evaluate",
    "F_value", "F_normalized", "LeaderVertex", "BLeaders", "leaders_B",
    "elimination_rows_B", "elimination_value", "H11_on_line",
    "PairDerivative", "FinalDerivatives", "final_derivatives",
    "pseudo_parallel_check",
]

_DEFAULT_AT = (0.3, 0.35)


class UnsupportedStartError(ValueError):
    """The difference path starts at a vertex not on the translation
    tableau, so the global sign rule does not apply."""


class TrigConstants:
    """Constants of the n-th right-isosceles point (pi/2n, pi/2n).

    omega = E(pi/2n) is the primitive direction; c, s its cosine and sine;
    cp, sp the double-angle values; lam = 1/(2c) the short-edge length at
    the point; lam1, lam2 the partial derivatives of the type-1 edge
    length there (the type-2 edge swaps them); sec = 1/cp.
    """

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 2:
            raise ValueError(f"need integer n >= 2, got {n!r}")
        self.n = n
        t = math.pi / (2 * n)
        self.omega = cmath.exp(1j * t)
        self.c = math.cos(t)
        self.s = math.sin(t)
        self.cp = math.cos(2 * t)
        self.sp = math.sin(2 * t)
        self.lam = 1 / (2 * self.c)
        # l1 = sin(x2)/sin(x1+x2) differentiated at the point
        self.lam1 = 1 / (4 * self.c ** 2 * self.s)
        self.lam2 = -self.cp / (4 * self.c ** 2 * self.s)
        self.sec = 1 / self.cp if self.cp else math.inf

    def __repr__(self) -> str:
        return f"TrigConstants(n={self.n})"


# ---------------------------------------------------------------- tableaux

@dataclass(frozen=True)
class FourierTableau:
    """A finite integer-weighted set of frequencies in Z^2.

    terms are sorted (x, y, weight) triples with nonzero weights; the
    global sign is kept separate so evaluation stays the plain sum
    sum(w * E(X . (x, y))).
    """

    terms: tuple[tuple[int, int, int], ...]
    global_sign: int = 1

    @classmethod
    def from_terms(cls, items, global_sign: int = 1) -> "FourierTableau":
        """items: iterable of ((x, y), weight); merges and drops zeros."""
        acc: dict[Point, int] = {}
        for v, w in items:
            key = (int(v[0]), int(v[1]))
            acc[key] = acc.get(key, 0) + int(w)
        terms = tuple(sorted((x, y, w) for (x, y), w in acc.items() if w))
        if global_sign not in (1, -1):
            raise ValueError("global sign must be +-1")
        return cls(terms, global_sign)

    @classmethod
    def from_vertices(cls, vertices, global_sign: int = 1) -> "FourierTableau":
        """Alternating weights +1, -1, ... along the given vertex list."""
        return cls.from_terms(
            ((v, (-1) ** i) for i, v in enumerate(vertices)), global_sign)

    @classmethod
    def from_json(cls, rows, global_sign: int = 1) -> "FourierTableau":
        return cls.from_terms((((x, y), w) for x, y, w in rows), global_sign)

    def rows(self) -> list[list[int]]:
        """JSON form: a list of [x, y, weight] triples."""
        return [[x, y, w] for x, y, w in self.terms]

    def evaluate(self, X) -> complex:
        point = as_point(X)
        return sum(w * cmath.exp(1j * point.dot((x, y)))
                   for x, y, w in self.terms)

    def signed_terms(self) -> tuple[tuple[int, int, int], ...]:
        s = self.global_sign
        return tuple((x, y, s * w) for x, y, w in self.terms)

    def shifted(self, dx: int, dy: int) -> "FourierTableau":
        return FourierTableau(
            tuple(sorted((x + dx, y + dy, w) for x, y, w in self.terms)),
            self.global_sign)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def evaluate(t: FourierTableau, X) -> complex:
    return t.evaluate(X)


@dataclass(frozen=True)
class DefiningFunction:
    """F = Im(+-P conj Q) for one vertex pair of one word.

    left and right are chain names ("a3", "b7") valid for the unfolding at
    the point the function was built at; the tableaux themselves do not
    depend on that point.  F > 0 iff the right vertex is strictly higher.
    """

    word: Word
    left: str
    right: str
    spine_type: int
    P: FourierTableau
    Q: FourierTableau

    def value(self, X) -> float:
        point = as_point(X)
        return self.P.global_sign * (
            self.P.evaluate(point) * self.Q.evaluate(point).conjugate()).imag

    def normalized(self, X) -> float:
        """F scaled by sin^2 of the angle opposite the spine type; the
        scale makes values of different spine types comparable, since
        sin(theta_d)/l_d is the same for d = 1, 2, 3."""
        point = as_point(X)
        th = (point.x1, point.x2, point.x1 + point.x2)[self.spine_type - 1]
        return math.sin(th) ** 2 * self.value(point)


def F_value(f: DefiningFunction, X) -> float:
    return f.value(X)


def F_normalized(f: DefiningFunction, X) -> float:
    return f.normalized(X)


# ------------------------------------------------------------ the builder

def _spine_nodes(word: Word, u: Unfolding, d: int):
    """Distinct d-edge labels over one period, with a slot map.

    Glued copies share a label and are consecutive along the word, so one
    pass with duplicate removal suffices; the trailing triangle repeats
    either node 0 or the last node.  Stability makes the labels periodic
    with no shift, so index arithmetic mod the period is exact.
    """
    L = len(word.letters)
    labs = [u.edge_labels[(i, d)] for i in range(L + 1)]
    if labs[L] != labs[0]:
        raise ValueError("spine labels of an unstable word do not close up")
    nodes: list[Point] = []
    slot: list[int] = []
    for i in range(L):
        if nodes and nodes[-1] == labs[i]:
            slot.append(len(nodes) - 1)
        else:
            nodes.append(labs[i])
            slot.append(len(nodes) - 1)
    if len(nodes) > 1 and nodes[-1] == nodes[0]:
        # the period boundary runs through a glued pair
        slot = [0 if s == len(nodes) - 1 else s for s in slot]
        nodes.pop()
    slot.append(len(nodes) - 1 if labs[L] == nodes[-1] != nodes[0] else 0)
    return nodes, slot


_NAME = re.compile(r"([ab])([0-9]+)$")


def _resolve(u: Unfolding, classes: _VertexClasses, spec):
    """A boundary vertex from a chain name "a3"/"b7" or an (i, d) pair."""
    if isinstance(spec, str):
        m = _NAME.match(spec)
        if not m:
            raise ValueError(f"vertex name {spec!r} is not like 'a3' or 'b7'")
        chain = u.top if m.group(1) == "a" else u.bottom
        k = int(m.group(2))
        if not 1 <= k <= len(chain):
            raise ValueError(f"{spec!r} outside the chain (length {len(chain)})")
        return chain[k - 1], spec
    i, d = spec
    c = classes.cls(i, d)
    for prefix, chain in (("a", u.top), ("b", u.bottom)):
        for v in chain:
            if classes.cls(*v.rep) == c:
                return v, f"{prefix}{v.index + 1}"
    raise ValueError(f"vertex {spec!r} is not on a boundary chain")


_ENDPOINT_LABELS = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


def translation_tableau(w: "Word | str", d: int = 3, at=None) -> FourierTableau:
    """The alternating tableau over the d-spine; its value at X has
    modulus |translation| / l_d."""
    word = as_word(w)
    if d not in (1, 2, 3):
        raise ValueError("edge type must be 1, 2 or 3")
    if not is_stable_parity(word):
        raise ValueError("translation tableaux need a stable word")
    u = unfold(word, as_point(at) if at is not None else _DEFAULT_AT)
    if d == 3:
        nodes, _ = _spine_nodes(word, u, d)
        return FourierTableau.from_vertices(nodes[j] for j in _marks(nodes))
    refs, _ = _spine_path(word, u, d)
    return FourierTableau.from_vertices(u.edge_labels[(i, d)] for i in refs)


def _marks(nodes: list[Point]) -> list[int]:
    """Corners of the squarepath; straight runs telescope away."""
    N = len(nodes)

    def corner(j):
        a, b, c = nodes[(j - 1) % N], nodes[j], nodes[(j + 1) % N]
        return (b[0] - a[0], b[1] - a[1]) != (c[0] - b[0], c[1] - b[1])

    return [j for j in range(N) if corner(j)]


def build_PQ(w: "Word | str", p, q, d: int = 3, at=None) -> DefiningFunction:
    """Defining function of the vertex pair (p, q) over the d-spine.

    p and q name boundary vertices, either as chain names ("a1", "b4")
    or as (triangle, label) pairs; the leftmost of the two becomes the
    left vertex.  Both must touch a d-edge and sit on the d-spine, and
    the connecting sub-path must start on the translation tableau for
    the sign rule to apply.  Identical vertices give the zero tableau
    (F identically 0).
    """
    word = as_word(w)
    if d not in (1, 2, 3):
        raise ValueError("edge type must be 1, 2 or 3")
    if not is_stable_parity(word):
        raise ValueError("defining functions need a stable word")
    point = as_point(at) if at is not None else as_point(_DEFAULT_AT)
    u = unfold(word, point)
    if not u.top:
        raise ValueError("boundary chains unavailable for this word")
    classes = _VertexClasses(word.letters)
    vp, pname = _resolve(u, classes, p)
    vq, qname = _resolve(u, classes, q)
    if vp.pos.real > vq.pos.real:
        vp, vq = vq, vp
        pname, qname = qname, pname

    cp, cq = classes.cls(*vp.rep), classes.cls(*vq.rep)
    e1, e2 = _ENDPOINT_LABELS[d]
    L = len(word.letters)

    if d == 3:
        nodes, slot = _spine_nodes(word, u, d)
        N = len(nodes)
        if N % 2:
            raise ValueError("odd spine period admits no alternating colouring")
        marks = _marks(nodes)
        Q = FourierTableau.from_vertices(nodes[j] for j in marks)
        if cp == cq:
            return DefiningFunction(word, pname, qname, d,
                                    FourierTableau((), 1), Q)

        def incident(c):
            return {slot[i] for i in range(L + 1)
                    if classes.cls(i, e1) == c or classes.cls(i, e2) == c}

        starters, finishers = incident(cp), incident(cq)
        if not starters or not finishers:
            which = pname if not starters else qname
            raise ValueError(f"vertex {which} touches no edge of type {d}")

        # pick the shortest forward run; ties resolve to the smallest start
        best = None
        for su in sorted(starters):
            for fv in sorted(finishers):
                run = ((fv - su) % N, su, fv)
                if best is None or run < best:
                    best = run
        ln, su, fv = best

        if su not in marks:
            raise UnsupportedStartError(
                f"difference path for ({pname}, {qname}) starts between "
                f"tableau vertices; the sign convention does not cover "
                f"this pair")
        sign = (-1) ** marks.index(su)
        path = [su]
        path += [j for t in range(1, ln) if (j := (su + t) % N) in marks]
        if ln:
            path.append(fv)
        P = FourierTableau.from_vertices((nodes[j] for j in path), sign)
        return DefiningFunction(word, pname, qname, d, P, Q)

    refs, corners = _spine_path(word, u, d)
    N = len(refs)
    if N % 2:
        raise ValueError("odd spine period admits no alternating colouring")
    labs = [u.edge_labels[(i, d)] for i in refs]
    Q = FourierTableau.from_vertices(labs)
    if cp == cq:
        return DefiningFunction(word, pname, qname, d,
                                FourierTableau((), 1), Q)

    def touches(c):
        return any(classes.cls(i, e1) == c or classes.cls(i, e2) == c
                   for i in range(L))

    if not (touches(cp) and touches(cq)):
        which = pname if not touches(cp) else qname
        raise ValueError(f"vertex {which} touches no edge of type {d}")
    node_cls = [classes.cls(*c) for c in corners]
    if cp not in node_cls or cq not in node_cls:
        which = pname if cp not in node_cls else qname
        raise UnsupportedStartError(
            f"vertex {which} hangs off the {d}-spine; the sign convention "
            f"does not cover this pair")
    jp, jq = node_cls.index(cp), node_cls.index(cq)
    sign = (-1) ** jp
    P = FourierTableau.from_vertices(
        (labs[(jp + t) % N] for t in range((jq - jp) % N)), sign)
    return DefiningFunction(word, pname, qname, d, P, Q)


# ------------------------------------------------ exact Laurent arithmetic
#
# Coefficients are Gaussian integers (re, im); polynomials are sparse
# dicts {exponent: coefficient} in one variable omega, never reduced
# cyclotomically, so supports stay small and comparisons are exact.

_G0 = (0, 0)
_G1 = (1, 0)


def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gconj(a):
    return (a[0], -a[1])


def _padd(p, q):
    out = dict(p)
    for e, c in q.items():
        s = _gadd(out.get(e, _G0), c)
        if s == _G0:
            out.pop(e, None)
        else:
            out[e] = s
    return out


def _pneg(p):
    return {e: (-c[0], -c[1]) for e, c in p.items()}


def _psub(p, q):
    return _padd(p, _pneg(q))


def _pscale(g, p):
    return {e: _gmul(g, c) for e, c in p.items()} if g != _G0 else {}


def _pshift(p, k):
    return {e + k: c for e, c in p.items()}


def _pmul(p, q):
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            s = _gadd(out.get(e, _G0), _gmul(c1, c2))
            if s == _G0:
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _pdiv(p, d):
    """Exact quotient p / d for a divisor with leading coefficient 1;
    None if the division leaves a remainder.  Monomials are units here,
    so both sides are normalised to honest polynomials first."""
    if not p:
        return {}
    sp, sd = min(p), min(d)
    D = _pshift(d, -sd)
    dmax = max(D)
    rem = _pshift(p, -sp)
    quot: dict = {}
    while rem:
        e = max(rem)
        if e < dmax:
            return None
        c = rem[e]
        quot[e - dmax] = c
        rem = _psub(rem, _pshift(_pscale(c, D), e - dmax))
    return _pshift(quot, sp - sd)


def _peval(p, om: complex) -> complex:
    return sum(complex(c[0], c[1]) * om ** e for e, c in p.items())


_OMPLUS = {1: _G1, -1: _G1}                   # omega + 1/omega = 2c
_OMMINUS = {1: _G1, -1: (-1, 0)}              # omega - 1/omega = 2is
_MU = _pmul(_pmul(_OMPLUS, _OMPLUS), _OMMINUS)
_LAM_MU = _pmul(_OMPLUS, _OMMINUS)            # lam * MU
_LAM1_MU = {0: (0, 2)}                        # lam1 * MU = 2i
_LAM2_MU = {2: (0, -1), -2: (0, -1)}          # lam2 * MU = -i(w^2 + w^-2)


# --------------------------------------------------- the 20-dart family

@dataclass(frozen=True)
class LeaderVertex:
    """One of the co-height superior vertex classes, with every dart
    address (dart 1-indexed, side L/R, ring O/I) naming it."""

    addresses: tuple[tuple[int, str, str], ...]
    chain: str                  # "top" or "bottom"
    name: str                   # chain name, e.g. "b2"
    pos: complex                # at the corner point

    @property
    def darts(self) -> tuple[int, ...]:
        return tuple(sorted({k for k, _, _ in self.addresses}))


@dataclass(frozen=True)
class BLeaders:
    n: int
    word: Word
    leaders: tuple[LeaderVertex, ...]
    height: float               # the common level
    gap: float                  # distance of the nearest other superior


def _superior_positions(dd, u):
    """Vertex class positions in the frame where the translation points
    right, so heights are comparable across one period."""
    classes = dd.classes
    rot = u.holonomy.conjugate() / abs(u.holonomy)
    pos: dict[int, complex] = {}
    for i in range(len(dd.word.letters) + 1):
        for d in (1, 2, 3):
            pos.setdefault(classes.cls(i, d), rot * u.vertex(i, d))
    return pos


def _rim_addresses(dd, pos):
    """Map vertex class -> dart addresses over all superior rim slots."""
    out: dict[int, list] = {}
    for k, dart in enumerate(dd.darts, start=1):
        r = dart.rim
        flip = pos[dd.classes.cls(*r[0])].real > pos[dd.classes.cls(*r[-1])].real
        slots = [(0, "L", "O"), (1, "L", "I"),
                 (len(r) - 2, "R", "I"), (len(r) - 1, "R", "O")]
        for idx, side, ring in slots:
            if flip:
                side = "R" if side == "L" else "L"
            c = dd.classes.cls(*r[idx])
            out.setdefault(c, []).append((k, side, ring))
    return out


def leaders_B(n: int) -> BLeaders:
    """The six co-height superior vertex classes of the 20-dart word at
    its corner point, found geometrically: the minimal top superior level
    equals the maximal bottom one, three classes on each chain sit on it,
    and everything else keeps a definite distance."""
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"the 20-dart family needs integer n >= 4, got {n!r}")
    word = gen_B(n)
    V = ParameterPoint.veech(n)
    dd = dart_decomposition(word)
    u = unfold(dd.word, V)
    pos = _superior_positions(dd, u)
    sup = dd.superior_classes()

    tops = [(pos[c].imag, c) for c in sup if c in dd.top_classes]
    bots = [(pos[c].imag, c) for c in sup if c in dd.bottom_classes]
    level = (min(h for h, _ in tops) + max(h for h, _ in bots)) / 2
    near = [c for h, c in tops + bots if abs(h - level) <= 1e-9]

    # drop periodic wrap copies (same vertex one translation later)
    period = abs(u.holonomy)
    near.sort(key=lambda c: pos[c].real)
    kept: list[int] = []
    for c in near:
        if any(abs(pos[c] - pos[o] - period) < 1e-6 for o in kept):
            continue
        kept.append(c)

    addr = _rim_addresses(dd, pos)
    chain_name: dict[int, tuple[str, str]] = {}
    for prefix, chain, label in (("a", u.top, "top"), ("b", u.bottom, "bottom")):
        for v in chain:
            chain_name.setdefault(dd.classes.cls(*v.rep),
                                  (label, f"{prefix}{v.index + 1}"))

    leaders = []
    for c in kept:
        chain, name = chain_name[c]
        leaders.append(LeaderVertex(tuple(sorted(addr.get(c, ()))),
                                    chain, name, pos[c]))
    if len(leaders) != 6 or sum(l.chain == "top" for l in leaders) != 3:
        raise RuntimeError(f"unexpected leader structure for n={n}")
    leaders.sort(key=lambda l: (l.chain != "bottom", min(l.darts)))

    others = [h for h, c in tops + bots
              if all(abs(pos[c] - l.pos) > 1e-9 and
                     abs(pos[c] - l.pos - period) > 1e-6 for l in leaders)]
    gap = min(abs(h - level) for h in others)
    # chain names refer to the decomposition's rotation of the word
    return BLeaders(n, dd.word, tuple(leaders), level, gap)


def elimination_rows_B(n: int) -> dict:
    """Exact height rows of the sixty superior vertex stations.

    Station (delta, beta), beta = 1..20, delta in {-1, 0, +1}, is reached
    from the first inner-left bottom vertex by a short hop onto the spine,
    beta - 1 spine edges, and a final edge at level delta (+1 top rim, 0
    spine, -1 bottom rim).  Multiplying the connecting sum by conj(Q)
    clears every short-edge length into the integers: the row (a1, a2, a3)
    satisfies

        height difference * |Q| = a1 sin(pi/n) + a2 sin(2pi/n) + a3 sin(3pi/n)

    and the station is a leader exactly when the row is zero.  The rows do
    not depend on n.
    """
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"the 20-dart family needs integer n >= 4, got {n!r}")
    LE = b_holonomy_exponents(n)
    conjQ: dict = {}
    for e in LE:
        conjQ = _padd(conjQ, {-e: _G1})
    lam_conjQ = _pdiv(conjQ, _OMPLUS)
    if lam_conjQ is None:
        raise RuntimeError("conj(Q) must be divisible by omega + 1/omega")

    rows = {}
    partial: dict = {}
    for beta in range(1, 21):
        s = beta - 1
        for delta in (-1, 0, 1):
            p = _pneg(lam_conjQ)
            p = _padd(p, _pmul(partial, conjQ)) if partial else p
            if delta == 0:
                p = _padd(p, _pshift(conjQ, LE[s]))
            else:
                p = _padd(p, _pshift(lam_conjQ, LE[s] + delta))
            if any(e % 2 for e in p):
                raise RuntimeError("station row has odd support")
            a = tuple(_gsub(p.get(j, _G0), _gconj(p.get(-j, _G0)))
                      for j in (2, 4, 6))
            if any(c[1] for c in a):
                raise RuntimeError("station row is not real")
            rows[(delta, beta)] = tuple(c[0] for c in a)
        partial = _padd(partial, {LE[s]: _G1})
    return rows


def elimination_value(row, n: int) -> float:
    return sum(a * math.sin(j * math.pi / n) for j, a in enumerate(row, 1))


def H11_on_line(n: int, ys=None) -> list[float]:
    """F of the outermost leader pair sampled along x1 = pi/2n.

    The pair is the left outer bottom leader against the right outer top
    leader; their defining function vanishes identically on that line, so
    the returned residuals are all numerically zero.
    """
    bl = leaders_B(n)
    beta1 = next(l for l in bl.leaders
                 if l.chain == "bottom" and any(r == "O" for _, _, r in l.addresses))
    alpha1 = next(l for l in bl.leaders
                  if l.chain == "top" and any(r == "O" for _, _, r in l.addresses))
    V = ParameterPoint.veech(n)
    f = build_PQ(bl.word, beta1.name, alpha1.name, 3, at=V)
    x1 = math.pi / (2 * n)
    if ys is None:
        hi = min(1.8 * x1, 0.95 * (math.pi / 2 - x1))
        ys = [0.2 * x1 + t * (hi - 0.2 * x1) / 49 for t in range(50)]
    return [f.value((x1, y)) for y in ys]


# ------------------------------------------------------ corner derivatives

@dataclass(frozen=True)
class PairDerivative:
    """Exact first derivatives of one leader-pair height difference.

    d1/d2 are the derivative values of F at the corner point (the pair is
    level there, so these are |Q| times the height-gap derivatives).  Each
    row presents the cleared integer polynomial by five coefficients over
    1, w^2, w^4, w^6, w^8; starred rows cleared the full denominator,
    unstarred ones retain a positive factor 2 sin(pi/n)."""

    pair: tuple[int, int]
    d1: float
    d2: float
    d1_row: tuple
    d2_row: tuple
    d1_starred: bool
    d2_starred: bool


@dataclass(frozen=True)
class FinalDerivatives:
    n: int
    pairs: dict

    def signs(self) -> dict:
        return {ij: (math.copysign(1, p.d1) if abs(p.d1) > 1e-9 else 0,
                     math.copysign(1, p.d2) if abs(p.d2) > 1e-9 else 0)
                for ij, p in self.pairs.items()}


# path data: spine run length, the dart whose rim edge finishes the path
# (None when the destination is a junction), and which rim edge hops off
# the spine: the first one enters the dart from its left junction, the
# last one backs into it from its right junction
_ALPHA_PATHS = {1: (13, None, None), 2: (5, 6, "first"), 3: (11, 10, "last")}
_BETA_PATHS = {1: (3, None, None), 2: (0, 1, "first"), 3: (15, 16, "first")}


def _reduced_row(p):
    """Five coefficients a_j over w^(2j) with Im unchanged: pair up the
    +-e terms via a = c_e - conj(c_-e)."""
    if any(e % 2 or abs(e) > 8 for e in p):
        raise RuntimeError("cleared derivative has unexpected support")
    return tuple(_gsub(p.get(j, _G0), _gconj(p.get(-j, _G0)))
                 for j in (0, 2, 4, 6, 8))


def _check_landings(n, dd, u, LE, alphas, betas):
    """Each path value, mapped by the frame factor, must land on its
    destination vertex; guards the hop folds for every n."""
    om = cmath.exp(1j * math.pi / (2 * n))
    mu_val = _peval(_MU, om)
    rho = u.holonomy / sum(om ** e for e in LE)
    cls = dd.classes
    a1 = u.vertex(*dd.darts[0].rim[0])
    pos = {}
    for i in range(len(dd.word.letters) + 1):
        for d in (1, 2, 3):
            pos.setdefault(cls.cls(i, d), u.vertex(i, d))

    for specs, polys in ((_ALPHA_PATHS, alphas), (_BETA_PATHS, betas)):
        for key, (val, _dval) in polys.items():
            run, hop, edge = specs[key]
            if hop is None:
                dest = dd.darts[run].rim[0]
            elif edge == "first":
                dest = dd.darts[hop - 1].rim[1]
            else:
                dest = dd.darts[hop - 1].rim[-2]
            want = pos[cls.cls(*dest)] - a1
            got = rho * _peval(val, om) / mu_val
            if abs(got - want) > 1e-8 * max(1.0, abs(want)):
                raise RuntimeError(f"path {key} misses its vertex")


def final_derivatives(n: int) -> FinalDerivatives:
    """Exact derivatives of the nine leader pair gaps at the corner point.

    Paths run from the first top outer vertex: along the spine for the
    outer destinations, plus one rim hop for the inner ones.  All lengths
    are cleared by (w + 1/w)^2 (w - 1/w), turning the derivative of each
    P conj(Q) into an integer Laurent polynomial that is then reduced and
    evaluated.  Row order pairs the top leaders (12,R,O), (5,R,I),
    (10,R,I) against the bottom leaders (4,L,O), (1,L,I), (16,L,I).
    """
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"the 20-dart family needs integer n >= 4, got {n!r}")
    word = gen_B(n)
    V = ParameterPoint.veech(n)
    dd = dart_decomposition(word)
    u = unfold(dd.word, V)
    LE = b_holonomy_exponents(n)
    sp = spine(dd.word, 3)
    labs = [u.edge_labels[e] for e in sp[:20]]     # true label vectors

    conjQ: dict = {}
    dconjQ = [{}, {}]
    for k in range(20):
        conjQ = _padd(conjQ, {-LE[k]: _G1})
        for j in (0, 1):
            dconjQ[j] = _padd(dconjQ[j], {-LE[k]: (0, -labs[k][j])})

    def hop_data(k, edge):
        dart = dd.darts[k - 1]
        t = 1 if dart.horizontal else 2
        tri = dart.triangles[0] if edge == "first" else dart.triangles[-1]
        lab = u.edge_labels[(tri, t)]
        e = (lab[0] + lab[1] + (0 if k % 2 else 2 * n)) % (4 * n)
        if e > 2 * n:
            e -= 4 * n
        # fold w^(e - 2n) = -w^e to keep supports n-free
        sigma = 1
        if abs(e) > n + 1:
            e -= 2 * n * (1 if e > 0 else -1)
            sigma = -1
        return t, lab, e, sigma

    def path_polys(run, hop, edge):
        val: dict = {}
        dval = [{}, {}]
        for i in range(run):
            val = _padd(val, {LE[i]: _G1})
            for j in (0, 1):
                dval[j] = _padd(dval[j], {LE[i]: (0, labs[i][j])})
        val = _pmul(val, _MU)
        dval = [_pmul(d, _MU) for d in dval]
        if hop is not None:
            t, lab, e, sigma = hop_data(hop, edge)
            sg = (sigma, 0)
            val = _padd(val, _pshift(_pscale(sg, _LAM_MU), e))
            swap = (_LAM1_MU, _LAM2_MU) if t == 1 else (_LAM2_MU, _LAM1_MU)
            for j in (0, 1):
                dval[j] = _padd(dval[j], _pshift(
                    _pscale((0, sigma * lab[j]), _LAM_MU), e))
                dval[j] = _padd(dval[j], _pshift(_pscale(sg, swap[j]), e))
        return val, dval

    alphas = {i: path_polys(*spec) for i, spec in _ALPHA_PATHS.items()}
    betas = {j: path_polys(*spec) for j, spec in _BETA_PATHS.items()}
    _check_landings(n, dd, u, LE, alphas, betas)

    om = cmath.exp(1j * math.pi / (2 * n))
    mu_val = _peval(_MU, om)
    pairs = {}
    for i, (av, ad) in alphas.items():
        for j, (bv, bd) in betas.items():
            out = []
            for axis in (0, 1):
                dHmu = _padd(_pmul(_psub(ad[axis], bd[axis]), conjQ),
                             _pmul(_psub(av, bv), dconjQ[axis]))
                quot = _pdiv(dHmu, _MU)
                if quot is not None:
                    row, starred = _reduced_row(quot), True
                else:
                    half = _pdiv(dHmu, _OMPLUS)
                    if half is None:
                        raise RuntimeError("derivative fails to clear")
                    row, starred = _reduced_row(_pscale((0, -1), half)), False
                value = (_peval(dHmu, om) / mu_val).imag
                out.append((value, row, starred))
            (d1, r1, s1), (d2, r2, s2) = out
            pairs[(i, j)] = PairDerivative((i, j), d1, d2, r1, r2, s1, s2)
    return FinalDerivatives(n, pairs)


# ------------------------------------------------------- parallel families

def pseudo_parallel_check(w: "Word | str", edges, segment, X0=None,
                          samples: int = 33) -> bool:
    """Slope ordering along a parameter segment for a family of edges.

    edges are (triangle, label) pairs whose label directions all agree at
    the base point X0 (default: the segment start); anything else is a
    precondition error.  Returns True when, at every sample where both
    extreme edges have negative slope, all intermediate edges do too.
    """
    word = as_word(w)
    A = as_point(segment[0])
    B = as_point(segment[1])
    base = as_point(X0) if X0 is not None else A
    labels = unfold(word, A).edge_labels
    try:
        vecs = [labels[tuple(e)] for e in edges]
    except KeyError as bad:
        raise ValueError(f"no edge {bad} in this unfolding") from None
    if not vecs:
        raise ValueError("need at least one edge")
    r0 = base.dot(vecs[0])
    for v in vecs[1:]:
        if abs(math.sin(base.dot(v) - r0)) > 1e-9:
            raise ValueError("edges are not pseudo-parallel at the base point")

    def negative(u, e):
        a, b = u.edge(*e)
        d = b - a
        return d.real * d.imag < 0

    for t in range(samples):
        lam = t / (samples - 1) if samples > 1 else 0.0
        X = ParameterPoint(A.x1 + lam * (B.x1 - A.x1),
                           A.x2 + lam * (B.x2 - A.x2))
        u = unfold(word, X)
        flags = [negative(u, tuple(e)) for e in edges]
        if flags[0] and flags[-1] and not all(flags):
            return False
    return True
