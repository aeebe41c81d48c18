"""Geometric unfoldings of words.

A word of length L unfolds to a chain of L+1 triangle copies T_0 .. T_L;
T_i arises from T_{i-1} by reflection across the edge named by the i-th
digit.  The first side is the edge of T_0 named by the last digit (the
edge a periodic trajectory enters through), the last side is the matching
edge of T_L.  For stable words T_L is a translate of T_0 and the
translation, the holonomy, is rotated to point along the positive x-axis.

Triangles are normalized so the long edge (type 3, opposite the obtuse
angle) has length 1.  Vertex A_d carries the angle x_d and faces edge d.

The boundary of T_0 .. T_{L-1} splits into the first side, the last side,
and two chains of free edges.  Vertices are identified combinatorially
(reflection across edge d fixes the vertices labelled differently from d),
never by coordinate matching, so self-overlapping unfoldings still
classify correctly.  The chain with greater mean height is called top.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

from .words import Point, Word, as_word, is_stable_parity, _walk

TOL = 1e-12


@dataclass(frozen=True)
class ParameterPoint:
    """A point (x1, x2) of parameter space, angles in radians.

    By default the point must lie in the obtuse-triangle region
    x1, x2 > 0, x1 + x2 < pi/2; pass wide=True to allow any triangle
    with x1 + x2 < pi.
    """

    x1: float
    x2: float
    wide: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        limit = math.pi if self.wide else math.pi / 2
        if not (self.x1 > 0 and self.x2 > 0 and self.x1 + self.x2 < limit):
            raise ValueError(
                f"({self.x1}, {self.x2}) outside the triangle region "
                f"(x1, x2 > 0, x1 + x2 < {limit:.6f})")

    @classmethod
    def veech(cls, n: int) -> "ParameterPoint":
        # n = 2 is the right-isosceles point on the obtuse-region boundary.
        if n < 2:
            raise ValueError("right-isosceles points need n >= 2")
        return cls(math.pi / (2 * n), math.pi / (2 * n), wide=(n == 2))

    @property
    def x3(self) -> float:
        return math.pi - self.x1 - self.x2

    def shifted(self, dx1: float, dx2: float) -> "ParameterPoint":
        return ParameterPoint(self.x1 + dx1, self.x2 + dx2, self.wide)

    def dot(self, v: Point) -> float:
        return self.x1 * v[0] + self.x2 * v[1]


def as_point(X: "ParameterPoint | tuple[float, float]") -> ParameterPoint:
    return X if isinstance(X, ParameterPoint) else ParameterPoint(*X)


@dataclass(frozen=True)
class BoundaryVertex:
    """A vertex class on one boundary chain, indexed from the left."""

    index: int
    pos: complex
    rep: tuple[int, int]            # one (triangle, label) member


@dataclass(frozen=True)
class Unfolding:
    word: Word
    point: ParameterPoint
    triangles: tuple[tuple[complex, complex, complex], ...]
    top: tuple[BoundaryVertex, ...]
    bottom: tuple[BoundaryVertex, ...]
    edge_labels: dict
    holonomy: complex
    parallel: bool
    rotation: complex

    def vertex(self, i: int, d: int) -> complex:
        return self.triangles[i][d - 1]

    def edge(self, i: int, d: int) -> tuple[complex, complex]:
        """Endpoints of edge d of triangle i (the two other vertices)."""
        p, q = [v for v in (1, 2, 3) if v != d]
        return self.vertex(i, p), self.vertex(i, q)

    @property
    def first_side(self) -> tuple[complex, complex]:
        return self.edge(0, self.word.letters[-1])

    @property
    def last_side(self) -> tuple[complex, complex]:
        return self.edge(len(self.word), self.word.letters[-1])

    def separation(self) -> float:
        """Height gap between the two boundary chains; positive iff one
        chain lies strictly above the other."""
        if not self.top or not self.bottom:
            raise ValueError("boundary chains unavailable for this word")
        a = [v.pos.imag for v in self.top]
        b = [v.pos.imag for v in self.bottom]
        return max(min(a) - max(b), min(b) - max(a))


def _reflect(z: complex, u: complex, v: complex) -> complex:
    w = v - u
    return u + w * ((z - u) / w).conjugate()


def _cyclically_strict(letters: list[int]) -> bool:
    L = len(letters)
    return L > 1 and all(letters[i] != letters[(i + 1) % L] for i in range(L))


class _VertexClasses:
    """Union of (triangle, label) pairs identified by the reflections."""

    def __init__(self, letters: list[int]):
        self.L = len(letters)
        self.parent = list(range(3 * (self.L + 1)))
        for i, d in enumerate(letters):
            for v in (1, 2, 3):
                if v != d:
                    self._union(self.key(i, v), self.key(i + 1, v))

    def key(self, i: int, d: int) -> int:
        return 3 * i + (d - 1)

    def find(self, k: int) -> int:
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def _union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def cls(self, i: int, d: int) -> int:
        return self.find(self.key(i, d))


def _chain(letters: list[int], classes: _VertexClasses, start_label: int):
    """Walk one boundary chain from a first-side endpoint of T_0 to the
    last side, crossing each free edge it meets.  Returns the vertex
    classes in order with one (triangle, label) representative each."""
    L = len(letters)
    entry = [letters[-1], *letters[:-1]]
    i, d = 0, start_label
    out = [(classes.cls(i, d), (i, d))]
    while i < L:
        if d == letters[i]:           # endpoint of the free edge of T_i
            d = entry[i]
            out.append((classes.cls(i, d), (i, d)))
        i += 1
    return out


def _boundary_chains(letters, classes):
    entry = letters[-1]
    p, q = [v for v in (1, 2, 3) if v != entry]
    return _chain(letters, classes, p), _chain(letters, classes, q)


def unfold(w: "Word | str", X: "ParameterPoint | tuple[float, float]") -> Unfolding:
    """Unfold w at X, normalize, and classify the boundary."""
    word = as_word(w)
    point = as_point(X)
    letters = word.letters
    L = len(letters)

    s3 = math.sin(point.x1 + point.x2)
    if s3 <= 0:
        raise ValueError("degenerate triangle")
    l2 = math.sin(point.x2) / s3
    tri = (0 + 0j, 1 + 0j, l2 * cmath.exp(1j * point.x1))
    tris = [tri]
    for d in letters:
        p, q = [v for v in (1, 2, 3) if v != d]
        u, v = tri[p - 1], tri[q - 1]
        new = list(tri)
        new[d - 1] = _reflect(tri[d - 1], u, v)
        tri = tuple(new)
        tris.append(tri)

    h = tris[L][0] - tris[0][0]
    # Translational holonomy exists iff T_L is a translate of T_0.
    parallel = all(abs(tris[L][k] - tris[0][k] - h) < 1e-9 for k in range(3))
    if abs(h) > TOL:
        rot = abs(h) / h
        tris = [tuple(z * rot for z in t) for t in tris]
        h *= rot
    else:
        rot = 1 + 0j

    # Edge labels from the midpoint walk; one label per (triangle, type).
    s, _ = _walk(word)
    labels: dict[tuple[int, int], Point] = {}
    for i in range(L + 1):
        eps = -1 if i % 2 == 0 else 1
        labels[(i, 3)] = s[i]
        labels[(i, 1)] = (s[i][0], s[i][1] + eps)
        labels[(i, 2)] = (s[i][0] - eps, s[i][1])

    chains: list[tuple[BoundaryVertex, ...]] = [(), ()]
    if _cyclically_strict(letters):
        classes = _VertexClasses(letters)
        built = []
        for raw in _boundary_chains(letters, classes):
            built.append(tuple(
                BoundaryVertex(j, tris[i][d - 1], (i, d))
                for j, (_, (i, d)) in enumerate(raw)))
        mean = [sum(v.pos.imag for v in c) / len(c) for c in built]
        chains = built if mean[0] >= mean[1] else built[::-1]

    return Unfolding(word, point, tuple(tris), chains[0], chains[1],
                     labels, h, parallel, rot)


def edge_angle(label_p: Point, label_q: Point,
               X: "ParameterPoint | tuple[float, float]") -> float:
    """Angle mod pi between two labelled edges of the same unfolding:
    X . (label_q - label_p)."""
    point = as_point(X)
    d = (label_q[0] - label_p[0], label_q[1] - label_p[1])
    return point.dot(d) % math.pi


def spine(w: "Word | str", d: int = 3) -> list[tuple[int, int]]:
    """Edges of type d forming the periodic spine, in left-to-right order.

    The 3-spine consists of the junction long edges only: the two
    outermost edges of each maximal dart, shared wherever consecutive
    darts meet, so one edge per dart plus the closing copy.  The word is
    rotated to a dart start first and indices refer to that rotation
    (``dart_decomposition`` reports the same offset).

    For d = 1 or 2 the spine is the shortest periodic path through the
    type-d edges; rungs the ribbon doubles back over and inner edges of
    fans hang off that path and are excluded.  One period is returned in
    traversal order, starting from the smallest triangle index, and the
    word must be stable so the path closes up."""
    if d not in (1, 2, 3):
        raise ValueError("edge type must be 1, 2 or 3")
    word = as_word(w)
    if d != 3:
        u = unfold(word, ParameterPoint(0.3, 0.35))
        refs, _ = _spine_path(word, u, d)
        return [(i, d) for i in refs]
    offset = _dart_start(word.letters)
    if offset:
        word = word.rotated(offset)
    spans = _dart_spans(word.letters)
    out = [(first - 1, 3) for first, _last, _h in spans]
    out.append((spans[-1][1], 3))
    return out


_SPINE_ENDPOINTS = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


def _spine_path(word: Word, u: "Unfolding", d: int):
    """The periodic d-spine of an unfolding, as a shortest path.

    Over three unfolded periods the type-d edges form a graph on the
    triangle corners; the spine is the shortest path from a corner of
    the middle period to its translate one period to the right, found
    by breadth-first search.  Returns (refs, corners): the triangle
    indices of the path edges over one period in traversal order,
    rotated to start at the smallest index, and for each edge the
    (triangle, corner label) pair of the node it is entered through,
    so corners[j] sits between edges j-1 and j.
    """
    L = len(word.letters)
    lets = word.letters
    h = u.holonomy

    def key(z: complex):
        return (round(z.real, 9), round(z.imag, 9))

    t1, t2 = _SPINE_ENDPOINTS[d]
    edges: list[tuple[int, tuple, tuple]] = []
    corner_at: dict[tuple, tuple[int, int]] = {}
    for rep in (-1, 0, 1):
        off = rep * h
        i = 0
        while i < L:
            a = u.vertex(i, t1) + off
            b = u.vertex(i, t2) + off
            edges.append((i, key(a), key(b)))
            corner_at.setdefault(key(a), (i, t1))
            corner_at.setdefault(key(b), (i, t2))
            i += 2 if lets[i] == d else 1
    graph: dict[tuple, list] = {}
    for idx, (_i, ka, kb) in enumerate(edges):
        graph.setdefault(ka, []).append((idx, kb))
        graph.setdefault(kb, []).append((idx, ka))

    per = len(edges) // 3
    starts = sorted({k for e in edges[per:2 * per] for k in e[1:]})
    best = None
    for s in starts:
        tgt = (round(s[0] + h.real, 9), round(s[1] + h.imag, 9))
        if tgt not in graph:
            continue
        prev: dict[tuple, tuple | None] = {s: None}
        queue = deque([s])
        while queue:
            nd = queue.popleft()
            if nd == tgt:
                break
            for eidx, nb in sorted(graph[nd]):
                if nb not in prev:
                    prev[nb] = (nd, eidx)
                    queue.append(nb)
        if tgt not in prev:
            continue
        path, nodes = [], [tgt]
        cur = tgt
        while prev[cur] is not None:
            cur, eidx = prev[cur]
            path.append(eidx)
            nodes.append(cur)
        path.reverse()
        nodes.reverse()
        if best is None or len(path) < len(best[0]):
            best = (path, nodes)
    if best is None:
        raise ValueError(
            f"type-{d} edges of {word} form no periodic path; "
            f"is the word stable?")
    path, nodes = best
    refs = [edges[j][0] for j in path]
    r = refs.index(min(refs))
    refs = refs[r:] + refs[:r]
    nodes = nodes[r:-1] + nodes[:r]
    return refs, [corner_at[k] for k in nodes]


@dataclass(frozen=True)
class Dart:
    """One maximal dart: 2*order triangle copies fanning around the base.

    The rim runs from one outermost long edge to the other; rim[0] and
    rim[-1] are those edges' far endpoints.  Inferior vertices are the rim
    vertices neither on nor next to an outermost long edge."""

    order: int
    horizontal: bool                    # fan around A_1 (else around A_2)
    triangles: tuple[int, ...]
    base: tuple[int, int]
    rim: tuple[tuple[int, int], ...]    # 2*order+1 entries, in rim order
    spine_edges: tuple[tuple[int, int], tuple[int, int]]
    pointing: str                       # "up" or "down"

    @property
    def superior(self) -> tuple[tuple[int, int], ...]:
        r = self.rim
        keep = sorted({0, 1, len(r) - 2, len(r) - 1})
        return (self.base,) + tuple(r[i] for i in keep)

    @property
    def inferior(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.rim[2:-2])


@dataclass(frozen=True)
class DartDecomposition:
    """Maximal darts of a stable word.

    The word is rotated (by ``offset`` letters) to start at a dart start,
    so no dart wraps around; all triangle indices refer to the rotated
    word's unfolding."""

    word: Word
    offset: int
    darts: tuple[Dart, ...]
    top_classes: frozenset
    bottom_classes: frozenset
    classes: _VertexClasses

    @property
    def delta(self) -> int:
        return max(d.order for d in self.darts)

    def inferior_classes(self) -> frozenset:
        out = set()
        for d in self.darts:
            for i, lab in d.inferior:
                out.add(self.classes.cls(i, lab))
        return frozenset(out)

    def superior_classes(self) -> frozenset:
        """Vertex classes that are inferior in no maximal dart."""
        bad = self.inferior_classes()
        out = set()
        for d in self.darts:
            for i, lab in (d.base,) + d.rim:
                c = self.classes.cls(i, lab)
                if c not in bad:
                    out.add(c)
        return frozenset(out)


def _dart_start(letters: list[int]) -> int:
    """Index of a letter that begins a maximal dart: a 1 or 2 that does not
    continue the pattern x3x from the previous letters."""
    L = len(letters)
    for r in range(L):
        if letters[r] == 3:
            continue
        if letters[r - 1] == 3 and letters[r - 2] == letters[r]:
            continue
        return r
    raise ValueError("word contains no dart letters")


def _dart_spans(letters: list[int]) -> list[tuple[int, int, bool]]:
    """Maximal darts as (first, last, horizontal), 1-indexed positions;
    assumes the word starts at a dart start.  A separating 3 (one whose
    neighbours differ) belongs to no dart."""
    L = len(letters)
    spans = []
    i = 0
    while i < L:
        if letters[i] == 3:
            i += 1
            continue
        j = i
        while j + 2 < L and letters[j + 1] == 3 and letters[j + 2] == letters[i]:
            j += 2
        spans.append((i + 1, j + 1, letters[i] == 2))
        i = j + 1
    return spans


def dart_decomposition(w: "Word | str") -> DartDecomposition:
    """Split a word's unfolding into maximal darts; orders halve the
    squarepath edge lengths.  Stability is not required: unstable words
    still decompose combinatorially (their squarepath is merely open)."""
    word = as_word(w)
    if not _cyclically_strict(word.letters):
        raise ValueError("dart decomposition needs a cyclically strict word")
    offset = _dart_start(word.letters)
    if offset:
        word = word.rotated(offset)
    letters = word.letters
    classes = _VertexClasses(letters)

    chain_p, chain_q = _boundary_chains(letters, classes)
    # Chain naming follows the geometry near the isosceles line, where the
    # family pictures live; classification itself is point-independent.
    u = unfold(word, ParameterPoint(0.28, 0.33))
    pos: dict[int, complex] = {}
    for i in range(len(letters) + 1):
        for d in (1, 2, 3):
            pos.setdefault(classes.cls(i, d), u.triangles[i][d - 1])
    mp = sum(pos[c].imag for c, _ in chain_p) / len(chain_p)
    mq = sum(pos[c].imag for c, _ in chain_q) / len(chain_q)
    if mp < mq:
        chain_p, chain_q = chain_q, chain_p
    top_classes = frozenset(c for c, _ in chain_p)
    bottom_classes = frozenset(c for c, _ in chain_q)

    darts = []
    for first, last, horizontal in _dart_spans(letters):
        k = (last - first) // 2 + 1
        tris = tuple(range(first - 1, last + 1))
        base_label = 1 if horizontal else 2
        rim_label = 2 if horizontal else 1
        rim = [(tris[0], rim_label), (tris[0], 3)]
        rim += [(i, letters[i - 1]) for i in range(first, last + 1)]
        base = (tris[0], base_label)
        pointing = "down" if classes.cls(*base) in top_classes else "up"
        darts.append(Dart(k, horizontal, tris, base, tuple(rim),
                          ((tris[0], 3), (tris[-1], 3)), pointing))

    return DartDecomposition(word, offset, tuple(darts), top_classes,
                             bottom_classes, classes)


def delta(w: "Word | str") -> int:
    """Largest dart order in the unfolding."""
    return dart_decomposition(w).delta


def dart_lemma_applies(w: "Word | str",
                       X: "ParameterPoint | tuple[float, float]") -> bool:
    """Sufficient criterion for membership: the angle gate
    max(x1, x2) <= 2*pi/delta plus strict height separation of the
    superior vertices of one boundary chain from the other's."""
    point = as_point(X)
    dd = dart_decomposition(w)
    if max(point.x1, point.x2) > 2 * math.pi / dd.delta:
        return False
    u = unfold(dd.word, point)
    sup = dd.superior_classes()
    a = [v.pos.imag for v in u.top if dd.classes.cls(*v.rep) in sup]
    b = [v.pos.imag for v in u.bottom if dd.classes.cls(*v.rep) in sup]
    if not a or not b:
        return False
    return max(min(a) - max(b), min(b) - max(a)) > TOL


def dart_wedge(u: Unfolding, dart: Dart) -> float:
    """Angle the dart's two outermost short edges make towards its
    centerline, in radians.

    The edges are extended to lines; of the two wedge pairs at their
    intersection, the one whose angular span contains the base-to-tip
    direction is reported.  A one-triangle fan (order 1, where the edges
    meet at the tip itself) comes out as 2(x1+x2)."""
    pos = lambda rd: u.triangles[rd[0]][rd[1] - 1]
    r = [pos(v) for v in dart.rim]
    base, tip = pos(dart.base), r[dart.order]
    c = tip - base
    p1, d1 = r[0], r[1] - r[0]
    p2, d2 = r[-1], r[-2] - r[-1]
    cross = d1.real * d2.imag - d1.imag * d2.real
    dot = d1.real * d2.real + d1.imag * d2.imag
    raw = math.atan2(abs(cross), dot)
    if abs(cross) < TOL * abs(d1) * abs(d2):
        return raw          # parallel edges: degenerate wedge
    P = p1 + ((p2 - p1).real * d2.imag - (p2 - p1).imag * d2.real) / cross * d1
    u1 = (r[0] + r[1]) / 2 - P
    u2 = (r[-1] + r[-2]) / 2 - P
    a1, a2 = cmath.phase(u1), cmath.phase(u2)
    span = (a2 - a1) % (2 * math.pi)
    off = (cmath.phase(c) - a1) % (2 * math.pi)
    inside = (off <= span) if span <= math.pi else not (off <= span)
    theta = abs(cmath.phase(u2 / u1))
    return theta if inside else math.pi - theta


def is_controlled(w: "Word | str",
                  X: "ParameterPoint | tuple[float, float]") -> bool:
    """True when every maximal dart is acute (wedge towards the centerline
    under pi/2) and points away from the boundary chain holding its base:
    bottom-based darts point up, top-based darts point down.  Words built
    from long fans stay controlled wherever ``dart_lemma_applies`` holds;
    words with many one- and two-fan junctions can fail the angle part
    even inside their tile, so this is not implied by the gate alone."""
    point = as_point(X)
    dd = dart_decomposition(w)
    u = unfold(dd.word, point)
    for dart in dd.darts:
        if dart_wedge(u, dart) >= math.pi / 2 - TOL:
            return False
        pos = lambda rd: u.triangles[rd[0]][rd[1] - 1]
        lift = pos(dart.rim[dart.order]) - pos(dart.base)
        if (lift.imag > 0) != (dart.pointing == "up"):
            return False
    return True


def membership_geometric(w: "Word | str",
                         X: "ParameterPoint | tuple[float, float]",
                         square_odd: bool = True) -> bool:
    """True iff the word's orbit tile contains X: after normalization the
    two boundary chains are strictly separated in height.  Odd words are
    squared first (disable with square_odd=False).  Ties within 1e-12
    count as boundary and return False."""
    word = as_word(w)
    if len(word) % 2 == 1 and square_odd:
        word = word.squared()
    u = unfold(word, as_point(X))
    if not u.parallel:
        raise ValueError("first and last sides are not parallel at this point")
    return u.separation() > TOL


def separation(w: "Word | str", X: "ParameterPoint | tuple[float, float]",
               square_odd: bool = True) -> float:
    """Signed membership margin; positive inside the open tile."""
    word = as_word(w)
    if len(word) % 2 == 1 and square_odd:
        word = word.squared()
    u = unfold(word, as_point(X))
    if not u.parallel:
        raise ValueError("first and last sides are not parallel at this point")
    return u.separation()
