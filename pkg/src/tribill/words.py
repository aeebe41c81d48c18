"""Words over the alphabet {1,2,3} and their lattice-path encodings.

A word records the sequence of sides across which a triangle is reflected
while a billiard trajectory is unfolded.  Two integer encodings of a word
are built here:

* the hexpath, a walk along edges of a hexagon tiling whose edge midpoints
  sit on the integer lattice, one edge per digit;
* the squarepath, the rectilinear path through the midpoints of the long
  (type 3) edges that hang off the hexpath vertices.

Both paths use integer arithmetic only.  The label of the tiling edge
crossed by the last digit is pinned to (0,0), which places the first
long-edge midpoint at (0,1), (-1,0) or (0,0) according to the last digit
being 1, 2 or 3.  Positions inside a word are 1-indexed whenever parity
("odd position") is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

Point = tuple[int, int]

_ALPHABET = frozenset("123")

# Compass name of a turn, keyed by (incoming direction, outgoing direction).
# The name is the corner of the local bounding box that the path wraps.
_TURNS: dict[tuple[Point, Point], str] = {
    ((1, 0), (0, -1)): "NE", ((0, 1), (-1, 0)): "NE",
    ((0, -1), (1, 0)): "SW", ((-1, 0), (0, 1)): "SW",
    ((0, 1), (1, 0)): "NW", ((-1, 0), (0, -1)): "NW",
    ((0, -1), (-1, 0)): "SE", ((1, 0), (0, 1)): "SE",
}

#: Turns at which two consecutive maximal darts sit on the same side of
#: their shared long edge, so the word carries a separating digit 3 there.
SEPARATOR_TURNS = frozenset({"NE", "SW"})


@dataclass(frozen=True)
class Word:
    """An immutable digit string over {1,2,3}.

    A billiard word never repeats a digit consecutively; pass
    ``allow_repeats=True`` to lift that check (needed e.g. for squares of
    odd words such as 131131, which are legitimate inputs to the parity
    test).
    """

    digits: str
    allow_repeats: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if not self.digits:
            raise ValueError("empty word")
        if not set(self.digits) <= _ALPHABET:
            raise ValueError(f"word may only contain digits 1,2,3: {self.digits!r}")
        if not self.allow_repeats:
            for a, b in zip(self.digits, self.digits[1:]):
                if a == b:
                    raise ValueError(
                        f"consecutive repeated digit {a!r} in {self.digits!r}; "
                        "pass allow_repeats=True to accept"
                    )

    def __str__(self) -> str:
        return self.digits

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return (int(c) for c in self.digits)

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.digits)

    def squared(self) -> "Word":
        return Word(self.digits * 2, allow_repeats=True)

    def swapped(self) -> "Word":
        """Exchange digits 1 and 2 (mirror relabelling)."""
        table = str.maketrans("12", "21")
        return Word(self.digits.translate(table), allow_repeats=self.allow_repeats)

    def reversed(self) -> "Word":
        return Word(self.digits[::-1], allow_repeats=self.allow_repeats)

    def rotated(self, i: int) -> "Word":
        i %= len(self.digits)
        return Word(self.digits[i:] + self.digits[:i], allow_repeats=True)

    def canonical_rotation(self) -> str:
        """Lexicographically least cyclic rotation; the canonical word identity."""
        d = self.digits
        return min(d[i:] + d[:i] for i in range(len(d)))

    def is_rotation_of(self, other: "Word | str") -> bool:
        o = other.digits if isinstance(other, Word) else other
        return len(o) == len(self.digits) and self.digits in o + o


def as_word(w: "Word | str", allow_repeats: bool = True) -> Word:
    return w if isinstance(w, Word) else Word(w, allow_repeats=allow_repeats)


@dataclass(frozen=True)
class LatticePath:
    """An ordered lattice path; for closed paths the first vertex is repeated
    at the end, so ``vertices[0] == vertices[-1]``."""

    vertices: tuple[Point, ...]
    closed: bool

    def __post_init__(self) -> None:
        if self.closed and self.vertices[0] != self.vertices[-1]:
            raise ValueError("closed path must end at its first vertex")

    @property
    def cycle(self) -> tuple[Point, ...]:
        """Vertices without the closing duplicate."""
        return self.vertices[:-1] if self.closed else self.vertices

    @property
    def parity_colors(self) -> tuple[int, ...]:
        """Alternating vertex signs (+1 white first) over ``cycle``."""
        return tuple(1 if i % 2 == 0 else -1 for i in range(len(self.cycle)))

    def edges(self) -> list[tuple[Point, Point]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def translated(self, t: Point) -> "LatticePath":
        return LatticePath(tuple((x + t[0], y + t[1]) for x, y in self.vertices), self.closed)

    def cyclically_equal(self, other: "LatticePath") -> bool:
        if self.closed != other.closed:
            return False
        if not self.closed:
            return self.vertices == other.vertices
        a, b = self.cycle, other.cycle
        if len(a) != len(b):
            return False
        return any(b[i:] + b[:i] == a for i in range(len(b)))


def _anchor(last_digit: int) -> Point:
    # Midpoint of the first triangle's long edge once the last digit's edge
    # is pinned to (0,0).
    if last_digit == 3:
        return (0, 0)
    if last_digit == 1:
        return (0, 1)
    return (-1, 0)


def _walk(word: Word) -> tuple[list[Point], list[Point]]:
    """Run the reflection walk.

    Returns ``(s, mids)`` where ``s[i]`` is the long-edge midpoint of the
    i-th triangle (length ``len(word)+1``) and ``mids[i]`` is the midpoint
    of the tiling edge crossed by digit ``i+1``.  Digits at odd positions
    step south (digit 1) or east (digit 2); at even positions north or
    west; digit 3 stays put.
    """
    letters = word.letters
    s: list[Point] = [_anchor(letters[-1])]
    mids: list[Point] = []
    x, y = s[0]
    for pos, d in enumerate(letters, start=1):
        eps = -1 if pos % 2 == 1 else 1  # vertical offset of the type-1 edge
        eta = -eps                        # horizontal offset of the type-2 edge
        if d == 1:
            mids.append((x, y + eps))
            y += 2 * eps
        elif d == 2:
            mids.append((x + eta, y))
            x += 2 * eta
        else:
            mids.append((x, y))
        s.append((x, y))
    return s, mids


def is_stable_parity(word: Word | str) -> bool:
    """Letter-balance test: stable iff each digit occurs equally often at
    odd and even (1-indexed) positions."""
    w = as_word(word)
    balance = {1: 0, 2: 0, 3: 0}
    for pos, d in enumerate(w.letters, start=1):
        balance[d] += 1 if pos % 2 == 1 else -1
    return all(v == 0 for v in balance.values())


def hexpath(word: Word | str) -> LatticePath:
    """The hexpath of a word, stored as the integer midpoints of the tiling
    edges it traverses, one per digit."""
    w = as_word(word)
    s, mids = _walk(w)
    closed = s[-1] == s[0] and len(w) % 2 == 0
    if closed:
        return LatticePath(tuple(mids) + (mids[0],), True)
    return LatticePath(tuple(mids), False)


def is_stable_hexpath(word: Word | str) -> bool:
    """Stability via closure of the hexpath walk."""
    return hexpath(word).closed


def _compress(points: list[Point]) -> list[Point]:
    out = [points[0]]
    for p in points[1:]:
        if p != out[-1]:
            out.append(p)
    return out


def _direction(a: Point, b: Point) -> Point:
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx and dy:
        raise ValueError("path step is not axis aligned")
    if dx:
        return (1 if dx > 0 else -1, 0)
    return (0, 1 if dy > 0 else -1)


def squarepath(word: Word | str) -> LatticePath:
    """The rectilinear path through the long-edge midpoints of the word's
    triangle chain.  For stable words the result is closed and its vertex
    list is the corner sequence (first corner on or after the starting
    midpoint), which doubles as the integer tableau of the translation
    series."""
    w = as_word(word)
    s, _ = _walk(w)
    closed = s[-1] == s[0] and len(w) % 2 == 0
    nodes = _compress(s)
    if closed:
        nodes = nodes[:-1]  # drop the duplicated start
        if len(nodes) < 4:
            raise ValueError(f"degenerate closed squarepath for word {w.digits!r}")
        m = len(nodes)
        corners = []
        for j in range(m):
            din = _direction(nodes[(j - 1) % m], nodes[j])
            dout = _direction(nodes[j], nodes[(j + 1) % m])
            if din != dout:
                corners.append(j)
        if not corners:
            raise ValueError("closed squarepath with no turns")
        ordered = [nodes[j] for j in corners]
        return LatticePath(tuple(ordered) + (ordered[0],), True)
    # open path: keep endpoints plus genuine turns
    if len(nodes) == 1:
        return LatticePath((nodes[0],), False)
    verts = [nodes[0]]
    for j in range(1, len(nodes) - 1):
        if _direction(nodes[j - 1], nodes[j]) != _direction(nodes[j], nodes[j + 1]):
            verts.append(nodes[j])
    verts.append(nodes[-1])
    return LatticePath(tuple(verts), False)


def _dart_letters(length: int, horizontal: bool) -> str:
    """Digits of a maximal dart spanning a squarepath edge of this length."""
    if length % 2 != 0:
        raise ValueError(f"squarepath edge of odd length {length}")
    k = length // 2
    a = "2" if horizontal else "1"
    return a + ("3" + a) * (k - 1)


def turn_name(din: Point, dout: Point) -> str:
    try:
        return _TURNS[(din, dout)]
    except KeyError:
        raise ValueError(f"undefined turn {din} -> {dout}") from None


def word_from_squarepath(path: LatticePath) -> Word:
    """Reconstruct a word from a closed rectilinear corner path.

    Edges of length 2k become maximal k-darts (horizontal edges use digit 2,
    vertical digit 1); a separating 3 is inserted at NE and SW turns, none
    at NW and SE turns where consecutive darts sit on opposite sides of the
    shared long edge.  Round-trips with :func:`squarepath` up to cyclic
    rotation.
    """
    if not path.closed:
        raise ValueError("squarepath must be closed to decode a word")
    corners = list(path.cycle)
    if len(corners) < 4:
        raise ValueError("need at least four corners")
    m = len(corners)
    dirs = []
    for j in range(m):
        a, b = corners[j], corners[(j + 1) % m]
        if a == b:
            raise ValueError("repeated vertex in corner list")
        dirs.append(_direction(a, b))
    out: list[str] = []
    for j in range(m):
        a, b = corners[j], corners[(j + 1) % m]
        length = abs(b[0] - a[0]) + abs(b[1] - a[1])
        horizontal = dirs[j][1] == 0
        out.append(_dart_letters(length, horizontal))
        turn = turn_name(dirs[j], dirs[(j + 1) % m])
        if turn in SEPARATOR_TURNS:
            out.append("3")
        # NW/SE turns glue the adjacent darts directly
        if dirs[(j + 1) % m] == dirs[j]:
            raise ValueError("consecutive collinear edges; ambiguous turn structure")
    return Word("".join(out))


def hexpath_from_squarepath(path: LatticePath) -> LatticePath:
    """The ordered set of tiling edges met by a closed squarepath, i.e. the
    hexpath of the decoded word, translated back into the input frame."""
    w = word_from_squarepath(path)
    h = hexpath(w)
    a = _anchor(w.letters[-1])
    start = path.cycle[0]
    return h.translated((start[0] - a[0], start[1] - a[1]))
