"""Generators for the word families used throughout the workbench.

Families:

* ``A_n`` for n >= 2: squares of odd words whose squarepath is a square of
  sidelength 2n.
* ``u_n`` (unstable) and the odd words ``Y_{n,m}`` built from it.
* ``B_n`` / ``C_n`` for n >= 4: decoded from a 20-corner master squarepath
  whose coordinates are affine in n; C is the digit swap of B.
* ``W_{n,k}`` for n >= 3, k >= 0: decoded from a bilaterally symmetric
  squarepath with two staircase sites that each grow by one step per k.

All generators are pure; results are memoised in process and, when the
environment variable TRIBILL_CACHE_DIR is set, mirrored to disk as plain
digit strings.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from .words import LatticePath, Point, Word, word_from_squarepath

# 20-corner master squarepath for B_n: per corner, coordinates a*n + b
# stored as (a, b) for x and y, plus the unit-circle exponent of each
# corner's contribution to the holonomy at the corner point (pi/2n, pi/2n),
# reduced mod 4n with the parity shift folded in.
_B_X = [(0, 0), (2, -2), (2, -2), (0, -2), (0, -2), (-2, 0), (-2, 0),
        (0, -2), (0, -2), (2, -8), (2, -8), (4, -12), (4, -12), (6, -12),
        (6, -12), (4, -8), (4, -8), (2, -2), (2, -2), (0, 0)]
_B_Y = [(0, 1), (0, 1), (-2, 3), (-2, 3), (0, 1), (0, 1), (-2, 1), (-2, 1),
        (-4, 5), (-4, 5), (-6, 11), (-6, 11), (-8, 13), (-8, 13), (-6, 11),
        (-6, 11), (-4, 5), (-4, 5), (-2, 1), (-2, 1)]
_B_EXPONENTS = [1, -1, 1, 1, -1, 1, 1, -1, 3, -3,
                3, -1, 1, 1, -1, 3, -3, 3, -1, 1]

#: The decoded B word must tile the quadrant x1 < pi/2n < x2 next to the
#: n-th right-isosceles point.  With the horizontal-dart digit fixed to 2
#: by the decoder, that quadrant test selects the plain labelling; the
#: digit swap lands in the mirror quadrant and is what C provides.
_B_SWAPPED = False


def _check_n(n: int, least: int, family: str) -> None:
    if not isinstance(n, int) or n < least:
        raise ValueError(f"{family} requires integer n >= {least}, got {n!r}")


@lru_cache(maxsize=None)
def gen_A(n: int) -> Word:
    """((23)^n (13)^(n-1) 1)^2, length 8n-2."""
    _check_n(n, 2, "A")
    half = "23" * n + "13" * (n - 1) + "1"
    return _cached("A", n, None, lambda: Word(half * 2))


@lru_cache(maxsize=None)
def gen_unstable(n: int) -> Word:
    """(31)^(n-1) (32)^(n-1), length 4(n-1); not stable."""
    _check_n(n, 2, "u")
    return _cached("u", n, None, lambda: Word("31" * (n - 1) + "32" * (n - 1)))


@lru_cache(maxsize=None)
def gen_Y(n: int, m: int) -> Word:
    """1 (u_n)^m 3 2, odd length 4m(n-1)+3; equals its own reversal after
    swapping digits 1 and 2."""
    _check_n(n, 2, "Y")
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"Y requires integer m >= 1, got {m!r}")
    return _cached("Y", n, m, lambda: Word("1" + gen_unstable(n).digits * m + "32"))


def master_squarepath_B(n: int) -> LatticePath:
    """The 20-corner squarepath that determines B_n."""
    _check_n(n, 4, "B")
    corners = [(ax * n + bx, ay * n + by)
               for (ax, bx), (ay, by) in zip(_B_X, _B_Y)]
    return LatticePath(tuple(corners) + (corners[0],), True)


def b_holonomy_exponents(n: int) -> list[int]:
    """Per-corner exponents e with sign(i) * E((pi/2n) * (x+y)) = omega^e,
    omega = E(pi/2n); the parity sign is folded in via e -> e + 2n."""
    out = []
    for i, ((ax, bx), (ay, by)) in enumerate(zip(_B_X, _B_Y)):
        e = (ax + ay) * n + bx + by + (0 if i % 2 == 0 else 2 * n)
        e %= 4 * n
        if e > 2 * n:
            e -= 4 * n
        out.append(e)
    return out


@lru_cache(maxsize=None)
def gen_B(n: int) -> Word:
    _check_n(n, 4, "B")

    def build() -> Word:
        w = word_from_squarepath(master_squarepath_B(n))
        return w.swapped() if _B_SWAPPED else w

    return _cached("B", n, None, build)


@lru_cache(maxsize=None)
def gen_C(n: int) -> Word:
    _check_n(n, 4, "C")
    return _cached("C", n, None, lambda: gen_B(n).swapped())


def w_corner_list(n: int, k: int) -> list[Point]:
    """Corner sequence of the W squarepath.

    The path leaves a fixed 12-corner core and grows two southeast
    staircases, one step per k, at the two sites where the core crosses
    the diagonal of symmetry.  Reflection in that diagonal,
    (x, y) -> (y + Z, x - Z) with Z = (2n-2)(k+2) - 1, maps the corner
    cycle to itself with reversed orientation, splitting it into the two
    embedded halves.
    """
    M = 2 * n - 2
    c: list[Point] = [(0, 1), (M, 1), (M, 1 - M), (2 * M, 1 - M), (2 * M, 1 - 2 * M)]
    for j in range(1, k + 1):
        c += [((2 + j) * M, 1 - (1 + j) * M), ((2 + j) * M, 1 - (2 + j) * M)]
    for j in range(k, 0, -1):
        c += [((1 + j) * M - 2, 1 - (2 + j) * M), ((1 + j) * M - 2, 1 - (1 + j) * M)]
    c += [(M - 2, 1 - 2 * M), (M - 2, 1 - M), (-2, 1 - M), (-2, -1 - 2 * M)]
    for j in range(1, k + 1):
        c += [(j * M - 2, -1 - (1 + j) * M), (j * M - 2, -1 - (2 + j) * M)]
    for j in range(k, 0, -1):
        c += [((1 + j) * M, -1 - (2 + j) * M), ((1 + j) * M, -1 - (1 + j) * M)]
    c += [(M, -1 - 2 * M), (M, -1 - M), (0, -1 - M)]
    return c


def master_squarepath_W(n: int, k: int) -> LatticePath:
    _check_n(n, 3, "W")
    if not isinstance(k, int) or k < 0:
        raise ValueError(f"W requires integer k >= 0, got {k!r}")
    corners = w_corner_list(n, k)
    return LatticePath(tuple(corners) + (corners[0],), True)


@lru_cache(maxsize=None)
def gen_W(n: int, k: int) -> Word:
    return _cached("W", n, k, lambda: word_from_squarepath(master_squarepath_W(n, k)))


def w_length(n: int, k: int) -> int:
    """Length of W_{n,k}: the 12 + 8k corner path has perimeter
    24n - 16 + 16(n-1)k and exactly four opposite-side turns."""
    return 24 * n - 20 + 16 * (n - 1) * k


def diagonal_symmetry_W(n: int, k: int) -> int:
    """Offset Z of the symmetry reflection (x, y) -> (y + Z, x - Z)."""
    return (2 * n - 2) * (k + 2) - 1


_FAMILY_KINDS = ("A", "B", "C", "Y", "U", "W")


def family_word(kind: str, n: int, m_or_k: int | None = None) -> Word:
    """Dispatch by family id; Y needs m, W needs k, the rest only n."""
    kind = kind.upper()
    if kind == "A":
        return gen_A(n)
    if kind == "B":
        return gen_B(n)
    if kind == "C":
        return gen_C(n)
    if kind == "U":
        return gen_unstable(n)
    if kind == "Y":
        if m_or_k is None:
            raise ValueError("family Y needs m")
        return gen_Y(n, m_or_k)
    if kind == "W":
        if m_or_k is None:
            raise ValueError("family W needs k")
        return gen_W(n, m_or_k)
    raise ValueError(f"unknown family kind {kind!r}; expected one of {_FAMILY_KINDS}")


def _cached(kind: str, n: int, m_or_k: int | None, build) -> Word:
    cache_dir = os.environ.get("TRIBILL_CACHE_DIR")
    if not cache_dir:
        return build()
    tag = f"{kind}_{n}" + ("" if m_or_k is None else f"_{m_or_k}")
    path = Path(cache_dir) / f"{tag}.word"
    if path.exists():
        return Word(path.read_text().strip())
    word = build()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(word.digits)
    return word
