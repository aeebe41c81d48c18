"""Orbit-tile rasters over parameter space.

A tile raster samples the membership margin of one word on a rectangular
grid of parameter points.  The margin at a cell center is exactly the
quantity ``unfolding.separation`` computes; the grid code just develops
the unfolding for every cell at once with numpy arrays instead of looping
over cells in Python, so the two agree cell for cell up to float noise.

Conventions.  A region is a pair of closed intervals
``(x1_lo, x1_hi, x2_lo, x2_hi)`` and must lie inside the obtuse-triangle
parameter region.  ``membership[i, j]`` refers to the center of cell
``(i, j)``; the first index runs along x1.  Odd words are squared before
scanning, matching pointwise membership.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .families import gen_Y
from .unfolding import (TOL, ParameterPoint, as_point, membership_geometric,
                        unfold)
from .words import Word, as_word, is_stable_parity

Region = tuple[float, float, float, float]

__all__ = ["Region", "TileRaster", "scan", "separation_grid", "coverage_Y",
           "boundary_polyline", "quadrant_table", "quadrant_epsilon",
           "w_tile_census"]


def _check_region(region: Region) -> Region:
    x1_lo, x1_hi, x2_lo, x2_hi = map(float, region)
    if not (x1_lo < x1_hi and x2_lo < x2_hi):
        raise ValueError("region intervals must be nondegenerate")
    if not (x1_lo > 0 and x2_lo > 0 and x1_hi + x2_hi < math.pi / 2):
        raise ValueError("region leaves the obtuse-triangle parameters")
    return x1_lo, x1_hi, x2_lo, x2_hi


def _resolution(res: "int | tuple[int, int]") -> tuple[int, int]:
    nx, ny = (res, res) if isinstance(res, int) else res
    if nx < 1 or ny < 1:
        raise ValueError("resolution must be positive")
    return int(nx), int(ny)


@dataclass(frozen=True)
class TileRaster:
    """Membership bits and signed margins of one word over a region."""

    word: Word
    region: Region
    resolution: tuple[int, int]
    membership: np.ndarray         # bool, shape (nx, ny)
    margins: np.ndarray            # float, same shape

    @property
    def cell_size(self) -> tuple[float, float]:
        x1_lo, x1_hi, x2_lo, x2_hi = self.region
        nx, ny = self.resolution
        return (x1_hi - x1_lo) / nx, (x2_hi - x2_lo) / ny

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        x1_lo, _, x2_lo, _ = self.region
        w, h = self.cell_size
        return x1_lo + (i + 0.5) * w, x2_lo + (j + 0.5) * h

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates along each axis."""
        x1_lo, x1_hi, x2_lo, x2_hi = self.region
        nx, ny = self.resolution
        w, h = self.cell_size
        return (x1_lo + w * (np.arange(nx) + 0.5),
                x2_lo + h * (np.arange(ny) + 0.5))

    def fraction(self) -> float:
        return float(self.membership.mean())

    def to_json(self) -> str:
        return json.dumps({
            "word": str(self.word),
            "region": list(self.region),
            "resolution": list(self.resolution),
            "membership": ["".join("1" if m else "0" for m in row)
                           for row in self.membership],
            "margins": [[float(v) for v in row] for row in self.margins],
        })

    @classmethod
    def from_json(cls, text: str) -> "TileRaster":
        d = json.loads(text)
        member = np.array([[c == "1" for c in row] for row in d["membership"]])
        return cls(as_word(d["word"]), tuple(d["region"]),
                   tuple(d["resolution"]), member,
                   np.array(d["margins"], dtype=float))


def _chain_reps(word: Word, region: Region):
    """Boundary-chain vertex representatives, grouped by triangle index.

    The chain combinatorics depend only on the word, so one reference
    unfolding fixes them for the whole region.
    """
    x1_lo, x1_hi, x2_lo, x2_hi = region
    center = ParameterPoint((x1_lo + x1_hi) / 2, (x2_lo + x2_hi) / 2)
    u = unfold(word, center)
    if not u.parallel:
        raise ValueError("first and last sides are not parallel at this point")
    if not u.top or not u.bottom:
        raise ValueError("boundary chains unavailable for this word")
    by_tri: dict[int, list[tuple[int, int]]] = {}
    for chain, verts in enumerate((u.top, u.bottom)):
        for v in verts:
            i, d = v.rep
            by_tri.setdefault(i, []).append((chain, d))
    return by_tri


def separation_grid(w: "Word | str", region: Region,
                    resolution: "int | tuple[int, int]",
                    square_odd: bool = True) -> np.ndarray:
    """Signed membership margin at every cell center of the region.

    Mirrors ``unfolding.separation`` pointwise: the unfolding is developed
    once per letter over the whole grid, the holonomy direction rotated
    horizontal, and the height gap between the two boundary chains taken.
    """
    word = as_word(w)
    if len(word) % 2 == 1 and square_odd:
        word = word.squared()
    region = _check_region(region)
    nx, ny = _resolution(resolution)
    by_tri = _chain_reps(word, region)
    letters = word.letters
    L = len(letters)

    x1_lo, x1_hi, x2_lo, x2_hi = region
    x1 = x1_lo + (x1_hi - x1_lo) / nx * (np.arange(nx) + 0.5)
    x2 = x2_lo + (x2_hi - x2_lo) / ny * (np.arange(ny) + 0.5)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    l2 = np.sin(X2) / np.sin(X1 + X2)

    def develop(record=None):
        tri = [np.zeros((nx, ny), dtype=complex),
               np.ones((nx, ny), dtype=complex),
               l2 * np.exp(1j * X1)]
        if record is not None:
            record(0, tri)
        for step, d in enumerate(letters):
            p, q = [v for v in (1, 2, 3) if v != d]
            u, v = tri[p - 1], tri[q - 1]
            e = v - u
            tri[d - 1] = u + e * np.conj((tri[d - 1] - u) / e)
            if record is not None:
                record(step + 1, tri)
        return tri

    h = develop()[0]                      # T_0 starts at the origin
    unit = np.conj(h) / np.abs(h)

    inf = np.full((nx, ny), np.inf)
    lo = [inf.copy(), inf.copy()]
    hi = [-inf.copy(), -inf.copy()]

    def record(i, tri):
        for chain, d in by_tri.get(i, ()):
            height = (tri[d - 1] * unit).imag
            np.minimum(lo[chain], height, out=lo[chain])
            np.maximum(hi[chain], height, out=hi[chain])

    develop(record)
    return np.maximum(lo[0] - hi[1], lo[1] - hi[0])


def scan(w: "Word | str", region: Region,
         resolution: "int | tuple[int, int]",
         square_odd: bool = True) -> TileRaster:
    """Raster the orbit tile of w over a rectangular region.

    Each membership bit equals geometric membership at that cell center;
    margins carry the signed separation for boundary extraction.
    """
    word = as_word(w)
    if len(word) == 0:
        raise ValueError("cannot scan the empty word")
    if len(word) % 2 == 1 and square_odd:
        word = word.squared()
    if not is_stable_parity(word):
        raise ValueError(f"{word} is unstable; its tile has empty interior")
    region = _check_region(region)
    nx, ny = _resolution(resolution)
    margins = separation_grid(word, region, (nx, ny), square_odd=False)
    return TileRaster(word, region, (nx, ny), margins > TOL, margins)


def coverage_Y(n: int, x: float, m_max: int = 64) -> "int | None":
    """Smallest m with (x, x) inside the tile of the m-th staircase word,
    or None if none of m = 1 .. m_max covers it.

    Requires pi/(2n+2) < x < pi/(2n), the diagonal gap between adjacent
    right-isosceles points where the staircase family lives.
    """
    if not math.pi / (2 * n + 2) < x < math.pi / (2 * n):
        raise ValueError("x outside the staircase interval for this n")
    for m in range(1, m_max + 1):
        if membership_geometric(gen_Y(n, m), (x, x)):
            return m
    return None


# Marching-squares segment table: for each corner-sign case, the pairs of
# cell edges (0 bottom, 1 right, 2 top, 3 left) the zero level crosses.
_CASES: dict[int, tuple[tuple[int, int], ...]] = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    8: ((2, 3),), 7: ((2, 3),),
    3: ((3, 1),), 12: ((3, 1),),
    6: ((0, 2),), 9: ((0, 2),),
    5: ((3, 2), (1, 0)),            # saddles: split by the cell mean
    10: ((0, 3), (2, 1)),
}


def boundary_polyline(raster: TileRaster) -> list[list[tuple[float, float]]]:
    """Zero-level curves of the margin grid as polylines in (x1, x2).

    Marching squares over the lattice of cell centers with linear
    interpolation along cell edges; advisory precision, about one cell.
    Returns an empty list when the margin never changes sign.
    """
    m = raster.margins
    nx, ny = raster.resolution
    if nx < 2 or ny < 2:
        return []
    cx, cy = raster.centers()

    def interp(pa, pb, va, vb):
        t = 0.5 if va == vb else va / (va - vb)
        return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))

    segments: list[tuple[tuple[float, float], tuple[float, float]]] = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            corners = ((cx[i], cy[j]), (cx[i + 1], cy[j]),
                       (cx[i + 1], cy[j + 1]), (cx[i], cy[j + 1]))
            vals = (m[i, j], m[i + 1, j], m[i + 1, j + 1], m[i, j + 1])
            case = sum(1 << k for k in range(4) if vals[k] > 0)
            if case in (5, 10) and sum(vals) <= 0:
                case = 15 - case    # resolve the saddle the other way
            edges = {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 0)}
            for ea, eb in _CASES[case]:
                pts = []
                for e in (ea, eb):
                    a, b = edges[e]
                    pts.append(interp(corners[a], corners[b],
                                      vals[a], vals[b]))
                segments.append((pts[0], pts[1]))

    # Stitch segments into polylines by shared endpoints.
    def key(p):
        return (round(p[0], 12), round(p[1], 12))

    adjacency: dict[tuple, list[int]] = {}
    for idx, (a, b) in enumerate(segments):
        adjacency.setdefault(key(a), []).append(idx)
        adjacency.setdefault(key(b), []).append(idx)
    unused = set(range(len(segments)))
    lines: list[list[tuple[float, float]]] = []
    while unused:
        idx = min(unused)
        unused.remove(idx)
        a, b = segments[idx]
        line = [a, b]
        for grow_end in (True, False):
            while True:
                tip = key(line[-1] if grow_end else line[0])
                nxt = [k for k in adjacency.get(tip, ()) if k in unused]
                if not nxt:
                    break
                k = nxt[0]
                unused.remove(k)
                pa, pb = segments[k]
                point = pb if key(pa) == tip else pa
                if grow_end:
                    line.append(point)
                else:
                    line.insert(0, point)
        lines.append(line)
    return lines


_QUADRANTS = {"A": (-1, -1), "B": (-1, 1), "C": (1, -1)}


def quadrant_table(n: int, eps: float, words: dict[str, "Word | str"],
                   resolution: int = 256) -> dict[str, dict]:
    """Check the three quarter-ball claims at the n-th right-isosceles point.

    For each entry, the word's tile must contain every interior cell of
    the quarter ball of radius eps on its assigned side of the point:
    cells count as interior when the whole cell sits inside the open
    ball-and-quadrant intersection.  Returns per-word cell counts and a
    combined ``ok`` flag.
    """
    V = ParameterPoint.veech(n)
    out: dict[str, dict] = {}
    for name, (s1, s2) in _QUADRANTS.items():
        word = as_word(words[name])
        region = (min(V.x1, V.x1 + s1 * eps), max(V.x1, V.x1 + s1 * eps),
                  min(V.x2, V.x2 + s2 * eps), max(V.x2, V.x2 + s2 * eps))
        raster = scan(word, region, resolution)
        cx, cy = raster.centers()
        DX, DY = np.meshgrid(cx - V.x1, cy - V.x2, indexing="ij")
        w, h = raster.cell_size
        pad = math.hypot(w, h) / 2
        interior = ((np.hypot(DX, DY) < eps - pad)
                    & (s1 * DX > w / 2) & (s2 * DY > h / 2))
        missed = int((interior & ~raster.membership).sum())
        out[name] = {"word": str(word), "interior": int(interior.sum()),
                     "missed": missed}
    out["ok"] = all(v["missed"] == 0 for k, v in out.items() if k != "ok")
    return out


def quadrant_epsilon(n: int, words: dict[str, "Word | str"],
                     start: float = 1e-2, floor: float = 1e-5,
                     resolution: int = 256) -> tuple[float, dict[str, dict]]:
    """Largest tested radius at which the quarter-ball claims hold.

    Halves the radius starting from ``start`` until the raster check
    passes; the radius is found, never assumed.  Raises if none above
    ``floor`` works.
    """
    eps = start
    while eps >= floor:
        table = quadrant_table(n, eps, words, resolution)
        if table["ok"]:
            return eps, table
        eps /= 2
    raise ValueError(f"no radius above {floor} verifies the quadrant claims")


def w_tile_census(n: int, radii: "list[float]",
                  k_max: int = 64) -> list[dict]:
    """How deep into the staircase family diagonal coverage reaches.

    For each radius, reports the smallest index k whose tile contains the
    diagonal point at that distance from the n-th right-isosceles point
    (None if no k <= k_max does).  An experiment, not a verified claim:
    the indices growing without bound as the radius shrinks is evidence
    that no finite subfamily covers a punctured neighborhood.
    """
    from .families import gen_W
    V = ParameterPoint.veech(n)
    out = []
    for r in radii:
        t = r / math.sqrt(2)
        X = (V.x1 + t, V.x2 + t)
        found = None
        for k in range(k_max + 1):
            try:
                if membership_geometric(gen_W(n, k), X):
                    found = k
                    break
            except ValueError:
                continue
        out.append({"radius": float(r), "k": found})
    return out
