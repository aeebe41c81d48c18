"""Unfolding geometry: reflections, spines, darts, membership."""

import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tribill.families import gen_A, gen_B, gen_C, gen_unstable, gen_W, gen_Y
from tribill.unfolding import (
    ParameterPoint,
    dart_decomposition,
    dart_lemma_applies,
    dart_wedge,
    edge_angle,
    is_controlled,
    membership_geometric,
    separation,
    spine,
    unfold,
)
from tribill.words import Word, as_word

W22 = as_word("2323132313123232313131")

# Frozen membership margins (normalized units, long edge = 1).
W22_SEP_AT_V3 = 0.18898223650460966
W410_DIAG_SEP = 0.007903102853658694


def veech(n):
    return ParameterPoint.veech(n)


class TestParameterPoint:
    def test_veech_values(self):
        for n in (2, 3, 4, 9):
            p = veech(n)
            assert p.x1 == pytest.approx(math.pi / (2 * n), abs=0)
            assert p.x2 == p.x1

    def test_obtuse_region_enforced(self):
        with pytest.raises(ValueError):
            ParameterPoint(0.9, 0.9)
        with pytest.raises(ValueError):
            ParameterPoint(-0.1, 0.3)

    def test_wide_flag_admits_right_isosceles(self):
        # V_2 sits on the obtuse-region boundary; the wide flag covers it.
        p = veech(2)
        assert p.x1 + p.x2 == pytest.approx(math.pi / 2)
        with pytest.raises(ValueError):
            ParameterPoint(math.pi / 4, math.pi / 4)

    def test_shifted(self):
        p = veech(4).shifted(1e-3, -1e-3)
        assert p.x1 == pytest.approx(math.pi / 8 + 1e-3)
        assert p.x2 == pytest.approx(math.pi / 8 - 1e-3)


class TestUnfold:
    def test_single_letter_two_triangles(self):
        u = unfold("2", (0.4, 0.5))
        assert len(u.triangles) == 2

    def test_triangle_count(self):
        u = unfold(W22, veech(3))
        assert len(u.triangles) == len(W22) + 1

    def test_reflection_gluing(self):
        # consecutive copies share exactly the two vertices off the named edge
        w = as_word("2313123")
        u = unfold(w, (0.35, 0.45))
        for i, d in enumerate(w.letters):
            for v in (1, 2, 3):
                a, b = u.triangles[i][v - 1], u.triangles[i + 1][v - 1]
                if v == d:
                    assert abs(a - b) > 1e-6
                else:
                    assert abs(a - b) < 1e-12

    def test_stable_word_horizontal_holonomy(self):
        u = unfold(W22, veech(3))
        assert u.parallel
        assert abs(u.holonomy.imag) < 1e-12
        assert u.holonomy.real > 0

    def test_22_word_holonomy_modulus(self):
        # |h|^2 = 21 at V_3, an exact algebraic coincidence kept as oracle
        u = unfold(W22, veech(3))
        assert abs(u.holonomy) ** 2 == pytest.approx(21.0, abs=1e-9)

    def test_unstable_word_not_parallel(self):
        assert not unfold("21", (0.4, 0.5)).parallel

    def test_boundary_chain_lengths(self):
        u = unfold(W22, veech(3))
        assert len(u.top) == 12
        assert len(u.bottom) == 12
        assert len(u.top) + len(u.bottom) == len(W22) + 2

    def test_top_chain_is_higher(self):
        u = unfold(W22, veech(3))
        mt = sum(v.pos.imag for v in u.top) / len(u.top)
        mb = sum(v.pos.imag for v in u.bottom) / len(u.bottom)
        assert mt > mb

    def test_degenerate_angle_raises(self):
        with pytest.raises(ValueError):
            unfold("23", (0.0, 0.4))

    def test_long_edge_normalized(self):
        u = unfold("23", (0.3, 0.4))
        a, b = u.edge(0, 3)
        assert abs(b - a) == pytest.approx(1.0, abs=1e-12)

    @given(st.lists(st.integers(0, 5), min_size=1, max_size=21).filter(
        lambda r: len(r) % 2 == 1),
        st.integers(0, 10 ** 6))
    @settings(max_examples=60, deadline=None)
    def test_odd_squares_always_parallel(self, seed, pt):
        # parity-stable words have translational holonomy at every point;
        # odd squares are the generic stable supply
        digits, prev = [], None
        for r in seed:
            choices = [c for c in "123" if c != prev]
            digits.append(choices[r % len(choices)])
            prev = digits[-1]
        w = Word("".join(digits), allow_repeats=True).squared()
        rng = random.Random(pt)
        x1 = rng.uniform(0.05, 1.0)
        x2 = rng.uniform(0.05, min(1.0, math.pi / 2 - x1 - 0.02))
        assert unfold(w, (x1, x2)).parallel


class TestWHolonomy:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_modulus_identity(self, n, k):
        # measured in short-edge units the holonomy modulus is
        # |12(1+cos pi/n) + 8(1+cos pi/n) k + 4 i sin pi/n|
        p = veech(n)
        u = unfold(gen_W(n, k), p)
        l1 = math.sin(p.x1) / math.sin(p.x1 + p.x2)
        c = 1 + math.cos(math.pi / n)
        want = abs(complex(12 * c + 8 * c * k, 4 * math.sin(math.pi / n)))
        assert abs(u.holonomy) / l1 == pytest.approx(want, abs=1e-9)


class TestEdgeAngle:
    def test_equal_labels_zero(self):
        assert edge_angle((2, -1), (2, -1), (0.3, 0.4)) == 0.0

    def test_matches_numeric_geometry(self):
        rng = random.Random(7)
        for w in (W22, gen_B(4)):
            for _ in range(5):
                x1 = rng.uniform(0.1, 0.9)
                x2 = rng.uniform(0.1, min(0.9, math.pi / 2 - x1 - 0.05))
                u = unfold(w, (x1, x2))
                for _ in range(10):
                    i = rng.randrange(len(w) + 1)
                    j = rng.randrange(len(w) + 1)
                    di, dj = rng.choice((1, 2, 3)), rng.choice((1, 2, 3))
                    ai, bi = u.edge(i, di)
                    aj, bj = u.edge(j, dj)
                    num = (cmath.phase(bj - aj) - cmath.phase(bi - ai)) % math.pi
                    lab = edge_angle(u.edge_labels[(i, di)],
                                     u.edge_labels[(j, dj)], (x1, x2))
                    err = abs(num - lab)
                    assert min(err, math.pi - err) < 1e-9

    @pytest.mark.parametrize("n,k", [(3, 0), (3, 2), (4, 1), (5, 0)])
    def test_qh_edges_horizontal_mod_pi(self, n, k):
        # label sums in {-4n,-2n,0,2n} make X.label a multiple of pi at V_n
        w = gen_W(n, k)
        p = veech(n)
        u = unfold(w, p)
        seen = 0
        for (i, d), lab in u.edge_labels.items():
            if d == 3 or lab[0] + lab[1] not in (-4 * n, -2 * n, 0, 2 * n):
                continue
            seen += 1
            ang = (p.x1 * lab[0] + p.x2 * lab[1]) % math.pi
            assert min(ang, math.pi - ang) < 1e-9
        assert seen > 0


class TestQHFamilies:
    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_counts_and_extremes(self, n, k):
        """The quasi-horizontal short edges of gen_W(n,k) split into four
        label-sum families with affine-in-k sizes and extreme labels.  The
        0-family count includes the wrap copy of the leading edge."""
        w = gen_W(n, k)
        u = unfold(w, veech(n))
        letters = w.letters
        fams = {-4 * n: [], -2 * n: [], 0: [], 2 * n: []}
        for i in range(len(w) + 1):
            for d in (1, 2):
                if i > 0 and letters[i - 1] == d:
                    continue        # same geometric edge as (i-1, d)
                lab = u.edge_labels[(i, d)]
                if lab[0] + lab[1] in fams:
                    fams[lab[0] + lab[1]].append(lab)
        Z = (2 * n - 2) * (k + 2) - 1
        assert {s: len(v) for s, v in fams.items()} == {
            -4 * n: 2 + 2 * k, -2 * n: 8 + 6 * k, 0: 11 + 6 * k, 2 * n: 4 + 2 * k}
        assert {s: (min(v), max(v)) for s, v in fams.items()} == {
            -4 * n: ((-3, -4 * n + 3), (-4 * n + 3 + Z, -3 - Z)),
            -2 * n: ((-2, -2 * n + 2), (-2 * n + 2 + Z, -2 - Z)),
            0: ((0, 0), (Z, -Z)),
            2 * n: ((2 * n - 2, 2), (2 + Z, 2 * n - 2 - Z))}


class TestSpine:
    def test_one_dart_word_has_two_edges(self):
        assert spine("2") == [(0, 3), (1, 3)]

    def test_length_is_dart_count_plus_one(self):
        assert len(spine(gen_A(3))) == 5
        assert len(spine(gen_B(4))) == 21

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_collinear_at_veech_point(self, n):
        assert self._deviation(gen_A(n), veech(n)) < 1e-12

    def test_not_collinear_off_veech_point(self):
        dev = self._deviation(gen_A(3), (math.pi / 5, math.pi / 6))
        assert dev == pytest.approx(0.246693, abs=1e-5)

    @staticmethod
    def _deviation(w, X):
        word = dart_decomposition(w).word
        u = unfold(word, X)
        mids = []
        for i, d in spine(word):
            a, b = u.edge(i, d)
            mids.append((a + b) / 2)
        z0 = sum(mids) / len(mids)
        axis = max((m - z0 for m in mids), key=abs)
        axis /= abs(axis)
        return max(abs(((m - z0) / axis).imag) for m in mids)

    def test_short_spines_are_periodic_paths(self):
        assert spine(W22, 1) == [(i, 1) for i in
                                 (1, 2, 3, 6, 7, 10, 12, 13, 14, 15, 16, 21)]
        assert spine(W22, 2) == [(i, 2) for i in
                                 (0, 4, 5, 8, 9, 10, 11, 17, 18, 19, 20, 21)]

    def test_short_spines_connect_and_close_up(self):
        w = W22
        for d in (1, 2):
            sp = spine(w, d)
            # hanging edges are excluded, so strictly fewer than all
            assert len(sp) < 1 + sum(1 for l in w.letters if l != d)
            u = unfold(w, veech(3))
            rd = lambda z: (round(z.real, 9), round(z.imag, 9))
            ends = [set(map(rd, u.edge(i, d))) for i, _ in sp]
            for a, b in zip(ends, ends[1:]):
                assert a & b, "consecutive spine edges must share a vertex"
            shifted = {rd(z + u.holonomy) for z in u.edge(*sp[0])}
            assert ends[-1] & shifted, "the path must close up periodically"

    def test_bad_type_rejected(self):
        with pytest.raises(ValueError):
            spine(W22, 4)


class TestDartDecomposition:
    def test_a_family(self):
        for n in (2, 3, 4):
            dd = dart_decomposition(gen_A(n))
            assert [d.order for d in dd.darts] == [n] * 4
        assert dart_decomposition(gen_A(2)).delta == 2

    def test_unstable_family(self):
        for n in (3, 5):
            dd = dart_decomposition(gen_unstable(n))
            assert [d.order for d in dd.darts] == [n - 1, n - 1]
            assert {d.horizontal for d in dd.darts} == {True, False}

    def test_b4_has_twenty_darts(self):
        dd = dart_decomposition(gen_B(4))
        assert len(dd.darts) == 20
        assert sorted(d.order for d in dd.darts) == [1] * 4 + [2] * 4 + [3] * 8 + [4] * 4

    def test_22_word_darts(self):
        dd = dart_decomposition(W22)
        assert [(d.order, d.horizontal) for d in dd.darts] == [
            (2, True), (1, False), (1, True), (2, False), (3, True), (3, False)]
        assert dd.delta == 3

    def test_orders_halve_squarepath_edges(self):
        from tribill.words import squarepath
        w = gen_W(4, 1)
        lengths = sorted(2 * d.order for d in dart_decomposition(w).darts)
        path = squarepath(w).cycle
        edges = sorted(abs(b[0] - a[0]) + abs(b[1] - a[1])
                       for a, b in zip(path, path[1:] + path[:1]))
        assert lengths == edges

    def test_repeated_letters_rejected(self):
        with pytest.raises(ValueError):
            dart_decomposition(Word("2332", allow_repeats=True))

    def test_pointing_alternates_with_base_side(self):
        dd = dart_decomposition(gen_A(4))
        assert {d.pointing for d in dd.darts} == {"up", "down"}


class TestDartLemma:
    def test_a4_quadrants(self):
        eps = 1e-3
        for sx, sy, want in ((-1, -1, True), (-1, 1, False),
                             (1, -1, False), (1, 1, False)):
            X = veech(4).shifted(sx * eps, sy * eps)
            assert dart_lemma_applies(gen_A(4), X) is want

    def test_angle_gate_failure(self):
        # delta(W(9,0)) is large enough that a fat triangle fails the gate
        w = gen_W(9, 0)
        delta = dart_decomposition(w).delta
        assert 0.8 > 2 * math.pi / delta
        assert dart_lemma_applies(w, (0.8, 0.3)) is False

    def test_implies_membership(self):
        rng = random.Random(20260815)
        words = [gen_A(3), gen_A(4), gen_B(4), gen_C(4),
                 gen_W(3, 0), gen_W(3, 1), gen_W(4, 1),
                 gen_Y(3, 1).squared(), W22]
        centers = [veech(3), veech(4), veech(5)]
        hits = 0
        for _ in range(1000):
            w = rng.choice(words)
            c = rng.choice(centers)
            r = 10 ** rng.uniform(-4, -0.7)
            t = rng.uniform(0, 2 * math.pi)
            x1 = c.x1 + r * math.cos(t)
            x2 = c.x2 + r * math.sin(t)
            if not (x1 > 1e-3 and x2 > 1e-3 and x1 + x2 < math.pi / 2 - 1e-3):
                continue
            if dart_lemma_applies(w, (x1, x2)):
                hits += 1
                assert membership_geometric(w, (x1, x2))
        assert hits > 20, "sampling never triggered the lemma"


class TestControlled:
    def test_a_family_controlled_in_tile(self):
        for n in (3, 4, 5):
            X = veech(n).shifted(-1e-3, -1e-3)
            assert dart_lemma_applies(gen_A(n), X)
            assert is_controlled(gen_A(n), X)

    def test_w_family_controlled_on_diagonal(self):
        X = veech(3).shifted(0.012, 0.014)
        assert dart_lemma_applies(gen_W(3, 0), X)
        assert is_controlled(gen_W(3, 0), X)

    def test_small_darts_can_fail_acuteness_inside_tile(self):
        # order-1 darts have wedge exactly 2(x1+x2); at V_3 that is 120
        # degrees, so the 22-word is a member without being controlled
        assert dart_lemma_applies(W22, veech(3))
        assert membership_geometric(W22, veech(3))
        assert is_controlled(W22, veech(3)) is False
        X = veech(4).shifted(-1e-4, 1e-4)
        assert dart_lemma_applies(gen_B(4), X)
        assert is_controlled(gen_B(4), X) is False

    def test_order_one_wedge_formula(self):
        dd = dart_decomposition("21")
        u = unfold(dd.word, (0.3, 0.4))
        for d in dd.darts:
            assert dart_wedge(u, d) == pytest.approx(2 * 0.7, abs=1e-12)


class TestMembership:
    def test_22_word_at_v3(self):
        assert membership_geometric(W22, veech(3)) is True
        assert separation(W22, veech(3)) == pytest.approx(W22_SEP_AT_V3, abs=1e-12)

    def test_22_word_off_tile(self):
        X = (math.pi / 5, math.pi / 6)
        assert membership_geometric(W22, X) is False
        assert separation(W22, X) == pytest.approx(-0.3203949174813597, abs=1e-9)

    def test_a4_quadrants(self):
        eps = 1e-3
        got = {q: membership_geometric(gen_A(4), veech(4).shifted(q[0] * eps, q[1] * eps))
               for q in ((-1, -1), (-1, 1), (1, -1), (1, 1))}
        assert got == {(-1, -1): True, (-1, 1): False, (1, -1): False, (1, 1): False}

    def test_boundary_point_excluded(self):
        # V_4 is a corner of the A_4 tile: separation is zero there
        assert abs(separation(gen_A(4), veech(4))) < 1e-9
        assert membership_geometric(gen_A(4), veech(4)) is False

    def test_w_family_diagonal(self):
        X = veech(4).shifted(0.013 / 100, 0.013 / 100)
        assert membership_geometric(gen_W(4, 10), X) is True
        assert separation(gen_W(4, 10), X) == pytest.approx(W410_DIAG_SEP, abs=1e-12)

    def test_odd_words_squared_automatically(self):
        w = gen_Y(3, 1)
        assert len(w) % 2 == 1
        x = 0.5 * (math.pi / 8 + math.pi / 6)
        assert isinstance(membership_geometric(w, (x, x)), bool)

    def test_raw_flag_propagates_nonparallel(self):
        with pytest.raises(ValueError):
            membership_geometric(gen_Y(3, 1), (0.4, 0.45), square_odd=False)

    def test_unstable_word_raises(self):
        with pytest.raises(ValueError):
            membership_geometric("21", (0.4, 0.5))


class TestGlidePairing:
    """Odd squares carry a glide reflection taking copy i to copy i+m."""

    @pytest.mark.parametrize("w", [gen_A(3), gen_A(4), gen_Y(3, 2).squared()])
    def test_glide_maps_half_strip(self, w):
        rng = random.Random(hash(str(w)) & 0xFFFF)
        for _ in range(3):
            x1 = rng.uniform(0.2, 0.6)
            x2 = rng.uniform(0.2, min(0.6, math.pi / 2 - x1 - 0.05))
            u = unfold(w, (x1, x2))
            m = len(w) // 2
            y0 = (u.triangles[0][0].imag + u.triangles[m][0].imag) / 2
            h = u.holonomy

            def g(z):
                return complex(z.real + h.real / 2, 2 * y0 - z.imag)

            for i in range(m + 1):
                for d in range(3):
                    assert abs(g(u.triangles[i][d]) - u.triangles[i + m][d]) < 1e-9

    def test_height_multisets_mirror(self):
        w = gen_A(4)
        u = unfold(w, (0.37, 0.31))
        m = len(w) // 2
        y0 = (u.triangles[0][0].imag + u.triangles[m][0].imag) / 2
        # drop the wrap-duplicated final class of each chain
        top = sorted(v.pos.imag - y0 for v in u.top[:-1])
        bot = sorted(y0 - v.pos.imag for v in u.bottom[:-1])
        assert len(top) == len(bot)
        for a, b in zip(top, bot):
            assert a == pytest.approx(b, abs=1e-9)

    def test_lowest_top_reflects_to_highest_bottom(self):
        w = gen_A(3)
        u = unfold(w, (0.5, 0.42))
        m = len(w) // 2
        y0 = (u.triangles[0][0].imag + u.triangles[m][0].imag) / 2
        lowest_top = min(v.pos.imag for v in u.top)
        highest_bot = max(v.pos.imag for v in u.bottom)
        assert 2 * y0 - lowest_top == pytest.approx(highest_bot, abs=1e-9)


class TestYHorizontal:
    @pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (3, 2), (4, 1), (5, 2)])
    def test_first_long_edge_horizontal_at_isosceles(self, n, m):
        x = 0.5 * (math.pi / (2 * n + 2) + math.pi / (2 * n))
        u = unfold(gen_Y(n, m).squared(), (x, x))
        a, b = u.edge(0, 3)
        assert abs((b - a).imag) < 1e-9
