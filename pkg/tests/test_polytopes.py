from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from higher_segal.claws import cech_cube, classify_claw
from higher_segal.covers import Precover, is_refinement
from higher_segal.polytopes import (
    CyclicPolytope,
    boundary_facets,
    det,
    export_off,
    gale_side,
    hull_facets,
    interpolation_chain,
    moment_points,
    polytope_volume_check,
    segal_cover,
    triviality_claw,
)


def labels(p):
    return sorted(p.labels())


def _blocks(F):
    out = []
    for x in F:
        if out and out[-1][-1] == x - 1:
            out[-1].append(x)
        else:
            out.append([x])
    return out


class TestDeterminant:
    @given(st.integers(1, 5).flatmap(lambda k: st.lists(st.lists(st.integers(-50, 50), min_size=k, max_size=k), min_size=k, max_size=k)))
    def test_matches_sympy(self, rows):
        assert det(rows) == sympy.Matrix(rows).det()

    def test_vandermonde(self):
        for n in range(1, 7):
            rows = [[t**e for e in range(n + 1)] for t in range(n + 1)]
            want = 1
            for a, b in combinations(range(n + 1), 2):
                want *= b - a
            assert det(rows) == want


class TestPolytope:
    def test_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            CyclicPolytope(2, 3)
        with pytest.raises(ValueError):
            hull_facets(2, 3)

    def test_points(self):
        assert CyclicPolytope(3, 2).points == ((0, 0), (1, 1), (2, 4), (3, 9))

    def test_volume_against_shoelace(self):
        # planar case: the moment curve points are already in convex position
        for n in range(2, 9):
            pts = moment_points(n, 2)
            ring = list(pts)
            area2 = abs(sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(ring, ring[1:] + ring[:1])))
            assert CyclicPolytope(n, 2).volume() == area2

    def test_volume_d1(self):
        for n in range(1, 6):
            assert CyclicPolytope(n, 1).volume() == n

    def test_boundary_facets_gale(self):
        # boundary facets of C(n, d): every interior block has even length
        for d in range(2, 5):
            for n in range(d + 1, 8):
                want = [F for F in combinations(range(n + 1), d)
                        if all(len(b) % 2 == 0 for b in _blocks(F) if b[0] != 0 and b[-1] != n)]
                assert boundary_facets(n, d) == want


class TestHull:
    def test_anchor_covers(self):
        lo, _ = hull_facets(4, 3)
        assert labels(lo.precover()) == ["0123", "0134", "1234"]
        for n in range(1, 8):
            assert labels(hull_facets(n, 1)[0].precover()) == [f"{i}{i + 1}" for i in range(n)]

    def test_square(self):
        # the square C(3, 2); the geometric definition puts the 0-containing pair below
        lo, hi = hull_facets(3, 2)
        assert labels(lo.precover()) == ["012", "023"]
        assert labels(hi.precover()) == ["013", "123"]

    @pytest.mark.parametrize("d", range(1, 6))
    def test_generator_matches_hull(self, d):
        for n in range(d + 1, 10):
            lo, hi = hull_facets(n, d)
            assert segal_cover(n, d, "lower").subsets == lo.facets
            assert segal_cover(n, d, "upper").subsets == hi.facets

    def test_gale_side_rejects_non_facets(self):
        assert gale_side((0, 2, 4), 5) is None
        assert gale_side((0, 1, 2), 4) == "lower"
        assert gale_side((0, 3, 4), 4) == "lower"

    def test_odd_lower_facets_are_pairs(self):
        for k in range(1, 4):
            for n in range(2 * k, 10):
                for F in segal_cover(n, 2 * k - 1, "lower").subsets:
                    assert all(len(b) % 2 == 0 for b in _blocks(F))

    @pytest.mark.parametrize("d", range(1, 5))
    def test_volumes(self, d):
        for n in range(d + 1, 9):
            v = polytope_volume_check(n, d)
            assert v["polytope"] == v["lower"] == v["upper"] > 0

    def test_no_overlap_sample(self):
        # barycentres of distinct facets of one triangulation lie in exactly one facet
        for n, d in [(5, 2), (6, 3), (6, 2)]:
            pts = moment_points(n, d)
            for tri in hull_facets(n, d):
                for F in tri.facets:
                    bary = [Fraction(sum(pts[i][c] for i in F), d + 1) for c in range(d)]
                    inside = [G for G in tri.facets if _contains(pts, G, bary)]
                    assert inside == [F]


def _contains(pts, G, q):
    # barycentric coordinates by Cramer's rule over the rationals
    base = pts[G[0]]
    M = sympy.Matrix([[pts[i][c] - base[c] for i in G[1:]] for c in range(len(q))])
    rhs = sympy.Matrix([q[c] - base[c] for c in range(len(q))])
    lam = M.LUsolve(rhs)
    return all(x >= 0 for x in lam) and sum(lam) <= 1


class TestSegalCover:
    def test_examples(self):
        assert labels(segal_cover(5, 1)) == ["01", "12", "23", "34", "45"]
        assert labels(segal_cover(4, 3)) == ["0123", "0134", "1234"]
        assert segal_cover(3, 3).subsets == ((0, 1, 2, 3),)

    def test_errors(self):
        with pytest.raises(ValueError):
            segal_cover(4, 2, "middle")


class TestChain:
    def test_examples(self):
        chain = interpolation_chain(4, 1)
        assert [labels(p) for p in chain] == [["01", "12", "23", "34"], ["01", "1234"], ["0134", "1234"]]
        assert labels(interpolation_chain(5, 1)[-1]) == ["01345", "12345"]
        for k in range(1, 4):
            chain = interpolation_chain(2 * k, k)
            assert all(p == chain[0] for p in chain)

    def test_error(self):
        with pytest.raises(ValueError):
            interpolation_chain(3, 2)

    def test_refinements(self):
        for k in range(1, 4):
            for n in range(2 * k, 2 * k + 4):
                chain = interpolation_chain(n, k)
                for a, b in zip(chain, chain[1:]):
                    assert is_refinement(a, b)
                last = chain[-1]
                assert len(last.subsets) == k + 1
                assert last.is_compatible() and last.is_nondegenerate()


class TestTrivialityClaw:
    def test_odd_k2(self):
        c = triviality_claw(2)
        assert [f.images for f in c.prongs] == [(0, 1, 1, 2), (1, 2), (0, 1)]
        assert classify_claw(c).compatible
        assert cech_cube(c).corner({0}) == 3

    def test_even_k1(self):
        c = triviality_claw(1, "even-lower")
        assert c.n == 1 and c.is_left_active() and classify_claw(c).compatible
        cube = cech_cube(c)
        assert cube.corner({0}) == 2 and cube.corner({0, 1}) < 2
        up = triviality_claw(1, "even-upper")
        assert up.is_right_active() and classify_claw(up).compatible

    def test_errors(self):
        with pytest.raises(ValueError):
            triviality_claw(1, "odd")
        with pytest.raises(ValueError):
            triviality_claw(0, "even-lower")
        with pytest.raises(ValueError):
            triviality_claw(2, "sideways")


class TestOff:
    def test_square(self):
        lo, _ = hull_facets(3, 2)
        text = export_off(lo)
        lines = text.splitlines()
        assert lines[0] == "OFF" and lines[1] == "4 2 0"
        assert lines[2:6] == ["0 0 0", "1 1 0", "2 4 0", "3 9 0"]
        assert lines[6:] == ["3 0 1 2", "3 0 2 3"]

    def test_tetrahedra(self):
        lo, _ = hull_facets(4, 3)
        lines = export_off(lo).splitlines()
        faces = {tuple(map(int, l.split()[1:])) for l in lines[2 + 5:]}
        want = {t for F in lo.facets for t in combinations(F, 3)}
        assert faces == want

    def test_rejects_high_dim(self):
        lo, _ = hull_facets(5, 4)
        with pytest.raises(ValueError):
            export_off(lo)


def test_precover_view():
    lo, _ = hull_facets(4, 3)
    p = lo.precover()
    assert isinstance(p, Precover) and p.subsets == lo.facets
    # simplices on the moment curve have Vandermonde volume
    vander = []
    for F in lo.facets:
        v = 1
        for a, b in combinations(F, 2):
            v *= b - a
        vander.append(v)
    assert lo.volumes() == vander == [12, 72, 12]
    assert CyclicPolytope(4, 3).volume() == 96
