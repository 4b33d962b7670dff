from itertools import combinations, combinations_with_replacement

import pytest
from hypothesis import given
from hypothesis import strategies as st

from higher_segal.claws import cech_cube, classify_claw
from higher_segal.covers import (
    Precover,
    enumerate_covers,
    format_subset,
    intersection_cube,
    is_refinement,
    reduce,
    refinement_graph,
    restrict,
    subset_complex,
)
from higher_segal.polytopes import hull_facets
from higher_segal.simplex import PreconditionError


def P(n, *members):
    return Precover.of(n, members)


@st.composite
def precovers(draw, max_n=5, max_members=4, n=None):
    n = draw(st.integers(0, max_n)) if n is None else n
    members = draw(
        st.lists(
            st.sets(st.integers(0, n), min_size=1).map(lambda s: tuple(sorted(s))),
            min_size=1,
            max_size=max_members,
        )
    )
    return Precover(n, tuple(members))


def all_nonempty_subsets(n):
    pts = range(n + 1)
    return [c for r in range(1, n + 2) for c in combinations(pts, r)]


def brute_force_covers(n, k, nondegenerate=True):
    """Multisets of k+1 subsets, filtered by the claw classifier."""
    subs = all_nonempty_subsets(n)
    out = set()
    for combo in combinations_with_replacement(subs, k + 1):
        p = Precover(n, combo)
        if nondegenerate and not p.is_nondegenerate():
            continue
        if classify_claw(p.claw()).compatible:
            out.add(p)
    return out


class TestPrecover:
    def test_members_sorted_and_checked(self):
        assert P(2, "12", "01").subsets == ((0, 1), (1, 2))
        with pytest.raises(ValueError):
            P(2, ())
        with pytest.raises(ValueError):
            P(2, "03")

    def test_format(self):
        assert format_subset((0, 1, 3)) == "013"
        assert format_subset((0, 10)) == "{0,10}"


class TestIntersectionCube:
    def test_square_44(self):
        cube = intersection_cube(P(2, "01", "12"))
        assert cube.labels[frozenset({0, 1})] == (1,)

    def test_cube_15(self):
        cube = intersection_cube(P(4, "0123", "1234", "0134"))
        lab = {format_subset(v) for T, v in cube.labels.items() if len(T) == 2}
        assert lab == {"123", "013", "134"}
        assert cube.labels[frozenset({0, 1, 2})] == (1, 3)

    def test_full_member(self):
        cube = intersection_cube(P(3, "0123"))
        assert cube.edge(set(), {0}).is_identity()

    @given(precovers())
    def test_matches_cech_cube(self, p):
        a, b = intersection_cube(p), cech_cube(p.claw())
        assert a.corners == b.corners and a.edges == b.edges


class TestSubsetComplex:
    def test_examples(self):
        sp = subset_complex(P(2, "01", "12"))
        assert sp.faces == frozenset({(0,), (1,), (2,), (0, 1), (1, 2)})
        assert subset_complex(P(3, "0123")).is_full()
        two = subset_complex(P(1, "0", "1"))
        assert (0, 1) not in two.faces and two.maximal_faces() == ((0,), (1,))

    @given(precovers())
    def test_maximal_faces_are_reduction(self, p):
        assert subset_complex(p).maximal_faces() == reduce(p).subsets


class TestReduce:
    def test_examples(self):
        assert reduce(P(2, "01", "0", "12")) == P(2, "01", "12")
        assert reduce(P(2, "01", "12")) == P(2, "01", "12")
        assert reduce(P(2, "012", "01", "12", "2")) == P(2, "012")

    @given(precovers())
    def test_laws(self, p):
        r = reduce(p)
        assert subset_complex(r) == subset_complex(p)
        assert reduce(r) == r


class TestRefinement:
    def test_examples(self):
        sp, full = P(2, "01", "12"), P(2, "012")
        assert is_refinement(sp, full) and not is_refinement(sp, full).degenerate
        assert not is_refinement(full, sp)
        assert is_refinement(P(2, "01", "0"), P(2, "01")).degenerate
        with pytest.raises(PreconditionError):
            is_refinement(sp, P(3, "0123"))

    @given(st.integers(0, 4).flatmap(lambda n: st.tuples(precovers(n=n), precovers(n=n))))
    def test_matches_complex_inclusion(self, pair):
        a, b = pair
        assert bool(is_refinement(a, b)) == (subset_complex(a) <= subset_complex(b))
        assert is_refinement(a, b).degenerate == (subset_complex(a) == subset_complex(b))

    def test_preorder_exhaustive_on_3(self):
        # all one- and two-member precovers of [3]
        subs = all_nonempty_subsets(3)
        ps = [Precover(3, (a,)) for a in subs] + [Precover(3, c) for c in combinations(subs, 2)]
        rel = {(i, j) for i, a in enumerate(ps) for j, b in enumerate(ps) if is_refinement(a, b)}
        assert all((i, i) in rel for i in range(len(ps)))
        succ = {}
        for i, j in rel:
            succ.setdefault(i, set()).add(j)
        for i, j in rel:
            assert succ[j] <= succ[i]


class TestRestrict:
    def test_examples(self):
        assert restrict(P(4, "1234", "0134"), "0123") == P(3, "123", "013")
        p = P(4, "0123", "1234", "0134")
        assert restrict(p, range(5)) == p
        lower = hull_facets(4, 3)[0].precover()
        assert restrict(lower, "0123") == P(3, "123", "013", "0123")

    def test_drops_empty(self):
        assert restrict(P(3, "01", "23"), "01") == P(1, "01")

    def test_errors(self):
        with pytest.raises(PreconditionError):
            restrict(P(2, "01"), ())
        with pytest.raises(PreconditionError):
            restrict(P(2, "01"), "05")


class TestEnumerateCovers:
    def test_examples(self):
        assert [p.labels() for p in enumerate_covers(2, 1)] == [["01", "12"]]
        assert enumerate_covers(1, 1) == []
        assert len(enumerate_covers(3, 1)) == 5

    @pytest.mark.parametrize("n,k", [(n, k) for n in range(5) for k in range(3)])
    def test_against_claw_classifier(self, n, k):
        assert set(enumerate_covers(n, k)) == brute_force_covers(n, k)

    def test_degenerate_allowed(self):
        got = set(enumerate_covers(3, 1, nondegenerate=False))
        assert got == brute_force_covers(3, 1, nondegenerate=False)
        assert any(not p.is_nondegenerate() for p in got)

    def test_incompatible_listing(self):
        got = enumerate_covers(2, 1, compatible=False)
        assert len(got) == len(list(combinations_with_replacement(all_nonempty_subsets(2)[:-1], 2)))


class TestRefinementGraph:
    def test_single_vertex(self):
        for k in range(1, 4):
            r = refinement_graph(2 * k, k)
            assert len(r.graph) == 1 and r.connected

    def test_small_cases(self):
        for n, k in [(4, 1), (6, 2)]:
            r = refinement_graph(n, k)
            assert r.connected and not r.failures and r.edges_checked > 0

    def test_below_range(self):
        r = refinement_graph(3, 2)
        assert len(r.graph) == 0 and r.connected
