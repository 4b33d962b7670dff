import itertools
from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from higher_segal.claws import Claw, _subsets, cech_cube, classify_claw
from higher_segal.covers import Precover, enumerate_covers
from higher_segal.descent import (
    VARIANTS,
    SetCube,
    apply_to_cube,
    check_descent,
    check_excision,
    check_segal,
    excision_claws,
    is_cartesian_set_cube,
    membrane,
    one_cover_suffices,
    unitality_claws,
)
from higher_segal.polytopes import segal_cover
from higher_segal.simplex import PreconditionError, SimplexMap, identity
from higher_segal.simplicial import (
    TruncationError,
    boundary_simplex,
    fixture_corpus,
    nerve_monoid,
    nerve_poset,
    path_object,
    simplex_subset,
)
from higher_segal.sweeps import prong_fibers

CORPUS = fixture_corpus(N=6)
CHAIN = CORPUS["nerve-chain"]
BOUNDARY = CORPUS["boundary-2"]
CLAW_43 = Claw.from_images(2, [(1, 2), (0, 1)])


# ---------------------------------------------------------------- set cubes


def random_set_cube(seed, size):
    """A commuting cube of finite sets built as images of growing subsets of a grid.

    Direction ``s`` coarsens coordinate ``s`` of grid points; corner ``T`` is
    the image of a subset ``A_T`` with ``A_T`` increasing in ``T``.
    """
    rng = np.random.default_rng(seed)
    S = tuple(range(size))
    ranges = [int(rng.integers(1, 4)) for _ in S]
    coarse = [rng.integers(0, max(1, r - int(rng.integers(0, 2))), size=r) for r in ranges]
    grid = list(itertools.product(*(range(r) for r in ranges)))
    subs = _subsets(S)
    full = rng.random() < 0.5
    A = {}
    for T in sorted(subs, key=len):
        if full:
            A[T] = set(grid)
            continue
        base = set().union(*(A[T - {s}] for s in T)) if T else set()
        extra = {g for g in grid if rng.random() < 0.6}
        A[T] = (base | extra) if T else (extra or {grid[0]})

    def coarsen(T, v):
        return tuple(coarse[s][x] if s in T else x for s, x in enumerate(v))

    elems = {T: sorted({coarsen(T, v) for v in A[T]}) for T in subs}
    pos = {T: {e: i for i, e in enumerate(elems[T])} for T in subs}
    maps = {}
    for T in subs:
        for s in S:
            if s not in T:
                maps[(T, T | {s})] = np.array([pos[T | {s}][coarsen({s}, e)] for e in elems[T]], dtype=np.int64)
    return SetCube(S, {T: len(v) for T, v in elems.items()}, maps)


def face(Q, s, top):
    """The cube ``T ↦ Q(T ∪ {s})`` (top) or ``T ↦ Q(T)`` (bottom) over ``S ∖ {s}``."""
    rest = [t for t in Q.S if t != s]
    lift = {U: frozenset(rest[i] for i in U) | ({s} if top else frozenset()) for U in _subsets(tuple(range(len(rest))))}
    sizes = {U: Q.sizes[lift[U]] for U in lift}
    maps = {(U, U | {i}): Q.maps[(lift[U], lift[U | {i}])] for U in lift for i in range(len(rest)) if i not in U}
    return SetCube(tuple(range(len(rest))), sizes, maps)


def brute_limit(Q):
    """Families over every nonempty corner, compatible along every edge."""
    nonempty = [T for T in _subsets(Q.S) if T]
    count = 0
    for pick in itertools.product(*(range(Q.sizes[T]) for T in nonempty)):
        val = dict(zip(nonempty, pick))
        if all(Q.maps[(T, T2)][val[T]] == val[T2] for (T, T2) in Q.maps if T):
            count += 1
    return count


class TestSetCube:
    def test_degenerate_cube(self):
        Q = SetCube((0, 1), {frozenset(): 3, frozenset({0}): 3, frozenset({1}): 2, frozenset({0, 1}): 2},
                    {(frozenset(), frozenset({0})): np.arange(3), (frozenset(), frozenset({1})): np.array([0, 0, 1]),
                     (frozenset({0}), frozenset({0, 1})): np.array([0, 0, 1]), (frozenset({1}), frozenset({0, 1})): np.arange(2)})
        assert is_cartesian_set_cube(Q)

    def test_literal_pullback_and_proper_subset(self):
        # pullback of {0,1,2} -> {0,1} <- {0,1} with f = (0,0,1), g = id
        e, a, b, ab = frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})
        f, g = np.array([0, 0, 1]), np.array([0, 1])
        pairs = [(x, y) for x in range(3) for y in range(2) if f[x] == g[y]]
        maps = {(e, a): np.array([p[0] for p in pairs]), (e, b): np.array([p[1] for p in pairs]), (a, ab): f, (b, ab): g}
        Q = SetCube((0, 1), {e: len(pairs), a: 3, b: 2, ab: 2}, maps)
        assert is_cartesian_set_cube(Q)
        maps2 = {k: (v[:-1] if k[0] == e else v) for k, v in maps.items()}
        Q2 = SetCube((0, 1), {e: len(pairs) - 1, a: 3, b: 2, ab: 2}, maps2)
        r = is_cartesian_set_cube(Q2)
        assert not r and r.limit_size == len(pairs) and r.apex_size == len(pairs) - 1

    def test_rejects_non_commuting(self):
        e, a, b, ab = frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})
        with pytest.raises(ValueError, match="commute"):
            SetCube((0, 1), {e: 1, a: 1, b: 1, ab: 2},
                    {(e, a): [0], (e, b): [0], (a, ab): np.array([0]), (b, ab): np.array([1])})

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 3))
    def test_limit_against_brute_force(self, seed, size):
        Q = random_set_cube(seed, size)
        assume(np.prod([Q.sizes[T] for T in _subsets(Q.S) if T], dtype=float) <= 5000)
        assert len(Q.limit_tuples()) == brute_limit(Q)
        assert is_cartesian_set_cube(Q).limit_size == brute_limit(Q)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 3), st.data())
    def test_pasting_lemma(self, seed, size, data):
        Q = random_set_cube(seed, size)
        s = data.draw(st.sampled_from(Q.S))
        if is_cartesian_set_cube(face(Q, s, True)):
            assert bool(is_cartesian_set_cube(Q)) == bool(is_cartesian_set_cube(face(Q, s, False)))

    def test_pasting_lemma_coverage(self):
        seen = set()
        for seed in range(400):
            Q = random_set_cube(seed, 2 + seed % 2)
            for s in Q.S:
                if is_cartesian_set_cube(face(Q, s, True)):
                    whole = bool(is_cartesian_set_cube(Q))
                    assert whole == bool(is_cartesian_set_cube(face(Q, s, False)))
                    seen.add(whole)
        assert seen == {True, False}


# ---------------------------------------------------------------- membranes


def small_precovers(n, max_members=3):
    subs = [c for r in range(1, n + 2) for c in combinations(range(n + 1), r)]
    for k in range(1, max_members + 1):
        for combo in combinations(subs, k):
            yield Precover(n, combo)


class TestMembrane:
    def test_examples(self):
        sp = segal_cover(2, 1)
        assert len(membrane(CHAIN, sp)) == 4 == CHAIN.size(2)
        for n in range(4):
            full = Precover(n, (tuple(range(n + 1)),))
            assert len(membrane(BOUNDARY, full)) == BOUNDARY.size(n)
        assert len(membrane(BOUNDARY, sp)) > BOUNDARY.size(2)

    def test_boundary_brute_force(self):
        # paths (x, y) with a shared middle vertex, counted directly from the edge list
        edges = BOUNDARY.cells[1]
        paths = sum(1 for x in edges for y in edges if x[-1] == y[0])
        assert len(membrane(BOUNDARY, segal_cover(2, 1))) == paths
        assert BOUNDARY.size(2) < paths

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_two_routes_small(self, name):
        X = CORPUS[name]
        for n in range(4):
            for p in small_precovers(n, 2 if n == 3 else 3):
                assert membrane(X, p, "limit") == membrane(X, p, "maps")

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_two_routes_level_four(self, name):
        X = CORPUS[name]
        covers = enumerate_covers(4, 1) + enumerate_covers(4, 2) + [segal_cover(4, d, s) for d in (1, 2, 3) for s in ("lower", "upper")]
        for p in covers:
            assert membrane(X, p, "limit") == membrane(X, p, "maps")

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(sorted(CORPUS)), st.lists(st.sets(st.integers(0, 4), min_size=1), min_size=1, max_size=4))
    def test_two_routes_random_level_four(self, name, members):
        p = Precover(4, tuple(tuple(sorted(m)) for m in members))
        X = CORPUS[name]
        assert membrane(X, p, "limit") == membrane(X, p, "maps")

    def test_errors(self):
        with pytest.raises(TruncationError):
            membrane(CHAIN, Precover(8, ((0, 1),)))
        with pytest.raises(ValueError):
            membrane(CHAIN, segal_cover(2, 1), "psychic")


# ---------------------------------------------------------------- descent


class TestDescent:
    def test_claw_43(self):
        assert check_descent(CHAIN, CLAW_43).passed
        r = check_descent(BOUNDARY, CLAW_43)
        assert not r.passed and r.first_failure["n"] == 2
        assert r.first_failure["limit"] == r.first_failure["apex"] + 1

    def test_degenerate_claw(self):
        c = Claw(2, (identity(2), SimplexMap((0, 1), 2)))
        for X in CORPUS.values():
            assert check_descent(X, c).passed

    def test_non_injective_claw(self):
        for c in unitality_claws():
            assert check_descent(CHAIN, c).passed

    def test_not_backwards_compatible(self):
        with pytest.raises(PreconditionError):
            check_descent(CHAIN, Claw.from_fibers([[2, 1], [2, 1]]))

    def test_truncation_skip(self):
        X = nerve_poset([0, 1], [(0, 1)], 2)
        c = Claw(2, (SimplexMap((0, 0, 1, 2), 2), SimplexMap((0, 1, 2, 2), 2)))
        r = check_descent(X, c)
        assert r.passed and r.levels[0].skipped == 1 and r.skipped_levels == [2]

    def test_report_json(self):
        d = check_descent(BOUNDARY, CLAW_43).to_dict()
        assert d["passed"] is False and d["first_failure"]["claw"] == [[1, 2], [0, 1]]


class TestSegal:
    def test_examples(self):
        assert check_segal(CHAIN, 1, "lower", 5).passed
        r = check_segal(BOUNDARY, 1, "lower", 5)
        assert not r.passed and r.first_failure["n"] == 2
        Z = nerve_monoid([[0, 1], [1, 0]], 4)
        assert check_segal(Z, 1, "lower", 4).passed

    def test_levels_and_bounds(self):
        r = check_segal(CHAIN, 2, "both", 5)
        assert [lv.n for lv in r.levels] == [3, 4, 5]
        assert all(lv.checked == 2 for lv in r.levels)
        with pytest.raises(TruncationError):
            check_segal(CHAIN, 1, "lower", 9)


class TestExcision:
    def test_examples(self):
        assert check_excision(CHAIN, 1, "delta", 4).passed
        assert check_excision(CHAIN, 1, "primitive-only", 4).passed
        r = check_excision(BOUNDARY, 1, "delta", 3)
        assert not r.passed and r.first_failure["n"] == 2

    def test_claw_classes(self):
        for n in range(4):
            for v in VARIANTS:
                for c in excision_claws(n, 1, v):
                    rep = classify_claw(c)
                    assert rep.compatible
                    if v == "lambda":
                        assert rep.cyclically_compatible
                    if v == "lower-lambda":
                        assert c.is_left_active()
                    if v == "upper-lambda":
                        assert c.is_right_active()
                    if v in ("polynomial", "primitive-only"):
                        assert c.is_injective()
                    if v == "primitive-only":
                        assert all(f.dom_n == n - 1 for f in c.prongs)

    def test_claw_counts_brute_force(self):
        # unordered compatible pairs from the full prong list
        for n in range(3):
            prongs = [SimplexMap.from_fibers(tuple(r)) for r in prong_fibers(n, 3) if sum(r) <= n + 3]
            want = sum(
                1 for i, j in itertools.combinations_with_replacement(range(len(prongs)), 2)
                if classify_claw(Claw(n, (prongs[i], prongs[j]))).compatible
            )
            assert len(excision_claws(n, 1, "delta")) == want

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            excision_claws(2, 1, "sideways")


HAT_LOWER = simplex_subset(3, [{0, 1, 2}, {0, 2, 3}], 6, name="hat-lower")
HAT_UPPER = simplex_subset(3, [{0, 1, 3}, {1, 2, 3}], 6, name="hat-upper")


@pytest.mark.parametrize("X,failing", [(HAT_LOWER, "lower"), (HAT_UPPER, "upper")])
def test_lambda_equalities_with_failures(X, failing):
    up = 4
    lam = check_excision(X, 1, "lambda", up).passed
    lo = check_excision(X, 1, "lower-lambda", up).passed
    hi = check_excision(X, 1, "upper-lambda", up).passed
    assert lam == (lo and hi)
    assert check_segal(X, 2, "lower", up).passed == lo
    assert check_segal(X, 2, "upper", up).passed == hi
    assert check_excision(path_object(X, "left"), 1, "delta", up).passed == lo
    assert check_excision(path_object(X, "right"), 1, "delta", up).passed == hi
    assert (lo, hi) == ((False, True) if failing == "lower" else (True, False))


def test_one_cover_suffices():
    for X in (CHAIN, BOUNDARY, HAT_LOWER):
        r = one_cover_suffices(X, 1, 4)
        assert r["implication_holds"]
    assert one_cover_suffices(CHAIN, 1, 4)["chosen_local"]


def test_unitality_squares():
    assert [c.n for c in unitality_claws()] == [1, 1]
    for c in unitality_claws():
        assert classify_claw(c).cyclically_compatible
    for X in CORPUS.values():
        if check_excision(X, 1, "lambda", 4).passed:
            assert all(check_descent(X, c).passed for c in unitality_claws())


def test_apply_to_cube_shapes():
    cube = cech_cube(CLAW_43)
    Q = apply_to_cube(CHAIN, cube)
    assert Q.sizes[frozenset()] == CHAIN.size(2) and Q.sizes[frozenset({0, 1})] == CHAIN.size(0)
