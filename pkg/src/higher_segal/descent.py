"""Descent, Segal and excision conditions for finite simplicial sets.

Values live in finite sets, so a cube is Cartesian exactly when the map from
its initial corner to the limit of the rest is a bijection.  Limits over the
punctured cube are computed as tuples over the singleton corners that agree
pairwise, which is enough because every other corner receives its maps
through a pair.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .claws import Claw, Cube, _subsets, cech_cube, classify_claw, NoCubeError
from .covers import Precover, enumerate_covers, intersection_cube, subset_complex
from .polytopes import interpolation_chain, segal_cover
from .simplex import PreconditionError, SimplexMap, _raw, inclusion
from .simplicial import FiniteSimplicialSet, TruncationError
from .sweeps import BatchFlags, pair_flags


@dataclass
class SetCube:
    """A covariant cube of finite sets: ``maps[(T, T')]`` sends corner ``T`` to ``T'``."""

    S: tuple
    sizes: dict
    maps: dict

    def __post_init__(self) -> None:
        self.S = tuple(self.S)
        subsets = _subsets(self.S)
        for T in subsets:
            for s in self.S:
                if s in T:
                    continue
                a = np.asarray(self.maps[(T, T | {s})])
                if a.shape != (self.sizes[T],) or (len(a) and (a.min() < 0 or a.max() >= self.sizes[T | {s}])):
                    raise ValueError(f"map {set(T)} → {set(T | {s})} does not match the corner sizes")
        for T in subsets:
            rest = [s for s in self.S if s not in T]
            for a, b in itertools.combinations(rest, 2):
                top = T | {a, b}
                via_a = self.maps[(T | {a}, top)][self.maps[(T, T | {a})]]
                via_b = self.maps[(T | {b}, top)][self.maps[(T, T | {b})]]
                if (via_a != via_b).any():
                    raise ValueError(f"face over {set(T)} in directions {a},{b} does not commute")

    def limit_tuples(self) -> list[tuple[int, ...]]:
        """Elements of the limit over nonempty ``T``, as tuples over the singletons."""
        S = self.S
        if not S:
            return [()]
        single = [frozenset({s}) for s in S]
        keys = {}
        for a, b in itertools.combinations(range(len(S)), 2):
            ab = single[a] | single[b]
            keys[(a, b)] = (self.maps[(single[a], ab)], self.maps[(single[b], ab)])
        out = []

        def grow(prefix: list[int]) -> None:
            j = len(prefix)
            if j == len(S):
                out.append(tuple(prefix))
                return
            mask = np.ones(self.sizes[single[j]], dtype=bool)
            for a in range(j):
                ka, kb = keys[(a, j)]
                mask &= kb == ka[prefix[a]]
            for y in np.flatnonzero(mask):
                grow(prefix + [int(y)])

        grow([])
        return out

    def comparison(self) -> np.ndarray:
        """Rows: the image of each element of the initial corner in the singletons."""
        e = frozenset()
        cols = [np.asarray(self.maps[(e, frozenset({s}))]) for s in self.S]
        if not cols:
            return np.zeros((self.sizes[e], 0), dtype=np.int64)
        return np.stack(cols, axis=1)


@dataclass(frozen=True)
class CartesianResult:
    cartesian: bool
    apex_size: int
    image_size: int
    limit_size: int

    def __bool__(self) -> bool:
        return self.cartesian


def is_cartesian_set_cube(Q: SetCube) -> CartesianResult:
    apex = Q.sizes[frozenset()]
    rows = Q.comparison()
    if len(Q.S) == 2:
        a, b = (frozenset({s}) for s in Q.S)
        ab = a | b
        coded = rows[:, 0] * Q.sizes[b] + rows[:, 1]
        image = len(np.unique(coded))
        top = Q.sizes[ab]
        lim = int(np.bincount(Q.maps[(a, ab)], minlength=top) @ np.bincount(Q.maps[(b, ab)], minlength=top))
        return CartesianResult(apex == image == lim, apex, image, lim)
    image = len({tuple(r) for r in rows.tolist()}) if len(Q.S) else min(apex, 1)
    lim = len(Q.limit_tuples())
    return CartesianResult(apex == image == lim, apex, image, lim)


def apply_to_cube(X: FiniteSimplicialSet, cube: Cube) -> SetCube:
    """Evaluate ``X`` cornerwise; edges reverse direction."""
    sizes = {T: X.size(k) for T, k in cube.corners.items()}
    maps = {key: X.act_array(e) for key, e in cube.edges.items()}
    return SetCube(cube.S, sizes, maps)


# ---------------------------------------------------------------------- membranes


def membrane(X: FiniteSimplicialSet, p: Precover, route: str = "limit") -> set[tuple[str, ...]]:
    """Compatible families ``(x_s ∈ X(I_s))``, one id per member.

    ``limit`` reads them off the intersection cube.  ``maps`` instead builds
    simplicial maps from the subset complex, face by face.
    """
    if p.n > X.N:
        raise TruncationError(f"[{p.n}] exceeds truncation {X.N}")
    levels = [len(I) - 1 for I in p.subsets]
    if route == "limit":
        Q = apply_to_cube(X, intersection_cube(p))
        tuples = Q.limit_tuples()
    elif route == "maps":
        tuples = _membrane_maps(X, p)
    else:
        raise ValueError(f"unknown route {route!r}")
    return {tuple(X.cells[lv][x] for lv, x in zip(levels, t)) for t in tuples}


def _membrane_maps(X: FiniteSimplicialSet, p: Precover) -> list[tuple[int, ...]]:
    K = subset_complex(p)
    tops = list(K.maximal_faces())
    # restriction arrays from each top face to each of its faces
    restr = {}
    for sigma in tops:
        for r in range(1, len(sigma) + 1):
            for tau in itertools.combinations(sigma, r):
                pos = tuple(sigma.index(v) for v in tau)
                restr[(sigma, tau)] = X.act_array(_raw(pos, len(sigma) - 1))
    found: list[dict] = []

    def grow(j: int, values: dict) -> None:
        if j == len(tops):
            found.append(dict(values))
            return
        sigma = tops[j]
        mask = np.ones(X.size(len(sigma) - 1), dtype=bool)
        for (sg, tau), arr in restr.items():
            if sg == sigma and tau in values:
                mask &= arr == values[tau]
        for x in np.flatnonzero(mask):
            new = {tau: int(restr[(sigma, tau)][x]) for (sg, tau) in restr if sg == sigma}
            grow(j + 1, {**values, **new})

    grow(0, {})
    return [tuple(v[I] for I in p.subsets) for v in found]


# ---------------------------------------------------------------------- reports


@dataclass
class LevelReport:
    n: int
    checked: int = 0
    failed: int = 0
    skipped: int = 0
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failed == 0


@dataclass
class DescentReport:
    condition: str
    levels: list
    bounds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(lv.passed for lv in self.levels)

    @property
    def skipped_levels(self) -> list[int]:
        return [lv.n for lv in self.levels if lv.skipped and not lv.checked]

    @property
    def first_failure(self) -> dict | None:
        for lv in self.levels:
            if lv.failed:
                return {"n": lv.n, **(lv.witness or {})}
        return None

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "passed": self.passed,
            "bounds": self.bounds,
            "levels": [{**asdict(lv), "passed": lv.passed} for lv in self.levels],
            "skipped_levels": self.skipped_levels,
            "first_failure": self.first_failure,
        }


def _claw_label(c: Claw) -> list[list[int]]:
    return [list(f.images) for f in c.prongs]


@lru_cache(maxsize=200_000)
def _cube_of(prongs: tuple, n: int) -> Cube:
    try:
        return cech_cube(Claw(n, prongs))
    except NoCubeError:
        raise PreconditionError(f"claw {prongs} on [{n}] is not backwards compatible") from None


def _descent_verdict(X: FiniteSimplicialSet, c: Claw) -> tuple[str, CartesianResult | None]:
    """``("pass" | "fail" | "skip", result)`` for one claw."""
    cube = _cube_of(tuple(c.prongs), c.n)
    if cube.max_corner_size() - 1 > X.N:
        return "skip", None
    res = is_cartesian_set_cube(apply_to_cube(X, cube))
    return ("pass" if res else "fail"), res


def check_descent(X: FiniteSimplicialSet, c: Claw, cross_check: bool = True) -> DescentReport:
    """Whether ``X`` sends the Čech cube of ``c`` to a Cartesian cube.

    For claws of inclusions the verdict is compared with the membrane computed
    from the subset complex.
    """
    verdict, res = _descent_verdict(X, c)
    lv = LevelReport(c.n)
    if verdict == "skip":
        lv.skipped = 1
    else:
        lv.checked = 1
        if verdict == "fail":
            lv.failed = 1
            lv.witness = {"claw": _claw_label(c), "apex": res.apex_size, "image": res.image_size, "limit": res.limit_size}
        if cross_check and c.is_injective() and c.n <= X.N:
            p = Precover(c.n, tuple(f.images for f in c.prongs))
            via_limit = membrane(X, p, "limit")
            via_maps = membrane(X, p, "maps")
            if via_limit != via_maps or len(via_limit) != res.limit_size:
                raise AssertionError(f"membrane routes disagree on {p!r}")
    return DescentReport("descent", [lv], {"truncation": X.N})


def _run(X: FiniteSimplicialSet, condition: str, claws_by_level: dict, bounds: dict) -> DescentReport:
    levels = []
    for n, claws in claws_by_level.items():
        lv = LevelReport(n)
        for c in claws:
            verdict, res = _cached_verdict(X, c)
            if verdict == "skip":
                lv.skipped += 1
                continue
            lv.checked += 1
            if verdict == "fail":
                lv.failed += 1
                if lv.witness is None:
                    lv.witness = {"claw": _claw_label(c), "apex": res.apex_size, "image": res.image_size, "limit": res.limit_size}
        levels.append(lv)
    return DescentReport(condition, levels, {"truncation": X.N, **bounds})


_VERDICTS: dict = {}


def _cached_verdict(X: FiniteSimplicialSet, c: Claw):
    key = (id(X), tuple((f.images, f.cod_n) for f in c.prongs))
    hit = _VERDICTS.get(key)
    if hit is None or hit[0] is not X:
        hit = (X, _descent_verdict(X, c))
        _VERDICTS[key] = hit
    return hit[1]


def check_segal(X: FiniteSimplicialSet, d: int, side: str = "lower", up_to: int | None = None) -> DescentReport:
    """Descent along the lower and/or upper triangulation covers of ``C(n, d)``."""
    up_to = X.N if up_to is None else up_to
    if up_to > X.N:
        raise TruncationError(f"up_to={up_to} exceeds truncation {X.N}")
    sides = ("lower", "upper") if side == "both" else (side,)
    by_level = {n: [segal_cover(n, d, sd).claw() for sd in sides] for n in range(d + 1, up_to + 1)}
    return _run(X, f"segal d={d} side={side}", by_level, {"up_to": up_to})


VARIANTS = ("delta", "lambda", "lower-lambda", "upper-lambda", "polynomial", "primitive-only")


@lru_cache(maxsize=None)
def excision_claws(n: int, k: int, variant: str, fiber_bound: int = 3, domain_bound: int | None = None) -> tuple[Claw, ...]:
    """Unordered ``(k+1)``-claws on ``[n]`` in the class selected by ``variant``.

    Prongs have fibers of size at most ``fiber_bound`` and at most
    ``domain_bound`` elements (default ``n + 3``).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    dom = n + 3 if domain_bound is None else domain_bound
    prongs = []
    for fib in itertools.product(range(fiber_bound + 1), repeat=n + 1):
        if not 0 < sum(fib) <= dom:
            continue
        f = SimplexMap.from_fibers(fib)
        if variant in ("polynomial", "primitive-only") and max(fib) > 1:
            continue
        if variant == "primitive-only" and sum(fib) != n:
            continue
        if variant == "lower-lambda" and f.images[0] != 0:
            continue
        if variant == "upper-lambda" and f.images[-1] != n:
            continue
        prongs.append(f)
    flags = BatchFlags.from_fibers(np.array([f.fibers() for f in prongs], dtype=np.int64).reshape(len(prongs), n + 1))
    _, compat, cyc = pair_flags(flags)
    adj = cyc if variant == "lambda" else compat
    # compatibility is a pairwise condition, so grow cliques
    K = len(prongs)
    out = []

    def grow(start: int, chosen: list[int]) -> None:
        if len(chosen) == k + 1:
            out.append(Claw(n, tuple(prongs[j] for j in chosen)))
            return
        cand = np.flatnonzero(np.all(adj[chosen][:, start:], axis=0)) + start if chosen else range(start, K)
        for j in cand:
            grow(int(j), chosen + [int(j)])

    if k == 0:
        out = [Claw(n, (f,)) for f in prongs]
    else:
        grow(0, [])
    return tuple(out)


def check_excision(
    X: FiniteSimplicialSet,
    k: int,
    variant: str = "delta",
    up_to: int | None = None,
    fiber_bound: int = 3,
    domain_bound: int | None = None,
) -> DescentReport:
    """Descent along every claw of the selected class with ``k + 1`` prongs."""
    up_to = X.N if up_to is None else up_to
    if up_to > X.N:
        raise TruncationError(f"up_to={up_to} exceeds truncation {X.N}")
    by_level = {n: excision_claws(n, k, variant, fiber_bound, domain_bound) for n in range(up_to + 1)}
    bounds = {"up_to": up_to, "fiber_bound": fiber_bound, "domain_bound": "n+3" if domain_bound is None else domain_bound}
    return _run(X, f"excision k={k} variant={variant}", by_level, bounds)


def unitality_claws() -> list[Claw]:
    """The two squares on ``[1]`` built from a degeneracy and a vertex."""
    return [
        Claw(1, (SimplexMap((0, 1, 1), 1), SimplexMap((1,), 1))),
        Claw(1, (SimplexMap((0, 0, 1), 1), SimplexMap((0,), 1))),
    ]


def one_cover_suffices(X: FiniteSimplicialSet, k: int, up_to: int) -> dict:
    """Locality of one chosen nondegenerate compatible cover per level against all of them."""
    chosen = all(
        _descent_verdict(X, interpolation_chain(n, k)[-1].claw())[0] != "fail" for n in range(2 * k, up_to + 1)
    )
    every = all(
        _descent_verdict(X, p.claw())[0] != "fail"
        for n in range(2 * k, up_to + 1)
        for p in enumerate_covers(n, k)
    )
    return {"chosen_local": chosen, "all_local": every, "implication_holds": (not chosen) or every}
