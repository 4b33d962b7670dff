"""Cyclic polytopes, their two canonical triangulations and related covers.

All geometry is exact: points on the moment curve have integer coordinates
and every predicate is the sign of an integer determinant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial
from typing import Literal

from .claws import Claw
from .covers import Precover
from .simplex import SimplexMap

Side = Literal["lower", "upper"]


def det(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class CyclicPolytope:
    """``C(n, d)``: the hull of ``(t, t², ..., t^d)`` for ``t = 0, ..., n``."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.n < self.d:
            raise ValueError(f"C({self.n}, {self.d}) needs n >= d >= 1")

    @property
    def points(self) -> tuple[tuple[int, ...], ...]:
        return moment_points(self.n, self.d)

    def volume(self) -> int:
        """``d!`` times the volume, by coning from vertex 0 over the far boundary."""
        pts = self.points
        total = 0
        for F in boundary_facets(self.n, self.d):
            if 0 not in F:
                # vertex 0 is the origin
                total += abs(det([list(pts[i]) for i in F]))
        return total


def moment_points(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(t ** e for e in range(1, d + 1)) for t in range(n + 1))


def _side_of(pts, F: tuple[int, ...], q) -> int:
    return _sgn(det([[1, *pts[i]] for i in F] + [[1, *q]]))


def boundary_facets(n: int, d: int) -> list[tuple[int, ...]]:
    """``d``-subsets spanning a supporting hyperplane of ``C(n, d)``."""
    pts = moment_points(n, d)
    out = []
    for F in combinations(range(n + 1), d):
        signs = {_side_of(pts, F, pts[q]) for q in range(n + 1) if q not in F}
        if len(signs) <= 1:
            out.append(F)
    return out


@dataclass(frozen=True)
class Triangulation:
    n: int
    d: int
    side: str
    facets: tuple[tuple[int, ...], ...]

    def volumes(self) -> list[int]:
        pts = moment_points(self.n, self.d)
        return [abs(det([[a - b for a, b in zip(pts[i], pts[F[0]])] for i in F[1:]])) for F in self.facets]

    def precover(self) -> Precover:
        return Precover(self.n, self.facets)


def hull_facets(n: int, d: int) -> tuple[Triangulation, Triangulation]:
    """Lower and upper triangulations of ``C(n, d)`` read off ``C(n, d + 1)``.

    A ``(d+1)``-subset is a lower facet when every other lifted point lies on
    the same side of its hyperplane as the upward direction of the last
    coordinate, and an upper facet when they all lie on the other side.
    """
    if n < d or d < 1:
        raise ValueError(f"C({n}, {d}) needs n >= d >= 1")
    D = d + 1
    pts = moment_points(n, D)
    up = [0] * D + [1]
    lower, upper = [], []
    for F in combinations(range(n + 1), D):
        rows = [[1, *pts[i]] for i in F]
        ref = _sgn(det(rows + [up]))
        signs = {_sgn(det(rows + [[1, *pts[q]]])) for q in range(n + 1) if q not in F}
        if signs <= {ref}:
            lower.append(F)
        if signs <= {-ref}:
            upper.append(F)
    return Triangulation(n, d, "lower", tuple(lower)), Triangulation(n, d, "upper", tuple(upper))


def _blocks(F: tuple[int, ...]) -> list[list[int]]:
    out: list[list[int]] = []
    for x in F:
        if out and out[-1][-1] == x - 1:
            out[-1].append(x)
        else:
            out.append([x])
    return out


def gale_side(F: tuple[int, ...], n: int) -> str | None:
    """Closed form: ``lower``/``upper`` for triangulation facets, else ``None``.

    Interior blocks (touching neither 0 nor n) must have even length.  The
    side is then fixed by the parity of the block ending at ``n``, counted as
    empty when ``n`` is not in ``F``.
    """
    blocks = _blocks(F)
    for b in blocks:
        if b[0] != 0 and b[-1] != n and len(b) % 2:
            return None
    last = len(blocks[-1]) if blocks[-1][-1] == n else 0
    return "lower" if last % 2 == 0 else "upper"


def segal_cover(n: int, d: int, side: Side = "lower") -> Precover:
    """Facets of the requested triangulation of ``C(n, d)`` as a precover on ``[n]``."""
    if side not in ("lower", "upper"):
        raise ValueError(f"unknown side {side!r}")
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    if n <= d:
        return Precover(n, (tuple(range(n + 1)),))
    facets = [F for F in combinations(range(n + 1), d + 1) if gale_side(F, n) == side]
    return Precover(n, tuple(facets))


def interpolation_chain(n: int, k: int) -> list[Precover]:
    """Precovers ``F_{-1} ⪯ F_0 ⪯ ... ⪯ F_k`` from the lower ``(2k-1)``-Segal cover
    to a nondegenerate compatible ``[k]``-cover, with
    ``F_j = {[n] \\ {2i} : i ≤ j} ∪ {I ∈ F_{-1} : {0, ..., 2j} ⊆ I}``.
    """
    if k < 1 or n < 2 * k:
        raise ValueError(f"interpolation chain needs k >= 1 and n >= 2k, got n={n}, k={k}")
    base = segal_cover(n, 2 * k - 1, "lower")
    chain = [base]
    full = set(range(n + 1))
    for j in range(k + 1):
        members = [tuple(sorted(full - {2 * i})) for i in range(j + 1)]
        members += [I for I in base.subsets if set(range(2 * j + 1)) <= set(I)]
        chain.append(Precover(n, tuple(members)))
    return chain


def triviality_claw(k: int, parity: str = "odd") -> Claw:
    """The claws used to bound trivial ranges of higher Segal objects.

    ``odd`` (k ≥ 2) lives on ``[2k-2]``: prong 0 doubles 1, prong j ≥ 1 misses
    ``2(j-1)``.  ``even-lower`` (k ≥ 1) lives on ``[2k-1]``: prong 0 doubles 0,
    prong j misses ``2j-1``.  ``even-upper`` is its mirror image.
    """
    if parity == "odd":
        if k < 2:
            raise ValueError("the odd triviality claw needs k >= 2")
        n = 2 * k - 2
        rows = [[2 if i == 1 else 1 for i in range(n + 1)]]
        rows += [[0 if i == 2 * (j - 1) else 1 for i in range(n + 1)] for j in range(1, k + 1)]
    elif parity in ("even-lower", "even-upper"):
        if k < 1:
            raise ValueError("the even triviality claws need k >= 1")
        n = 2 * k - 1
        rows = [[2 if i == 0 else 1 for i in range(n + 1)]]
        rows += [[0 if i == 2 * j - 1 else 1 for i in range(n + 1)] for j in range(1, k + 1)]
        if parity == "even-upper":
            rows = [r[::-1] for r in rows]
    else:
        raise ValueError(f"unknown parity {parity!r}")
    return Claw(n, tuple(SimplexMap.from_fibers(r) for r in rows))


def polytope_volume_check(n: int, d: int) -> dict:
    """Facet volume sums of both triangulations next to the polytope volume."""
    lo, hi = hull_facets(n, d)
    return {"polytope": CyclicPolytope(n, d).volume(), "lower": sum(lo.volumes()), "upper": sum(hi.volumes())}


def export_off(tri: Triangulation) -> str:
    """OFF mesh with exact integer coordinates, padded to three dimensions.

    For ``d = 3`` the faces are the triangles bounding the tetrahedra.
    """
    if tri.d > 3:
        raise ValueError("OFF export supports d <= 3")
    pts = moment_points(tri.n, tri.d)
    verts = [list(p) + [0] * (3 - tri.d) for p in pts]
    if tri.d == 1:
        faces = [list(F) for F in tri.facets]
    elif tri.d == 2:
        faces = [list(F) for F in tri.facets]
    else:
        faces = sorted({tri_ for F in tri.facets for tri_ in combinations(F, 3)})
        faces = [list(f) for f in faces]
    lines = ["OFF", f"{len(verts)} {len(faces)} 0"]
    lines += [" ".join(map(str, v)) for v in verts]
    lines += [" ".join(map(str, [len(f), *f])) for f in faces]
    return "\n".join(lines) + "\n"


__all__ = [
    "CyclicPolytope",
    "Triangulation",
    "boundary_facets",
    "det",
    "export_off",
    "factorial",
    "gale_side",
    "hull_facets",
    "interpolation_chain",
    "moment_points",
    "polytope_volume_check",
    "segal_cover",
    "triviality_claw",
]
