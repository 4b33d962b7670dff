"""Morphisms of the cyclic category Λ.

A morphism ``⟨m⟩ → ⟨n⟩`` is a monotone map ``F : Z → Z`` of degree one,
``F(x + m + 1) = F(x) + n + 1``, taken modulo translation by ``n + 1``.  It is
stored through the values ``F(0), ..., F(m)`` normalized so that
``0 ≤ F(0) ≤ n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .simplex import CompositionError, PreconditionError, SimplexMap, _raw


class InvalidLiftError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class CyclicMap:
    dom_n: int
    cod_n: int
    lift: tuple[int, ...]

    def __post_init__(self) -> None:
        lift = tuple(int(v) for v in self.lift)
        object.__setattr__(self, "lift", lift)
        if self.dom_n < 0 or self.cod_n < 0 or len(lift) != self.dom_n + 1:
            raise InvalidLiftError("lift length must be dom_n + 1 with dom_n, cod_n >= 0")
        if any(b < a for a, b in zip(lift, lift[1:])):
            raise InvalidLiftError(f"lift {lift} is not weakly increasing")
        if lift[-1] > lift[0] + self.cod_n + 1:
            raise InvalidLiftError(f"lift {lift} spans more than one period")
        if not 0 <= lift[0] <= self.cod_n:
            raise InvalidLiftError(f"lift {lift} is not in normal form")

    def extended(self, y: int) -> int:
        """Value of the periodic extension at any integer ``y``."""
        q, r = divmod(y, self.dom_n + 1)
        return self.lift[r] + q * (self.cod_n + 1)

    def set_map(self) -> tuple[int, ...]:
        """Underlying map of cyclic sets ``Z/(m+1) → Z/(n+1)``."""
        return tuple(v % (self.cod_n + 1) for v in self.lift)

    def pulled_back_order(self) -> tuple[int, ...]:
        """Linear order on ``⟨m⟩`` pulled back from the standard order of ``[n]``.

        Returned as the elements of ``⟨m⟩`` listed from smallest to largest.
        Together with :meth:`set_map` this recovers the description of the
        morphism by a set map plus pullback data.
        """
        # the integers y with F(y) in [0, n] form a window of length m + 1
        start = 0
        while self.extended(start - 1) >= 0:
            start -= 1
        while self.extended(start) < 0:
            start += 1
        return tuple(y % (self.dom_n + 1) for y in range(start, start + self.dom_n + 1))

    def __repr__(self) -> str:
        return f"Λ({','.join(map(str, self.lift))}):⟨{self.dom_n}⟩→⟨{self.cod_n}⟩"


def _cyc(dom_n: int, cod_n: int, lift: tuple[int, ...]) -> CyclicMap:
    obj = object.__new__(CyclicMap)
    object.__setattr__(obj, "dom_n", dom_n)
    object.__setattr__(obj, "cod_n", cod_n)
    object.__setattr__(obj, "lift", lift)
    return obj


def normalize(lift: Sequence[int], cod_n: int) -> CyclicMap:
    """Translate a degree-one lift by periods until ``0 ≤ F(0) ≤ cod_n``."""
    lift = tuple(int(v) for v in lift)
    if not lift or cod_n < 0:
        raise InvalidLiftError("empty lift or negative codomain")
    if any(b < a for a, b in zip(lift, lift[1:])) or lift[-1] > lift[0] + cod_n + 1:
        raise InvalidLiftError(f"lift {lift} is not monotone of degree one")
    q = lift[0] // (cod_n + 1)
    shift = q * (cod_n + 1)
    return _cyc(len(lift) - 1, cod_n, tuple(v - shift for v in lift))


def identity(n: int) -> CyclicMap:
    return _cyc(n, n, tuple(range(n + 1)))


def compose_cyclic(f: CyclicMap, g: CyclicMap) -> CyclicMap:
    """Return ``f ∘ g``."""
    if g.cod_n != f.dom_n:
        raise CompositionError(f"cannot compose {f!r} after {g!r}")
    return normalize([f.extended(v) for v in g.lift], f.cod_n)


@dataclass(frozen=True)
class Rotation:
    """The automorphism ``x ↦ x + m`` of ``⟨n⟩``."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("rotation needs n >= 0")
        object.__setattr__(self, "m", self.m % (self.n + 1))

    def as_map(self) -> CyclicMap:
        return normalize([x + self.m for x in range(self.n + 1)], self.n)

    def __mul__(self, other: "Rotation") -> "Rotation":
        if other.n != self.n:
            raise CompositionError("rotations of different objects")
        return Rotation(self.n, self.m + other.m)

    def inverse(self) -> "Rotation":
        return Rotation(self.n, -self.m)


def project_from_delta(f: SimplexMap) -> CyclicMap:
    """The canonical functor Δ → Λ."""
    if f.dom_n < 0 or f.cod_n < 0:
        raise PreconditionError("the empty ordinal has no cyclic image")
    return _cyc(f.dom_n, f.cod_n, f.images)


def factorize(c: CyclicMap) -> tuple[Rotation, SimplexMap]:
    """Unique ``(r, f)`` with ``c = project_from_delta(f) ∘ r``."""
    m, n = c.dom_n, c.cod_n
    found: list[tuple[Rotation, SimplexMap]] = []
    for r in range(m + 1):
        # f(y) = c(y - r) up to a common period shift
        vals = [c.extended(y - r) for y in range(m + 1)]
        shift = (vals[0] // (n + 1)) * (n + 1)
        vals = [v - shift for v in vals]
        if vals[-1] <= n and all(b >= a for a, b in zip(vals, vals[1:])):
            found.append((Rotation(m, r), _raw(tuple(vals), n)))
    if len(found) != 1:
        raise AssertionError(f"factorization of {c!r} is not unique: {found}")
    return found[0]


def enumerate_cyclic_maps(m: int, n: int) -> list[CyclicMap]:
    """All normal forms ``⟨m⟩ → ⟨n⟩``, ordered by lift."""
    if m < 0 or n < 0:
        raise ValueError("cyclic objects need m, n >= 0")
    out = []
    for f0 in range(n + 1):
        for rest in combinations_with_replacement(range(f0, f0 + n + 2), m):
            out.append(_cyc(m, n, (f0,) + rest))
    return out


def automorphisms(n: int) -> list[CyclicMap]:
    """Invertible endomorphisms of ``⟨n⟩`` found by brute force."""
    ident = identity(n)
    # an invertible map is bijective on underlying sets, so only those need the inverse search
    maps = [a for a in enumerate_cyclic_maps(n, n) if len(set(a.set_map())) == n + 1]
    return [
        a for a in maps if any(compose_cyclic(a, b) == ident and compose_cyclic(b, a) == ident for b in maps)
    ]
