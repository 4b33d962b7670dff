"""Objects and morphisms of the simplex category and its augmented version.

A morphism ``[m] -> [n]`` is stored by its image sequence
``(f(0), ..., f(m))``.  The empty ordinal ``[-1]`` is admitted so that the
augmented category shares one type with the plain one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence


class CompositionError(ValueError):
    """Raised when two maps are not composable."""


class PreconditionError(ValueError):
    """Raised when an operation is applied outside its domain."""


@dataclass(frozen=True, order=True)
class Ordinal:
    """The linear order ``[n] = {0 < ... < n}``; ``n = -1`` is the empty order."""

    n: int

    def __post_init__(self) -> None:
        if self.n < -1:
            raise ValueError(f"ordinal index must be >= -1, got {self.n}")

    @property
    def size(self) -> int:
        return self.n + 1

    def __repr__(self) -> str:
        return "[∅]" if self.n < 0 else f"[{self.n}]"


@dataclass(frozen=True, slots=True)
class SimplexMap:
    """A weakly monotone map ``[dom_n] -> [cod_n]`` given by its images."""

    images: tuple[int, ...]
    cod_n: int

    def __post_init__(self) -> None:
        imgs = self.images
        if not isinstance(imgs, tuple):
            object.__setattr__(self, "images", tuple(int(v) for v in imgs))
            imgs = self.images
        if self.cod_n < -1:
            raise ValueError("codomain index must be >= -1")
        prev = 0
        for v in imgs:
            if v < prev or v > self.cod_n:
                raise ValueError(
                    f"images {imgs} are not a weakly monotone map into [{self.cod_n}]"
                )
            prev = v

    @classmethod
    def identity(cls, n: int) -> "SimplexMap":
        return _raw(tuple(range(n + 1)), n)

    @classmethod
    def from_fibers(cls, fibers: Sequence[int]) -> "SimplexMap":
        """Build the map whose fiber over ``i`` has ``fibers[i]`` elements."""
        imgs: list[int] = []
        for i, c in enumerate(fibers):
            if c < 0:
                raise ValueError("fiber sizes must be non-negative")
            imgs.extend([i] * c)
        return _raw(tuple(imgs), len(fibers) - 1)

    @property
    def dom_n(self) -> int:
        return len(self.images) - 1

    @property
    def dom(self) -> Ordinal:
        return Ordinal(self.dom_n)

    @property
    def cod(self) -> Ordinal:
        return Ordinal(self.cod_n)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def fibers(self) -> tuple[int, ...]:
        """Fiber sizes ``|f^{-1}{i}|`` for ``i`` in the codomain."""
        counts = [0] * (self.cod_n + 1)
        for v in self.images:
            counts[v] += 1
        return tuple(counts)

    def preimage(self, i: int) -> range:
        """The fiber over ``i``, as a contiguous range of the domain."""
        imgs = self.images
        lo = 0
        while lo < len(imgs) and imgs[lo] < i:
            lo += 1
        hi = lo
        while hi < len(imgs) and imgs[hi] == i:
            hi += 1
        return range(lo, hi)

    def image_set(self) -> frozenset[int]:
        return frozenset(self.images)

    def is_identity(self) -> bool:
        return self.cod_n == self.dom_n and all(v == i for i, v in enumerate(self.images))

    def __repr__(self) -> str:
        body = ",".join(map(str, self.images))
        return f"⟨{body}⟩:[{self.dom_n}]→[{self.cod_n}]"


def _raw(images: tuple[int, ...], cod_n: int) -> SimplexMap:
    # trusted constructor for values produced by this module
    obj = object.__new__(SimplexMap)
    object.__setattr__(obj, "images", images)
    object.__setattr__(obj, "cod_n", cod_n)
    return obj


def identity(n: int) -> SimplexMap:
    return SimplexMap.identity(n)


def compose(f: SimplexMap, g: SimplexMap) -> SimplexMap:
    """Return ``f ∘ g``."""
    if g.cod_n != f.dom_n:
        raise CompositionError(f"cannot compose {f!r} after {g!r}")
    fi = f.images
    return _raw(tuple(fi[v] for v in g.images), f.cod_n)


def join(f: SimplexMap, g: SimplexMap) -> SimplexMap:
    """Concatenation ``f ⋆ g``; the second block is shifted past ``f``'s codomain."""
    shift = f.cod_n + 1
    return _raw(f.images + tuple(v + shift for v in g.images), f.cod_n + g.cod_n + 1)


@dataclass(frozen=True)
class ActivityProfile:
    left_active: bool
    right_active: bool
    active: bool
    left_strict: bool
    right_strict: bool
    injective: bool
    primitive: bool
    preprimitive: bool

    def matches(self, mask: Mapping[str, bool]) -> bool:
        return all(getattr(self, key) == want for key, want in mask.items())


def classify_map(f: SimplexMap) -> ActivityProfile:
    if f.dom_n < 0 or f.cod_n < 0:
        raise PreconditionError("classify_map needs a map between nonempty ordinals")
    imgs = f.images
    fib = f.fibers()
    left = imgs[0] == 0
    right = imgs[-1] == f.cod_n
    special = sum(1 for c in fib if c != 1)
    iso = special == 0
    return ActivityProfile(
        left_active=left,
        right_active=right,
        active=left and right,
        left_strict=fib[0] == 1 and left,
        right_strict=fib[-1] == 1 and right,
        injective=all(c <= 1 for c in fib),
        primitive=special == 1,
        preprimitive=special == 1 or iso,
    )


def joyal_minus(f: SimplexMap) -> SimplexMap:
    """``f⁻ : j ↦ min f⁻¹{j, ..., n}`` for right active ``f : [m] → [n]``."""
    if f.dom_n < 0 or not f.images or f.images[-1] != f.cod_n:
        raise PreconditionError(f"{f!r} is not right active")
    imgs = f.images
    out = []
    x = 0
    for j in range(f.cod_n + 1):
        while imgs[x] < j:
            x += 1
        out.append(x)
    return _raw(tuple(out), f.dom_n)


def joyal_plus(g: SimplexMap) -> SimplexMap:
    """``g⁺ : i ↦ max g⁻¹{0, ..., i}`` for left active ``g : [n] → [m]``."""
    if g.dom_n < 0 or not g.images or g.images[0] != 0:
        raise PreconditionError(f"{g!r} is not left active")
    imgs = g.images
    out = []
    x = 0
    last = len(imgs) - 1
    for i in range(g.cod_n + 1):
        while x < last and imgs[x + 1] <= i:
            x += 1
        out.append(x)
    return _raw(tuple(out), g.dom_n)


def enumerate_maps(
    m: int, n: int, mask: Mapping[str, bool] | None = None
) -> list[SimplexMap]:
    """All monotone maps ``[m] → [n]`` in lexicographic order of image tuples."""
    if m < -1 or n < -1:
        raise ValueError("ordinal indices must be >= -1")
    out = [_raw(c, n) for c in combinations_with_replacement(range(n + 1), m + 1)]
    if mask:
        out = [f for f in out if f.dom_n >= 0 and n >= 0 and classify_map(f).matches(mask)]
    return out


def coface(n: int, i: int) -> SimplexMap:
    """``d^i : [n-1] → [n]`` skipping ``i``."""
    return _raw(tuple(x if x < i else x + 1 for x in range(n)), n)


def codegeneracy(n: int, i: int) -> SimplexMap:
    """``s^i : [n+1] → [n]`` hitting ``i`` twice."""
    return _raw(tuple(x if x <= i else x - 1 for x in range(n + 2)), n)


def inclusion(subset: Iterable[int], n: int) -> SimplexMap:
    """The monotone injection whose image is ``subset`` ⊆ [n]."""
    return SimplexMap(tuple(sorted(set(subset))), n)
