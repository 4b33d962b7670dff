"""Exhaustive sweeps over claws with bounded fiber sizes.

The pair sweep calls the per-claw functions of :mod:`claws` directly.  The
triple sweep evaluates the compatibility criterion with numpy over all
ordered triples at once, while the oracle side is assembled from the pair
verdicts (the faces over ``T = ∅`` of a triple's Čech cube are the Čech
squares of its pairs) and finished claw by claw on the triples whose three
pair faces are pushouts.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .claws import Claw, cech_cube, classify_claw, colimit_oracle, decompose_tree, limit_size
from .simplex import SimplexMap, classify_map


def prong_fibers(n: int, fiber_bound: int = 3) -> np.ndarray:
    """Fiber vectors of all prongs into ``[n]`` with nonempty domain."""
    rows = [c for c in itertools.product(range(fiber_bound + 1), repeat=n + 1) if sum(c) > 0]
    return np.array(rows, dtype=np.int64).reshape(len(rows), n + 1)


def prongs(n: int, fiber_bound: int = 3) -> list[SimplexMap]:
    return [SimplexMap.from_fibers(tuple(r)) for r in prong_fibers(n, fiber_bound)]


@dataclass
class BatchFlags:
    """Per-prong indicator columns feeding the vectorized criterion."""

    big: np.ndarray      # fiber has more than one element
    special: np.ndarray  # fiber is not a singleton
    missing: np.ndarray  # column i: the pair {i-1, i} is not in the image
    off: np.ndarray      # {0, n} is not in the image

    @classmethod
    def from_fibers(cls, fib: np.ndarray) -> "BatchFlags":
        empty = fib == 0
        return cls(
            big=(fib > 1).astype(np.int8),
            special=(fib != 1).astype(np.int8),
            missing=(empty[:, :-1] | empty[:, 1:]).astype(np.int8),
            off=(empty[:, 0] | empty[:, -1]).astype(np.int8),
        )


def _at_most_one(cols: np.ndarray, x: int) -> np.ndarray:
    """For fixed first prong ``x``: (y, z) grid where each column has ≤ 1 hit."""
    K, width = cols.shape
    ok = np.ones((K, K), dtype=bool)
    for i in range(width):
        col = cols[:, i]
        ok &= (col[:, None] + col[None, :] + cols[x, i]) <= 1
    return ok


def triple_flags(flags: BatchFlags, x: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(backwards compatible, compatible, cyclically compatible) over all (x, y, z)."""
    bc = _at_most_one(flags.big, x)
    compat = _at_most_one(flags.special, x) & _at_most_one(flags.missing, x)
    off = flags.off.astype(np.int16)
    cyc = compat & ((off[:, None] + off[None, :] + off[x]) <= 1)
    return bc, compat, cyc


def pair_flags(flags: BatchFlags) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    def ok(cols):
        c = cols.astype(np.int16)
        return np.all((c[:, None, :] + c[None, :, :]) <= 1, axis=2)

    bc = ok(flags.big)
    compat = ok(flags.special) & ok(flags.missing)
    off = flags.off.astype(np.int16)
    cyc = compat & ((off[:, None] + off[None, :]) <= 1)
    return bc, compat, cyc


@dataclass
class SweepLevel:
    n: int
    size: int
    claws: int = 0
    criterion_true: dict = field(default_factory=lambda: {"delta": 0, "lambda": 0})
    disagreements: list = field(default_factory=list)
    size_law_checked: int = 0
    size_law_failures: list = field(default_factory=list)
    oracle_calls: int = 0
    degraded_faces: int = 0
    seconds: float = 0.0


def _oracle_on_cube(cube, n: int, category: str, apex_bound: int, level: SweepLevel) -> bool:
    if cube.has_empty_corner():
        return False
    for *_, face in cube.faces():
        res = colimit_oracle(face, category, apex_bound)
        level.oracle_calls += 1
        level.degraded_faces += res.degraded
        if not res:
            return False
    return True


def _check_sizes(c: Claw, cube, level: SweepLevel, brute: bool) -> None:
    fib = c.fiber_table()
    for T, k in cube.corners.items():
        law = sum(int(np.prod([fib[t][i] for t in T])) if T else 1 for i in range(c.n + 1))
        seen = [law, k + 1]
        if brute:
            seen.append(limit_size([c.prongs[t] for t in sorted(T)]) if T else c.n + 1)
        level.size_law_checked += 1
        if len(set(seen)) != 1:
            level.size_law_failures.append((c, sorted(T), seen))


def sweep_pairs(n: int, fiber_bound: int = 3, apex_bound: int | None = None) -> tuple[SweepLevel, dict]:
    """Criterion versus oracle for every ordered 2-claw on ``[n]``."""
    t0 = time.perf_counter()
    apex = n + 4 if apex_bound is None else apex_bound
    ps = prongs(n, fiber_bound)
    K = len(ps)
    level = SweepLevel(n, 2)
    verdict = {cat: np.zeros((K, K), dtype=bool) for cat in ("delta", "lambda")}
    for x, y in itertools.product(range(K), repeat=2):
        c = Claw(n, (ps[x], ps[y]))
        rep = classify_claw(c)
        crit = {"delta": rep.compatible, "lambda": rep.cyclically_compatible}
        level.claws += 1
        if rep.backwards_compatible:
            cube = cech_cube(c)
            _check_sizes(c, cube, level, brute=True)
            orc = {cat: _oracle_on_cube(cube, n, cat, apex, level) for cat in crit}
        else:
            orc = {"delta": False, "lambda": False}
        for cat in crit:
            level.criterion_true[cat] += crit[cat]
            verdict[cat][x, y] = orc[cat]
            if crit[cat] != orc[cat]:
                level.disagreements.append((cat, c, crit[cat], orc[cat]))
    level.seconds = time.perf_counter() - t0
    return level, verdict


def sweep_triples(
    n: int,
    pair_verdict: dict,
    fiber_bound: int = 3,
    apex_bound: int | None = None,
    size_law: bool = True,
) -> SweepLevel:
    """Criterion versus oracle for every ordered 3-claw on ``[n]``."""
    t0 = time.perf_counter()
    apex = n + 4 if apex_bound is None else apex_bound
    fib = prong_fibers(n, fiber_bound)
    ps = [SimplexMap.from_fibers(tuple(r)) for r in fib]
    K = len(ps)
    flags = BatchFlags.from_fibers(fib)
    level = SweepLevel(n, 3)
    images = _padded_images(ps)
    for x in range(K):
        bc, compat, cyc = triple_flags(flags, x)
        level.claws += K * K
        crit = {"delta": compat, "lambda": cyc}
        for cat, V in pair_verdict.items():
            survivors = bc & V[x][:, None] & V[x][None, :] & V
            level.criterion_true[cat] += int(crit[cat].sum())
            # triples with a failing pair face are settled; the rest are checked one by one
            for y, z in zip(*np.nonzero(survivors | crit[cat])):
                c = Claw(n, (ps[x], ps[y], ps[z]))
                ok = bool(survivors[y, z]) and _oracle_on_cube(cech_cube(c), n, cat, apex, level)
                if ok != bool(crit[cat][y, z]):
                    level.disagreements.append((cat, (x, int(y), int(z)), bool(crit[cat][y, z]), ok))
        if size_law:
            _triple_size_law(fib, images, x, bc, level)
    level.seconds = time.perf_counter() - t0
    return level


def _padded_images(ps: list[SimplexMap]) -> np.ndarray:
    width = max(f.dom_n + 1 for f in ps)
    out = np.full((len(ps), width), -1, dtype=np.int64)
    for k, f in enumerate(ps):
        out[k, : f.dom_n + 1] = f.images
    return out


def _triple_size_law(fib: np.ndarray, images: np.ndarray, x: int, bc: np.ndarray, level: SweepLevel) -> None:
    """The corner-size formula against a tuple count for every corner of every bc triple with first prong ``x``."""
    row = images[x][images[x] >= 0]
    # matches[a, y] = #{b : f_y(b) = f_x(a)}
    matches = np.stack([(images == v).sum(axis=1) for v in row])
    counted = {
        "xyz": matches.T @ matches,
        "xy": np.broadcast_to(matches.sum(axis=0)[:, None], bc.shape),
        "xz": np.broadcast_to(matches.sum(axis=0)[None, :], bc.shape),
    }
    law = {
        "xyz": (fib * fib[x]) @ fib.T,
        "xy": np.broadcast_to((fib @ fib[x])[:, None], bc.shape),
        "xz": np.broadcast_to((fib @ fib[x])[None, :], bc.shape),
    }
    for key in counted:
        bad = bc & (counted[key] != law[key])
        level.size_law_checked += int(bc.sum())
        if bad.any():
            y, z = map(int, np.argwhere(bad)[0])
            level.size_law_failures.append(((x, y, z), key))


@dataclass
class SweepReport:
    levels: list
    seconds: float

    @property
    def disagreements(self) -> int:
        return sum(len(lv.disagreements) for lv in self.levels)

    @property
    def size_law_failures(self) -> int:
        return sum(len(lv.size_law_failures) for lv in self.levels)


def criterion_oracle_sweep(
    max_n: int = 4, fiber_bound: int = 3, sizes: tuple = (2, 3), size_law: bool = True
) -> SweepReport:
    t0 = time.perf_counter()
    levels = []
    for n in range(max_n + 1):
        pair_level, verdict = sweep_pairs(n, fiber_bound)
        if 2 in sizes:
            levels.append(pair_level)
        if 3 in sizes:
            levels.append(sweep_triples(n, verdict, fiber_bound, size_law=size_law))
    return SweepReport(levels, time.perf_counter() - t0)


@dataclass
class DecompositionReport:
    claws: int = 0
    leaves: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0


def _special_count(f: SimplexMap) -> int:
    return sum(1 for c in f.fibers() if c != 1)


def _check_tree(node, original: Claw, out: DecompositionReport) -> None:
    if node.direction is None:
        out.leaves += 1
        for f in node.claw.prongs:
            if not classify_map(f).preprimitive:
                out.failures.append((original, "leaf prong not preprimitive", f))
        return
    s = node.direction
    want = _special_count(node.claw.prongs[s])
    if len(node.parts) != want or want != _special_count(original.prongs[s]):
        out.failures.append((original, f"direction {s}: {len(node.parts)} factors for {want} special fibers", None))
    for part in node.parts:
        _check_tree(part, original, out)


def decomposition_sweep(max_n: int = 4, fiber_bound: int = 3, sizes: tuple = (2, 3)) -> DecompositionReport:
    """Split every compatible claw in range into primitive pieces and re-paste them."""
    t0 = time.perf_counter()
    out = DecompositionReport()
    for n in range(max_n + 1):
        fib = prong_fibers(n, fiber_bound)
        ps = [SimplexMap.from_fibers(tuple(r)) for r in fib]
        flags = BatchFlags.from_fibers(fib)
        todo = []
        if 2 in sizes:
            _, compat, _ = pair_flags(flags)
            todo += [(int(x), int(y)) for x, y in np.argwhere(compat)]
        if 3 in sizes:
            for x in range(len(ps)):
                _, compat, _ = triple_flags(flags, x)
                todo += [(x, int(y), int(z)) for y, z in np.argwhere(compat)]
        for idx in todo:
            c = Claw(n, tuple(ps[i] for i in idx))
            out.claws += 1
            tree = decompose_tree(c, "delta", primitive_only=True)
            _check_tree(tree, c, out)
            got, ref = tree.cube(), cech_cube(c)
            if got.corners != ref.corners or got.edges != ref.edges:
                out.failures.append((c, "pasting differs from the Čech cube", None))
    out.seconds = time.perf_counter() - t0
    return out
