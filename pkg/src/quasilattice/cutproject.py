"""Self-dual cut-and-project scheme on Z[sqrt2].

The physical line carries x = m + n*sqrt2, internal space carries the
conjugate x* = m - n*sqrt2, and a point belongs to the chain exactly when
x* falls inside the acceptance window.  The per-letter windows solve the
coupled contraction

    W_a = s* W_a  u  (s* W_a + 1 + s*)  u  s* W_b
    W_b = s* W_a + s*          (s* = 1 - sqrt2)

whose exact solution is W_a = [(sqrt2-2)/2, sqrt2/2] and
W_b = [-sqrt2/2, (sqrt2-2)/2]; Hutchinson iteration reproduces it to any
tolerance and is checked against the exact fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Mapping, Sequence

from .quadfield import (
    SILVER_MEAN_CONJ,
    ZERO,
    AlgebraicNumber,
    _sign_pair,
)
from .substitution import LabeledPatch

Interval = tuple[AlgebraicNumber, AlgebraicNumber]


@dataclass(frozen=True)
class Window:
    """Finite union of closed intervals with exact endpoints."""

    intervals: tuple[Interval, ...]

    def __post_init__(self) -> None:
        prev_hi: AlgebraicNumber | None = None
        for lo, hi in self.intervals:
            if (hi - lo).sign() < 0:
                raise ValueError("interval with hi < lo")
            if prev_hi is not None and (lo - prev_hi).sign() <= 0:
                raise ValueError("intervals must be sorted and disjoint")
            prev_hi = hi

    @classmethod
    def interval(cls, lo: AlgebraicNumber, hi: AlgebraicNumber) -> Window:
        return cls(((lo, hi),))

    @classmethod
    def from_intervals(cls, items: Sequence[Interval]) -> Window:
        """Sort and merge overlapping or touching intervals, exactly."""
        todo = sorted(
            items,
            key=cmp_to_key(
                lambda u, v: (u[0] - v[0]).sign() or (u[1] - v[1]).sign()
            ),
        )
        merged: list[Interval] = []
        for lo, hi in todo:
            if merged and (lo - merged[-1][1]).sign() <= 0:
                plo, phi = merged[-1]
                merged[-1] = (plo, hi if (hi - phi).sign() > 0 else phi)
            else:
                merged.append((lo, hi))
        return cls(tuple(merged))

    def contains(self, y: AlgebraicNumber) -> bool:
        for lo, hi in self.intervals:
            if (y - lo).sign() >= 0 and (hi - y).sign() >= 0:
                return True
        return False

    def total_length(self) -> AlgebraicNumber:
        acc = ZERO
        for lo, hi in self.intervals:
            acc = acc + (hi - lo)
        return acc

    def bounds(self) -> Interval:
        if not self.intervals:
            raise ValueError("empty window has no bounds")
        return (self.intervals[0][0], self.intervals[-1][1])

    def is_empty(self) -> bool:
        return not self.intervals

    def translate(self, t: AlgebraicNumber) -> Window:
        return Window(tuple((lo + t, hi + t) for lo, hi in self.intervals))

    def scale(self, s: AlgebraicNumber) -> Window:
        if s.sign() >= 0:
            ivs = [(lo * s, hi * s) for lo, hi in self.intervals]
        else:
            ivs = [(hi * s, lo * s) for lo, hi in reversed(self.intervals)]
        return Window(tuple(ivs))

    def intersect(self, other: Window) -> Window:
        out: list[Interval] = []
        for alo, ahi in self.intervals:
            for blo, bhi in other.intervals:
                lo = alo if (alo - blo).sign() >= 0 else blo
                hi = ahi if (bhi - ahi).sign() >= 0 else bhi
                if (hi - lo).sign() >= 0:
                    out.append((lo, hi))
        return Window(tuple(out))

    def to_json(self) -> list[dict]:
        return [
            {"lo": lo.to_json(), "hi": hi.to_json()} for lo, hi in self.intervals
        ]

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> Window:
        return cls.from_intervals(
            [
                (AlgebraicNumber.from_json(d["lo"]), AlgebraicNumber.from_json(d["hi"]))
                for d in items
            ]
        )


# exact silver-mean windows
def silver_windows() -> tuple[Window, Window]:
    """(W_a, W_b) of the silver-mean scheme, exact endpoints."""
    w_a = Window.interval(AlgebraicNumber(-2, 1, 2), AlgebraicNumber(0, 1, 2))
    w_b = Window.interval(AlgebraicNumber(0, -1, 2), AlgebraicNumber(-2, 1, 2))
    return w_a, w_b


def silver_window() -> Window:
    """Full acceptance window [-sqrt2/2, sqrt2/2]."""
    return Window.interval(AlgebraicNumber(0, -1, 2), AlgebraicNumber(0, 1, 2))


def silver_subwindows() -> dict[str, Window]:
    w_a, w_b = silver_windows()
    return {"a": w_a, "b": w_b}


@dataclass(frozen=True)
class IfsMap:
    """y -> scale*y + offset applied to the set of the source letter."""

    source: str
    scale: AlgebraicNumber
    offset: AlgebraicNumber


@dataclass(frozen=True)
class IfsSystem:
    """Coupled letter-indexed iterated function system on intervals."""

    equations: Mapping[str, tuple[IfsMap, ...]]

    def __post_init__(self) -> None:
        letters = set(self.equations)
        for maps in self.equations.values():
            for mp in maps:
                if mp.source not in letters:
                    raise ValueError(f"unknown source letter {mp.source!r}")
                if (abs(mp.scale) - 1).sign() >= 0:
                    raise ValueError("IFS map is not a contraction")

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(sorted(self.equations))


def silver_ifs() -> IfsSystem:
    s = SILVER_MEAN_CONJ  # 1 - sqrt2
    one_plus_s = AlgebraicNumber(2, -1, 1)  # 1 + s* = 2 - sqrt2
    return IfsSystem(
        equations={
            "a": (
                IfsMap("a", s, ZERO),
                IfsMap("a", s, one_plus_s),
                IfsMap("b", s, ZERO),
            ),
            "b": (IfsMap("a", s, s),),
        }
    )


def ifs_to_json(system: IfsSystem) -> dict:
    return {
        letter: [
            {"source": mp.source, "scale": mp.scale.to_json(), "offset": mp.offset.to_json()}
            for mp in maps
        ]
        for letter, maps in sorted(system.equations.items())
    }


def ifs_from_json(obj: dict) -> IfsSystem:
    return IfsSystem(
        equations={
            letter: tuple(
                IfsMap(
                    d["source"],
                    AlgebraicNumber.from_json(d["scale"]),
                    AlgebraicNumber.from_json(d["offset"]),
                )
                for d in maps
            )
            for letter, maps in obj.items()
        }
    )


def hutchinson_step(
    system: IfsSystem, windows: Mapping[str, Window]
) -> dict[str, Window]:
    out: dict[str, Window] = {}
    for letter, maps in system.equations.items():
        pieces: list[Interval] = []
        for mp in maps:
            pieces.extend(windows[mp.source].scale(mp.scale).translate(mp.offset).intervals)
        out[letter] = Window.from_intervals(pieces)
    return out


def _distance_to_union(x: float, ivs: list[tuple[float, float]]) -> float:
    best = math.inf
    for lo, hi in ivs:
        if lo <= x <= hi:
            return 0.0
        best = min(best, abs(x - lo), abs(x - hi))
    return best


def hausdorff_distance(a: Window, b: Window) -> float:
    """Float Hausdorff distance between two interval unions."""

    def one_sided(src: Window, dst: Window) -> float:
        div = [(lo.value(), hi.value()) for lo, hi in dst.intervals]
        cands: list[float] = []
        for lo, hi in src.intervals:
            cands.extend((lo.value(), hi.value()))
        # gap midpoints of dst falling inside src are interior maxima
        for (l1, h1), (l2, _) in zip(div, div[1:]):
            mid = (h1 + l2) / 2.0
            if any(lo.value() <= mid <= hi.value() for lo, hi in src.intervals):
                cands.append(mid)
        return max(_distance_to_union(x, div) for x in cands)

    if a.is_empty() or b.is_empty():
        raise ValueError("Hausdorff distance needs nonempty windows")
    return max(one_sided(a, b), one_sided(b, a))


@dataclass(frozen=True)
class WindowSolution:
    windows: dict[str, Window]
    iterations: int
    last_step: float
    exact_fixed_point: bool | None

    def pair(self) -> tuple[Window, Window]:
        return self.windows["a"], self.windows["b"]


def solve_windows(
    system: IfsSystem,
    tol: float = 1e-12,
    max_iter: int = 500,
    seeds: Mapping[str, Window] | None = None,
    exact_candidate: Mapping[str, Window] | None = None,
) -> WindowSolution:
    """Iterate the Hutchinson operator until successive iterates are within
    tol in Hausdorff distance.

    The default seed [-2, 2] contains the silver-mean attractor, so every
    iterate contains the true solution.  When ``exact_candidate`` is given
    it is additionally verified to be an exact fixed point (endpoint-exact
    window arithmetic, no floats).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if seeds is None:
        box = Window.interval(AlgebraicNumber(-2, 0, 1), AlgebraicNumber(2, 0, 1))
        seeds = {letter: box for letter in system.letters}
    current = dict(seeds)
    iterations = 0
    step = math.inf
    while step >= tol:
        if iterations >= max_iter:
            raise RuntimeError(f"no convergence within {max_iter} iterations")
        nxt = hutchinson_step(system, current)
        pieces = sum(len(w.intervals) for w in nxt.values())
        if pieces > 10_000:
            raise RuntimeError(
                "iterates fragmented into too many intervals; "
                "start from a seed containing the attractor"
            )
        step = max(hausdorff_distance(current[k], nxt[k]) for k in nxt)
        current = nxt
        iterations += 1
    verified: bool | None = None
    if exact_candidate is not None:
        image = hutchinson_step(system, exact_candidate)
        verified = all(image[k] == exact_candidate[k] for k in exact_candidate)
    return WindowSolution(current, iterations, step, verified)


def is_member(x: AlgebraicNumber, window: Window) -> bool:
    """Exact cut-and-project membership: star(x) inside the closed window."""
    return window.contains(x.star())


def project_patch(
    radius: float,
    window: Window | None = None,
    subwindows: Mapping[str, Window] | None = None,
) -> LabeledPatch:
    """All x = m + n*sqrt2 with |x| <= radius and star(x) in the window,
    labeled by the subwindow containing star(x).

    Defaults to the silver-mean window with its per-letter split.  The
    scan runs over m = (x + x*)/2; for each m the window pins n*sqrt2
    into an interval of the window's length, so the enumeration is
    provably complete with a constant number of candidates per m.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if window is None:
        window = silver_window()
        if subwindows is None:
            subwindows = silver_subwindows()
    if window.is_empty():
        return LabeledPatch((), radius)
    lo_b, hi_b = window.bounds()
    w_abs = max(abs(lo_b.value()), abs(hi_b.value()))
    sub_items = sorted(subwindows.items()) if subwindows else []
    # integer sign tests against (p + q*sqrt2)/c endpoints, for speed
    iv_raw = [
        ((lo.a, lo.b, lo.c), (hi.a, hi.b, hi.c)) for lo, hi in window.intervals
    ]
    pts: list[tuple[AlgebraicNumber, str | None]] = []
    sqrt2 = math.sqrt(2.0)
    m_hi = int(math.floor((radius + w_abs) / 2.0)) + 2
    for m in range(-m_hi, m_hi + 1):
        n_lo = int(math.floor((m - hi_b.value()) / sqrt2)) - 1
        n_hi = int(math.ceil((m - lo_b.value()) / sqrt2)) + 1
        for n in range(n_lo, n_hi + 1):
            inside = False
            for (la, lb, lc), (ha, hb, hc) in iv_raw:
                # star = m - n*sqrt2;  star - lo and hi - star must be >= 0
                if (
                    _sign_pair(m * lc - la, -n * lc - lb) >= 0
                    and _sign_pair(ha - m * hc, hb + n * hc) >= 0
                ):
                    inside = True
                    break
            if not inside:
                continue
            x = AlgebraicNumber(m, n, 1)
            if abs(x).cmp_float(radius) > 0:
                continue
            label: str | None = None
            if sub_items:
                st = x.star()
                for name, sub in sub_items:
                    if sub.contains(st):
                        label = name
                        break
            pts.append((x, label))
    pts.sort(key=lambda item: item[0].value())
    return LabeledPatch.from_points(pts, radius)


def sigma_estimate(patch: LabeledPatch, window: Window) -> Window:
    """Intersection of window - star(y) over the patch points y.

    For a patch of a hull element containing 0 this is a closed interval
    around the internal coordinate; it shrinks as the patch grows.  An
    empty intersection means the patch is not a restriction of any model
    set of this window.
    """
    if not patch.points:
        raise ValueError("patch is empty")
    if not any(p.position.is_zero() for p in patch.points):
        raise ValueError("patch must contain the origin")
    region = window
    for p in patch.points:
        region = region.intersect(window.translate(-p.position.star()))
        if region.is_empty():
            raise ValueError("empty intersection: patch is not compatible with the window")
    return region
