"""Diffraction of (deformed) silver-mean combs.

Analytic side: the Fourier-Bohr amplitude of the deformed chain at a
dual-module wave number k is

    A(k) = (1/(2*sqrt2)) * integral over W of e^{2 pi i (k* y - k theta(y))} dy,

which for the affine family theta = alpha*y + beta collapses to
e^{-2 pi i beta k} * sin(z)/(2z) with z = pi*(alpha*k - k*)*sqrt2.  The
amplitude vanishes off the dual module.  Empirical side: normalised
exponential sums over finite patches, with compensated summation, plus
the finite autocorrelation for Wiener-identity checks.

Extinctions (sin z = 0 with z != 0) are decided in exact arithmetic:
z/pi lies in Q(sqrt2) whenever alpha does, so integrality is a statement
about two Fractions, never about floats.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .cutproject import Window
from .deform import (
    AffineDeformation,
    DeformationMap,
    DiracComb,
    Scalar,
    _is_exact,
    _scalar_float,
)
from .quadfield import AlgebraicNumber, QuadRational, enumerate_dual

_SQRT2 = math.sqrt(2.0)
_TWO_SQRT2 = 2.0 * _SQRT2
_GL_ORDER = 8
_T = TypeVar("_T")

DEFAULT_PANELS = 4096
DEFAULT_INTENSITY_FLOOR = 1e-8


def worker_count() -> int:
    """Parallelism cap from QUASILATTICE_THREADS (default: sequential)."""
    try:
        return max(1, int(os.environ.get("QUASILATTICE_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn: Callable[..., _T], items: Sequence) -> list[_T]:
    n = worker_count()
    if n <= 1 or len(items) < 4:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def compensated_sum(values: Iterable[complex]) -> complex:
    """Neumaier-compensated complex summation."""
    sr = cr = si = ci = 0.0
    for v in values:
        x, y = v.real, v.imag
        t = sr + x
        cr += (sr - t) + x if abs(sr) >= abs(x) else (x - t) + sr
        sr = t
        t = si + y
        ci += (si - t) + y if abs(si) >= abs(y) else (y - t) + si
        si = t
    return complex(sr + cr, si + ci)


def weyl_sum(comb: DiracComb, k: float | AlgebraicNumber) -> complex:
    """Normalised exponential sum (1/2r) * sum of w_x e^{-2 pi i k x}."""
    if comb.radius <= 0:
        raise ValueError("comb radius must be positive")
    kv = k.value() if isinstance(k, AlgebraicNumber) else float(k)
    two_pi_k = 2.0 * math.pi * kv

    def terms() -> Iterable[complex]:
        for p in comb.points:
            ph = -two_pi_k * p.position_float()
            yield p.weight * complex(math.cos(ph), math.sin(ph))

    return compensated_sum(terms()) / (2.0 * comb.radius)


def _require_dual(k: AlgebraicNumber) -> tuple[int, int]:
    mn = k.dual_coords()
    if mn is None:
        raise ValueError(f"{k} is not an element of the dual module")
    return mn


def _z_over_pi(k: AlgebraicNumber, alpha: Scalar) -> QuadRational:
    """(alpha*k - star(k)) * sqrt2, exactly, for exact alpha."""
    kq = QuadRational.of(k)
    irr2 = QuadRational.of(AlgebraicNumber(0, 1, 1))
    return (QuadRational.of(alpha) * kq - kq.star()) * irr2


def amplitude_closed(k: AlgebraicNumber, alpha: Scalar, beta: Scalar) -> complex:
    """Closed-form amplitude for the affine deformation family.

    Exact alpha (int, Fraction, AlgebraicNumber, QuadRational) routes
    through exact arithmetic, so systematic zeros come out as exactly 0
    and the central value as exactly 1/2 (times the beta phase).
    """
    _require_dual(k)
    kv = k.value()
    phase = cmath.exp(-2j * math.pi * _scalar_float(beta) * kv)
    if _is_exact(alpha):
        w = _z_over_pi(k, alpha)
        if w.is_zero():
            return 0.5 * phase
        if w.is_integer():
            return 0.0 * phase
        z = math.pi * w.value()
    else:
        z = math.pi * (float(alpha) * kv - k.star().value()) * _SQRT2
        if z == 0.0:
            return 0.5 * phase
    return phase * (math.sin(z) / (2.0 * z))


@lru_cache(maxsize=64)
def _quad_grid(
    theta: DeformationMap, window: Window, panels: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(nodes, weights, theta values) of the composite Gauss-Legendre grid,
    panels split at the deformation breakpoints."""
    nodes1, weights1 = np.polynomial.legendre.leggauss(_GL_ORDER)
    cuts = sorted(theta.breakpoints_float())
    segments: list[tuple[float, float]] = []
    for lo, hi in window.intervals:
        lov, hiv = lo.value(), hi.value()
        inner = [c for c in cuts if lov < c < hiv]
        edges = [lov, *inner, hiv]
        segments.extend((a, b) for a, b in zip(edges, edges[1:]) if b > a)
    total = sum(b - a for a, b in segments)
    ys: list[np.ndarray] = []
    ws: list[np.ndarray] = []
    for a, b in segments:
        n = max(1, int(round(panels * (b - a) / total)))
        edges = np.linspace(a, b, n + 1)
        mid = (edges[:-1, None] + edges[1:, None]) / 2.0
        half = (edges[1:, None] - edges[:-1, None]) / 2.0
        ys.append((mid + half * nodes1[None, :]).ravel())
        ws.append((half * weights1[None, :]).ravel())
    y = np.concatenate(ys)
    w = np.concatenate(ws)
    tv = np.array([theta.evaluate_float(float(v)) for v in y])
    return y, w, tv


def amplitude_quadrature(
    k: AlgebraicNumber,
    theta: DeformationMap,
    window: Window | None = None,
    panels: int = DEFAULT_PANELS,
) -> complex:
    """Amplitude by composite Gauss-Legendre quadrature over the window."""
    _require_dual(k)
    if panels < 2:
        raise ValueError("panels must be >= 2")
    window = window if window is not None else theta.window()
    y, w, tv = _quad_grid(theta, window, panels)
    kv, ksv = k.value(), k.star().value()
    phase = np.exp(2j * math.pi * (ksv * y - kv * tv))
    return complex(np.dot(w, phase)) / _TWO_SQRT2


def autocorrelation_finite(comb: DiracComb, max_points: int = 20000) -> DiracComb:
    """Sum over ordered pairs of conj(w_x) w_y at position y - x, divided by
    the averaging length 2*radius.  Positions stay exact for exact combs."""
    n = len(comb.points)
    if n > max_points:
        raise ValueError(f"comb has {n} points, above the quadratic-cost cap {max_points}")
    norm = 2.0 * comb.radius
    if n == 0:
        return DiracComb((), comb.radius)
    exact = all(isinstance(p.position, AlgebraicNumber) for p in comb.points)
    weights = np.array([p.weight for p in comb.points], dtype=complex)
    wprod = (np.conj(weights)[:, None] * weights[None, :]).ravel()
    if exact:
        a4 = np.array(
            [p.position.a * (4 // p.position.c) for p in comb.points], dtype=np.int64
        )
        b4 = np.array(
            [p.position.b * (4 // p.position.c) for p in comb.points], dtype=np.int64
        )
        bound = int(max(np.abs(a4).max(), np.abs(b4).max()))
        if bound >= 1 << 30:
            raise ValueError("coefficients too large to pack difference keys")
        off = 2 * bound + 1  # differences lie in (-off, off)
        base = 2 * off + 1
        da = (a4[None, :] - a4[:, None]).ravel()
        db = (b4[None, :] - b4[:, None]).ravel()
        keys = (da + off) * base + (db + off)
        uniq, inv = np.unique(keys, return_inverse=True)
        acc = np.zeros(len(uniq), dtype=complex)
        np.add.at(acc, inv, wprod)
        items = []
        for key, wsum in zip(uniq, acc):
            ka = int(key) // base - off
            kb = int(key) % base - off
            items.append((AlgebraicNumber(ka, kb, 4), complex(wsum) / norm))
        return DiracComb.from_items(items, comb.radius)
    pos = np.array(comb.positions_float())
    diffs = (pos[None, :] - pos[:, None]).ravel()
    order = np.argsort(diffs, kind="stable")
    items_f: list[tuple[float, complex]] = []
    for idx in order:
        d, w = float(diffs[idx]), complex(wprod[idx])
        if items_f and abs(d - items_f[-1][0]) < 1e-12:
            items_f[-1] = (items_f[-1][0], items_f[-1][1] + w)
        else:
            items_f.append((d, w))
    return DiracComb.from_items([(d, w / norm) for d, w in items_f], comb.radius)


@dataclass(frozen=True)
class SpectrumEntry:
    k: AlgebraicNumber
    amplitude: complex
    intensity: float
    source: str


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[SpectrumEntry, ...]
    k_max: float
    intensity_floor: float

    def __len__(self) -> int:
        return len(self.entries)

    def support(self) -> list[AlgebraicNumber]:
        return [e.k for e in self.entries]

    def intensity_at(self, k: AlgebraicNumber) -> float | None:
        for e in self.entries:
            if e.k == k:
                return e.intensity
        return None

    def to_csv(self) -> str:
        lines = ["k_float,k_a,k_b,k_c,amp_re,amp_im,intensity,source"]
        for e in self.entries:
            lines.append(
                ",".join(
                    [
                        "%.17g" % e.k.value(),
                        str(e.k.a),
                        str(e.k.b),
                        str(e.k.c),
                        "%.17g" % e.amplitude.real,
                        "%.17g" % e.amplitude.imag,
                        "%.17g" % e.intensity,
                        e.source,
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> list[dict]:
        return [
            {
                "k": e.k.to_json(),
                "k_float": e.k.value(),
                "amplitude": [e.amplitude.real, e.amplitude.imag],
                "intensity": e.intensity,
                "source": e.source,
            }
            for e in self.entries
        ]


def scan_internal_bound(theta: DeformationMap, k_max: float, floor: float) -> float:
    """|star(k)| beyond which every amplitude is provably below sqrt(floor).

    From |A| <= P / (2 sqrt2 pi (|k*| - M |k|)) with M the largest slope of
    theta and P its piece count; for the affine family this is sharp up to
    the sinc envelope.
    """
    if floor <= 0:
        return max(2.0 * k_max, 1.0)
    margin = theta.piece_count() / (_TWO_SQRT2 * math.pi * math.sqrt(floor))
    return theta.max_slope() * k_max + margin + 1.0


def spectrum_scan(
    theta: DeformationMap,
    k_max: float,
    intensity_floor: float = DEFAULT_INTENSITY_FLOOR,
) -> Spectrum:
    """All dual-module peaks with |k| <= k_max and intensity >= the floor.

    The enumeration bound on star(k) is derived from the floor, so for a
    positive floor the returned support is complete.  Affine deformations
    use the closed form (exact coefficients keep exact zeros); sampled
    deformations fall back to quadrature.
    """
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    if intensity_floor < 0:
        raise ValueError("intensity_floor must be >= 0")
    bound = scan_internal_bound(theta, k_max, intensity_floor)
    ks = enumerate_dual(k_max, bound)
    affine = isinstance(theta, AffineDeformation)

    def one(k: AlgebraicNumber) -> SpectrumEntry:
        if affine:
            amp = amplitude_closed(k, theta.alpha, theta.beta)
            source = "closed_form"
        else:
            amp = amplitude_quadrature(k, theta)
            source = "quadrature"
        return SpectrumEntry(k, amp, abs(amp) ** 2, source)

    entries = [
        e for e in _ordered_map(one, ks) if e.intensity >= intensity_floor
    ]
    return Spectrum(tuple(entries), k_max, intensity_floor)


def empirical_spectrum(
    comb: DiracComb, k_values: Sequence[AlgebraicNumber]
) -> Spectrum:
    """Weyl-sum amplitudes of a finite comb at the given wave numbers."""

    def one(k: AlgebraicNumber) -> SpectrumEntry:
        s = weyl_sum(comb, k)
        return SpectrumEntry(k, s, abs(s) ** 2, "empirical")

    entries = _ordered_map(one, list(k_values))
    kmax = max((abs(k.value()) for k in k_values), default=0.0)
    return Spectrum(tuple(entries), kmax, 0.0)


@dataclass(frozen=True)
class ExtinctionReport:
    alpha: QuadRational
    k_max: float
    extinctions: tuple[AlgebraicNumber, ...]
    survivors: tuple[AlgebraicNumber, ...]
    span: str
    span_basis: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "k_max": self.k_max,
            "extinctions": [k.to_json() for k in self.extinctions],
            "extinction_floats": [k.value() for k in self.extinctions],
            "survivor_count": len(self.survivors),
            "span": self.span,
            "span_basis": [list(v) for v in self.span_basis],
        }


SPAN_HALF_INTEGERS = "half_integers"
SPAN_FULL_DUAL = "full_dual_module"
SPAN_SUBLATTICE = "proper_sublattice"


def _span_basis(vectors: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Hermite-form basis ((a, b), (0, c)) of the sublattice of Z^2
    generated by the vectors; rows with zero entries are dropped."""
    row: list[int] | None = None  # the (a, b) row, a > 0
    c = 0
    for v0, v1 in vectors:
        if v0 < 0:
            v0, v1 = -v0, -v1
        if v0 == 0:
            c = gcd(c, abs(v1))
            continue
        if row is None:
            row = [v0, v1]
            continue
        a0, a1 = row
        while v0:
            q = a0 // v0
            a0, a1, v0, v1 = v0, v1, a0 - q * v0, a1 - q * v1
        row = [a0, a1]
        c = gcd(c, abs(v1))
    basis: list[tuple[int, int]] = []
    if row is not None:
        if c:
            row[1] %= c
        basis.append((row[0], row[1]))
    if c:
        basis.append((0, c))
    return tuple(basis)


def extinction_report(
    alpha: Scalar, k_max: float, kstar_max: float | None = None
) -> ExtinctionReport:
    """Exact extinction scan over the enumerated dual module.

    alpha must be exact (int, Fraction, AlgebraicNumber or QuadRational);
    a wave number is extinct when z/pi = (alpha*k - k*)*sqrt2 is a nonzero
    integer, decided without floats.  The Z-span of the survivors is
    classified: half-integers for alpha = 1, the full dual module
    otherwise (extinctions never thin the span below that).
    """
    if not _is_exact(alpha):
        raise TypeError("alpha must be given exactly (int, Fraction, AlgebraicNumber, QuadRational)")
    aq = QuadRational.of(alpha)
    extinct: list[AlgebraicNumber] = []
    survive: list[AlgebraicNumber] = []
    for k in enumerate_dual(k_max, kstar_max):
        w = _z_over_pi(k, aq)
        if not w.is_zero() and w.is_integer():
            extinct.append(k)
        else:
            survive.append(k)
    vectors = [k.dual_coords() for k in survive]
    basis = _span_basis([v for v in vectors if v is not None and v != (0, 0)])
    if basis == ((1, 0), (0, 1)):
        span = SPAN_FULL_DUAL
    elif basis == ((1, 0),):
        span = SPAN_HALF_INTEGERS
    else:
        span = SPAN_SUBLATTICE
    return ExtinctionReport(
        aq, k_max, tuple(extinct), tuple(survive), span, basis
    )


@dataclass(frozen=True)
class ComparisonRow:
    k: AlgebraicNumber
    empirical: complex
    analytic: complex

    @property
    def error(self) -> float:
        return abs(self.empirical - self.analytic)


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]

    @property
    def max_error(self) -> float:
        return max((r.error for r in self.rows), default=0.0)

    @property
    def rms_error(self) -> float:
        if not self.rows:
            return 0.0
        return math.sqrt(sum(r.error**2 for r in self.rows) / len(self.rows))

    def to_csv(self) -> str:
        lines = ["k_float,emp_re,emp_im,ana_re,ana_im,abs_error"]
        for r in self.rows:
            lines.append(
                ",".join(
                    "%.17g" % v
                    for v in (
                        r.k.value(),
                        r.empirical.real,
                        r.empirical.imag,
                        r.analytic.real,
                        r.analytic.imag,
                        r.error,
                    )
                )
            )
        return "\n".join(lines) + "\n"


def compare_empirical_analytic(
    comb: DiracComb, theta: DeformationMap, k_list: Sequence[AlgebraicNumber]
) -> ComparisonTable:
    """Per-k error table between the Weyl sum of a deformed comb and the
    analytic amplitude of the deformation."""

    def one(k: AlgebraicNumber) -> ComparisonRow:
        emp = weyl_sum(comb, k)
        if isinstance(theta, AffineDeformation):
            ana = amplitude_closed(k, theta.alpha, theta.beta)
        else:
            ana = amplitude_quadrature(k, theta)
        return ComparisonRow(k, emp, ana)

    return ComparisonTable(tuple(_ordered_map(one, list(k_list))))


def leading_dual_elements(count: int, k_max: float = 2.0) -> list[AlgebraicNumber]:
    """First `count` dual-module elements ordered by (|k|, k)."""
    while True:
        ks = enumerate_dual(k_max)
        ks.sort(key=lambda k: (abs(k.value()), k.value()))
        if len(ks) >= count:
            return ks[:count]
        k_max *= 2.0
