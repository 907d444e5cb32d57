"""Exact arithmetic in the quadratic field Q(sqrt2).

Two number types live here.  ``AlgebraicNumber`` is the workhorse for
lattice data: quarter-integers (a + b*sqrt2)/c with c in {1, 2, 4} and
64-bit checked integer coefficients.  Every point of the physical chain,
every window endpoint and every dual-module wave number is one of these,
so set membership and ordering decisions never touch floating point.
``QuadRational`` is a Fraction-coefficient element of Q(sqrt2) used where
arbitrary rational coefficients occur (exact extinction tests).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

_SQRT2_FLOAT = math.sqrt(2.0)
_INT64_MAX = 2**63 - 1
_ALLOWED_DENOMS = (1, 2, 4)


class CoefficientOverflowError(OverflowError):
    """Raised when a coefficient leaves the checked 64-bit range."""


def _check64(v: int) -> int:
    if abs(v) > _INT64_MAX:
        raise CoefficientOverflowError(f"coefficient {v} exceeds 64-bit range")
    return v


def _sign_pair(p: int, q: int) -> int:
    """Exact sign of p + q*sqrt2 for integers p, q."""
    if p == 0 and q == 0:
        return 0
    if p >= 0 and q >= 0:
        return 1
    if p <= 0 and q <= 0:
        return -1
    # Opposite signs: decide via p^2 vs 2 q^2 (equality impossible, sqrt2
    # is irrational). p > 0 > q: positive iff p^2 > 2 q^2.
    d = p * p - 2 * q * q
    return (1 if d > 0 else -1) if p > 0 else (1 if d < 0 else -1)


@total_ordering
@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """(a + b*sqrt2)/c with c in {1, 2, 4}, stored in reduced form."""

    a: int
    b: int
    c: int = 1

    def __post_init__(self) -> None:
        a, b, c = self.a, self.b, self.c
        if not all(isinstance(v, int) for v in (a, b, c)):
            raise TypeError("coefficients must be int")
        if c <= 0:
            raise ValueError("denominator must be positive")
        while c % 2 == 0 and a % 2 == 0 and b % 2 == 0:
            a //= 2
            b //= 2
            c //= 2
        if c not in _ALLOWED_DENOMS:
            raise ValueError(f"denominator {self.c} does not reduce into {{1,2,4}}")
        _check64(a)
        _check64(b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_int(cls, v: int) -> AlgebraicNumber:
        return cls(v, 0, 1)

    @classmethod
    def from_pair(cls, m: int, n: int) -> AlgebraicNumber:
        """m + n*sqrt2, an element of Z[sqrt2]."""
        return cls(m, n, 1)

    @classmethod
    def dual_element(cls, m: int, n: int) -> AlgebraicNumber:
        """m/2 + n*sqrt2/4 = (2m + n*sqrt2)/4, an element of the dual module."""
        return cls(2 * m, n, 4)

    @classmethod
    def from_json(cls, obj: dict) -> AlgebraicNumber:
        return cls(int(obj["a"]), int(obj["b"]), int(obj["c"]))

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other: object) -> AlgebraicNumber | None:
        if isinstance(other, AlgebraicNumber):
            return other
        if isinstance(other, int):
            return AlgebraicNumber(other, 0, 1)
        return None

    def __add__(self, other: AlgebraicNumber | int) -> AlgebraicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = max(self.c, o.c)
        f, g = c // self.c, c // o.c
        return AlgebraicNumber(self.a * f + o.a * g, self.b * f + o.b * g, c)

    __radd__ = __add__

    def __sub__(self, other: AlgebraicNumber | int) -> AlgebraicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: AlgebraicNumber | int) -> AlgebraicNumber:
        return (-self) + other

    def __neg__(self) -> AlgebraicNumber:
        return AlgebraicNumber(-self.a, -self.b, self.c)

    def __mul__(self, other: AlgebraicNumber | int) -> AlgebraicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a = self.a * o.a + 2 * self.b * o.b
        b = self.a * o.b + self.b * o.a
        return AlgebraicNumber(a, b, self.c * o.c)

    __rmul__ = __mul__

    # -- order and embedding -------------------------------------------

    def sign(self) -> int:
        return _sign_pair(self.a, self.b)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c

    def __lt__(self, other: AlgebraicNumber | int) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c))

    def __abs__(self) -> AlgebraicNumber:
        return -self if self.sign() < 0 else self

    def value(self) -> float:
        a, b = self.a, self.b
        if a == 0 or b == 0 or (a > 0) == (b > 0):
            return (a + b * _SQRT2_FLOAT) / self.c
        # opposite signs cancel; a + b*sqrt2 = (a^2 - 2 b^2)/(a - b*sqrt2)
        # keeps full relative precision for large coefficients
        return (a * a - 2 * b * b) / (a - b * _SQRT2_FLOAT) / self.c

    __float__ = value

    def cmp_float(self, q: float) -> int:
        """Exact sign of self - q, for any finite binary float q."""
        f = Fraction(q)
        p = self.a * f.denominator - f.numerator * self.c
        return _sign_pair(p, self.b * f.denominator)

    # -- structure -----------------------------------------------------

    def star(self) -> AlgebraicNumber:
        return AlgebraicNumber(self.a, -self.b, self.c)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integer(self) -> bool:
        return self.c == 1 and self.b == 0

    def lattice_coords(self) -> tuple[int, int] | None:
        """(m, n) with self = m + n*sqrt2, or None if not in Z[sqrt2]."""
        return (self.a, self.b) if self.c == 1 else None

    def dual_coords(self) -> tuple[int, int] | None:
        """(m, n) with self = (2m + n*sqrt2)/4, or None if not in the dual module."""
        f = 4 // self.c
        a4, b4 = self.a * f, self.b * f
        if a4 % 2:
            return None
        return (a4 // 2, b4)

    def __str__(self) -> str:
        return f"({self.a}{self.b:+}*sqrt2)/{self.c}"

    def __repr__(self) -> str:
        return f"AlgebraicNumber({self.a}, {self.b}, {self.c})"


ZERO = AlgebraicNumber(0, 0, 1)
ONE = AlgebraicNumber(1, 0, 1)
SQRT2 = AlgebraicNumber(0, 1, 1)
SILVER_MEAN = AlgebraicNumber(1, 1, 1)        # 1 + sqrt2
SILVER_MEAN_CONJ = AlgebraicNumber(1, -1, 1)  # 1 - sqrt2


def star(x: AlgebraicNumber) -> AlgebraicNumber:
    """Field conjugation sqrt2 -> -sqrt2."""
    return x.star()


def exact_compare(x: AlgebraicNumber, y: AlgebraicNumber) -> int:
    """-1, 0 or +1 as x < y, x = y, x > y.  Never consults floats."""
    return (x - y).sign()


def dual_pairing(k: AlgebraicNumber, x: AlgebraicNumber) -> AlgebraicNumber:
    """k*x + star(k)*star(x); an integer whenever k is in the dual module
    and x in Z[sqrt2]."""
    return k * x + k.star() * x.star()


def enumerate_dual(
    k_max: float, kstar_max: float | None = None
) -> list[AlgebraicNumber]:
    """All k = (2m + n*sqrt2)/4 with |k| <= k_max and |star(k)| <= kstar_max,
    sorted ascending.

    The dual module is dense in R, so a bound on the conjugate is what
    makes the enumeration finite.  When ``kstar_max`` is omitted it
    defaults to max(2*k_max, 1.0); callers that need a completeness
    guarantee (e.g. every peak above an intensity floor) should pass the
    bound they derived.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if kstar_max is None:
        kstar_max = max(2.0 * k_max, 1.0)
    out: list[AlgebraicNumber] = []
    # m = k + star(k), n*sqrt2/2 = k - star(k); widen by 1 against rounding.
    m_hi = int(math.floor((k_max + kstar_max))) + 1
    for m in range(-m_hi, m_hi + 1):
        # |k| <= k_max gives n*sqrt2 in [-4 k_max - 2m, 4 k_max - 2m].
        n_lo = int(math.floor((-4 * k_max - 2 * m) / _SQRT2_FLOAT)) - 1
        n_hi = int(math.ceil((4 * k_max - 2 * m) / _SQRT2_FLOAT)) + 1
        for n in range(n_lo, n_hi + 1):
            k = AlgebraicNumber(2 * m, n, 4)
            if abs(k).cmp_float(k_max) <= 0 and abs(k.star()).cmp_float(kstar_max) <= 0:
                out.append(k)
    out.sort(key=AlgebraicNumber.value)
    return out


@dataclass(frozen=True)
class QuadRational:
    """rat + irr*sqrt2 with Fraction coefficients; the full field Q(sqrt2)."""

    rat: Fraction
    irr: Fraction

    @classmethod
    def of(cls, v: QuadRational | AlgebraicNumber | Fraction | int) -> QuadRational:
        if isinstance(v, QuadRational):
            return v
        if isinstance(v, AlgebraicNumber):
            return cls(Fraction(v.a, v.c), Fraction(v.b, v.c))
        if isinstance(v, (int, Fraction)):
            return cls(Fraction(v), Fraction(0))
        raise TypeError(f"cannot interpret {v!r} as an element of Q(sqrt2)")

    def __add__(self, other: QuadRational) -> QuadRational:
        return QuadRational(self.rat + other.rat, self.irr + other.irr)

    def __sub__(self, other: QuadRational) -> QuadRational:
        return QuadRational(self.rat - other.rat, self.irr - other.irr)

    def __neg__(self) -> QuadRational:
        return QuadRational(-self.rat, -self.irr)

    def __mul__(self, other: QuadRational) -> QuadRational:
        return QuadRational(
            self.rat * other.rat + 2 * self.irr * other.irr,
            self.rat * other.irr + self.irr * other.rat,
        )

    def star(self) -> QuadRational:
        return QuadRational(self.rat, -self.irr)

    def is_zero(self) -> bool:
        return self.rat == 0 and self.irr == 0

    def is_integer(self) -> bool:
        return self.irr == 0 and self.rat.denominator == 1

    def value(self) -> float:
        return float(self.rat) + float(self.irr) * _SQRT2_FLOAT

    def __str__(self) -> str:
        return f"{self.rat}{'+' if self.irr >= 0 else ''}{self.irr}*sqrt2"


def parse_exact(text: str) -> QuadRational:
    """Parse 'p', 'p/q', '3-2*sqrt2', '1+1/3*sqrt2', ... into a QuadRational.

    Only exact rational coefficients are accepted; decimal notation is
    rejected on purpose.
    """
    s = text.strip().replace(" ", "")
    tokens = re.findall(r"[+-]?[^+-]+", s)
    if not tokens or "".join(tokens) != s:
        raise ValueError(f"could not parse {text!r}")
    rat, irr = Fraction(0), Fraction(0)
    for tok in tokens:
        m = re.fullmatch(r"([+-]?)(?:(\d+(?:/\d+)?)\*?)?(sqrt2)?", tok)
        if m is None or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"could not parse {text!r}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coef = -coef
        if m.group(3):
            irr += coef
        else:
            rat += coef
    return QuadRational(rat, irr)
