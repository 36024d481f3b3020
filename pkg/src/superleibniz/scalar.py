"""Exact scalars: rationals and Gaussian rationals Q(i).

Everything in this package (structure constants, linear algebra, decision
procedures) closes over Q(i); no floating point ever enters a result.
Rationals are stdlib ``fractions.Fraction`` (always reduced, positive
denominator, arbitrary precision).
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

import mpmath

Rational = Fraction

_RAT = r"\d+(?:/\d+)?"
_REAL_ONLY = _re.compile(rf"^\s*(?P<re>[+-]?{_RAT})\s*$")
_IMAG_ONLY = _re.compile(rf"^\s*(?P<im>[+-]?(?:{_RAT})?)i\s*$")
_REAL_IMAG = _re.compile(rf"^\s*(?P<re>[+-]?{_RAT})\s*(?P<im>[+-](?:{_RAT})?)i\s*$")


class GaussianRational:
    """A value re + im*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k: int):
        """Exact integer power by square-and-multiply; 0**negative raises."""
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """The rational norm re**2 + im**2."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(self.re / n, -self.im / n)

    # -- structure --------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        if not self.re:
            return im
        return f"{self.re}{im}" if im.startswith("-") else f"{self.re}+{im}"

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "GaussianRational":
        """Accept the {"re","im"} object form or a compact string like '1/2-3i'."""
        if isinstance(obj, dict):
            return cls(Fraction(obj.get("re", 0)), Fraction(obj.get("im", 0)))
        if isinstance(obj, int):
            return cls(obj)
        if isinstance(obj, str):
            return cls.parse(obj)
        raise ValueError(f"cannot read scalar from {obj!r}")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        m = _REAL_ONLY.match(text)
        if m:
            return cls(Fraction(m.group("re")))
        m = _IMAG_ONLY.match(text) or _REAL_IMAG.match(text)
        if not m:
            raise ValueError(f"malformed scalar {text!r}")
        re_part = Fraction(m.group("re")) if "re" in m.groupdict() and m.groupdict().get("re") else Fraction(0)
        body = m.group("im")
        if body in ("", "+"):
            im_part = Fraction(1)
        elif body == "-":
            im_part = Fraction(-1)
        else:
            im_part = Fraction(body)
        return cls(re_part, im_part)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

_UNITS = (ONE, -ONE, I, -I)


def is_root_of_unity(x: GaussianRational) -> bool:
    """In Q(i) the roots of unity are exactly +-1 and +-i."""
    return x in _UNITS


def root_of_unity_order(x: GaussianRational) -> int | None:
    if x == ONE:
        return 1
    if x == -ONE:
        return 2
    if x in (I, -I):
        return 4
    return None


def int_pow(x: GaussianRational, k: int) -> GaussianRational:
    return x ** k


def power_product(bases, exponents) -> GaussianRational:
    """Exact product of bases[i] ** exponents[i]; lengths must match."""
    if len(bases) != len(exponents):
        raise ValueError("bases and exponents differ in length")
    acc = ONE
    for b, e in zip(bases, exponents):
        if e:
            acc = acc * (b ** e)
    return acc


# -- exact k-th roots -----------------------------------------------------


def _gi_pow(z: tuple[int, int], k: int) -> tuple[int, int]:
    a, b = 1, 0
    x, y = z
    while k:
        if k & 1:
            a, b = a * x - b * y, a * y + b * x
        x, y = x * x - y * y, 2 * x * y
        k >>= 1
    return a, b


def _gaussian_integer_kth_roots(g: tuple[int, int], k: int):
    """All w in Z[i] with w**k == g, found numerically and verified exactly."""
    gr, gi = g
    bits = max(abs(gr).bit_length(), abs(gi).bit_length(), 1)
    roots = []
    with mpmath.workprec(bits + 64):
        z = mpmath.mpc(gr, gi)
        for branch in range(k):
            r = mpmath.root(z, k, branch)
            cand = (int(mpmath.nint(r.real)), int(mpmath.nint(r.imag)))
            if cand not in roots and _gi_pow(cand, k) == g:
                roots.append(cand)
    return roots


def kth_root(z: GaussianRational, k: int) -> GaussianRational | None:
    """One exact k-th root of z in Q(i), or None when no such root exists.

    Any w in Q(i) with w**k = z satisfies (c*w)**k = c**k * z in Z[i] for a
    common denominator c, and c*w is then an algebraic integer of Q(i), hence
    a Gaussian integer.  So it suffices to root-search in Z[i] and verify
    candidates exactly.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not z:
        return ZERO
    if k == 1:
        return z
    c = z.re.denominator * z.im.denominator // _gcd(z.re.denominator, z.im.denominator)
    scaled = z * (Fraction(c) ** k)
    g = (int(scaled.re), int(scaled.im))
    roots = _gaussian_integer_kth_roots(g, k)
    if not roots:
        return None
    w = min(roots)  # deterministic pick
    return GaussianRational(Fraction(w[0], c), Fraction(w[1], c))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
