"""Exact arithmetic in Q(lambda) for a distinguished real algebraic lambda.

A NumberField carries a monic irreducible minimal polynomial together with a
rational isolating interval that brackets exactly one real root (checked with
a Sturm count at construction). FieldScalar elements are residues mod the
minimal polynomial; equality and zero tests are exact coefficient tests,
while signs and comparisons refine the isolating interval until the interval
evaluation of the element excludes zero. Nonzero elements always resolve, so
the refinement loop terminates; an escape hatch caps the work anyway.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalInvariantError
from .polynomial import RatPoly

# Hard ceiling on interval width during sign refinement, as a power of two.
# Nonzero field elements separate from zero far earlier at desk scale.
MAX_REFINE_BITS = 100_000


class NumberField:
    """Q(lambda) for the single real root of min_poly inside the interval."""

    def __init__(self, min_poly: RatPoly, lo, hi, approx_digits: int = 12):
        if min_poly.is_zero or min_poly.degree < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        self.min_poly = min_poly.monic()
        self.degree = self.min_poly.degree
        lo, hi = Fraction(lo), Fraction(hi)
        if self.degree == 1:
            root = -self.min_poly.coeffs[0]
            lo = hi = root
        else:
            if not lo < hi:
                raise ValueError("empty isolating interval")
            if self.min_poly.count_roots(lo, hi) != 1:
                raise ValueError("interval does not isolate exactly one root")
        self._lo = lo
        self._hi = hi
        self.approx_digits = approx_digits

    # -- interval refinement -------------------------------------------------

    @property
    def interval(self):
        return self._lo, self._hi

    def refine_once(self):
        self._lo, self._hi = self.min_poly.refine_root_interval(self._lo, self._hi)

    _refine_once = refine_once  # internal alias

    def refine_below(self, width):
        """Shrink the cached isolating interval below the given width."""
        width = Fraction(width)
        while self._hi - self._lo > width:
            self._refine_once()

    def enclose(self, coeffs):
        """Rational interval containing sum(coeffs[j] * lambda^j)."""
        if self.degree == 1:
            v = RatPoly(coeffs).eval(self._lo)
            return v, v
        return RatPoly(coeffs).eval_interval(self._lo, self._hi)

    def sign_of(self, coeffs):
        """Exact sign of the element with the given residue coefficients."""
        if all(c == 0 for c in coeffs):
            return 0
        for _ in range(MAX_REFINE_BITS):
            lo, hi = self.enclose(coeffs)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self._refine_once()
        raise InternalInvariantError(
            "sign refinement exhausted on a nonzero element")

    def _pinned_floor(self, coeffs, scale):
        """floor(value * scale), exact; refines until the floor is pinned.

        Independent of the current refinement state, so rendering is
        deterministic across calls.
        """
        while True:
            lo, hi = self.enclose(coeffs)
            flo = (lo * scale).numerator // (lo * scale).denominator
            fhi = (hi * scale).numerator // (hi * scale).denominator
            if flo == fhi or lo == hi:
                return flo
            self.refine_once()

    def approx_str(self, coeffs=None, digits=None):
        """Truncated decimal string of lambda (or of an element).

        Truncation (not rounding) of a pinned enclosure keeps the string a
        pure function of the value.
        """
        digits = digits if digits is not None else self.approx_digits
        coeffs = coeffs if coeffs is not None else (0, 1)
        scaled = self._pinned_floor(coeffs, 10**digits)
        return _format_scaled_decimal(scaled, digits)

    def canonical_interval(self, bits=48):
        """Dyadic bracket [m, m+1] / 2^bits around the root; deterministic."""
        if self.degree == 1:
            return self._lo, self._hi
        m = self._pinned_floor((0, 1), 1 << bits)
        return Fraction(m, 1 << bits), Fraction(m + 1, 1 << bits)

    # -- element constructors -------------------------------------------------

    def element(self, coeffs):
        return FieldScalar(self, coeffs)

    def from_rational(self, q):
        return FieldScalar(self, (Fraction(q),))

    def zero(self):
        return self.from_rational(0)

    def one(self):
        return self.from_rational(1)

    def generator(self):
        """lambda itself as a field element."""
        if self.degree == 1:
            return self.from_rational(self._lo)
        return FieldScalar(self, (0, 1))

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.min_poly == other.min_poly
                and self._lo <= other._hi and other._lo <= self._hi)

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return (f"NumberField(min_poly={self.min_poly}, "
                f"interval=({self._lo}, {self._hi}))")


def _format_scaled_decimal(scaled: int, digits: int) -> str:
    """Render floor(value * 10^digits) as a truncated decimal string."""
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}" if digits else f"{sign}{text}"


def _format_decimal(value: Fraction, digits: int) -> str:
    """Truncated decimal of an exact rational."""
    scaled = (value * 10**digits).numerator // (value * 10**digits).denominator
    return _format_scaled_decimal(scaled, digits)


class FieldScalar:
    """Element of a NumberField: a residue class mod the minimal polynomial."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        poly = coeffs if isinstance(coeffs, RatPoly) else RatPoly(coeffs)
        if poly.degree >= field.degree:
            poly = poly % field.min_poly
        cs = list(poly.coeffs) + [Fraction(0)] * (field.degree - len(poly.coeffs))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("FieldScalar is immutable")

    # -- structure -------------------------------------------------------

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational:
            raise ValueError("element is irrational")
        return self.coeffs[0]

    def _coerce(self, other):
        if isinstance(other, FieldScalar):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("operands live in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldScalar(self.field,
                           [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldScalar(self.field,
                           RatPoly(self.coeffs) * RatPoly(other.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse by the extended euclidean algorithm."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero field element")
        # gcd(a, min_poly) == 1 since min_poly is irreducible and deg a < deg
        r0, r1 = self.field.min_poly, RatPoly(self.coeffs)
        t0, t1 = RatPoly.zero(), RatPoly.one()
        while not r1.is_zero:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            t0, t1 = t1, t0 - q * t1
        if r0.degree != 0:
            raise InternalInvariantError("minimal polynomial is not irreducible")
        return FieldScalar(self.field, t0 * (Fraction(1) / r0.coeffs[0]))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons ---------------------------------------------------------

    def sign(self):
        return self.field.sign_of(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            if other.field is not self.field and other.field != self.field:
                return False
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def _cmp_sign(self, other):
        diff = self - other
        return diff.sign()

    def __lt__(self, other):
        return self._cmp_sign(other) < 0

    def __le__(self, other):
        return self._cmp_sign(other) <= 0

    def __gt__(self, other):
        return self._cmp_sign(other) > 0

    def __ge__(self, other):
        return self._cmp_sign(other) >= 0

    def decimal(self, digits=None):
        return self.field.approx_str(self.coeffs, digits)

    def __repr__(self):
        if self.is_rational:
            return f"FieldScalar({self.coeffs[0]})"
        return f"FieldScalar({list(self.coeffs)} ~ {self.decimal(6)})"
