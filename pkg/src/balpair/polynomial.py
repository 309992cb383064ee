"""Exact univariate polynomial arithmetic over the rationals.

Coefficients are stored densely, lowest degree first, normalized so the
leading coefficient is nonzero (the zero polynomial has no coefficients).
Everything here is exact: Fraction coefficients, Sturm-based root counting,
and factorization into irreducibles by squarefree splitting, rational-root
deflation and Kronecker interpolation for what remains.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import DegreeCapExceeded, InternalInvariantError

# Residual factor candidates above this degree are refused (desk-scale alphabets).
FACTOR_DEGREE_CAP = 8


class RatPoly:
    """Immutable polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    # -- basic structure -------------------------------------------------

    @staticmethod
    def zero():
        return RatPoly(())

    @staticmethod
    def one():
        return RatPoly((1,))

    @staticmethod
    def x():
        return RatPoly((0, 1))

    @staticmethod
    def constant(c):
        return RatPoly((Fraction(c),))

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Degree, with the convention deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                var = "x" if k == 1 else f"x^{k}"
                sign = "-" if c < 0 else "+"
                parts.append(f"{sign} {mag}{var}" if parts else
                             (f"-{mag}{var}" if c < 0 else f"{mag}{var}"))
        return " ".join(parts)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return RatPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = RatPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other):
        """Exact euclidean division; other must be nonzero."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d = other.degree
        lead = other.leading
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            q = rem[-1] / lead
            quo[k] = q
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= q * c
            while rem and rem[-1] == 0:
                rem.pop()
        return RatPoly(quo), RatPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other):
        return (other % self).is_zero

    def monic(self):
        if self.is_zero:
            return self
        lead = self.leading
        return RatPoly([c / lead for c in self.coeffs])

    def derivative(self):
        return RatPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation at a Fraction (or int)."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, lo, hi):
        """Interval extension of Horner: encloses {p(t) : lo <= t <= hi}."""
        alo, ahi = Fraction(0), Fraction(0)
        for c in reversed(self.coeffs):
            cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
            alo, ahi = min(cands) + c, max(cands) + c
        return alo, ahi

    def reciprocal(self):
        """x^deg * p(1/x); reverses the coefficient list."""
        return RatPoly(tuple(reversed(self.coeffs)))

    def compose_shift(self, k):
        """p(x + k) for integer k (used for root bounds)."""
        result = RatPoly.zero()
        shift = RatPoly((k, 1))
        for c in reversed(self.coeffs):
            result = result * shift + RatPoly.constant(c)
        return result

    # -- gcd / squarefree -------------------------------------------------

    def gcd(self, other):
        """Monic gcd by the euclidean algorithm."""
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic() if not a.is_zero else a

    def squarefree_part(self):
        if self.degree <= 0:
            return self.monic()
        return (self // self.gcd(self.derivative())).monic()

    def squarefree_decomposition(self):
        """Yun's algorithm: list of (squarefree factor, multiplicity), monic."""
        p = self.monic()
        if p.degree <= 0:
            return []
        out = []
        g = p.gcd(p.derivative())
        if g.degree == 0:
            return [(p, 1)]
        c = p // g
        d = p.derivative() // g - c.derivative()
        m = 1
        while c.degree > 0:
            f = c.gcd(d)
            if f.degree > 0:
                out.append((f, m))
            c2 = c // f
            d = d // f - c2.derivative()
            c = c2
            m += 1
        return out

    # -- integer form ------------------------------------------------------

    def primitive_integer_coeffs(self):
        """Scale to integer coefficients with content 1 and positive leading."""
        if self.is_zero:
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*(abs(v) for v in ints))
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return tuple(ints)

    # -- real root machinery ----------------------------------------------

    def sturm_chain(self):
        chain = [self, self.derivative()]
        while not chain[-1].is_zero and chain[-1].degree > 0:
            chain.append(-(chain[-2] % chain[-1]))
        if chain[-1].is_zero:
            chain.pop()
        return chain

    @staticmethod
    def _sign_changes(chain, x):
        signs = []
        for p in chain:
            v = p.eval(x)
            if v != 0:
                signs.append(1 if v > 0 else -1)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count_roots(self, lo, hi, chain=None):
        """Number of distinct real roots in the half-open interval (lo, hi]."""
        if chain is None:
            chain = self.sturm_chain()
        return (RatPoly._sign_changes(chain, lo)
                - RatPoly._sign_changes(chain, hi))

    def count_real_roots(self, chain=None):
        b = self.cauchy_bound()
        return self.count_roots(-b, b, chain)

    def cauchy_bound(self):
        """Rational B with every complex root of modulus < B."""
        if self.degree < 1:
            return Fraction(1)
        lead = abs(self.leading)
        m = max((abs(c) for c in self.coeffs[:-1]), default=Fraction(0))
        return Fraction(1) + m / lead

    def largest_real_root_interval(self):
        """Isolating interval (lo, hi] for the largest real root, or None.

        Sturm count over the returned interval is exactly 1 and the endpoints
        are not roots.
        """
        chain = self.sturm_chain()
        bound = self.cauchy_bound()
        lo, hi = -bound, bound
        if self.count_roots(lo, hi, chain) == 0:
            return None
        while self.count_roots(lo, hi, chain) > 1:
            mid = (lo + hi) / 2
            while self.eval(mid) == 0:
                mid = (mid + hi) / 2  # endpoints must not be roots
            if self.count_roots(mid, hi, chain) >= 1:
                lo = mid
            else:
                hi = mid
        return lo, hi

    def refine_root_interval(self, lo, hi):
        """One bisection step of a sign-change bracket around a simple root."""
        flo = self.eval(lo)
        mid = (lo + hi) / 2
        fmid = self.eval(mid)
        if fmid == 0:
            # rational root hit exactly; shrink symmetrically around it
            eps = (hi - lo) / 4
            return mid - eps, mid + eps
        if (flo > 0) != (fmid > 0):
            return lo, mid
        return mid, hi


# -- factorization ---------------------------------------------------------


def _integer_divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _rational_roots(ints):
    """All rational roots of an integer-coefficient polynomial (low-first)."""
    roots = []
    if not ints:
        return roots
    lead = ints[-1]
    const = next(c for c in ints if c != 0)
    p = RatPoly(ints)
    seen = set()
    for num in _integer_divisors(const):
        for den in _integer_divisors(lead):
            for r in (Fraction(num, den), Fraction(-num, den)):
                if r in seen:
                    continue
                seen.add(r)
                if p.eval(r) == 0:
                    roots.append(r)
    return roots


def _kronecker_factor(p):
    """Find one nontrivial monic factor of a primitive integer polynomial.

    Returns None when p is irreducible. Assumes no rational roots remain, so
    only factor degrees 2..deg//2 are searched, by interpolating through
    divisor combinations of sample values.
    """
    ints = p.primitive_integer_coeffs()
    ip = RatPoly(ints)
    deg = ip.degree
    for d in range(2, deg // 2 + 1):
        # sample points 0, 1, -1, 2, -2, ...
        points = [0]
        k = 1
        while len(points) < d + 1:
            points.extend((k, -k))
            k += 1
        points = points[: d + 1]
        values = [int(ip.eval(x)) for x in points]
        if any(v == 0 for v in values):
            # integer roots are deflated before we get here
            raise InternalInvariantError(
                "Kronecker sampling hit a root; rational roots not deflated")
        div_lists = []
        for v in values:
            ds = _integer_divisors(v)
            div_lists.append([x for d0 in ds for x in (d0, -d0)])
        for combo in itertools.product(*div_lists):
            cand = _lagrange_integer(points, combo, d)
            if cand is None:
                continue
            if cand.degree != d:
                continue
            if cand.divides(ip):
                return cand.monic()
    return None


def _lagrange_integer(points, values, degree):
    """Interpolating polynomial if it has integer coefficients, else None."""
    poly = RatPoly.zero()
    for i, (xi, yi) in enumerate(zip(points, values)):
        if yi == 0:
            continue
        term = RatPoly.constant(yi)
        for j, xj in enumerate(points):
            if i == j:
                continue
            term = term * RatPoly((-xj, 1)) * Fraction(1, xi - xj)
        poly = poly + term
    if poly.degree != degree:
        return None
    if any(c.denominator != 1 for c in poly.coeffs):
        return None
    return poly


def _factor_squarefree(p):
    """Irreducible monic factors of a squarefree monic polynomial."""
    factors = []
    work = p.monic()
    # strip powers of x
    while work.degree >= 1 and work.coeffs[0] == 0:
        factors.append(RatPoly.x())
        work = RatPoly(work.coeffs[1:])
    # deflate rational roots
    changed = True
    while changed and work.degree >= 1:
        changed = False
        for r in _rational_roots(work.primitive_integer_coeffs()):
            factors.append(RatPoly((-r, 1)))
            work = work // RatPoly((-r, 1))
            changed = True
            break
    # residual: Kronecker down to irreducibles
    stack = [work] if work.degree >= 1 else []
    while stack:
        q = stack.pop()
        if q.degree <= 3:
            # no rational roots left, so degree <= 3 is irreducible
            factors.append(q.monic())
            continue
        if q.degree > FACTOR_DEGREE_CAP:
            raise DegreeCapExceeded(
                f"cannot factor residual of degree {q.degree} "
                f"(cap {FACTOR_DEGREE_CAP})")
        g = _kronecker_factor(q)
        if g is None:
            factors.append(q.monic())
        else:
            stack.append(g)
            stack.append(q // g)
    return factors


def factor_poly(p):
    """Factor a nonzero RatPoly into monic irreducibles with multiplicities.

    Returns a list of (RatPoly, multiplicity) sorted by degree then by
    coefficients, so the output order is deterministic. Raises
    DegreeCapExceeded for residual candidates past the supported degree.
    """
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if p.degree == 0:
        return []
    counts = {}
    for sqf, mult in p.monic().squarefree_decomposition():
        for f in _factor_squarefree(sqf):
            counts[f] = counts.get(f, 0) + mult
    return sorted(counts.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))


# -- cyclotomic polynomials -------------------------------------------------


def _euler_phi(d):
    result = d
    n = d
    f = 2
    while f * f <= n:
        if n % f == 0:
            while n % f == 0:
                n //= f
            result -= result // f
        f += 1
    if n > 1:
        result -= result // n
    return result


def cyclotomics_up_to_degree(max_degree):
    """All cyclotomic polynomials of degree <= max_degree, as {order: RatPoly}.

    phi(d) >= sqrt(d/2), so orders up to 2*max_degree^2 suffice.
    """
    table = {}
    for d in range(1, 2 * max_degree * max_degree + 3):
        if _euler_phi(d) > max_degree:
            continue
        num = RatPoly([-1] + [0] * (d - 1) + [1])  # x^d - 1
        for e, q in table.items():
            if d % e == 0:
                num = num // q
        table[d] = num
    return table


def is_cyclotomic(p, table=None):
    """Order d with p == Phi_d, or None. p should be monic irreducible."""
    if table is None:
        table = cyclotomics_up_to_degree(max(p.degree, 1))
    for d, q in table.items():
        if q == p:
            return d
    return None
