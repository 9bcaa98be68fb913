"""Exact arithmetic in Q(zeta_8) and bihomogeneous polynomial algebra on P^1 x P^1.

Elements of the cyclotomic field are written c0 + c1*z + c2*z^2 + c3*z^3 where
z is a primitive eighth root of unity, so z^4 = -1, z^2 = i and z is a square
root of i.  All coefficients are ``fractions.Fraction``; nothing in this module
ever touches floating point.

The polynomial layer (``CycPoly``, ``RatFunc``) is univariate over the field
and exists to support elimination in one parameter.  ``BiForm`` models
bihomogeneous forms in ([z0:z1],[w0:w1]); its evaluation and substitution
methods are duck-typed so they work verbatim over ``CycNumber``, ``CycPoly``
or ``RatFunc`` entries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

__all__ = [
    "CycNumber",
    "CycPoly",
    "RatFunc",
    "BiForm",
    "PointPP",
    "resultant",
    "cyc_matrix_det",
]

_ZERO4 = (Fraction(0),) * 4


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot coerce {v!r} to an exact rational")


class CycNumber:
    """An element c0 + c1*z + c2*z^2 + c3*z^3 of Q(zeta_8), with z^4 = -1."""

    __slots__ = ("coeffs",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.coeffs: Tuple[Fraction, ...] = (
            _as_fraction(c0),
            _as_fraction(c1),
            _as_fraction(c2),
            _as_fraction(c3),
        )

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "CycNumber":
        return CycNumber()

    @staticmethod
    def one() -> "CycNumber":
        return CycNumber(1)

    @staticmethod
    def zeta() -> "CycNumber":
        """The generator z itself (a square root of i)."""
        return CycNumber(0, 1)

    @staticmethod
    def i() -> "CycNumber":
        """The imaginary unit, realized as z^2."""
        return CycNumber(0, 0, 1)

    @staticmethod
    def rational(v) -> "CycNumber":
        return CycNumber(_as_fraction(v))

    @staticmethod
    def coerce(v) -> "CycNumber":
        if isinstance(v, CycNumber):
            return v
        return CycNumber.rational(v)

    # -- ring structure ----------------------------------------------
    def __add__(self, other):
        other = CycNumber.coerce(other)
        a, b = self.coeffs, other.coeffs
        return CycNumber(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])

    __radd__ = __add__

    def __neg__(self):
        a = self.coeffs
        return CycNumber(-a[0], -a[1], -a[2], -a[3])

    def __sub__(self, other):
        return self + (-CycNumber.coerce(other))

    def __rsub__(self, other):
        return CycNumber.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            a = self.coeffs
            return CycNumber(a[0] * f, a[1] * f, a[2] * f, a[3] * f)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        # convolution reduced by z^4 = -1
        c = [Fraction(0)] * 4
        for i in range(4):
            ai = a[i]
            if not ai:
                continue
            for j in range(4):
                bj = b[j]
                if not bj:
                    continue
                k = i + j
                if k < 4:
                    c[k] += ai * bj
                else:
                    c[k - 4] -= ai * bj
        return CycNumber(*c)

    __rmul__ = __mul__

    def conjugates(self) -> List["CycNumber"]:
        """Images under the Galois group z -> z^k, k in {1,3,5,7}."""
        out = []
        for k in (1, 3, 5, 7):
            c = [Fraction(0)] * 4
            for j, cj in enumerate(self.coeffs):
                if not cj:
                    continue
                e = (j * k) % 8
                if e < 4:
                    c[e] += cj
                else:
                    c[e - 4] -= cj
            out.append(CycNumber(*c))
        return out

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_8)")
        conj = self.conjugates()
        num = conj[1] * conj[2] * conj[3]
        norm = self * num  # the field norm, a rational
        n = norm.coeffs
        assert n[1] == 0 and n[2] == 0 and n[3] == 0
        return num * (Fraction(1) / n[0])

    def __truediv__(self, other):
        other = CycNumber.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycNumber.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates / hashing -----------------------------------------
    def is_zero(self) -> bool:
        return self.coeffs == _ZERO4

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def in_gaussian_field(self) -> bool:
        """Whether the element lies in the subfield Q(i) = Q(z^2)."""
        return self.coeffs[1] == 0 and self.coeffs[3] == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.rational(other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    # -- text form -----------------------------------------------------
    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                mon = "z" if j == 1 else f"z^{j}"
                terms.append(mon if c == 1 else f"{c}*{mon}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"CycNumber({self})"

    @staticmethod
    def parse(text: str) -> "CycNumber":
        """Parse the textual form ``c0 + c1*z + c2*z^2 + c3*z^3``.

        Zero terms may be omitted, ``-`` joins are accepted, exponents may be
        written ``z^2`` or ``z**2`` and a bare ``i`` means ``z^2``.
        """
        s = text.replace("**", "^").replace(" ", "")
        s = s.replace("-", "+-")
        parts = [p for p in s.split("+") if p]
        coeffs = [Fraction(0)] * 4
        term_re = re.compile(r"^(-?)(\d+(?:/\d+)?)?(?:\*?(z|i)(?:\^(\d+))?)?$")
        for part in parts:
            m = term_re.match(part)
            if not m or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse field element term {part!r}")
            sign = -1 if m.group(1) else 1
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(3) is None:
                exp = 0
            elif m.group(3) == "i":
                exp = 2 * (int(m.group(4)) if m.group(4) else 1)
            else:
                exp = int(m.group(4)) if m.group(4) else 1
            e = exp % 8
            if e < 4:
                coeffs[e] += sign * coef
            else:
                coeffs[e - 4] -= sign * coef
        return CycNumber(*coeffs)


def cyc_matrix_det(rows: Sequence[Sequence[CycNumber]]) -> CycNumber:
    """Determinant of a square matrix over Q(zeta_8) by Gaussian elimination."""
    n = len(rows)
    m = [[CycNumber.coerce(v) for v in row] for row in rows]
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    det = CycNumber.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return CycNumber.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


class CycPoly:
    """Dense univariate polynomial over Q(zeta_8), trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [CycNumber.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: Tuple[CycNumber, ...] = tuple(cs)

    # -- constructors --------------------------------------------------
    @staticmethod
    def zero() -> "CycPoly":
        return CycPoly(())

    @staticmethod
    def one() -> "CycPoly":
        return CycPoly((CycNumber.one(),))

    @staticmethod
    def x() -> "CycPoly":
        return CycPoly((CycNumber.zero(), CycNumber.one()))

    @staticmethod
    def constant(c) -> "CycPoly":
        return CycPoly((CycNumber.coerce(c),))

    @staticmethod
    def monomial(c, n: int) -> "CycPoly":
        return CycPoly([CycNumber.zero()] * n + [CycNumber.coerce(c)])

    @staticmethod
    def coerce(v) -> "CycPoly":
        if isinstance(v, CycPoly):
            return v
        return CycPoly.constant(v)

    # -- basic structure -----------------------------------------------
    def degree(self) -> int:
        """Degree, with the zero polynomial assigned -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> CycNumber:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, CycPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = CycPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return CycPoly(
            [
                (a[k] if k < len(a) else CycNumber.zero())
                + (b[k] if k < len(b) else CycNumber.zero())
                for k in range(n)
            ]
        )

    __radd__ = __add__

    def __neg__(self):
        return CycPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-CycPoly.coerce(other))

    def __rsub__(self, other):
        return CycPoly.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            c = CycNumber.coerce(other)
            return CycPoly([a * c for a in self.coeffs])
        if not isinstance(other, CycPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return CycPoly.zero()
        out = [CycNumber.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return CycPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = CycPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "CycPoly") -> Tuple["CycPoly", "CycPoly"]:
        other = CycPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [CycNumber.zero()] * max(0, len(rem) - len(other.coeffs) + 1)
        inv_lead = other.leading().inverse()
        d = other.degree()
        for k in range(len(rem) - 1, d - 1, -1):
            if rem[k].is_zero():
                continue
            factor = rem[k] * inv_lead
            q[k - d] = factor
            for j, c in enumerate(other.coeffs):
                rem[k - d + j] = rem[k - d + j] - factor * c
        return CycPoly(q), CycPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(CycPoly.coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(CycPoly.coerce(other))[1]

    def exact_div(self, other: "CycPoly") -> "CycPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("exact_div: division is not exact")
        return q

    def monic(self) -> "CycPoly":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return self * inv

    def derivative(self) -> "CycPoly":
        return CycPoly([self.coeffs[k] * k for k in range(1, len(self.coeffs))])

    def evaluate(self, v):
        """Horner evaluation; works for any ring element with + and *."""
        if self.is_zero():
            return CycNumber.zero() if isinstance(v, CycNumber) else v * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * v + c
        return acc

    def substitute_scaled(self, c: CycNumber) -> "CycPoly":
        """The polynomial p(c*x)."""
        out, power = [], CycNumber.one()
        for a in self.coeffs:
            out.append(a * power)
            power = power * c
        return CycPoly(out)

    def gcd(self, other: "CycPoly") -> "CycPoly":
        """Monic greatest common divisor (Euclid over the field)."""
        a, b = self, CycPoly.coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def canonical_integral(self) -> "CycPoly":
        """Deterministic content-free form over the integers of the field.

        Denominators are cleared, the integer content is divided out, and of
        the eight associates obtained by scaling with the torsion units
        +/- z^k the one with the lexicographically smallest flattened
        coefficient tuple (constant term first) is returned.
        """
        if self.is_zero():
            return self
        from math import gcd as igcd, lcm as ilcm

        den = 1
        for c in self.coeffs:
            for f in c.coeffs:
                den = ilcm(den, f.denominator)
        scaled = self * Fraction(den)
        num = 0
        for c in scaled.coeffs:
            for f in c.coeffs:
                num = igcd(num, f.numerator)
        if num:
            scaled = scaled * Fraction(1, num)
        unit = CycNumber.zeta()
        best = None
        cand = scaled
        for _ in range(8):
            key = tuple(f for c in cand.coeffs for f in c.coeffs)
            if best is None or key < best[0]:
                best = (key, cand)
            cand = cand * unit
        return best[1]

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in reversed(range(len(self.coeffs))):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            if k == 0:
                parts.append(f"({c})")
            elif k == 1:
                parts.append(f"({c})*x")
            else:
                parts.append(f"({c})*x^{k}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CycPoly[{self}]"


def resultant(p: CycPoly, q: CycPoly) -> CycNumber:
    """Sylvester resultant of two polynomials over Q(zeta_8).

    Zero exactly when the polynomials share a root over the algebraic
    closure.  Degenerate inputs follow the usual conventions: the resultant
    with a zero polynomial is zero, and with a nonzero constant c it is
    c ** deg(other).
    """
    p, q = CycPoly.coerce(p), CycPoly.coerce(q)
    if p.is_zero() or q.is_zero():
        return CycNumber.zero()
    dp, dq = p.degree(), q.degree()
    if dp == 0:
        return p.coeffs[0] ** dq
    if dq == 0:
        return q.coeffs[0] ** dp
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    zero = CycNumber.zero()
    for sh in range(dq):
        rows.append([zero] * sh + pc + [zero] * (dq - 1 - sh))
    for sh in range(dp):
        rows.append([zero] * sh + qc + [zero] * (dp - 1 - sh))
    return cyc_matrix_det(rows)


class RatFunc:
    """A reduced rational function num/den in one variable over Q(zeta_8)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = CycPoly.coerce(num)
        den = CycPoly.one() if den is None else CycPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = CycPoly.zero(), CycPoly.one()
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lead_inv = den.leading().inverse()
            num, den = num * lead_inv, den * lead_inv
        self.num, self.den = num, den

    @staticmethod
    def coerce(v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        return RatFunc(CycPoly.coerce(v))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = RatFunc.coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber, CycPoly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc.one() / self) ** (-n)
        out, base = RatFunc.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(CycPoly.one())

    def evaluate(self, v: CycNumber) -> CycNumber:
        den = self.den.evaluate(v)
        if CycNumber.coerce(den).is_zero():
            raise ZeroDivisionError("rational function has a pole at this value")
        return self.num.evaluate(v) / den

    def __str__(self):
        if self.den == CycPoly.one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFunc[{self}]"


@dataclass(frozen=True)
class PointPP:
    """A point of P^1 x P^1 with coordinates in Q(zeta_8).

    Equality is projective: each coordinate pair may be rescaled by any
    nonzero field element.
    """

    z: Tuple[CycNumber, CycNumber]
    w: Tuple[CycNumber, CycNumber]

    def __post_init__(self):
        z = tuple(CycNumber.coerce(c) for c in self.z)
        w = tuple(CycNumber.coerce(c) for c in self.w)
        if z[0].is_zero() and z[1].is_zero():
            raise ValueError("first coordinate pair is (0, 0)")
        if w[0].is_zero() and w[1].is_zero():
            raise ValueError("second coordinate pair is (0, 0)")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    def same_point(self, other: "PointPP") -> bool:
        cross_z = self.z[0] * other.z[1] - self.z[1] * other.z[0]
        cross_w = self.w[0] * other.w[1] - self.w[1] * other.w[0]
        return cross_z.is_zero() and cross_w.is_zero()

    def coords(self) -> Tuple[CycNumber, CycNumber, CycNumber, CycNumber]:
        return (*self.z, *self.w)

    @staticmethod
    def diagonal(x: CycNumber) -> "PointPP":
        """The point ([1:x],[1:x])."""
        one = CycNumber.one()
        return PointPP((one, CycNumber.coerce(x)), (one, CycNumber.coerce(x)))

    def __str__(self):
        return f"([{self.z[0]}:{self.z[1]}],[{self.w[0]}:{self.w[1]}])"


class BiForm:
    """Bihomogeneous form of bidegree (p, q) in ([z0:z1],[w0:w1]).

    Monomials are keyed by (a, b) meaning z0^a z1^(p-a) w0^b w1^(q-b); zero
    coefficients are never stored.
    """

    __slots__ = ("bidegree", "coeffs")

    def __init__(self, bidegree: Tuple[int, int], coeffs: Dict[Tuple[int, int], CycNumber]):
        p, q = bidegree
        if p < 0 or q < 0:
            raise ValueError("bidegree must be non-negative")
        clean: Dict[Tuple[int, int], CycNumber] = {}
        for (a, b), c in coeffs.items():
            if not (0 <= a <= p and 0 <= b <= q):
                raise ValueError(f"exponent {(a, b)} outside bidegree {(p, q)}")
            c = CycNumber.coerce(c)
            if not c.is_zero():
                clean[(a, b)] = c
        self.bidegree = (p, q)
        self.coeffs = clean

    @staticmethod
    def monomial(bidegree: Tuple[int, int], a: int, b: int, c=1) -> "BiForm":
        return BiForm(bidegree, {(a, b): CycNumber.coerce(c)})

    @staticmethod
    def zero(bidegree: Tuple[int, int]) -> "BiForm":
        return BiForm(bidegree, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, BiForm):
            return NotImplemented
        return self.bidegree == other.bidegree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.bidegree, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    def __add__(self, other):
        if not isinstance(other, BiForm) or other.bidegree != self.bidegree:
            raise ValueError("can only add forms of equal bidegree")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, CycNumber.zero()) + c
        return BiForm(self.bidegree, out)

    def __neg__(self):
        return BiForm(self.bidegree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BiForm":
        c = CycNumber.coerce(c)
        return BiForm(self.bidegree, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            return self.scale(other)
        if not isinstance(other, BiForm):
            return NotImplemented
        p = (self.bidegree[0] + other.bidegree[0], self.bidegree[1] + other.bidegree[1])
        out: Dict[Tuple[int, int], CycNumber] = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                k = (a1 + a2, b1 + b2)
                acc = out.get(k, CycNumber.zero()) + c1 * c2
                out[k] = acc
        return BiForm(p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a form")
        out = BiForm((0, 0), {(0, 0): CycNumber.one()})
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, point):
        """Evaluate at a point; the four coordinates may live in any ring.

        Accepts a ``PointPP`` or a 4-tuple (z0, z1, w0, w1) whose entries
        support + and * (``CycNumber``, ``CycPoly``, ``RatFunc``).  Scaling a
        coordinate pair by t rescales the value by t to the matching degree,
        so zero-ness is projectively invariant.
        """
        if isinstance(point, PointPP):
            z0, z1, w0, w1 = point.coords()
        else:
            z0, z1, w0, w1 = point
        p, q = self.bidegree
        zero = (z0 - z0)
        acc = zero
        zpow = {}
        for a in {a for a, _ in self.coeffs}:
            zpow[a] = _pow(z0, a) * _pow(z1, p - a)
        wpow = {}
        for b in {b for _, b in self.coeffs}:
            wpow[b] = _pow(w0, b) * _pow(w1, q - b)
        for (a, b), c in sorted(self.coeffs.items()):
            acc = acc + zpow[a] * wpow[b] * c
        return acc

    def partials(self) -> Tuple["BiForm", "BiForm", "BiForm", "BiForm"]:
        """Formal partial derivatives (d/dz0, d/dz1, d/dw0, d/dw1)."""
        p, q = self.bidegree
        dz0: Dict[Tuple[int, int], CycNumber] = {}
        dz1: Dict[Tuple[int, int], CycNumber] = {}
        dw0: Dict[Tuple[int, int], CycNumber] = {}
        dw1: Dict[Tuple[int, int], CycNumber] = {}
        for (a, b), c in self.coeffs.items():
            if a > 0:
                dz0[(a - 1, b)] = dz0.get((a - 1, b), CycNumber.zero()) + c * a
            if p - a > 0:
                dz1[(a, b)] = dz1.get((a, b), CycNumber.zero()) + c * (p - a)
            if b > 0:
                dw0[(a, b - 1)] = dw0.get((a, b - 1), CycNumber.zero()) + c * b
            if q - b > 0:
                dw1[(a, b)] = dw1.get((a, b), CycNumber.zero()) + c * (q - b)
        return (
            BiForm((max(p - 1, 0), q), dz0),
            BiForm((max(p - 1, 0), q), dz1),
            BiForm((p, max(q - 1, 0)), dw0),
            BiForm((p, max(q - 1, 0)), dw1),
        )

    def second_partial(self, v1: int, v2: int) -> "BiForm":
        """Second formal derivative; variables indexed z0=0, z1=1, w0=2, w1=3."""
        return self.partials()[v1].partials()[v2]

    def to_json_dict(self) -> dict:
        return {
            "bidegree": list(self.bidegree),
            "coeffs": {f"{a},{b}": str(c) for (a, b), c in sorted(self.coeffs.items())},
        }

    @staticmethod
    def from_json_dict(d: dict) -> "BiForm":
        bidegree = tuple(d["bidegree"])
        coeffs = {}
        for key, text in d["coeffs"].items():
            a, b = (int(t) for t in key.split(","))
            coeffs[(a, b)] = CycNumber.parse(text)
        return BiForm(bidegree, coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        p, q = self.bidegree
        parts = []
        for (a, b), c in sorted(self.coeffs.items(), key=lambda kv: (-kv[0][0], -kv[0][1])):
            mon = []
            if a:
                mon.append(f"z0^{a}" if a > 1 else "z0")
            if p - a:
                mon.append(f"z1^{p - a}" if p - a > 1 else "z1")
            if b:
                mon.append(f"w0^{b}" if b > 1 else "w0")
            if q - b:
                mon.append(f"w1^{q - b}" if q - b > 1 else "w1")
            m = "*".join(mon) if mon else "1"
            parts.append(m if c == CycNumber.one() else f"({c})*{m}")
        return " + ".join(parts)

    def __repr__(self):
        return f"BiForm({self.bidegree}; {self})"


def _pow(v, n: int):
    out = None
    for _ in range(n):
        out = v if out is None else out * v
    if out is None:
        # multiplicative identity of the ambient ring, derived from v
        return v * 0 + 1
    return out
