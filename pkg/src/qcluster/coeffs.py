"""Exact coefficient rings in a formal root of q.

Two rings are provided:

* :class:`QCoeff` -- Gaussian-integer Laurent polynomials in v = q^(1/D).
  The distinguished unit (-q)^(1/2) is represented as i*v when D is even.
* :class:`QFrac`  -- reduced fractions of integer Laurent polynomials in v,
  with positive-leading-coefficient denominators (canonical form, so equality
  is plain comparison).

Exponents are stored as integers counting powers of v = q^(1/D); an exponent
``e`` means q^(e/D).  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


class ExponentError(ValueError):
    """A q-exponent is not representable at the ambient denominator D."""


# ---------------------------------------------------------------------------
# helpers on Gaussian integers represented as (re, im) pairs


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


class QCoeff:
    """Gaussian-integer Laurent polynomial in v = q^(1/D).

    ``terms`` maps integer exponents (units of q^(1/D)) to Gaussian integers
    (re, im); zero coefficients are never stored, so two values are equal iff
    their term dictionaries and denominators agree (after normalization).
    """

    __slots__ = ("terms", "den")

    def __init__(self, terms=None, den: int = 2):
        if den <= 0:
            raise ValueError("denominator D must be positive")
        clean = {}
        if terms:
            for e, c in terms.items():
                if isinstance(c, int):
                    c = (c, 0)
                if c != (0, 0):
                    clean[e] = c
        self.terms = clean
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, den: int = 2) -> "QCoeff":
        return cls({}, den)

    @classmethod
    def one(cls, den: int = 2) -> "QCoeff":
        return cls({0: (1, 0)}, den)

    @classmethod
    def integer(cls, n: int, den: int = 2) -> "QCoeff":
        return cls({0: (n, 0)}, den)

    @classmethod
    def gauss(cls, re: int, im: int, den: int = 2) -> "QCoeff":
        return cls({0: (re, im)}, den)

    @classmethod
    def q_power(cls, power, den: int = 2) -> "QCoeff":
        """q^power for integral or fractional power representable at D."""
        p = Fraction(power) * den
        if p.denominator != 1:
            raise ExponentError(f"q^{power} not representable at D={den}")
        return cls({int(p): (1, 0)}, den)

    @classmethod
    def minus_q_power(cls, num: int, two_den: int = 1, den: int = 2) -> "QCoeff":
        """(-q)^(num/two_den) with two_den in {1, 2}; half powers need D even.

        Fixed convention: (-q)^(1/2) = i * q^(1/2).
        """
        if two_den == 1:
            sign = -1 if num % 2 else 1
            c = cls.q_power(num, den)
            return c if sign == 1 else -c
        if two_den != 2:
            raise ValueError("only integer and half powers are supported")
        if den % 2:
            raise ExponentError("(-q)^(1/2) needs an even denominator D")
        # (i v)^num with v = q^(1/2)
        k = num % 4
        unit = [(1, 0), (0, 1), (-1, 0), (0, -1)][k]
        e = Fraction(num, 2) * den
        return cls({int(e): unit}, den)

    # -- normalization -----------------------------------------------------

    def _common(self, other: "QCoeff"):
        if self.den == other.den:
            return self, other
        d = lcm(self.den, other.den)
        return self.rescale(d), other.rescale(d)

    def rescale(self, new_den: int) -> "QCoeff":
        if new_den == self.den:
            return self
        if new_den % self.den:
            raise ExponentError(f"cannot rescale D={self.den} to D={new_den}")
        f = new_den // self.den
        return QCoeff({e * f: c for e, c in self.terms.items()}, new_den)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QCoeff):
            return NotImplemented
        a, b = self._common(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = _gadd(terms.get(e, (0, 0)), c)
            if s == (0, 0):
                terms.pop(e, None)
            else:
                terms[e] = s
        return QCoeff(terms, a.den)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return QCoeff({e: (-c[0], -c[1]) for e, c in self.terms.items()}, self.den)

    def __mul__(self, other):
        if isinstance(other, int):
            other = QCoeff.integer(other, self.den)
        if not isinstance(other, QCoeff):
            return NotImplemented
        a, b = self._common(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = e1 + e2
                p = _gmul(c1, c2)
                s = _gadd(terms.get(e, (0, 0)), p)
                if s == (0, 0):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return QCoeff(terms, a.den)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QCoeff.one(self.den)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "QCoeff":
        """Inverse of a unit monomial c * v^e with c in {1,-1,i,-i}."""
        if len(self.terms) != 1:
            raise ZeroDivisionError("only unit monomials are invertible")
        (e, c), = self.terms.items()
        conj = (c[0], -c[1])
        norm = c[0] * c[0] + c[1] * c[1]
        if norm != 1:
            raise ZeroDivisionError("coefficient is not a Gaussian unit")
        return QCoeff({-e: conj}, self.den)

    # -- involutions ---------------------------------------------------------

    def star(self) -> "QCoeff":
        """The * involution on the base ring: q -> q^(-1), i fixed."""
        return QCoeff({-e: c for e, c in self.terms.items()}, self.den)

    bar = star

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {0: (1, 0)}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def has_nonneg_int_coeffs(self) -> bool:
        return all(c[1] == 0 and c[0] >= 0 for c in self.terms.values())

    def q_degrees(self):
        """(min, max) exponent as Fractions of q, or None for zero."""
        if not self.terms:
            return None
        return (Fraction(min(self.terms), self.den),
                Fraction(max(self.terms), self.den))

    def __eq__(self, other):
        if isinstance(other, int):
            other = QCoeff.integer(other, self.den)
        if not isinstance(other, QCoeff):
            return NotImplemented
        a, b = self._common(other)
        return a.terms == b.terms

    def __hash__(self):
        g = gcd(self.den, *(abs(e) for e in self.terms)) if self.terms else 1
        d = self.den // g
        return hash((d, tuple(sorted((e // g, c) for e, c in self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"QCoeff({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            re, im = self.terms[e]
            if im == 0:
                cs = str(re)
            elif re == 0:
                cs = f"{im}i"
            else:
                cs = f"({re}{im:+}i)"
            if e == 0:
                bits.append(cs)
            else:
                p = Fraction(e, self.den)
                qs = f"q^{p}" if p != 1 else "q"
                bits.append(qs if cs == "1" else f"{cs}*{qs}")
        return " + ".join(bits)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {"den": self.den,
                "terms": [[e, c[0], c[1]] for e, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, data) -> "QCoeff":
        return cls({e: (a, b) for e, a, b in data["terms"]}, data["den"])


# ---------------------------------------------------------------------------
# integer Laurent polynomial helpers (dict exponent -> int), used by QFrac


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pshift(a, k):
    return {e + k: c for e, c in a.items()}


def _content(a):
    return gcd(*(abs(c) for c in a.values())) if a else 0


def _to_poly(a):
    """Shift a Laurent dict to have min exponent 0; returns (poly, shift)."""
    if not a:
        return {}, 0
    m = min(a)
    return _pshift(a, -m), m


def _pdivmod(num, den):
    """Polynomial division over Q for dicts with min exponent 0."""
    num = {e: Fraction(c) for e, c in num.items()}
    dd = max(den)
    dl = Fraction(den[dd])
    quo = {}
    while num and max(num) >= dd:
        e = max(num)
        f = num[e] / dl
        quo[e - dd] = f
        for de, dc in den.items():
            s = num.get(e - dd + de, Fraction(0)) - f * dc
            if s:
                num[e - dd + de] = s
            else:
                num.pop(e - dd + de, None)
    return quo, num


def _pgcd(a, b):
    """GCD of integer polynomial dicts (min exponent 0), primitive over Z."""
    a = {e: Fraction(c) for e, c in a.items()}
    b = {e: Fraction(c) for e, c in b.items()}
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return {}
    den_l = lcm(*(c.denominator for c in a.values()))
    ints = {e: int(c * den_l) for e, c in a.items()}
    cont = _content(ints)
    out = {e: c // cont for e, c in ints.items()}
    if out[max(out)] < 0:
        out = _pneg(out)
    return out


def _pdiv_exact(num, den):
    """Exact division of integer Laurent dicts; raises if not divisible."""
    np_, ns = _to_poly(num)
    dp, ds = _to_poly(den)
    quo, rem = _pdivmod(np_, dp)
    if rem:
        raise ValueError("polynomial division is not exact")
    out = {}
    for e, c in quo.items():
        if c.denominator != 1:
            raise ValueError("polynomial division is not exact over Z")
        if c:
            out[e + ns - ds] = int(c)
    return out


class QFrac:
    """Reduced fraction of integer Laurent polynomials in v = q^(1/D).

    Canonical form: numerator and denominator are coprime, the denominator is
    a genuine polynomial with nonzero constant term and positive leading
    coefficient (monomial units are pushed into the numerator).
    """

    __slots__ = ("num", "denom", "den")

    def __init__(self, num=None, denom=None, den: int = 1, _reduced=False):
        if num is None:
            num = {}
        if denom is None:
            denom = {0: 1}
        if isinstance(num, int):
            num = {0: num} if num else {}
        if isinstance(denom, int):
            denom = {0: denom}
        num = {e: c for e, c in num.items() if c}
        denom = {e: c for e, c in denom.items() if c}
        if not denom:
            raise ZeroDivisionError("zero denominator")
        self.den = den
        if _reduced:
            self.num, self.denom = num, denom
            return
        self.num, self.denom = self._reduce(num, denom)

    @staticmethod
    def _reduce(num, denom):
        if not num:
            return {}, {0: 1}
        dp, dshift = _to_poly(denom)
        np_, nshift = _to_poly(num)
        g = _pgcd(np_, dp)
        if g and (len(g) > 1 or g.get(0) != 1):
            np_ = _pdiv_exact(np_, g)
            dp = _pdiv_exact(dp, g)
        c = gcd(_content(np_), _content(dp))
        if c > 1:
            np_ = {e: x // c for e, x in np_.items()}
            dp = {e: x // c for e, x in dp.items()}
        if dp[max(dp)] < 0:
            np_, dp = _pneg(np_), _pneg(dp)
        # push the denominator's monomial part into the numerator
        return _pshift(np_, nshift - dshift), dp

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, den: int = 1) -> "QFrac":
        return cls({}, {0: 1}, den, _reduced=True)

    @classmethod
    def one(cls, den: int = 1) -> "QFrac":
        return cls({0: 1}, {0: 1}, den, _reduced=True)

    @classmethod
    def integer(cls, n: int, den: int = 1) -> "QFrac":
        return cls({0: n} if n else {}, {0: 1}, den, _reduced=True)

    @classmethod
    def q_power(cls, power, den: int = 1) -> "QFrac":
        p = Fraction(power) * den
        if p.denominator != 1:
            raise ExponentError(f"q^{power} not representable at D={den}")
        return cls({int(p): 1}, {0: 1}, den, _reduced=True)

    @classmethod
    def from_qcoeff(cls, c: QCoeff) -> "QFrac":
        if any(im for _, im in c.terms.values()):
            raise ValueError("QCoeff has Gaussian part; not a rational of q")
        return cls({e: re for e, (re, _) in c.terms.items()}, {0: 1}, c.den)

    # -- arithmetic -----------------------------------------------------------

    def _common(self, other: "QFrac"):
        if self.den == other.den:
            return self, other
        d = lcm(self.den, other.den)
        return self.rescale(d), other.rescale(d)

    def rescale(self, new_den: int) -> "QFrac":
        if new_den == self.den:
            return self
        if new_den % self.den:
            raise ExponentError(f"cannot rescale D={self.den} to D={new_den}")
        f = new_den // self.den
        return QFrac({e * f: c for e, c in self.num.items()},
                     {e * f: c for e, c in self.denom.items()},
                     new_den, _reduced=True)

    def __add__(self, other):
        if isinstance(other, int):
            other = QFrac.integer(other, self.den)
        if not isinstance(other, QFrac):
            return NotImplemented
        a, b = self._common(other)
        num = _padd(_pmul(a.num, b.denom), _pmul(b.num, a.denom))
        return QFrac(num, _pmul(a.denom, b.denom), a.den)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QFrac(_pneg(self.num), self.denom, self.den, _reduced=True)

    def __mul__(self, other):
        if isinstance(other, int):
            other = QFrac.integer(other, self.den)
        if not isinstance(other, QFrac):
            return NotImplemented
        a, b = self._common(other)
        return QFrac(_pmul(a.num, b.num), _pmul(a.denom, b.denom), a.den)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, int):
            other = QFrac.integer(other, self.den)
        if not isinstance(other, QFrac):
            return NotImplemented
        return self * other.inverse()

    def inverse(self) -> "QFrac":
        if not self.num:
            raise ZeroDivisionError("inverting zero")
        return QFrac(self.denom, self.num, self.den)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QFrac.one(self.den)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def star(self) -> "QFrac":
        return QFrac({-e: c for e, c in self.num.items()},
                     {-e: c for e, c in self.denom.items()}, self.den)

    bar = star

    # -- queries and conversions ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == {0: 1} and self.denom == {0: 1}

    def is_polynomial(self) -> bool:
        return self.denom == {0: 1}

    def as_laurent(self):
        """Integer Laurent dict if the fraction is polynomial, else raises."""
        if not self.is_polynomial():
            raise ValueError("fraction has a nontrivial denominator")
        return dict(self.num)

    def series(self, order: int):
        """Truncated expansion in Z((q^(1/D))): dict exponent -> Fraction.

        Expands around q = 0 up to and including v-exponent ``order``.
        """
        if not self.num:
            return {}
        dp, ds = _to_poly(self.denom)
        c0 = dp[0]
        out = {}
        # invert dp as a power series with Fraction coefficients
        inv = {0: Fraction(1, c0)}
        top = order + max(0, -min(self.num)) + abs(ds) + max(dp) + 1
        for e in range(1, top + 1):
            s = Fraction(0)
            for de, dc in dp.items():
                if 0 < de <= e:
                    s += dc * inv.get(e - de, Fraction(0))
            inv[e] = -s / c0
        for e1, c1 in self.num.items():
            for e2, c2 in inv.items():
                e = e1 + e2 - ds
                if e <= order:
                    s = out.get(e, Fraction(0)) + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        out.pop(e, None)
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = QFrac.integer(other, self.den)
        if not isinstance(other, QFrac):
            return NotImplemented
        a, b = self._common(other)
        return a.num == b.num and a.denom == b.denom

    def __hash__(self):
        return hash((tuple(sorted(self.num.items())),
                     tuple(sorted(self.denom.items()))))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"QFrac({self})"

    def __str__(self):
        def fmt(p):
            if not p:
                return "0"
            bits = []
            for e in sorted(p):
                c = p[e]
                if e == 0:
                    bits.append(str(c))
                else:
                    power = Fraction(e, self.den)
                    qs = f"q^{power}" if power != 1 else "q"
                    bits.append(qs if c == 1 else f"{c}*{qs}")
            return " + ".join(bits)

        if self.denom == {0: 1}:
            return fmt(self.num)
        return f"({fmt(self.num)}) / ({fmt(self.denom)})"
