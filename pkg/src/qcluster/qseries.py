"""Formal power series in one torus generator over Q(q): quantum dilogarithm
expansions, the pentagon identity, and Gaussian binomial coefficients.
"""

from __future__ import annotations

from .coeffs import QFrac


class FormalSeries:
    """Truncated power series with QFrac coefficients, degree 0..order."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        self.order = order
        self.coeffs = {d: c for d, c in coeffs.items()
                       if d <= order and not c.is_zero()}

    @classmethod
    def one(cls, order):
        return cls({0: QFrac.one()}, order)

    def __add__(self, other):
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, QFrac.zero()) + c
        return FormalSeries(out, order)

    def __mul__(self, other):
        order = min(self.order, other.order)
        out = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                if d <= order:
                    out[d] = out.get(d, QFrac.zero()) + c1 * c2
        return FormalSeries(out, order)

    def __sub__(self, other):
        return self + other.scale(QFrac.integer(-1))

    def scale(self, c):
        return FormalSeries({d: v * c for d, v in self.coeffs.items()}, self.order)

    def coefficient(self, d):
        return self.coeffs.get(d, QFrac.zero())

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        order = min(self.order, other.order)
        for d in range(order + 1):
            if self.coefficient(d) != other.coefficient(d):
                return False
        return True

    def __repr__(self):
        bits = [f"({self.coeffs[d]})*Y^{d}" for d in sorted(self.coeffs)]
        return " + ".join(bits) + f" + O(Y^{self.order + 1})"


def qpoch_factor(j):
    """1 - q^(2j) as a QFrac."""
    return QFrac({0: 1, 2 * j: -1})


def dilog_series(order) -> FormalSeries:
    """Taylor series of Psi_q(Y): sum_n q^n Y^n / ((q^2-1)...(q^(2n)-1))."""
    coeffs = {0: QFrac.one()}
    denom = QFrac.one()
    for n in range(1, order + 1):
        denom = denom * QFrac({2 * n: 1, 0: -1})  # q^(2n) - 1
        coeffs[n] = QFrac.q_power(n) / denom
    return FormalSeries(coeffs, order)


def dilog_inverse_series(order) -> FormalSeries:
    """Taylor series of Psi_q(Y)^{-1}: sum_n q^(n^2) Y^n / ((1-q^2)...(1-q^(2n)))."""
    coeffs = {0: QFrac.one()}
    denom = QFrac.one()
    for n in range(1, order + 1):
        denom = denom * qpoch_factor(n)
        coeffs[n] = QFrac.q_power(n * n) / denom
    return FormalSeries(coeffs, order)


def qbinomial(m: int, k: int) -> QFrac:
    """Gaussian binomial binom(m, k) in base q^2, via the Pochhammer ratio
    prod_{j=1}^{k} (1 - q^(2(m-k+j))) / (1 - q^(2j)); negative m is allowed.
    """
    if k < 0:
        return QFrac.zero()
    num = QFrac.one()
    den = QFrac.one()
    for j in range(1, k + 1):
        num = num * qpoch_factor(m - k + j)
        den = den * qpoch_factor(j)
    return num / den


# ---------------------------------------------------------------------------
# pentagon identity as truncated bivariate normal-ordered series


class BiSeries:
    """Series in noncommuting U, V with UV = q^2 VU, stored normal-ordered.

    Keys are (a, b) for U^a V^b; the product uses V^b U^a = q^(-2ab) U^a V^b.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        self.order = order
        self.coeffs = {k: c for k, c in coeffs.items()
                       if k[0] + k[1] <= order and not c.is_zero()}

    @classmethod
    def one(cls, order):
        return cls({(0, 0): QFrac.one()}, order)

    def __mul__(self, other):
        out = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                if a1 + a2 + b1 + b2 > self.order:
                    continue
                key = (a1 + a2, b1 + b2)
                c = c1 * c2 * QFrac.q_power(-2 * b1 * a2)
                out[key] = out.get(key, QFrac.zero()) + c
        return BiSeries(out, self.order)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, QFrac.zero()) - c
        return BiSeries(out, self.order)

    def __eq__(self, other):
        return not (self - other).coeffs

    def first_mismatch(self, other):
        diff = self - other
        if not diff.coeffs:
            return None
        key = min(diff.coeffs, key=lambda k: (k[0] + k[1], k))
        return key, diff.coeffs[key]


def _dilog_of(word, order):
    """Psi_q evaluated on a normal-ordered monomial series argument.

    ``word`` is (a, b, scalar): the argument scalar * U^a V^b, with powers
    (U^a V^b)^n = q^(-ab n(n-1)) U^(an) V^(bn).
    """
    a, b, scalar = word
    psi = dilog_series(order)
    out = {}
    for n, c in psi.coeffs.items():
        if n * (a + b) > order:
            continue
        coeff = c * scalar ** n * QFrac.q_power(-a * b * n * (n - 1))
        out[(a * n, b * n)] = coeff
    return BiSeries(out, order)


def pentagon_check(order, perturb=False):
    """Verify Psi(U) Psi(V) = Psi(V) Psi(:UV:) Psi(U) through total degree
    ``order``, where UV = q^2 VU and :UV: = q VU = q^{-1} UV is the
    Weyl-ordered middle argument.  Returns (True, None) or (False, first
    mismatching key with the discrepancy).  ``perturb=True`` flips one
    coefficient as a negative control.
    """
    lhs = _dilog_of((1, 0, QFrac.one()), order) * _dilog_of((0, 1, QFrac.one()), order)
    rhs = (_dilog_of((0, 1, QFrac.one()), order)
           * _dilog_of((1, 1, QFrac.q_power(-1)), order)
           * _dilog_of((1, 0, QFrac.one()), order))
    if perturb and (1, 1) in rhs.coeffs:
        rhs.coeffs[1, 1] = rhs.coeffs[1, 1] + QFrac.one()
    mism = lhs.first_mismatch(rhs)
    return (mism is None), mism


def pentasum_check(order):
    """Check the Pochhammer product identity used to expand recursion
    operators:

      (z1 V; q^2)^{-1}_inf (-z2 UV; q^2)^{-1}_inf
        = sum_m (-1)^m q^(-m(1+m)) (z1^{-1} z2 U; q^{-2})_m / (q^{-2};q^{-2})_m
          z1^m V^m

    as a truncated identity in U, V (UV = q^2 VU) with commuting z1, z2.
    Keys on both sides are (z1 deg, z2 deg, U deg, V deg).
    """
    lhs = {}
    # (z1 V; q^2)^{-1} = sum_k (z1 V)^k / (q^2;q^2)_k
    # (-z2 UV; q^2)^{-1} = sum_m (-z2 UV)^m / (q^2;q^2)_m
    poch = [QFrac.one()]
    for j in range(1, order + 1):
        poch.append(poch[-1] * qpoch_factor(j))
    for k in range(order + 1):
        for m in range(order + 1 - k):
            # V^k * (UV)^m with (UV)^m = q^(-m(m-1)) U^m V^m
            # V^k U^m = q^(-2km) U^m V^k
            c = (QFrac.integer((-1) ** m)
                 * QFrac.q_power(-m * (m - 1) - 2 * k * m)
                 / (poch[k] * poch[m]))
            key = (k, m, m, k + m)
            lhs[key] = lhs.get(key, QFrac.zero()) + c
    rhs = {}
    for m in range(order + 1):
        # (x; q^{-2})_m = prod_{j=0}^{m-1} (1 - x q^{-2j}), x = z1^{-1} z2 U
        # expand in powers of x
        terms = {0: QFrac.one()}
        for j in range(m):
            new = {}
            for r, c in terms.items():
                new[r] = new.get(r, QFrac.zero()) + c
                x = c * QFrac.q_power(-2 * j) * QFrac.integer(-1)
                new[r + 1] = new.get(r + 1, QFrac.zero()) + x
            terms = new
        dpoch = QFrac.one()
        for j in range(1, m + 1):
            dpoch = dpoch * QFrac({0: 1, -2 * j: -1})
        pref = QFrac.integer((-1) ** m) * QFrac.q_power(-m * (1 + m)) / dpoch
        for r, c in terms.items():
            # x^r = z1^{-r} z2^r U^r; then * z1^m V^m, U^r and V commute? no:
            # U^r V^m stays normal ordered already.
            key = (m - r, r, r, m)
            val = pref * c
            if key[2] + key[3] <= 2 * order:
                rhs[key] = rhs.get(key, QFrac.zero()) + val
    keys = set(lhs) | set(rhs)
    for key in keys:
        a = lhs.get(key, QFrac.zero())
        b = rhs.get(key, QFrac.zero())
        if key[3] <= order and key[2] <= order:
            if a != b:
                return False, (key, a, b)
    return True, None
