"""Quantum torus arithmetic: sparse elements, dilogarithm conjugation,
rational elements with factored binomial denominators, Laurentness checks.

A :class:`TorusElement` is a finite sum sum_lambda c_lambda Y_lambda with
lattice vectors lambda as integer tuples and coefficients in an exact ring
(QCoeff by default, QFrac for series work).  The ambient algebra supplies the
doubled skew form via ``pairing2`` and the root-of-q denominator ``qden``.

The multiplication rule is q^((lambda,mu)) Y_lambda Y_mu = Y_(lambda+mu).

A :class:`RationalTorusElement` represents

    (1 + c_1 Y_{v_1})^{-1} (1 + c_2 Y_{v_2})^{-1} ... (1 + c_m Y_{v_m})^{-1} N

with the denominator factors kept in factored, ordered form.  All mutation
images and residue computations in this package stay inside this class of
elements; general skew fractions are out of scope.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import ExponentError, QCoeff


class NotLaurentError(ValueError):
    """Raised when exact division by a denominator binomial fails."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(k, a):
    return tuple(k * x for x in a)


class TorusElement:
    """Sparse quantum-torus element keyed by lattice vectors."""

    __slots__ = ("algebra", "terms", "ring")

    def __init__(self, algebra, terms=None, ring=QCoeff):
        self.algebra = algebra
        self.ring = ring
        clean = {}
        if terms:
            for v, c in terms.items():
                if not c.is_zero():
                    clean[tuple(v)] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, algebra, ring=QCoeff):
        return cls(algebra, {}, ring)

    @classmethod
    def one(cls, algebra, ring=QCoeff):
        n = algebra.n
        return cls(algebra, {(0,) * n: ring.one(algebra.qden)}, ring)

    @classmethod
    def monomial(cls, algebra, vector, coeff=None, ring=QCoeff):
        if coeff is None:
            coeff = ring.one(algebra.qden)
        return cls(algebra, {tuple(vector): coeff}, ring)

    @classmethod
    def generator(cls, algebra, label, ring=QCoeff):
        if hasattr(algebra, "basis_vector"):
            vec = algebra.basis_vector(label)
        else:
            vec = algebra.xi_vector(label)
        return cls.monomial(algebra, vec, ring=ring)

    def _qpow(self, half_pairing2):
        """q^(-(lambda,mu)) as a ring element, from 2*(lambda,mu)."""
        d = self.algebra.qden
        num = -half_pairing2 * d
        if num % 2:
            raise ExponentError(
                f"q-exponent {-half_pairing2}/2 not representable at D={d}")
        return self.ring.q_power(Fraction(num, 2 * d), d)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, RationalTorusElement):
            return other.__radd__(self)
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for v, c in other.terms.items():
            s = terms.get(v)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(v, None)
            else:
                terms[v] = s
        return TorusElement(self.algebra, terms, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TorusElement(self.algebra, {v: -c for v, c in self.terms.items()},
                            self.ring)

    def __mul__(self, other):
        if isinstance(other, RationalTorusElement):
            return other.__rmul__(self)
        if isinstance(other, int):
            return self.scale(self.ring.integer(other, self.algebra.qden))
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        terms = {}
        for v1, c1 in self.terms.items():
            for v2, c2 in other.terms.items():
                v = vadd(v1, v2)
                c = c1 * c2 * self._qpow(self.algebra.pairing2(v1, v2))
                s = terms.get(v)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(v, None)
                else:
                    terms[v] = s
        return TorusElement(self.algebra, terms, self.ring)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = TorusElement.one(self.algebra, self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials are invertible")
        (v, c), = self.terms.items()
        cinv = c.inverse()
        # Y_v^{-1} = q^{...} Y_{-v}: (v,-v)=0 so Y_v Y_{-v} = Y_0 exactly
        return TorusElement.monomial(self.algebra, vneg(v), cinv, self.ring)

    def scale(self, coeff):
        return TorusElement(self.algebra, {v: c * coeff for v, c in self.terms.items()},
                            self.ring)

    def _check(self, other):
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ValueError("elements live on different algebras")

    # -- involutions and maps ----------------------------------------------------

    def star(self):
        """The * anti-involution: *Y_lambda = Y_lambda, *q = q^{-1}."""
        return TorusElement(self.algebra, {v: c.star() for v, c in self.terms.items()},
                            self.ring)

    def bar(self):
        return TorusElement(self.algebra, {v: c.bar() for v, c in self.terms.items()},
                            self.ring)

    def apply_lattice_map(self, matrix, algebra=None):
        """Monomial substitution Y_lambda -> Y_(lambda . matrix)."""
        algebra = algebra or self.algebra
        terms = {}
        for v, c in self.terms.items():
            w = tuple(sum(v[i] * matrix[i][j] for i in range(len(v)))
                      for j in range(len(matrix[0])))
            s = terms.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(w, None)
            else:
                terms[w] = s
        return TorusElement(algebra, terms, self.ring)

    def map_coeffs(self, fn):
        return TorusElement(self.algebra, {v: fn(c) for v, c in self.terms.items()},
                            self.ring)

    def convert_ring(self, ring, convert):
        return TorusElement(self.algebra, {v: convert(c) for v, c in self.terms.items()},
                            ring)

    # -- queries -------------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def coefficient(self, vector):
        return self.terms.get(tuple(vector),
                              self.ring.zero(self.algebra.qden))

    def support(self):
        return set(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.is_zero()
            return self == TorusElement.one(self.algebra, self.ring) * other
        if isinstance(other, RationalTorusElement):
            return other == self
        if not isinstance(other, TorusElement):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[v] == other.terms[v] for v in self.terms)

    def __hash__(self):
        return hash(frozenset((v, hash(c)) for v, c in self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for v in sorted(self.terms):
            c = self.terms[v]
            bits.append(f"({c})*Y{list(v)}")
        return " + ".join(bits)


def weyl_monomial(algebra, exponents, ring=QCoeff):
    """The *-invariant Weyl-ordered monomial :Y_1^{n_1} ... Y_d^{n_d}:.

    ``exponents`` is a map label -> integer (or a full vector).  The result
    is Y_{sum n_i e_i}, which is the unique *-fixed scalar multiple of the
    ordered product of the generators.
    """
    if isinstance(exponents, dict):
        vec = [0] * algebra.n
        for label, p in exponents.items():
            vec[algebra.index(label)] = p
        vec = tuple(vec)
    else:
        vec = tuple(exponents)
    return TorusElement.monomial(algebra, vec, ring=ring)


def ordered_product(algebra, exponents, ring=QCoeff):
    """The plain ordered product Y_1^{n_1} * ... * Y_d^{n_d} (for tests)."""
    out = TorusElement.one(algebra, ring)
    if isinstance(exponents, dict):
        items = [(algebra.index(l), p) for l, p in exponents.items()]
        items.sort()
    else:
        items = list(enumerate(exponents))
    n = algebra.n
    for i, p in items:
        if p:
            e = tuple(p if j == i else 0 for j in range(n))
            out = out * TorusElement.monomial(algebra, e, ring=ring)
    return out


def apply_quasi_permutation(elem, qperm, source, target=None):
    """Monomial substitution along a quiver quasi-permutation (checked)."""
    target = target or source
    qperm.check_isometry(source, target)
    return elem.apply_lattice_map(qperm.matrix(source, target), target)


# ---------------------------------------------------------------------------
# rational elements with factored binomial denominators


class RationalTorusElement:
    """(1+c_1 Y_{v_1})^{-1} ... (1+c_m Y_{v_m})^{-1} N, factors kept factored.

    Denominator factors are pairs (v, c) for the binomial 1 + c Y_v with c a
    unit-monomial coefficient.  Directions are normalized so the first
    nonzero coordinate of v is positive; factors are required to commute
    pairwise (their directions pair to zero), which covers every use in this
    package; anything else raises.
    """

    __slots__ = ("numerator", "denominators")

    def __init__(self, numerator: TorusElement, denominators=(), normalize=True):
        self.numerator = numerator
        self.denominators = [(tuple(v), c) for v, c in denominators]
        if normalize:
            self._normalize_directions()
            self._check_commuting()

    # -- plumbing ---------------------------------------------------------------

    @property
    def algebra(self):
        return self.numerator.algebra

    @property
    def ring(self):
        return self.numerator.ring

    def _shift_coeff(self, c, v, mu):
        """c * q^{2(v,mu)} as a ring element (binomial commutation shift)."""
        alg = self.algebra
        d = alg.qden
        num = alg.pairing2(v, mu) * d
        if num % 2:
            raise ExponentError("half-integral commutation shift")
        return c * self.ring.q_power(Fraction(num, d), d)

    def _normalize_directions(self):
        """Flip factors (1 + c Y_{-v}) to the +v form, pushing units into N."""
        ds = self.denominators
        num = self.numerator
        for i, (v, c) in enumerate(ds):
            nz = next((x for x in v if x), None)
            if nz is None:
                raise ValueError("denominator direction is zero")
            if nz > 0:
                continue
            # 1 + c Y_{-w} = c Y_{-w} (1 + c^{-1} q^{s} Y_w)  with exact scalar:
            # c Y_{-w} * (c^{-1} Y_w) = Y_{-w} Y_w = Y_0, so
            # 1 + c Y_{-w} = (c Y_{-w}) * (1 + c^{-1} Y_w) holds exactly.
            w = vneg(v)
            cinv = c.inverse()
            # factor^{-1} = (1 + cinv Y_w)^{-1} * (c Y_{-w})^{-1}
            # the unit (c Y_{-w})^{-1} = cinv Y_w must commute right through
            # the remaining inverse factors into the numerator.
            u_vec, u_coeff = w, cinv
            ds[i] = (w, cinv)
            for j in range(i + 1, len(ds)):
                vj, cj = ds[j]
                ds[j] = (vj, self._shift_coeff(cj, vj, vneg(u_vec)))
            mono = TorusElement.monomial(self.algebra, u_vec, u_coeff, self.ring)
            num = mono * num
        self.numerator = num

    def _check_commuting(self):
        alg = self.algebra
        for i in range(len(self.denominators)):
            for j in range(i + 1, len(self.denominators)):
                if alg.pairing2(self.denominators[i][0],
                                self.denominators[j][0]):
                    raise ValueError(
                        "non-commuting denominator directions are unsupported")

    # -- conversions -------------------------------------------------------------

    @classmethod
    def from_torus(cls, elem: TorusElement):
        return cls(elem, ())

    def is_laurent(self):
        try:
            self.to_torus()
            return True
        except NotLaurentError:
            return False

    def to_torus(self) -> TorusElement:
        """Exact division by every denominator factor (raises if not Laurent)."""
        out = self.numerator
        for v, c in reversed(self.denominators):
            out = _divide_left(out, v, c)
        return out

    def canonical(self):
        """Greedily cancel denominator factors that divide exactly."""
        num = self.numerator
        remaining = list(self.denominators)
        changed = True
        while changed:
            changed = False
            for idx in range(len(remaining) - 1, -1, -1):
                v, c = remaining[idx]
                # factors commute, so the one at idx may be slid to the inside
                try:
                    num2 = _divide_left(num, v, c)
                except NotLaurentError:
                    continue
                num = num2
                remaining.pop(idx)
                changed = True
        return RationalTorusElement(num, remaining, normalize=False)

    # -- arithmetic ----------------------------------------------------------------

    def _mul_factor(self, elem: TorusElement, v, c) -> TorusElement:
        """(1 + c Y_v) * elem."""
        extra = TorusElement.monomial(self.algebra, v, c, self.ring) * elem
        return elem + extra

    def _denominator_product(self, elem: TorusElement) -> TorusElement:
        """D * elem where D = F_1 F_2 ... F_m."""
        for v, c in reversed(self.denominators):
            elem = self._mul_factor(elem, v, c)
        return elem

    def __add__(self, other):
        if isinstance(other, TorusElement):
            other = RationalTorusElement.from_torus(other)
        if not isinstance(other, RationalTorusElement):
            return NotImplemented
        for v, _ in self.denominators:
            for u, _ in other.denominators:
                if self.algebra.pairing2(v, u):
                    raise ValueError("cannot add: denominators do not commute")
        n1 = other._denominator_product(self.numerator)
        n2 = self._denominator_product(other.numerator)
        return RationalTorusElement(
            n1 + n2, list(other.denominators) + list(self.denominators),
            normalize=False)

    def __radd__(self, other):
        if isinstance(other, TorusElement):
            return self + other
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TorusElement):
            other = RationalTorusElement.from_torus(other)
        return self + other.negate()

    def negate(self):
        return RationalTorusElement(-self.numerator, self.denominators,
                                    normalize=False)

    def __neg__(self):
        return self.negate()

    def scale(self, coeff):
        return RationalTorusElement(self.numerator.scale(coeff),
                                    self.denominators, normalize=False)

    def __mul__(self, other):
        """Product; other may be a TorusElement or RationalTorusElement."""
        if isinstance(other, TorusElement):
            other = RationalTorusElement.from_torus(other)
        if not isinstance(other, RationalTorusElement):
            return NotImplemented
        # self = D1^{-1} N1, other = D2^{-1} N2;
        # N1 D2^{-1} = sum over monomials m of N1 of (D2 shifted by m)^{-1} m
        total = None
        for mu, cmu in self.numerator.terms.items():
            shifted = [(u, self._shift_coeff(cu, u, mu))
                       for u, cu in other.denominators]
            mono = TorusElement.monomial(self.algebra, mu, cmu, self.ring)
            piece = RationalTorusElement(
                mono * other.numerator,
                list(self.denominators) + shifted, normalize=False)
            total = piece if total is None else total + piece
        if total is None:
            return RationalTorusElement(
                TorusElement.zero(self.algebra, self.ring), (), normalize=False)
        return total

    def __rmul__(self, other):
        if isinstance(other, TorusElement):
            return RationalTorusElement.from_torus(other) * self
        if isinstance(other, int):
            return self.scale(self.ring.integer(other, self.algebra.qden))
        return NotImplemented

    def apply_lattice_map(self, matrix, algebra=None):
        num = self.numerator.apply_lattice_map(matrix, algebra)
        ds = []
        for v, c in self.denominators:
            w = tuple(sum(v[i] * matrix[i][j] for i in range(len(v)))
                      for j in range(len(matrix[0])))
            ds.append((w, c))
        return RationalTorusElement(num, ds)

    def __eq__(self, other):
        if isinstance(other, TorusElement):
            other = RationalTorusElement.from_torus(other)
        if not isinstance(other, RationalTorusElement):
            return NotImplemented
        diff = self - other
        num = diff.numerator
        return num.is_zero()

    def __repr__(self):
        if not self.denominators:
            return repr(self.numerator)
        ds = " ".join(f"(1 + ({c})*Y{list(v)})^-1" for v, c in self.denominators)
        return f"{ds} * ({self.numerator!r})"


def _divide_left(elem: TorusElement, v, c) -> TorusElement:
    """Solve (1 + c Y_v) S = elem for S exactly, or raise NotLaurentError.

    Works per coset of the term lattice modulo Z v, by graded long division
    along the v-direction: if S = sum_t s_t Y_{mu_0 + t v} on a coset then
    s_t + c q^{-(v, mu_0 + (t-1)v)} s_{t-1} = (elem coefficient at level t).
    """
    alg = elem.algebra
    ring = elem.ring
    if elem.is_zero():
        return elem
    axis = next(i for i, x in enumerate(v) if x)
    step = v[axis]
    groups = {}
    for mu, cmu in elem.terms.items():
        t = mu[axis] // step if step > 0 else -(mu[axis] // -step)
        key = vsub(mu, vscale(t, v))
        groups.setdefault(key, []).append((t, mu, cmu))
    out = {}
    qden = alg.qden
    for items in groups.values():
        items.sort(key=lambda x: x[0])
        levels = {t: cmu for t, _, cmu in items}
        base_mu = items[0][1]
        t0 = items[0][0]
        tmax = items[-1][0]
        s_prev = None
        mu_prev = None
        for t in range(t0, tmax + 2):
            cur = levels.get(t, ring.zero(qden))
            if s_prev is not None:
                # subtract (c Y_v) * (s_prev Y_{mu_prev})
                p2 = alg.pairing2(v, mu_prev)
                shift = ring.q_power(Fraction(-p2, 2), qden)
                cur = cur - c * s_prev * shift
            mu_t = vadd(base_mu, vscale(t - t0, v))
            if t <= tmax:
                if not cur.is_zero():
                    out[mu_t] = cur
                s_prev, mu_prev = cur, mu_t
            else:
                if not cur.is_zero():
                    raise NotLaurentError(
                        "element is not Laurent: nonzero remainder",
                        factor=(v, c))
    return TorusElement(alg, out, ring)


# ---------------------------------------------------------------------------
# quantum dilogarithm conjugation


def dilog_adjoint(elem: TorusElement, v, inverse=False) -> RationalTorusElement:
    """Conjugation Psi(Y_v) . elem . Psi(Y_v)^{-1} (or its inverse), exact.

    Computed term-by-term via the q-difference equation
    Psi(q^2 Y) = (1 + q Y) Psi(Y).  Writing p = (v, lambda), the direct
    conjugation gives

        Y_lambda prod_{j=1}^{-p} (1 + q^{2j-1} Y_v)        for p < 0,
        Y_lambda prod_{j=1}^{p} (1 + q^{-(2j-1)} Y_v)^{-1} for p > 0,

    and the inverse conjugation swaps numerator and denominator roles while
    flipping the sign of the exponents.  The result is exact rational.
    """
    alg = elem.algebra
    ring = elem.ring
    qden = alg.qden
    v = tuple(v)
    total = None
    for mu, cmu in elem.terms.items():
        p2 = alg.pairing2(v, mu)
        if p2 % 2:
            raise ExponentError("non-integer pairing (v, lambda) in dilog adjoint")
        pairing = p2 // 2
        mono = TorusElement.monomial(alg, mu, cmu, ring)
        m = abs(pairing)
        numerator_side = (pairing < 0) != bool(inverse)
        s_sign = -1 if pairing > 0 else 1
        exps = [s_sign * (2 * j - 1) for j in range(1, m + 1)]
        piece = mono
        ds = []
        for s in exps:
            # right factor exponent s converts to left exponent s + 2(v, mu)
            c = ring.q_power(Fraction(s + p2, 1), qden)
            if numerator_side:
                piece = _left_mul_binomial(piece, v, c)
            else:
                ds.append((v, c))
        part = RationalTorusElement(piece, ds, normalize=False)
        total = part if total is None else total + part
    if total is None:
        return RationalTorusElement(TorusElement.zero(alg, ring), (),
                                    normalize=False)
    return total


def _left_mul_binomial(elem, v, c):
    """(1 + c Y_v) * elem."""
    return elem + TorusElement.monomial(elem.algebra, v, c, elem.ring) * elem


def try_laurent(r) -> TorusElement:
    """Exact division by each denominator binomial; raises NotLaurentError."""
    if isinstance(r, TorusElement):
        return r
    return r.to_torus()
