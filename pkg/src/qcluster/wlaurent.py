"""Multivariate Laurent polynomials in w_1..w_N with exact coefficients.

Used for q-Whittaker polynomials (coefficients in Z[q^{\\pm1}], stored as
QCoeff) and for rational q-difference operators (coefficients in Q(q),
stored as QFrac).  Keys are integer exponent tuples.
"""

from __future__ import annotations

from itertools import permutations

from .coeffs import QCoeff, QFrac


class WPoly:
    __slots__ = ("nvars", "terms", "ring")

    def __init__(self, nvars, terms=None, ring=QCoeff):
        self.nvars = nvars
        self.ring = ring
        clean = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    clean[tuple(m)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, nvars, ring=QCoeff):
        return cls(nvars, {}, ring)

    @classmethod
    def one(cls, nvars, ring=QCoeff):
        return cls(nvars, {(0,) * nvars: ring.one()}, ring)

    @classmethod
    def monomial(cls, nvars, exps, coeff=None, ring=QCoeff):
        if coeff is None:
            coeff = ring.one()
        return cls(nvars, {tuple(exps): coeff}, ring)

    @classmethod
    def variable(cls, nvars, i, ring=QCoeff):
        return cls.monomial(nvars, tuple(1 if j == i else 0 for j in range(nvars)),
                            ring=ring)

    @classmethod
    def elementary(cls, nvars, k, ring=QCoeff):
        """k-th elementary symmetric polynomial e_k(w)."""
        from itertools import combinations
        terms = {}
        for comb in combinations(range(nvars), k):
            m = tuple(1 if i in comb else 0 for i in range(nvars))
            terms[m] = ring.one()
        return cls(nvars, terms, ring)

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return WPoly(self.nvars, out, self.ring)

    def __sub__(self, other):
        return self + other.negate()

    def negate(self):
        return WPoly(self.nvars, {m: -c for m, c in self.terms.items()}, self.ring)

    def __neg__(self):
        return self.negate()

    def __mul__(self, other):
        if not isinstance(other, WPoly):
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return WPoly(self.nvars, out, self.ring)

    def scale(self, coeff):
        return WPoly(self.nvars, {m: c * coeff for m, c in self.terms.items()},
                     self.ring)

    def map_coeffs(self, fn, ring=None):
        return WPoly(self.nvars, {m: fn(c) for m, c in self.terms.items()},
                     ring or self.ring)

    def bar(self):
        """q -> q^{-1} on coefficients, w fixed."""
        return self.map_coeffs(lambda c: c.bar())

    # -- structure ------------------------------------------------------------------

    def permuted(self, sigma):
        """Coordinate permutation: w_i -> w_{sigma(i)} (sigma a tuple image)."""
        out = {}
        for m, c in self.terms.items():
            mm = [0] * self.nvars
            for i, e in enumerate(m):
                mm[sigma[i]] = e
            key = tuple(mm)
            s = out.get(key)
            s = c if s is None else s + c
            out[key] = s
        return WPoly(self.nvars, out, self.ring)

    def is_symmetric(self):
        for i in range(self.nvars - 1):
            sigma = list(range(self.nvars))
            sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
            if self.permuted(tuple(sigma)) != self:
                return False
        return True

    def qshift(self, mu):
        """Substitution w_i -> q^{2 mu_i} w_i (the shift-operator action)."""
        out = {}
        for m, c in self.terms.items():
            e = sum(a * b for a, b in zip(m, mu))
            out[m] = c * self.ring.q_power(2 * e)
        return WPoly(self.nvars, out, self.ring)

    def divide_binomial(self, direction, coeff):
        """Exact division by (1 + coeff * w^direction); raises ValueError."""
        if not self.terms:
            return self
        v = tuple(direction)
        axis = next(i for i, x in enumerate(v) if x)
        step = v[axis]
        groups = {}
        for m, c in self.terms.items():
            t = m[axis] // step if step > 0 else -(m[axis] // -step)
            key = tuple(a - t * b for a, b in zip(m, v))
            groups.setdefault(key, []).append((t, m, c))
        out = {}
        for items in groups.values():
            items.sort(key=lambda x: x[0])
            levels = {t: c for t, _, c in items}
            base = items[0][1]
            t0, tmax = items[0][0], items[-1][0]
            prev = None
            for t in range(t0, tmax + 2):
                cur = levels.get(t, self.ring.zero())
                if prev is not None:
                    cur = cur - coeff * prev
                if t <= tmax:
                    if not cur.is_zero():
                        out[tuple(a + (t - t0) * b for a, b in zip(base, v))] = cur
                    prev = cur
                else:
                    if not cur.is_zero():
                        raise ValueError("binomial division is not exact")
        return WPoly(self.nvars, out, self.ring)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero())

    def is_zero(self):
        return not self.terms

    def support(self):
        return set(self.terms)

    def __eq__(self, other):
        if not isinstance(other, WPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __repr__(self):
        bits = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mono = "*".join(f"w{i+1}^{e}" for i, e in enumerate(m) if e) or "1"
            bits.append(f"({c})*{mono}")
        return " + ".join(bits) or "0"


def dominant_key(mono):
    """Dominant (weakly decreasing) representative of a monomial's orbit."""
    return tuple(sorted(mono, reverse=True))


def dominance_less(a, b):
    """a < b in dominance order (same total degree; partial order)."""
    if a == b or sum(a) != sum(b):
        return False
    pa = pb = 0
    strict = False
    for x, y in zip(a, b):
        pa += x
        pb += y
        if pa > pb:
            return False
        if pa < pb:
            strict = True
    return strict


def all_permutations(n):
    return list(permutations(range(n)))
