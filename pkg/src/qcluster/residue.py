"""Rational q-difference operators on the torus of GL_{n+1}: localization at
the divisors {w_alpha = q^{-2k}}, residues and restrictions, the residue
algebra membership conditions, and minuscule elements.

An operator is a finite sum over internal degrees mu of
f_mu(w) D^mu,  D_i w_j = q^{2 delta_ij} w_j D_i,
where f_mu is a Laurent polynomial in w divided by factors
(1 - q^{2k} w_alpha), alpha = eps_i - eps_j (i < j) a positive root.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .coeffs import QFrac
from .wlaurent import WPoly, dominance_less


class RootData:
    """Type-A root/weight bookkeeping for GL_{n+1} (rank n)."""

    def __init__(self, n):
        self.n = n
        self.N = n + 1
        self.positive_roots = [(i, j) for i in range(self.N)
                               for j in range(i + 1, self.N)]

    def minuscule_weight(self, k, l=0):
        """omega_k + l*omega_{n+1}, 0 <= k <= n."""
        return tuple((1 if i < k else 0) + l for i in range(self.N))

    def root_pairing(self, alpha, mu):
        """<alpha, mu> = mu_i - mu_j for alpha = eps_i - eps_j."""
        i, j = alpha
        return mu[i] - mu[j]

    def reflect(self, alpha, mu):
        i, j = alpha
        out = list(mu)
        out[i], out[j] = out[j], out[i]
        return tuple(out)

    def root_vector(self, alpha):
        i, j = alpha
        return tuple(1 if t == i else (-1 if t == j else 0)
                     for t in range(self.N))


class LocalizedCoeff:
    """numerator / prod (1 - q^{2k} w_alpha)^{mult}, kept factored.

    ``denom`` maps (alpha, k) to multiplicities; canonical form cancels any
    factor dividing the numerator exactly.
    """

    __slots__ = ("num", "denom")

    def __init__(self, num: WPoly, denom=None, canonical=True):
        self.num = num
        d = {}
        for key, m in (denom or {}).items():
            if m:
                alpha, k = key
                d[(tuple(alpha), k)] = d.get((tuple(alpha), k), 0) + m
        self.denom = d
        if canonical:
            self.canonicalize()

    @staticmethod
    def factor_poly(nvars, alpha, k) -> WPoly:
        """1 - q^{2k} w_i / w_j as a Laurent polynomial."""
        i, j = alpha
        mono = tuple(1 if t == i else (-1 if t == j else 0) for t in range(nvars))
        return WPoly(nvars, {(0,) * nvars: QFrac.one(),
                             mono: -QFrac.q_power(2 * k)}, QFrac)

    def canonicalize(self):
        changed = True
        while changed and self.denom and not self.num.is_zero():
            changed = False
            for (alpha, k), mult in list(self.denom.items()):
                i, j = alpha
                nv = self.num.nvars
                direction = tuple(1 if t == i else (-1 if t == j else 0)
                                  for t in range(nv))
                try:
                    divided = self.num.divide_binomial(direction,
                                                       -QFrac.q_power(2 * k))
                except ValueError:
                    continue
                self.num = divided
                if mult == 1:
                    del self.denom[(alpha, k)]
                else:
                    self.denom[(alpha, k)] = mult - 1
                changed = True
        if self.num.is_zero():
            self.denom = {}

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return not self.denom

    def __add__(self, other):
        nv = self.num.nvars
        extra_self = []
        extra_other = []
        keys = set(self.denom) | set(other.denom)
        for key in keys:
            m1 = self.denom.get(key, 0)
            m2 = other.denom.get(key, 0)
            m = max(m1, m2)
            extra_self += [key] * (m - m1)
            extra_other += [key] * (m - m2)
        n1 = self.num
        for alpha, k in extra_self:
            n1 = n1 * self.factor_poly(nv, alpha, k)
        n2 = other.num
        for alpha, k in extra_other:
            n2 = n2 * self.factor_poly(nv, alpha, k)
        denom = {key: max(self.denom.get(key, 0), other.denom.get(key, 0))
                 for key in keys}
        return LocalizedCoeff(n1 + n2, denom)

    def __sub__(self, other):
        return self + other.negate()

    def negate(self):
        return LocalizedCoeff(self.num.negate(), self.denom, canonical=False)

    def __mul__(self, other):
        if isinstance(other, WPoly):
            other = LocalizedCoeff(other)
        denom = dict(self.denom)
        for key, m in other.denom.items():
            denom[key] = denom.get(key, 0) + m
        return LocalizedCoeff(self.num * other.num, denom)

    def scale(self, c):
        return LocalizedCoeff(self.num.scale(c), self.denom, canonical=False)

    def qshift(self, mu):
        """Conjugation by D^mu: w_i -> q^{2 mu_i} w_i, divisor index k
        shifts by <alpha, mu>."""
        num = self.num.qshift(mu)
        denom = {}
        for (alpha, k), m in self.denom.items():
            i, j = alpha
            shift = mu[i] - mu[j]
            # (1 - q^{2k} w_a) -> (1 - q^{2(k + <a,mu>)} w_a), times unit 1
            denom[(alpha, k + shift)] = denom.get((alpha, k + shift), 0) + m
        return LocalizedCoeff(num, denom, canonical=False)

    def permuted(self, sigma):
        """Weyl action by the coordinate permutation sigma (image tuple).

        A flipped factor is renormalized to the positive-root form:
        (1 - q^{2k} w_a/w_b)^{-1} with a > b equals
        -q^{-2k} (w_b/w_a) (1 - q^{-2k} w_b/w_a)^{-1}, the unit going into
        the numerator.
        """
        nv = self.num.nvars
        num = self.num.permuted(sigma)
        denom = {}
        for (alpha, k), m in self.denom.items():
            i, j = alpha
            a, b = sigma[i], sigma[j]
            if a < b:
                denom[((a, b), k)] = denom.get(((a, b), k), 0) + m
            else:
                unit = WPoly.monomial(
                    nv,
                    tuple(m if t == b else (-m if t == a else 0)
                          for t in range(nv)),
                    (QFrac.integer(-1) * QFrac.q_power(-2 * k)) ** m, QFrac)
                num = num * unit
                denom[((b, a), -k)] = denom.get(((b, a), -k), 0) + m
        return LocalizedCoeff(num, denom, canonical=False)

    def __eq__(self, other):
        return (self - other).is_zero()

    def __repr__(self):
        if not self.denom:
            return repr(self.num)
        ds = " ".join(f"(1-q^{2*k}w{a[0]+1}/w{a[1]+1})^-{m}"
                      for (a, k), m in sorted(self.denom.items()))
        return f"[{self.num!r}] / {ds}"


class QDiffOp:
    """Finite sum over internal degrees mu of f_mu(w) D^mu."""

    __slots__ = ("N", "terms")

    def __init__(self, N, terms=None):
        self.N = N
        clean = {}
        if terms:
            for mu, c in terms.items():
                if not c.is_zero():
                    clean[tuple(mu)] = c
        self.terms = clean

    @classmethod
    def zero(cls, N):
        return cls(N, {})

    @classmethod
    def one(cls, N):
        return cls(N, {(0,) * N: LocalizedCoeff(WPoly.one(N, QFrac))})

    @classmethod
    def shift(cls, N, mu, coeff=None):
        """f(w) D^mu with polynomial coefficient f (default 1)."""
        c = LocalizedCoeff(coeff if coeff is not None else WPoly.one(N, QFrac))
        return cls(N, {tuple(mu): c})

    def __add__(self, other):
        out = dict(self.terms)
        for mu, c in other.terms.items():
            s = out.get(mu)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(mu, None)
            else:
                out[mu] = s
        return QDiffOp(self.N, out)

    def __sub__(self, other):
        return self + other.negate()

    def negate(self):
        return QDiffOp(self.N, {mu: c.negate() for mu, c in self.terms.items()})

    def __mul__(self, other):
        """(f D^mu)(g D^nu) = f sigma_mu(g) D^{mu+nu}; denominators merge
        with their divisor indices shifted by <alpha, mu>."""
        out = {}
        for mu, f in self.terms.items():
            for nu, g in other.terms.items():
                key = tuple(a + b for a, b in zip(mu, nu))
                c = f * g.qshift(mu)
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return QDiffOp(self.N, out)

    def scale(self, c):
        return QDiffOp(self.N, {mu: f.scale(c) for mu, f in self.terms.items()})

    def ad_shift(self, mu):
        """D^mu A D^{-mu}: every coefficient is q-shifted by mu; degrees and
        divisor indices move per the shift automorphism."""
        return QDiffOp(self.N, {nu: f.qshift(mu) for nu, f in self.terms.items()})

    def left_D(self, w):
        """D^w * A."""
        return QDiffOp(self.N, {tuple(a + b for a, b in zip(w, nu)): f.qshift(w)
                                for nu, f in self.terms.items()})

    def right_D(self, w):
        """A * D^w (no coefficient shift)."""
        return QDiffOp(self.N, {tuple(a + b for a, b in zip(w, nu)): f
                                for nu, f in self.terms.items()})

    def permuted_op(self, sigma):
        """Weyl group action: permute w's, D's, and internal degrees."""
        out = {}
        for mu, f in self.terms.items():
            mm = [0] * self.N
            for i, e in enumerate(mu):
                mm[sigma[i]] = e
            out[tuple(mm)] = f.permuted(sigma)
        return QDiffOp(self.N, out)

    def weyl_invariant(self):
        for i in range(self.N - 1):
            sigma = list(range(self.N))
            sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
            if self.permuted_op(tuple(sigma)) != self:
                return False
        return True

    def carried_divisors(self):
        out = set()
        for f in self.terms.values():
            out.update(f.denom.keys())
        return out

    def __eq__(self, other):
        if not isinstance(other, QDiffOp):
            return NotImplemented
        return (self - other).terms == {}

    def __repr__(self):
        bits = []
        for mu in sorted(self.terms):
            ds = "*".join(f"D{i+1}^{e}" for i, e in enumerate(mu) if e) or "1"
            bits.append(f"[{self.terms[mu]!r}] {ds}")
        return " + ".join(bits) or "0"


class PoleOrderError(ValueError):
    pass


def _divisor_substitute(coeff: LocalizedCoeff, alpha, k) -> LocalizedCoeff:
    """Value of a (regular-at-the-divisor) coefficient on {w_alpha = q^{-2k}}.

    Eliminates w_i in favour of w_j (alpha = (i,j)): every numerator monomial
    folds its w_i-exponent onto w_j with the scalar q^{-2k e_i}, and remaining
    denominator factors are rewritten accordingly; factors that degenerate to
    constants (1 - q^{2m}) are divided into the coefficients.
    """
    i, j = alpha
    nv = coeff.num.nvars
    if ((i, j), k) in coeff.denom:
        raise PoleOrderError("substituting on a divisor where a pole remains")
    num_terms = {}
    for m, c in coeff.num.terms.items():
        e = m[i]
        mm = list(m)
        mm[i] = 0
        mm[j] += e
        val = c * QFrac.q_power(-2 * k * e)
        key = tuple(mm)
        s = num_terms.get(key)
        s = val if s is None else s + val
        num_terms[key] = s
    num = WPoly(nv, num_terms, QFrac)
    denom = {}
    const = QFrac.one()
    for (beta, l), mult in coeff.denom.items():
        a, b = beta
        if i not in beta:
            denom[(beta, l)] = denom.get((beta, l), 0) + mult
            continue
        if a == i:
            new_pair, new_l = (j, b), l - k
        else:
            new_pair, new_l = (a, j), l + k
        p, r = new_pair
        if p == r:
            cval = QFrac.one() - QFrac.q_power(2 * new_l)
            if cval.is_zero():
                raise PoleOrderError("hidden pole after substitution")
            const = const * cval ** mult
            continue
        if p > r:
            unit = WPoly.monomial(
                nv, tuple(mult if t == r else (-mult if t == p else 0)
                          for t in range(nv)),
                (QFrac.integer(-1) * QFrac.q_power(-2 * new_l)) ** mult, QFrac)
            num = num * unit
            new_pair, new_l = (r, p), -new_l
        denom[(new_pair, new_l)] = denom.get((new_pair, new_l), 0) + mult
    if not const.is_one():
        num = num.scale(QFrac.one() / const)
    return LocalizedCoeff(num, denom)


def pole_order(coeff: LocalizedCoeff, alpha, k) -> int:
    return coeff.denom.get((tuple(alpha), k), 0)


def residue(op: QDiffOp, alpha, k) -> QDiffOp:
    """Residue at the divisor {w_alpha = q^{-2k}}: strip one denominator
    factor and evaluate on the divisor; raises PoleOrderError above order 1.
    Regular pieces contribute zero."""
    out = {}
    for mu, f in op.terms.items():
        m = pole_order(f, alpha, k)
        if m == 0:
            continue
        if m > 1:
            raise PoleOrderError(f"pole of order {m} at {alpha}, k={k}")
        denom = dict(f.denom)
        denom[(tuple(alpha), k)] -= 1
        if not denom[(tuple(alpha), k)]:
            del denom[(tuple(alpha), k)]
        stripped = LocalizedCoeff(f.num, denom, canonical=False)
        out[mu] = _divisor_substitute(stripped, alpha, k)
    return QDiffOp(op.N, out)


def restriction(op: QDiffOp, alpha, k) -> QDiffOp:
    """Restriction to the divisor (requires regularity there)."""
    out = {}
    for mu, f in op.terms.items():
        if pole_order(f, alpha, k):
            raise PoleOrderError("restriction of an element with a pole")
        out[mu] = _divisor_substitute(f, alpha, k)
    return QDiffOp(op.N, out)


class ResidueReport:
    def __init__(self):
        self.weyl_invariant = None
        self.pole_violations = []
        self.residue_violations = []
        self.symmetry_violations = []

    @property
    def passed(self):
        return (self.weyl_invariant and not self.pole_violations
                and not self.residue_violations and not self.symmetry_violations)

    def __bool__(self):
        return bool(self.passed)

    def summary(self):
        if self.passed:
            return "pass"
        bits = []
        if not self.weyl_invariant:
            bits.append("not Weyl-invariant")
        if self.pole_violations:
            bits.append(f"pole order > 1 at {self.pole_violations[:3]}")
        if self.residue_violations:
            bits.append(f"residue condition fails at {self.residue_violations[:3]}")
        if self.symmetry_violations:
            bits.append(f"symmetry condition fails at {self.symmetry_violations[:3]}")
        return "; ".join(bits)


def residue_condition_check(op: QDiffOp, window: int = 4,
                            check_symmetry: bool = True) -> ResidueReport:
    """Membership test for the residue algebra.

    Checks (1) Weyl invariance, (2) at most simple poles at every divisor the
    operator carries plus a window k in [-window, window], (3) the residue
    matching condition res(A_mu + A_{s(mu)+k a} D^{(<a,mu>-k) a}) = 0 for all
    internal degrees present, and (4) instances of the graded symmetry
    condition at orders -1 and 0.
    """
    rd = RootData(op.N - 1)
    report = ResidueReport()
    report.weyl_invariant = op.weyl_invariant()
    if not report.weyl_invariant:
        return report
    ks_by_root = {}
    for (alpha, k) in op.carried_divisors():
        ks_by_root.setdefault(alpha, set()).add(k)
    for alpha in rd.positive_roots:
        ks = ks_by_root.get(alpha, set()) | set(range(-window, window + 1))
        for mu, f in op.terms.items():
            for k in sorted(ks):
                if pole_order(f, alpha, k) > 1:
                    report.pole_violations.append((alpha, k, mu))
    if report.pole_violations:
        return report
    degrees = set(op.terms)
    for alpha in rd.positive_roots:
        ks = ks_by_root.get(alpha, set()) | set(range(-window, window + 1))
        for k in sorted(ks):
            sweep = set(degrees)
            for nu in degrees:
                mu = rd.reflect(alpha, nu)
                mu = tuple(m + k * a for m, a in
                           zip(mu, rd.root_vector(alpha)))
                sweep.add(mu)
            for mu in sweep:
                f1 = op.terms.get(mu)
                nu = tuple(m + k * a for m, a in
                           zip(rd.reflect(alpha, mu), rd.root_vector(alpha)))
                f2 = op.terms.get(nu)
                total = None
                for f in (f1, f2):
                    if f is None:
                        continue
                    total = f if total is None else total + f
                if total is None:
                    continue
                if pole_order(total, alpha, k) == 0:
                    continue
                denom = dict(total.denom)
                denom[(alpha, k)] -= 1
                if not denom[(alpha, k)]:
                    del denom[(alpha, k)]
                stripped = LocalizedCoeff(total.num, denom, canonical=False)
                val = _divisor_substitute(stripped, alpha, k)
                if not val.is_zero():
                    report.residue_violations.append((alpha, k, mu))
            if check_symmetry:
                _check_symmetry_instances(op, rd, alpha, k, report)
    return report


def _check_symmetry_instances(op, rd, alpha, k, report):
    """Order -1 and order 0 instances of the graded symmetry condition for a
    Weyl-invariant operator."""
    avec = rd.root_vector(alpha)
    for mu, f in op.terms.items():
        smu = rd.reflect(alpha, mu)
        g = op.terms.get(smu)
        if g is None:
            g = LocalizedCoeff(WPoly.zero(op.N, QFrac))
        shifted = g.qshift(tuple(k * a for a in avec))
        m = max(pole_order(f, alpha, k), pole_order(shifted, alpha, k))
        if m == 0:
            # order 0: restrictions agree
            diff = f - shifted
            if pole_order(diff, alpha, k):
                report.symmetry_violations.append((alpha, k, mu, 0))
                continue
            if not _divisor_substitute(diff, alpha, k).is_zero():
                report.symmetry_violations.append((alpha, k, mu, 0))
        else:
            total = f + shifted
            if pole_order(total, alpha, k) > 1:
                report.symmetry_violations.append((alpha, k, mu, -1))
                continue
            denom = dict(total.denom)
            if (alpha, k) in denom:
                denom[(alpha, k)] -= 1
                if not denom[(alpha, k)]:
                    del denom[(alpha, k)]
                stripped = LocalizedCoeff(total.num, denom, canonical=False)
                if not _divisor_substitute(stripped, alpha, k).is_zero():
                    report.symmetry_violations.append((alpha, k, mu, -1))


def minuscule(rd: RootData, k: int, f: WPoly = None, l: int = 0) -> QDiffOp:
    """The minuscule element R_{omega}[f] for omega = omega_k + l omega_{n+1}.

    R_omega[f] = sum over k-subsets I of sigma_I(f(w) d_omega(w) D^omega)
    with d_omega = prod_{<alpha,omega>=1} (1 - w_alpha)^{-1}; f must be
    invariant under the stabilizer S_k x S_{n+1-k}.
    """
    N = rd.N
    if f is None:
        f = WPoly.one(N, QFrac)
    _check_stabilizer_invariance(f, k)
    omega = rd.minuscule_weight(k, l)
    denom = {}
    for alpha in rd.positive_roots:
        if rd.root_pairing(alpha, omega) == 1:
            denom[(alpha, 0)] = 1
    base = LocalizedCoeff(f, denom, canonical=False)
    out = {}
    for I in combinations(range(N), k):
        rest = [i for i in range(N) if i not in I]
        sigma = [0] * N
        for pos, i in enumerate(sorted(I)):
            sigma[pos] = i
        for pos, i in enumerate(rest):
            sigma[k + pos] = i
        mu = tuple((1 if i in I else 0) + l for i in range(N))
        out[mu] = base.permuted(tuple(sigma))
    return QDiffOp(N, out)


def _check_stabilizer_invariance(f: WPoly, k: int):
    n = f.nvars
    for i in list(range(k - 1)) + list(range(k, n - 1)):
        sigma = list(range(n))
        sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
        if f.permuted(tuple(sigma)) != f:
            raise ValueError("dressing is not stabilizer-invariant")


def apply_to_symmetric(op: QDiffOp, g: WPoly) -> WPoly:
    """Apply a residue-algebra element to a symmetric Laurent polynomial:
    D_i acts by w_i -> q^2 w_i, and all divisor denominators must clear
    exactly (failure signals non-membership)."""
    if not g.is_symmetric():
        raise ValueError("input is not symmetric")
    total = None
    for mu, f in op.terms.items():
        piece = f * LocalizedCoeff(g.qshift(mu))
        total = piece if total is None else total + piece
    if total is None:
        return WPoly.zero(op.N, QFrac)
    if not total.is_polynomial():
        raise ValueError("denominators do not clear: operator is not in the "
                         "residue algebra or input not symmetric")
    return total.num
