"""q-Whittaker polynomials, Pieri rules, and the algebraic Whittaker
transform between finitely supported functions on the dominant cone and
symmetric Laurent polynomials.

Two independent computations of the polynomials are provided: the direct
Gelfand-Zeitlin sum and the iterated recursion-operator expansion; their
agreement is an oracle test.
"""

from __future__ import annotations

from .coeffs import QCoeff, QFrac
from .qseries import qbinomial
from .toda import FockFunction
from .wlaurent import WPoly, dominance_less, dominant_key


def is_dominant(lam):
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


class NonDominantError(ValueError):
    """The q-Whittaker series does not truncate off the dominant cone."""


def _qbinom_coeff(m, k) -> QCoeff:
    """Gaussian binomial as an integer Laurent polynomial in q (m >= k >= 0)."""
    frac = qbinomial(m, k)
    lau = frac.as_laurent()
    return QCoeff({2 * e: (c, 0) for e, c in lau.items()}, 2)


def gz_interlacing(lam):
    """All partitions mu with lam_j >= mu_j >= lam_{j+1}."""
    if len(lam) == 1:
        yield ()
        return
    ranges = [range(lam[j + 1], lam[j] + 1) for j in range(len(lam) - 1)]

    def rec(j, cur):
        if j == len(ranges):
            yield tuple(cur)
            return
        for v in ranges[j]:
            if j == 0 or cur[-1] >= v:
                yield from rec(j + 1, cur + [v])
    yield from rec(0, [])


def whittaker_gz(lam) -> WPoly:
    """The q-Whittaker polynomial as a Gelfand-Zeitlin sum (dominant lam).

    W(lam) = sum over GZ arrays with top row lam of the product of Gaussian
    binomials binom(l^{(i+1)}_j - l^{(i+1)}_{j+1}, l^{(i+1)}_j - l^{(i)}_j)
    times prod_k w_k^{|l^{(k)}| - |l^{(k-1)}|}.
    """
    lam = tuple(lam)
    if not is_dominant(lam):
        raise NonDominantError(f"{lam} is not dominant; the sum does not "
                               "truncate")
    N = len(lam)
    out = {}

    def rec(row, coeff, wexps):
        if len(row) == 1:
            mono = tuple(wexps + [row[0]])[::-1]
            # wexps collected top-down: w_N exponent first; reverse at the end
            key = mono
            cur = out.get(key)
            cur = coeff if cur is None else cur + coeff
            if cur.is_zero():
                out.pop(key, None)
            else:
                out[key] = cur
            return
        for mu in gz_interlacing(row):
            c = coeff
            for j in range(len(row) - 1):
                c = c * _qbinom_coeff(row[j] - row[j + 1], row[j] - mu[j])
                if c.is_zero():
                    break
            else:
                rec(mu, c, wexps + [sum(row) - sum(mu)])
    rec(list(lam), QCoeff.one(), [])
    return WPoly(N, out, QCoeff)


def recursion_apply(psi, lam):
    """The recursion-operator expansion at a weight lam:

        (R(z) psi)(lam) = sum_{r >= 0} z^{|r|}
                          prod_j binom(lam_j - lam_{j+1}, r_j)_{q^2}
                          psi(lam_1 - r_1, ..., lam_m - r_m),

    with lam of length m+1 and psi a map on m-tuples (values must support
    addition and ``.scale``).  Returns a dict z-degree -> value.  Requires
    the gaps lam_j - lam_{j+1} to be nonnegative so the sum truncates.
    """
    lam = tuple(lam)
    m = len(lam) - 1
    gaps = [lam[j] - lam[j + 1] for j in range(m)]
    if any(g < 0 for g in gaps):
        raise NonDominantError("recursion series does not truncate off the "
                               "dominant cone")
    out = {}

    def rec(j, r, coeff):
        if j == m:
            val = psi(tuple(lam[t] - r[t] for t in range(m)))
            if val is None:
                return
            key = sum(r)
            term = val.scale(coeff)
            cur = out.get(key)
            out[key] = term if cur is None else cur + term
            return
        for rj in range(gaps[j] + 1):
            c = coeff * _qbinom_coeff(gaps[j], rj)
            if not c.is_zero():
                rec(j + 1, r + [rj], c)

    rec(0, [], QCoeff.one())
    return out


_WR_CACHE = {}


def whittaker_recursion(lam) -> WPoly:
    """The q-Whittaker polynomial via iterated recursion operators
    (an algorithm independent of the direct GZ sum)."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise NonDominantError(f"{lam} is not dominant")
    got = _WR_CACHE.get(lam)
    if got is not None:
        return got
    N = len(lam)
    if N == 1:
        out = WPoly.monomial(1, lam, ring=QCoeff)
        _WR_CACHE[lam] = out
        return out

    def inner(w):
        p = whittaker_recursion(w)
        return WPoly(N, {mono + (0,): c for mono, c in p.terms.items()}, QCoeff)

    expansion = recursion_apply(inner, lam)
    out = WPoly.zero(N, QCoeff)
    for d, val in expansion.items():
        wN = WPoly.monomial(N, (0,) * (N - 1) + (lam[-1] + d,), ring=QCoeff)
        out = out + wN * val
    _WR_CACHE[lam] = out
    return out


_W_CACHE = {}


def whittaker_poly(lam) -> WPoly:
    """Cached q-Whittaker polynomial (GZ route)."""
    lam = tuple(lam)
    got = _W_CACHE.get(lam)
    if got is None:
        got = _W_CACHE[lam] = whittaker_gz(lam)
    return got


def whittaker_bar(lam) -> WPoly:
    return whittaker_poly(lam).bar()


def pieri_rhs(lam, k) -> WPoly:
    """sum_{|I|=k} prod_{m in G(I)} (1 - q^{2(lam_m - lam_{m+1})}) W_{lam+eps_I}."""
    from itertools import combinations
    lam = tuple(lam)
    N = len(lam)
    out = WPoly.zero(N, QCoeff)
    for I in combinations(range(N), k):
        Iset = set(I)
        coeff = QCoeff.one()
        ok = True
        for m in range(N - 1):
            if m not in Iset and (m + 1) in Iset:
                gap = lam[m] - lam[m + 1]
                f = QCoeff.one() - QCoeff.q_power(2 * gap)
                if f.is_zero():
                    ok = False
                    break
                coeff = coeff * f
        if not ok:
            continue
        shifted = tuple(l + (1 if i in Iset else 0) for i, l in enumerate(lam))
        out = out + whittaker_poly(shifted).scale(coeff)
    return out


def pieri_check(n, k, lam) -> bool:
    """e_k(w) W_lam = sum_I prod (1 - q^{2(lam_m - lam_{m+1})}) W_{lam + eps_I}."""
    lam = tuple(lam)
    if len(lam) != n + 1:
        raise ValueError("weight length does not match the rank")
    lhs = WPoly.elementary(n + 1, k, QCoeff) * whittaker_poly(lam)
    return lhs == pieri_rhs(lam, k)


# ---------------------------------------------------------------------------
# the transform


def whittaker_transform(f: FockFunction) -> WPoly:
    """W(f) = sum_lam f(lam) bar(W_lam); requires dominant support."""
    if not f.is_dominant():
        raise NonDominantError("transform input must be supported on the "
                               "dominant cone")
    out = WPoly.zero(f.N, QCoeff)
    for lam, c in f.terms.items():
        out = out + whittaker_bar(lam).scale(c)
    return out


def whittaker_transform_inverse(g: WPoly) -> FockFunction:
    """Expand a symmetric Laurent polynomial in the bar-Whittaker basis.

    Uses the dominance triangularity: bar(W_lam) has the monomial w^lam with
    coefficient 1 and all other monomials lower in dominance order.
    """
    if not g.is_symmetric():
        raise ValueError("input is not in the span: it is not symmetric")
    N = g.nvars
    out = {}
    cur = g
    guard = 0
    while not cur.is_zero():
        guard += 1
        if guard > 100000:
            raise RuntimeError("triangular expansion did not terminate")
        doms = {dominant_key(m) for m in cur.terms}
        lam = None
        for cand in doms:
            if not any(dominance_less(cand, other) for other in doms
                       if other != cand):
                lam = cand
                break
        c = cur.coefficient(lam)
        out[lam] = c
        cur = cur - whittaker_bar(lam).scale(c)
        if dominant_key(lam) in {dominant_key(m) for m in cur.terms}:
            if cur.coefficient(lam) == c:
                raise ValueError("input is not in the bar-Whittaker span")
    return FockFunction(N, out)


def wpoly_to_qfrac(p: WPoly) -> WPoly:
    return p.map_coeffs(QFrac.from_qcoeff, QFrac)


def wpoly_to_qcoeff(p: WPoly) -> WPoly:
    def conv(c):
        lau = c.as_laurent()
        den = c.den
        return QCoeff({e * (2 // den) if den in (1, 2) else e: (v, 0)
                       for e, v in lau.items()}, 2 if den in (1, 2) else den)
    return p.map_coeffs(conv, QCoeff)


def verify_intertwining(n, bound=4):
    """Check the transform intertwinings on delta functions:

      W(H_k delta_lam) = (-q)^{-k} e_k(w) W(delta_lam),
      W(A_{t_k} delta_lam) = (-q)^{k(1-k)/2} R_{omega_k} W(delta_lam),
      W(A_{s_k} delta_lam) = (-1)^k (-q)^{k(1-k)/2} R_{omega_k}[e_k x 1]
                             W(delta_lam),

    for all dominant lam >= 0 with |lam| <= bound.  Returns a list of
    failures (empty = pass).
    """
    from .residue import RootData, apply_to_symmetric, minuscule
    from .toda import TodaChain, extract_hamiltonians, toda_rep_apply
    chain = TodaChain(n)
    hams = extract_hamiltonians(n)
    rd = RootData(n)
    failures = []
    lams = [l for l in _dominant_weights(n + 1, bound)]
    ek_dressings = {}
    for k in range(1, n + 2):
        # the dressing e_k (x) 1 = w_1...w_k (stabilizer-invariant)
        mono = tuple(1 if i < k else 0 for i in range(n + 1))
        ek_dressings[k] = WPoly.monomial(n + 1, mono, ring=QFrac)
    for lam in lams:
        f = FockFunction.delta(lam)
        wf = whittaker_transform(f)
        for k in range(1, n + 2):
            lhs = whittaker_transform(toda_rep_apply(chain, hams[k], f))
            rhs = (WPoly.elementary(n + 1, k, QCoeff) * wf).scale(
                QCoeff.minus_q_power(-k))
            if lhs != rhs:
                failures.append(("H", k, lam))
        for k in range(1, n + 2):
            # A_{t_k} = Y_{xi_{t_k}} acts diagonally
            at = chain.generator(f"t{k}")
            lhs = whittaker_transform(toda_rep_apply(chain, at, f))
            R = minuscule(rd, k)
            rhs_frac = apply_to_symmetric(R, wpoly_to_qfrac(wf))
            exp = k * (1 - k) // 2
            rhs = wpoly_to_qcoeff(rhs_frac).scale(QCoeff.minus_q_power(exp))
            if lhs != rhs:
                failures.append(("A_t", k, lam))
            a_s = chain.generator(f"s{k}")
            lhs2 = whittaker_transform(toda_rep_apply(chain, a_s, f))
            Rk = minuscule(rd, k, ek_dressings[k])
            rhs2_frac = apply_to_symmetric(Rk, wpoly_to_qfrac(wf))
            sc = QCoeff.minus_q_power(exp)
            if k % 2:
                sc = -sc
            rhs2 = wpoly_to_qcoeff(rhs2_frac).scale(sc)
            if lhs2 != rhs2:
                failures.append(("A_s", k, lam))
    return failures


def _dominant_weights(N, bound):
    """Dominant lam with entries >= 0 and |lam| <= bound."""
    def rec(cur, rest, cap):
        if len(cur) == N:
            yield tuple(cur)
            return
        for v in range(min(rest, cap), -1, -1):
            yield from rec(cur + [v], rest - v, v)
    yield from rec([], bound, bound)
