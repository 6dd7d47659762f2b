"""Tropical X-variables, sign-coherent mutation, and the tropical criterion
for equality of quantum cluster transformations.
"""

from __future__ import annotations

from .quiver import Mutate, QuasiPermutation, _int_inverse, _mat, pos


class SignCoherenceError(RuntimeError):
    """A tropical variable acquired mixed signs (an implementation bug)."""


class TropState:
    """Tropical variables: one Laurent monomial in the initial y's per label.

    ``vars[label]`` is an integer exponent vector over the initial labels
    (whose order is fixed by ``initial_labels``).
    """

    __slots__ = ("initial_labels", "vars")

    def __init__(self, initial_labels, vars):
        self.initial_labels = tuple(initial_labels)
        self.vars = {l: tuple(v) for l, v in vars.items()}

    @classmethod
    def identity(cls, quiver):
        n = quiver.n
        return cls(quiver.labels,
                   {l: tuple(1 if j == i else 0 for j in range(n))
                    for i, l in enumerate(quiver.labels)})

    def sign(self, label):
        v = self.vars[label]
        if any(x > 0 for x in v) and all(x >= 0 for x in v):
            return 1
        if any(x < 0 for x in v) and all(x <= 0 for x in v):
            return -1
        raise SignCoherenceError(
            f"tropical variable {label!r} = {v} is not sign-coherent")

    def mutated(self, quiver, k):
        """Tropical mutation at mutable k: y'_k = y_k^{-1},
        y'_i = y_i y_k^{[sigma(y_k) eps_{ki}]_+}."""
        if not quiver.is_mutable(k):
            raise ValueError(f"direction {k!r} is frozen")
        sigma = self.sign(k)
        yk = self.vars[k]
        ki = quiver.index(k)
        out = {}
        for i, l in enumerate(quiver.labels):
            if l == k:
                out[l] = tuple(-x for x in yk)
                continue
            e2 = quiver.form2[ki][i]
            if e2 % 2:
                raise ValueError("epsilon_{ki} not integral on a mutable row")
            p = pos(sigma * (e2 // 2))
            out[l] = tuple(x + p * y for x, y in zip(self.vars[l], yk))
        state = TropState(self.initial_labels, out)
        for l in quiver.mutable_labels():
            state.sign(l)
        return state

    def permuted(self, qperm: QuasiPermutation, source, target):
        """Transport under a quasi-permutation from source to target quiver."""
        p = qperm.matrix(source, target)
        pinv = _int_inverse(p)
        rows = [self.vars[l] for l in source.labels]
        out = {}
        for j, l in enumerate(target.labels):
            vec = [0] * len(self.initial_labels)
            for i in range(len(rows)):
                c = pinv[j][i]
                if c:
                    vec = [a + c * b for a, b in zip(vec, rows[i])]
            out[l] = tuple(vec)
        return TropState(self.initial_labels, out)

    def monomial_str(self, label):
        v = self.vars[label]
        bits = [f"y[{l}]^{x}" for l, x in zip(self.initial_labels, v) if x]
        return "*".join(bits) or "1"

    def __eq__(self, other):
        if not isinstance(other, TropState):
            return NotImplemented
        return (self.initial_labels == other.initial_labels
                and self.vars == other.vars)

    def __repr__(self):
        return f"TropState({self.vars})"


def run_tropical(quiver, steps):
    """Execute a mutation script tropically; returns (end quiver, TropState)."""
    state = TropState.identity(quiver)
    cur = quiver
    for s in steps:
        if isinstance(s, Mutate):
            state = state.mutated(cur, s.label)
            cur, _ = cur.mutate(s.label)
        elif isinstance(s, QuasiPermutation):
            nxt = _permuted_quiver(cur, s)
            state = state.permuted(s, cur, nxt)
            cur = nxt
        else:
            raise TypeError(f"unknown script step {s!r}")
    return cur, state


def _permuted_quiver(quiver, qperm: QuasiPermutation):
    """Target quiver of a quasi-permutation (form transported by isometry)."""
    from .quiver import Quiver, _matmul, _transpose
    p = qperm.matrix(quiver, quiver)
    pinv = _int_inverse(p)
    f2 = _matmul(_matmul(pinv, quiver.form2), _transpose(pinv))
    out = Quiver(quiver.labels, f2, quiver.frozen, quiver.qden)
    qperm.check_isometry(quiver, out)
    return out


class TropReport:
    """Outcome of comparing two scripts via the tropical criterion."""

    def __init__(self, equal, mutable_mismatches, frozen_mismatches,
                 endpoint_match, uses_quasi_permutations):
        self.equal = equal
        self.mutable_mismatches = mutable_mismatches
        self.frozen_mismatches = frozen_mismatches
        self.endpoint_match = endpoint_match
        self.uses_quasi_permutations = uses_quasi_permutations

    def __bool__(self):
        return self.equal

    def summary(self):
        note = (" [extended criterion: script contains quasi-permutations]"
                if self.uses_quasi_permutations else "")
        if self.equal:
            return "tropical data equal; quantum transformations agree" + note
        bits = []
        if not self.endpoint_match:
            bits.append("endpoint quivers differ")
        if self.mutable_mismatches:
            bits.append(f"mutable mismatches at {sorted(self.mutable_mismatches)}")
        if self.frozen_mismatches:
            bits.append(f"frozen mismatches at {sorted(self.frozen_mismatches)}")
        return "; ".join(bits) + note


def trop_equal(quiver, script1, script2) -> TropReport:
    """Decide equality of two quantum cluster transformations tropically.

    Both scripts must start at ``quiver`` and end at quivers with identical
    label sets.  Equality of the full tropical data (frozen labels included)
    certifies equality of the quantum transformations; the criterion is the
    mutation-only theorem extended to quasi-permutation scripts, and the
    report records when that extension is being used.
    """
    q1, s1 = run_tropical(quiver, script1)
    q2, s2 = run_tropical(quiver, script2)
    if set(q1.labels) != set(q2.labels):
        raise ValueError("endpoint quivers have different label sets")
    endpoint_match = q1 == q2
    mutable_bad = []
    frozen_bad = []
    for l in q1.labels:
        if s1.vars[l] != s2.vars[l]:
            (frozen_bad if l in q1.frozen else mutable_bad).append(l)
    uses_qp = any(isinstance(s, QuasiPermutation) for s in list(script1) + list(script2))
    equal = endpoint_match and not mutable_bad and not frozen_bad
    return TropReport(equal, mutable_bad, frozen_bad, endpoint_match, uses_qp)
