"""Quantum mutation of torus elements along scripts, and Laurentness checks.

Elements are kept in the coordinates of the current chart; a mutation in
direction k acts on an element f as the dilogarithm conjugation
Ad(Psi(Y_{-e_k})) followed by the basis change of the chart (the sharp
factorization of the quantum cluster X-mutation), so after every step the
chart is again in standard coordinates.
"""

from __future__ import annotations

from .quiver import CompatiblePair, Mutate, Quiver, QuasiPermutation
from .torus import (NotLaurentError, RationalTorusElement, TorusElement,
                    dilog_adjoint, try_laurent)
from .tropical import TropState, _permuted_quiver


def _adjoint_rational(elem, v, inverse=False):
    """Dilog adjoint extended to rational elements with binomial denominators."""
    if isinstance(elem, TorusElement):
        return dilog_adjoint(elem, v, inverse)
    alg = elem.algebra
    if all(alg.pairing2(v, u) == 0 for u, _ in elem.denominators):
        num = dilog_adjoint(elem.numerator, v, inverse)
        return RationalTorusElement(
            num.numerator, list(elem.denominators) + list(num.denominators),
            normalize=False)
    # denominators would leave the binomial class; collapse if possible
    collapsed = elem.to_torus()  # raises NotLaurentError when impossible
    return dilog_adjoint(collapsed, v, inverse)


def mutate_x(elem, chart, k):
    """Quantum cluster X-mutation of an element in the chart of ``chart``.

    Returns (mutated element, mutated chart).  ``chart`` is a Quiver or a
    CompatiblePair; elements over a pair live in xi-coordinates.
    """
    if isinstance(chart, CompatiblePair):
        e_k = chart.e_vector(k)
        v = tuple(-x for x in e_k)
        out = _adjoint_rational(elem, v)
        pair, _, xmap = chart.mutate(k)
        out = out.apply_lattice_map(xmap, pair)
        return out, pair
    e_k = chart.basis_vector(k)
    v = tuple(-x for x in e_k)
    out = _adjoint_rational(elem, v)
    quiver, emap = chart.mutate(k)
    out = out.apply_lattice_map(emap, quiver)
    return out, quiver


class ScriptRunner:
    """Transports torus elements and tropical data along a mutation script."""

    def __init__(self, chart, elements=()):
        self.chart = chart
        self.quiver = chart.quiver() if isinstance(chart, CompatiblePair) else chart
        self.elements = list(elements)
        self.trop = TropState.identity(self.quiver)

    def mutate(self, k):
        if isinstance(self.chart, CompatiblePair):
            e_k = self.chart.e_vector(k)
            v = tuple(-x for x in e_k)
            pair, _, xmap = self.chart.mutate(k)
            self.elements = [
                _adjoint_rational(e, v).apply_lattice_map(xmap, pair)
                for e in self.elements]
            self.trop = self.trop.mutated(self.quiver, k)
            self.chart = pair
            self.quiver = pair.quiver()
        else:
            v = tuple(-x for x in self.chart.basis_vector(k))
            quiver, emap = self.chart.mutate(k)
            self.elements = [
                _adjoint_rational(e, v).apply_lattice_map(emap, quiver)
                for e in self.elements]
            self.trop = self.trop.mutated(self.quiver, k)
            self.chart = quiver
            self.quiver = quiver

    def permute(self, qperm: QuasiPermutation):
        if isinstance(self.chart, CompatiblePair):
            if qperm.frozen_images:
                raise ValueError("pair charts support label-to-label "
                                 "permutations only")
            nxt_quiver = _permuted_quiver(self.quiver, qperm)
            perm = {l: qperm.mapping.get(l, l) for l in self.chart.labels}
            inv = {w: l for l, w in perm.items()}
            n = self.chart.n
            idx = [self.chart.index(inv[l]) for l in self.chart.labels]
            b = [[self.chart.b[idx[i]][idx[j]] for j in range(n)] for i in range(n)]
            k2 = [[self.chart.kappa2[idx[i]][idx[j]] for j in range(n)]
                  for i in range(n)]
            pair = CompatiblePair(self.chart.labels, b, k2, self.chart.frozen,
                                  self.chart.qden)
            m = qperm.matrix(self.quiver, nxt_quiver)
            self.elements = [e.apply_lattice_map(m, pair) for e in self.elements]
            self.trop = self.trop.permuted(qperm, self.quiver, nxt_quiver)
            self.chart = pair
            self.quiver = pair.quiver()
            if self.quiver != nxt_quiver:
                raise ValueError("permutation is not an isometry of the pair")
        else:
            nxt = _permuted_quiver(self.quiver, qperm)
            m = qperm.matrix(self.quiver, nxt)
            self.elements = [e.apply_lattice_map(m, nxt) for e in self.elements]
            self.trop = self.trop.permuted(qperm, self.quiver, nxt)
            self.chart = nxt
            self.quiver = nxt

    def certify_laurent(self):
        """Collapse every element to Laurent form, raising if one is not."""
        self.elements = [try_laurent(e) for e in self.elements]

    def run(self, steps, certify=False):
        for s in steps:
            if isinstance(s, Mutate):
                self.mutate(s.label)
            elif isinstance(s, QuasiPermutation):
                self.permute(s)
            else:
                raise TypeError(f"unknown script step {s!r}")
            if certify:
                self.certify_laurent()
        return self


def one_step_laurent_check(elem, chart):
    """Apply every 1-step mutation and test Laurentness of the image.

    Returns a dict label -> True/False; the element is a universal-Laurent
    candidate iff every entry is True.
    """
    report = {}
    for k in chart.mutable_labels():
        image, _ = mutate_x(elem, chart, k)
        try:
            try_laurent(image)
            report[k] = True
        except NotLaurentError:
            report[k] = False
    return report


def is_one_step_laurent(elem, chart):
    return all(one_step_laurent_check(elem, chart).values())
