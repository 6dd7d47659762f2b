"""Quivers, compatible pairs, mutations, quasi-permutations, mutation scripts.

Conventions:

* the skew form is stored doubled: ``form2[i][j] = 2*(e_i, e_j)``, so all
  matrices are integer (paper forms take values in (1/2)Z);
* a compatible pair stores the integer ensemble matrix ``b`` whose columns
  expand e_j in the xi-basis, together with ``kappa2[i][j] = 2*(xi_i, xi_j)``;
* labels are opaque strings; serialization fixes their order.

Mutation of a pair returns the mutated pair together with the two explicit
basis isometries (e-basis map and xi-basis map), as matrices whose rows are
the old basis vectors expressed in the new basis.
"""

from __future__ import annotations

import json


def _mat(rows):
    return tuple(tuple(r) for r in rows)


def _identity(n):
    return _mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return _mat([[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)]
                 for i in range(n)])


def _transpose(a):
    return _mat(zip(*a)) if a else ()


def _matvec(a, v):
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def _vecmat(v, a):
    return tuple(sum(v[k] * a[k][j] for k in range(len(v))) for j in range(len(a[0])))


def _int_inverse(a):
    """Inverse of a unimodular integer matrix, exact; raises if not unimodular."""
    from fractions import Fraction
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            x = aug[i][n + j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular over Z")
            row.append(int(x))
        inv.append(row)
    return _mat(inv)


def pos(a):
    """[a]_+ = max(a, 0)."""
    return a if a > 0 else 0


class QuiverError(ValueError):
    pass


class Quiver:
    """Label set with frozen subset and doubled skew form on the e-basis."""

    def __init__(self, labels, form2, frozen=(), qden: int = 2):
        self.labels = tuple(labels)
        self.form2 = _mat(form2)
        self.frozen = frozenset(frozen)
        self.qden = qden
        self._index = {l: i for i, l in enumerate(self.labels)}
        self._validate()

    def _validate(self):
        n = len(self.labels)
        if len(self.form2) != n or any(len(r) != n for r in self.form2):
            raise QuiverError("form2 has wrong shape")
        for i in range(n):
            for j in range(n):
                if self.form2[i][j] != -self.form2[j][i]:
                    raise QuiverError("form2 is not skew-symmetric")
        for l in self.frozen:
            if l not in self._index:
                raise QuiverError(f"frozen label {l!r} not in label set")
        for i, l in enumerate(self.labels):
            if l in self.frozen:
                continue
            for j in range(n):
                if self.form2[i][j] % 2:
                    raise QuiverError(
                        f"epsilon is not integral on mutable row {l!r}")

    # -- basic queries -------------------------------------------------------

    @property
    def n(self):
        return len(self.labels)

    def index(self, label):
        return self._index[label]

    def is_mutable(self, label):
        return label in self._index and label not in self.frozen

    def mutable_labels(self):
        return tuple(l for l in self.labels if l not in self.frozen)

    def epsilon2(self, i, j):
        """2 * epsilon_{ij} by label or index."""
        if not isinstance(i, int):
            i = self._index[i]
        if not isinstance(j, int):
            j = self._index[j]
        return self.form2[i][j]

    def pairing2(self, v, w):
        """2 * (v, w) for integer vectors in e-coordinates."""
        return sum(vi * sum(self.form2[i][j] * w[j] for j in range(len(w)))
                   for i, vi in enumerate(v) if vi)

    def basis_vector(self, label):
        i = self._index[label]
        return tuple(1 if j == i else 0 for j in range(self.n))

    # -- mutation -------------------------------------------------------------

    def mutate(self, k):
        """Mutate in direction k; returns (new quiver, e-basis map).

        The map is the matrix M with rows = old basis vectors in the new
        basis: mu_k(e_i) = sum_j M[i][j] e'_j.
        """
        if not self.is_mutable(k):
            raise QuiverError(f"direction {k!r} is frozen or missing")
        ki = self._index[k]
        n = self.n
        rows = []
        for i in range(n):
            if i == ki:
                rows.append([-1 if j == ki else 0 for j in range(n)])
            else:
                row = [1 if j == i else 0 for j in range(n)]
                row[ki] = pos(self.form2[i][ki] // 2) if i != ki else row[ki]
                rows.append(row)
        m = _mat(rows)
        # the map is an involution, so m also expresses the new basis in the
        # old one: (e'_i, e'_j) = (m form2 m^t)_{ij}
        f2 = _matmul(_matmul(m, self.form2), _transpose(m))
        return Quiver(self.labels, f2, self.frozen, self.qden), m

    def classical_mutated_epsilon2(self, k):
        """Classical exchange-matrix mutation rule, doubled (oracle path)."""
        ki = self._index[k]
        n = self.n
        e = self.form2
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == ki or j == ki:
                    out[i][j] = -e[i][j]
                else:
                    out[i][j] = e[i][j] + (abs(e[i][ki]) * e[ki][j]
                                           + e[i][ki] * abs(e[ki][j])) // 2
        return _mat(out)

    def relabel(self, mapping):
        """Rename labels (bijective dict); order is preserved."""
        labels = tuple(mapping.get(l, l) for l in self.labels)
        frozen = frozenset(mapping.get(l, l) for l in self.frozen)
        return Quiver(labels, self.form2, frozen, self.qden)

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        if set(self.labels) != set(other.labels) or self.frozen != other.frozen:
            return False
        perm = [other._index[l] for l in self.labels]
        for i in range(self.n):
            for j in range(self.n):
                if self.form2[i][j] != other.form2[perm[i]][perm[j]]:
                    return False
        return True

    def __hash__(self):
        order = sorted(range(self.n), key=lambda i: self.labels[i])
        return hash((tuple(self.labels[i] for i in order), self.frozen,
                     tuple(tuple(self.form2[i][j] for j in order) for i in order)))

    def __repr__(self):
        return f"Quiver({len(self.labels)} labels, {len(self.frozen)} frozen)"

    # -- serialization ----------------------------------------------------------

    def to_json(self):
        return {"labels": list(self.labels),
                "frozen": sorted(self.frozen),
                "epsilon2": [list(r) for r in self.form2],
                "qDenominator": self.qden}

    @classmethod
    def from_json(cls, data):
        return cls(data["labels"], data["epsilon2"], data.get("frozen", ()),
                   data.get("qDenominator", 2))


class CompatiblePair:
    """Quiver extended to a compatible pair (ensemble matrix + xi-form).

    ``b`` is the integer ensemble matrix: e_j = sum_i b[i][j] xi_i.
    ``kappa2`` is 2*(xi_i, xi_j), an integer matrix.
    """

    def __init__(self, labels, b, kappa2, frozen=(), qden: int = 2):
        self.labels = tuple(labels)
        self.b = _mat(b)
        self.kappa2 = _mat(kappa2)
        self.frozen = frozenset(frozen)
        self.qden = qden
        self._index = {l: i for i, l in enumerate(self.labels)}
        self._form2 = None
        self._validate()

    def _validate(self):
        n = len(self.labels)
        for name, m in (("b", self.b), ("kappa2", self.kappa2)):
            if len(m) != n or any(len(r) != n for r in m):
                raise QuiverError(f"{name} has wrong shape")
        for i in range(n):
            for j in range(n):
                if self.kappa2[i][j] != -self.kappa2[j][i]:
                    raise QuiverError("kappa is not skew-symmetric")
        # compatibility: (e_i, xi_j) = delta_ij on mutable rows,
        # i.e. btilde^t kappa = [Id | 0]
        for i, l in enumerate(self.labels):
            if l in self.frozen:
                continue
            for j in range(n):
                val = sum(self.b[r][i] * self.kappa2[r][j] for r in range(n))
                want = 2 if i == j else 0
                if val != want:
                    raise QuiverError(
                        f"compatibility (e_{l}, xi_{self.labels[j]}) failed")
        # mutable rows of b coincide with the corresponding rows of epsilon
        f2 = self.form2
        for i, l in enumerate(self.labels):
            if l in self.frozen:
                continue
            for j in range(n):
                if f2[i][j] != 2 * self.b[i][j]:
                    raise QuiverError(f"row {l!r} of b differs from epsilon")

    @property
    def form2(self):
        if self._form2 is None:
            bt = _transpose(self.b)
            self._form2 = _matmul(_matmul(bt, self.kappa2), self.b)
        return self._form2

    @property
    def n(self):
        return len(self.labels)

    def index(self, label):
        return self._index[label]

    def is_mutable(self, label):
        return label in self._index and label not in self.frozen

    def mutable_labels(self):
        return tuple(l for l in self.labels if l not in self.frozen)

    def quiver(self):
        return Quiver(self.labels, self.form2, self.frozen, self.qden)

    def pairing2(self, v, w):
        """2 * (v, w) for integer vectors in xi-coordinates."""
        return sum(vi * sum(self.kappa2[i][j] * w[j] for j in range(len(w)))
                   for i, vi in enumerate(v) if vi)

    def e_vector(self, label):
        """e_label in xi-coordinates (a column of b)."""
        j = self._index[label]
        return tuple(self.b[i][j] for i in range(self.n))

    def xi_vector(self, label):
        i = self._index[label]
        return tuple(1 if j == i else 0 for j in range(self.n))

    # -- mutation ---------------------------------------------------------------

    def mutate(self, k):
        """Mutate the pair in direction k.

        Returns (new pair, e-basis map, xi-basis map); both maps have rows =
        old basis vectors expressed in the new basis.
        """
        if not self.is_mutable(k):
            raise QuiverError(f"direction {k!r} is frozen or missing")
        ki = self._index[k]
        n = self.n
        eps2 = self.form2
        # xi-map (eq. for the xi-basis): xi_k = -xi'_k + sum_{j != k}[b_jk]+ xi'_j
        xmap = []
        for i in range(n):
            if i == ki:
                row = [pos(self.b[j][ki]) for j in range(n)]
                row[ki] = -1
            else:
                row = [1 if j == i else 0 for j in range(n)]
            xmap.append(row)
        xmap = _mat(xmap)
        # e-map: mu_k(e_i) = e'_i + [eps_ik]+ e'_k, mu_k(e_k) = -e'_k
        emap = []
        for i in range(n):
            if i == ki:
                emap.append([-1 if j == ki else 0 for j in range(n)])
            else:
                row = [1 if j == i else 0 for j in range(n)]
                row[ki] = pos(eps2[i][ki] // 2)
                emap.append(row)
        emap = _mat(emap)
        # both basis maps are involutions: the same matrix converts old
        # coordinates to new ones and expresses the new basis in the old
        xinv = xmap
        kappa2 = _matmul(_matmul(xinv, self.kappa2), _transpose(xinv))
        einv = emap
        new_b_cols = []
        for i in range(n):
            e_old = _vecmat(einv[i], _transpose(self.b))  # e'_i in old xi-coords
            new_b_cols.append(_vecmat(e_old, xmap))       # ... in new xi-coords
        b_new = _transpose(_mat(new_b_cols))
        pair = CompatiblePair(self.labels, b_new, kappa2, self.frozen, self.qden)
        return pair, emap, xmap

    def relabel(self, mapping):
        labels = tuple(mapping.get(l, l) for l in self.labels)
        frozen = frozenset(mapping.get(l, l) for l in self.frozen)
        return CompatiblePair(labels, self.b, self.kappa2, frozen, self.qden)

    def __eq__(self, other):
        if not isinstance(other, CompatiblePair):
            return NotImplemented
        if set(self.labels) != set(other.labels) or self.frozen != other.frozen:
            return False
        perm = [other._index[l] for l in self.labels]
        for i in range(self.n):
            for j in range(self.n):
                if (self.b[i][j] != other.b[perm[i]][perm[j]]
                        or self.kappa2[i][j] != other.kappa2[perm[i]][perm[j]]):
                    return False
        return True

    def __repr__(self):
        return f"CompatiblePair({len(self.labels)} labels)"

    def to_json(self):
        from fractions import Fraction
        data = self.quiver().to_json()
        data["ensemble"] = [list(r) for r in self.b]
        data["kappaNum"] = [list(r) for r in self.kappa2]
        data["kappaDen"] = 2
        return data

    @classmethod
    def from_json(cls, data):
        kden = data.get("kappaDen", 2)
        kappa = data["kappaNum"]
        if kden == 2:
            kappa2 = kappa
        elif 2 % kden == 0:
            f = 2 // kden
            kappa2 = [[x * f for x in row] for row in kappa]
        else:
            raise QuiverError("kappa denominators beyond 2 are unsupported")
        return cls(data["labels"], data["ensemble"], kappa2,
                   data.get("frozen", ()), data.get("qDenominator", 2))


def ensemble_mutation_rule(b, k_index):
    """Standard mutation of the ensemble matrix (independent oracle)."""
    n = len(b)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k_index or j == k_index:
                out[i][j] = -b[i][j]
            else:
                out[i][j] = b[i][j] + (abs(b[i][k_index]) * b[k_index][j]
                                       + b[i][k_index] * abs(b[k_index][j])) // 2
    return _mat(out)


# ---------------------------------------------------------------------------
# quasi-permutations and mutation scripts


class QuasiPermutation:
    """Isometry sending mutable basis vectors to mutable basis vectors.

    ``mapping`` sends labels to labels (mutables bijectively to mutables);
    frozen labels may instead be sent to integer vectors in the target
    e-basis via ``frozen_images`` (a monomial image).
    """

    def __init__(self, mapping, frozen_images=None):
        self.mapping = dict(mapping)
        self.frozen_images = {k: tuple(v) for k, v in (frozen_images or {}).items()}

    def matrix(self, source, target=None):
        """Lattice map as a matrix: rows = images of source basis vectors."""
        target = target or source
        rows = []
        for l in source.labels:
            if l in self.frozen_images:
                rows.append(self.frozen_images[l])
            else:
                rows.append(target.basis_vector(self.mapping.get(l, l)))
        return _mat(rows)

    def check_isometry(self, source, target=None):
        target = target or source
        m = self.matrix(source, target)
        f2 = _matmul(_matmul(m, target.form2), _transpose(m))
        if f2 != source.form2:
            raise QuiverError("quasi-permutation is not an isometry")
        for l in source.mutable_labels():
            img = self.mapping.get(l, l)
            if not target.is_mutable(img):
                raise QuiverError("mutable label mapped to a frozen one")
        return True

    def to_json(self):
        out = {"permute": dict(self.mapping)}
        if self.frozen_images:
            out["permute"]["frozenMonomials"] = {
                k: list(v) for k, v in self.frozen_images.items()}
        return out


class Mutate:
    __slots__ = ("label",)

    def __init__(self, label):
        self.label = label

    def to_json(self):
        return {"mutate": self.label}

    def __repr__(self):
        return f"Mutate({self.label!r})"

    def __eq__(self, other):
        return isinstance(other, Mutate) and other.label == self.label


def script_to_json(steps):
    return json.dumps([s.to_json() for s in steps])


def script_from_json(text):
    steps = []
    for item in json.loads(text):
        if "mutate" in item:
            steps.append(Mutate(item["mutate"]))
        elif "permute" in item:
            data = dict(item["permute"])
            frozen = data.pop("frozenMonomials", {})
            steps.append(QuasiPermutation(data, frozen))
        else:
            raise ValueError(f"unknown script step {item!r}")
    return steps
