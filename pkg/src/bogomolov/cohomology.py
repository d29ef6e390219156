"""Second cohomology with trivial coefficients, the Schur multiplier, and B0.

Two interchangeable engines compute H^2(G, Z/n):

``bar``
    Normalized 2-cochains indexed by ordered pairs of nonidentity elements
    and the full (|G|-1)^3-row cocycle system, reduced in Howell form.  Exact
    and independent of any presentation, but only practical for small groups.

``tails``
    A central extension 1 -> Z/n -> E -> G -> 1 is fixed by one "tail" per
    relation of a polycyclic presentation of G.  Tails satisfying the
    overlap (consistency) equations are cocycle classes up to the change of
    generator lifts.  Explicit pair-indexed cocycles are recovered by
    symbolic collection, so restriction to subgroups still happens at
    cochain level.

Membership of a restricted class in B^2(A) + D_A is tested in A's own tail
coordinates; the map from cocycles to tails kills exactly the coboundaries,
so this is the same kernel condition, just in a smaller space.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import zlinalg as zl
from .pcgroup import (
    Collector,
    GroupTable,
    Sifter,
    Subgroup,
    bicyclic_subgroups,
    induced_pcgs,
    subgroup_table,
)

BAR_AUTO_LIMIT = 16  # groups up to this order use the pair-indexed system by default
DEFAULT_ROW_CAP = 2_000_000
DEFAULT_MEM_CAP = 4 << 30


class ResourceLimitError(RuntimeError):
    """Raised instead of silently truncating a computation."""

    def __init__(self, msg: str, progress: dict | None = None):
        super().__init__(msg)
        self.progress = progress or {}


# ------------------------------------------------------------------ cochains


def pair_index(m: int, g: int, h: int) -> int:
    return (g - 1) * (m - 1) + (h - 1)


@dataclass(eq=False)
class CocycleVector:
    """Normalized 2-cochain; values[(g-1)*(|G|-1) + (h-1)] = f(g, h)."""

    group: GroupTable
    n: int
    values: np.ndarray

    @classmethod
    def from_matrix(cls, group: GroupTable, n: int, mat) -> "CocycleVector":
        mat = np.asarray(mat, dtype=np.int64) % n
        return cls(group, n, mat[1:, 1:].reshape(-1).copy())

    def matrix(self) -> np.ndarray:
        m = self.group.order
        out = np.zeros((m, m), dtype=np.int64)
        if m > 1:
            out[1:, 1:] = self.values.reshape(m - 1, m - 1)
        return out

    def __call__(self, g: int, h: int) -> int:
        if g == 0 or h == 0:
            return 0
        return int(self.values[pair_index(self.group.order, g, h)])

    def as_row(self) -> dict:
        return {int(i): int(v) for i, v in enumerate(self.values) if v % self.n}

    def is_cocycle(self, sample: int | None = None, seed: int = 0) -> bool:
        return cocycle_defect(self.group, self.matrix(), self.n, sample, seed) is None


def cocycle_defect(t: GroupTable, f: np.ndarray, n: int, sample: int | None = None, seed: int = 0):
    """First triple violating f(g,h)+f(gh,k) = f(h,k)+f(g,hk), or None."""
    p = t.product.astype(np.int64)
    m = t.order
    if sample is None:
        for g in range(m):
            gh = p[g]  # over h
            lhs = f[g][:, None] + f[gh, :]
            rhs = f + f[g][p]
            bad = np.argwhere((lhs - rhs) % n)
            if len(bad):
                h, k = bad[0]
                return (g, int(h), int(k))
        return None
    rng = np.random.default_rng(seed)
    g, h, k = rng.integers(0, m, size=(3, sample))
    lhs = f[g, h] + f[p[g, h], k]
    rhs = f[h, k] + f[g, p[h, k]]
    bad = np.nonzero((lhs - rhs) % n)[0]
    if len(bad):
        i = bad[0]
        return (int(g[i]), int(h[i]), int(k[i]))
    return None


def coboundary_matrix(t: GroupTable, b, n: int) -> np.ndarray:
    b = np.asarray(b, dtype=np.int64)
    p = t.product
    return (b[:, None] + b[None, :] - b[p]) % n


def carry_matrix(t: GroupTable, chi, n: int) -> np.ndarray:
    """(a(g) + a(h) - a(gh)) / n for a hom chi: G -> Z/n with lifts in [0, n)."""
    a = np.asarray(chi, dtype=np.int64) % n
    s = a[:, None] + a[None, :] - a[t.product]
    if np.any(s % n):
        raise ValueError("not a homomorphism to Z/n")
    return s // n


# ------------------------------------------------------------------ result types


@dataclass(eq=False)
class H2Presentation:
    n: int
    basis: list
    coboundary_span: zl.HowellBasis
    connecting_span: zl.HowellBasis
    invariants_modn: zl.AbelianInvariants
    invariants_qz: zl.AbelianInvariants | None
    coordinates: str = "pairs"  # "pairs" or "tails"
    cocycle_span: zl.HowellBasis | None = None
    engine: object = None


@dataclass(eq=False)
class B0Result:
    invariants: zl.AbelianInvariants
    generating_classes: list
    bicyclic_count: int
    elapsed: float
    h2_qz_invariants: zl.AbelianInvariants | None = None
    method: str = "tails"
    meta: dict = field(default_factory=dict)


# ------------------------------------------------------------------ bar engine


def _check_caps(rows: int, cols: int, row_cap: int, mem_cap: int):
    if rows > row_cap:
        raise ResourceLimitError(f"cocycle system has {rows} rows, above the cap of {row_cap}")
    est = rows * 4 * 120 + cols * cols * 16
    if est > mem_cap:
        raise ResourceLimitError(f"estimated working set {est} bytes exceeds the cap of {mem_cap}")


def hom_to_cyclic_bar(t: GroupTable, n: int) -> list:
    """Generators of Hom(G, Z/n) as value lists, from the defining identities."""
    m = t.order
    if m == 1:
        return []
    p = t.product
    rows = []
    for x in range(1, m):
        rows.append({})
    # variable chi(x) for x != 1; constraint (g,h): chi(g)+chi(h)-chi(gh)
    c = 0
    for g in range(1, m):
        for h in range(1, m):
            gh = int(p[g, h])
            for var, coef in ((g, 1), (h, 1), (gh, -1)):
                if var:
                    rows[var - 1][c] = (rows[var - 1].get(c, 0) + coef) % n
            c += 1
    ker = zl.left_kernel(rows, c, n)
    return [[0] + list(v) for v in ker]


def _bar_system(t: GroupTable, n: int, row_cap: int, mem_cap: int):
    m = t.order
    nv = (m - 1) ** 2
    _check_caps((m - 1) ** 3, nv, row_cap, mem_cap)
    p = t.product
    var_rows = [dict() for _ in range(nv)]
    c = 0
    for g in range(1, m):
        for h in range(1, m):
            gh = int(p[g, h])
            for k in range(1, m):
                hk = int(p[h, k])
                # f(g,h) + f(gh,k) - f(h,k) - f(g,hk)
                for (a, b), s in (((g, h), 1), ((gh, k), 1), ((h, k), -1), ((g, hk), -1)):
                    if a and b:
                        d = var_rows[pair_index(m, a, b)]
                        v = (d.get(c, 0) + s) % n
                        if v:
                            d[c] = v
                        else:
                            d.pop(c, None)
                c += 1
    return var_rows, c


def h2_bar(t: GroupTable, n: int, row_cap: int = DEFAULT_ROW_CAP, mem_cap: int = DEFAULT_MEM_CAP) -> H2Presentation:
    m = t.order
    if m == 1:
        empty = zl.HowellBasis(n, 0, (), ())
        triv = zl.AbelianInvariants(())
        return H2Presentation(n, [], empty, empty, triv, triv if n == m else None, "pairs", empty)
    nv = (m - 1) ** 2
    var_rows, ncons = _bar_system(t, n, row_cap, mem_cap)
    ker = zl.left_kernel(var_rows, ncons, n)
    Z = zl.howell_from_rows(n, nv, [{i: x for i, x in enumerate(v) if x} for v in ker])
    cob = []
    for x in range(1, m):
        b = np.zeros(m, dtype=np.int64)
        b[x] = 1
        cob.append(CocycleVector.from_matrix(t, n, coboundary_matrix(t, b, n)).as_row())
    B = zl.howell_from_rows(n, nv, cob)
    car = [CocycleVector.from_matrix(t, n, carry_matrix(t, chi, n)).as_row() for chi in hom_to_cyclic_bar(t, n)]
    D = zl.howell_from_rows(n, nv, car)
    inv_n = zl.quotient_invariants(Z, [dict(r) for r in B.rows])
    inv_qz = None
    if n % m == 0:
        inv_qz = zl.quotient_invariants(Z, [dict(r) for r in B.rows] + [dict(r) for r in D.rows])
    basis = []
    for r in Z.rows:
        v = np.zeros(nv, dtype=np.int64)
        for c, x in r:
            v[c] = x
        basis.append(CocycleVector(t, n, v))
    return H2Presentation(n, basis, B, D, inv_n, inv_qz, "pairs", Z)


# ------------------------------------------------------------------ tails engine


class TailEngine:
    """H^2(G, Z/n) in relation-tail coordinates of a pc presentation of G."""

    def __init__(self, t: GroupTable, n: int):
        self.t = t
        self.n = n
        if t.pcp is not None:
            pres = t.pcp
            gens = t.pc_gens
            self.c2t = np.arange(t.order)
        else:
            gens, orders = induced_pcgs(t)
            sifter = Sifter(t, gens, orders)
            pres = sifter.presentation()
            col0 = Collector(pres)
            c2t = np.zeros(t.order, dtype=np.int64)
            for x in range(t.order):
                c2t[col0.encode(sifter.exponents(x))] = x
            self.c2t = c2t
        self.pres = pres
        self.gens = tuple(int(g) for g in gens)
        self.col = Collector(pres)
        self.t2c = np.zeros(t.order, dtype=np.int64)
        self.t2c[self.c2t] = np.arange(t.order)
        self.R = pres.relation_count()
        self._forms = None

    # -- relation words as letter lists (generator positions)
    def relation_words(self):
        p = self.pres
        out = []
        for i in range(p.n):
            out.append(([i] * p.relative_orders[i], list(Collector._letters(p.power_word(i)))))
        for a in range(p.n):
            for b in range(a + 1, p.n):
                out.append(([b, a], [a, b] + list(Collector._letters(p.comm_word(b, a)))))
        return out

    def consistency_rows(self) -> list:
        """Linear forms on tails that vanish exactly for consistent extensions."""
        col, p = self.col, self.pres
        m = p.n
        unit = [col.encode(tuple(1 if k == i else 0 for k in range(m))) for i in range(m)]
        r = p.relative_orders

        def elem(i, e=1):
            return col.encode(tuple(e if k == i else 0 for k in range(m)))

        def times(x, form, letters):
            y, f = col.mul_word(x, letters)
            return y, form + f

        def then_nf(x, form, other):
            """multiply (x, form) by the normal-form word of the E-element other."""
            y, fo = other
            z, f = col.mul_word(x, col.letters_of(y))
            return z, form + f + fo

        zero = np.zeros(self.R, dtype=np.int64)
        rows = []

        def add(a, b):
            if a[0] != b[0]:
                raise AssertionError("collection disagrees on the group element")
            d = a[1] - b[1]
            if np.any(d % self.n):
                rows.append({int(i): int(v) % self.n for i, v in enumerate(d) if v % self.n})

        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    left = times(*times(unit[k], zero, [j]), [i])
                    right = then_nf(unit[k], zero, times(unit[j], zero, [i]))
                    add(left, right)
                # (x_j^r) x_i  vs  x_j^(r-1) (x_j x_i)
                left = times(*times(unit[j], zero, [j] * (r[j] - 1)), [i])
                right = then_nf(elem(j, r[j] - 1), zero, times(unit[j], zero, [i]))
                add(left, right)
                # x_j (x_i^r)  vs  (x_j x_i) x_i^(r-1)
                left = then_nf(unit[j], zero, times(unit[i], zero, [i] * (r[i] - 1)))
                right = times(*times(unit[j], zero, [i]), [i] * (r[i] - 1))
                add(left, right)
            left = then_nf(unit[i], zero, times(unit[i], zero, [i] * (r[i] - 1)))
            right = times(*times(unit[i], zero, [i] * (r[i] - 1)), [i])
            add(left, right)
        return rows

    def coboundary_rows(self) -> list:
        p = self.pres
        rows = []
        for l in range(p.n):
            v = {}
            for idx, (lhs, rhs) in enumerate(self.relation_words()):
                c = lhs.count(l) - rhs.count(l)
                if c % self.n:
                    v[idx] = c % self.n
            rows.append(v)
        return rows

    def homs(self) -> list:
        """Generators of Hom(G, Z/n), as values on the pc generators."""
        p = self.pres
        words = self.relation_words()
        rows = []
        for l in range(p.n):
            rows.append({idx: (lhs.count(l) - rhs.count(l)) % self.n for idx, (lhs, rhs) in enumerate(words)})
        rows = [{c: v for c, v in r.items() if v} for r in rows]
        return zl.left_kernel(rows, len(words), self.n)

    def hom_values(self, chi_gens) -> np.ndarray:
        """chi on every table element."""
        vals = np.zeros(self.t.order, dtype=np.int64)
        for x in range(self.t.order):
            e = self.col.decode(int(self.t2c[x]))
            vals[x] = sum(a * b for a, b in zip(e, chi_gens)) % self.n
        return vals

    def tails_of(self, f: np.ndarray) -> dict:
        """Tail vector of an explicit (table-indexed) cochain."""
        p = self.t.product
        g = self.gens
        out = {}
        for idx, (lhs, rhs) in enumerate(self.relation_words()):
            tot = 0
            for word, sgn in ((lhs, 1), (rhs, -1)):
                x = 0
                for k in word:
                    tot += sgn * int(f[x, g[k]])
                    x = int(p[x, g[k]])
            if tot % self.n:
                out[idx] = tot % self.n
        return out

    def pair_forms(self) -> np.ndarray:
        """F[g, h] in Z^R with f_x(g, h) = F[g, h] . x for consistent tails x (table indices)."""
        if self._forms is not None:
            return self._forms
        col = self.col
        m = self.t.order
        nn = self.pres.n
        T = np.zeros((m, max(nn, 1), self.R), dtype=np.int64)
        G = np.zeros((m, max(nn, 1)), dtype=np.int64)
        for x in range(m):
            for i in range(nn):
                y, f = col.mulgen(x, i)
                G[x, i] = y
                T[x, i] = f
        # collector-indexed forms, then permuted to table indices
        F = np.zeros((m, m, self.R), dtype=np.int64)
        prod = np.zeros((m, m), dtype=np.int64)
        prod[:, 0] = np.arange(m)
        for h in range(1, m):
            e = list(col.decode(h))
            last = max(k for k in range(nn) if e[k])
            e[last] -= 1
            hp = col.encode(e)
            gh = prod[:, hp]
            F[:, h] = F[:, hp] + T[gh, last]
            prod[:, h] = G[gh, last]
        Ft = np.zeros_like(F)
        c2t = self.c2t
        Ft[np.ix_(c2t, c2t)] = F
        self._forms = Ft % self.n
        return self._forms

    def cocycle_matrix(self, tails) -> np.ndarray:
        x = np.zeros(self.R, dtype=np.int64)
        if isinstance(tails, dict):
            for i, v in tails.items():
                x[i] = v
        else:
            x[:] = np.asarray(tails, dtype=np.int64)
        return (self.pair_forms() @ x) % self.n

    def run(self) -> H2Presentation:
        n, R = self.n, self.R
        cons = self.consistency_rows()
        # Z = {x : C x = 0}; left kernel of the transposed system
        cols = [dict() for _ in range(R)]
        for ci, row in enumerate(cons):
            for i, v in row.items():
                cols[i][ci] = v
        ker = zl.left_kernel(cols, len(cons), n) if cons else [[1 if a == b else 0 for a in range(R)] for b in range(R)]
        Z = zl.howell_from_rows(n, R, [{i: v for i, v in enumerate(k) if v} for k in ker])
        B = zl.howell_from_rows(n, R, self.coboundary_rows())
        chis = self.homs()
        self.chis = chis
        D_rows = []
        for chi in chis:
            vals = self.hom_values(chi)
            D_rows.append(self.tails_of(carry_matrix(self.t, vals, n)))
        D = zl.howell_from_rows(n, R, D_rows)
        inv_n = zl.quotient_invariants(Z, [dict(r) for r in B.rows])
        inv_qz = None
        if n % self.t.order == 0:
            inv_qz = zl.quotient_invariants(Z, [dict(r) for r in B.rows] + [dict(r) for r in D.rows])
        basis = []
        self.Z, self.B, self.D = Z, B, D
        return H2Presentation(n, basis, B, D, inv_n, inv_qz, "tails", Z, self)

    def cocycles(self, rows) -> list:
        return [CocycleVector.from_matrix(self.t, self.n, self.cocycle_matrix(dict(r))) for r in rows]


# ------------------------------------------------------------------ public API


def h2_modn(
    t: GroupTable,
    n: int,
    method: str = "auto",
    row_cap: int = DEFAULT_ROW_CAP,
    mem_cap: int = DEFAULT_MEM_CAP,
) -> H2Presentation:
    if n < 2:
        raise ValueError("modulus must be at least 2")
    if method == "auto":
        method = "bar" if t.order <= BAR_AUTO_LIMIT else "tails"
    if method == "bar":
        return h2_bar(t, n, row_cap, mem_cap)
    if method == "tails":
        eng = TailEngine(t, n)
        h2 = eng.run()
        if t.order <= 64:
            h2.basis = eng.cocycles(h2.cocycle_span.rows)
        return h2
    raise ValueError(f"unknown method {method!r}")


def connecting_image(t: GroupTable, method: str = "bar") -> zl.HowellBasis:
    """Span D_G of the carry cocycles of Hom(G, Z/|G|) (pair coordinates)."""
    n = t.order
    if n == 1:
        return zl.HowellBasis(1, 0, (), ())
    nv = (n - 1) ** 2
    if method == "bar":
        chis = hom_to_cyclic_bar(t, n)
    else:
        eng = TailEngine(t, n)
        chis = [eng.hom_values(c) for c in eng.homs()]
    rows = [CocycleVector.from_matrix(t, n, carry_matrix(t, chi, n)).as_row() for chi in chis]
    return zl.howell_from_rows(n, nv, rows)


def h2_qz_invariants(t: GroupTable, method: str = "auto", **caps) -> zl.AbelianInvariants:
    if t.order == 1:
        return zl.AbelianInvariants(())
    return h2_modn(t, t.order, method, **caps).invariants_qz


def restrict_class(c: CocycleVector, a: Subgroup) -> CocycleVector:
    if a.parent is not c.group:
        raise ValueError("subgroup belongs to a different group")
    sub, mem = subgroup_table(a)
    mat = c.matrix()[np.ix_(mem, mem)]
    return CocycleVector.from_matrix(sub, c.n, mat)


# ------------------------------------------------------------------ per-subgroup data


class SubgroupTails:
    """Tail coordinates for a subgroup A with modulus n (from the parent's table)."""

    def __init__(self, t: GroupTable, a: Subgroup, n: int):
        self.t = t
        self.n = n
        gens, orders = induced_pcgs(t, a.members)
        self.gens = gens
        sif = Sifter(t, gens, orders)
        self.sifter = sif
        pres = sif.presentation()
        self.pres = pres
        words = []
        for i in range(pres.n):
            words.append(([i] * orders[i], list(Collector._letters(pres.power_word(i)))))
        for x in range(pres.n):
            for y in range(x + 1, pres.n):
                words.append(([y, x], [x, y] + list(Collector._letters(pres.comm_word(y, x)))))
        self.words = words
        RA = len(words)
        self.RA = RA
        cob = []
        for l in range(pres.n):
            cob.append({i: (lhs.count(l) - rhs.count(l)) % n for i, (lhs, rhs) in enumerate(words)})
        cob = [{c: v for c, v in r.items() if v} for r in cob]
        chis = zl.left_kernel(cob, RA, n) if pres.n else []
        span = list(cob)
        mem = a.members
        p = t.product
        for chi in chis:
            vals = {}
            for x in mem:
                e = sif.exponents(x)
                vals[x] = sum(u * v for u, v in zip(e, chi)) % n
            span.append(self._tails_from(lambda g, h: (vals[g] + vals[h] - vals[int(p[g, h])]) // n))
        self.span = zl.howell_from_rows(n, RA, span)

    def _tails_from(self, f) -> dict:
        p = self.t.product
        g = self.gens
        out = {}
        for idx, (lhs, rhs) in enumerate(self.words):
            tot = 0
            for word, sgn in ((lhs, 1), (rhs, -1)):
                x = 0
                for k in word:
                    tot += sgn * f(x, g[k])
                    x = int(p[x, g[k]])
            if tot % self.n:
                out[idx] = tot % self.n
        return out

    def restriction_matrix(self, forms: np.ndarray) -> np.ndarray:
        """Integer matrix (RA x R): tails of res(f_x) = M x."""
        p = self.t.product
        g = self.gens
        R = forms.shape[2]
        M = np.zeros((self.RA, R), dtype=np.int64)
        for idx, (lhs, rhs) in enumerate(self.words):
            for word, sgn in ((lhs, 1), (rhs, -1)):
                x = 0
                for k in word:
                    M[idx] += sgn * forms[x, g[k]]
                    x = int(p[x, g[k]])
        return M % self.n

    def vanishes(self, tails_vec) -> bool:
        d = {i: int(v) % self.n for i, v in enumerate(tails_vec) if int(v) % self.n}
        return zl.membership(d, self.span).member


def _intersect_kernel(gens: list, images: list, span: zl.HowellBasis, n: int, R: int) -> list:
    """Generators of {sum c_j gens_j : sum c_j images_j in span}."""
    k = len(gens)
    rows = [dict(im) for im in images] + [dict(r) for r in span.rows]
    ker = zl.left_kernel(rows, span.ncols, n)
    out = []
    for v in ker:
        acc = np.zeros(R, dtype=np.int64)
        for c, g in zip(v[:k], gens):
            if c:
                acc += c * g
        acc %= n
        if np.any(acc):
            out.append(acc)
    hb = zl.howell_from_rows(n, R, [{i: int(x) for i, x in enumerate(a) if x} for a in out])
    return [_dense(r, R) for r in hb.rows]


def _dense(r, R):
    v = np.zeros(R, dtype=np.int64)
    for c, x in r:
        v[c] = x
    return v


def bogomolov_multiplier(
    t: GroupTable,
    method: str = "tails",
    row_cap: int = DEFAULT_ROW_CAP,
    mem_cap: int = DEFAULT_MEM_CAP,
    progress=None,
) -> B0Result:
    start = time.perf_counter()
    n = t.order
    if n == 1:
        triv = zl.AbelianInvariants(())
        return B0Result(triv, [], 1, 0.0, triv, method)
    if method == "bar":
        return _b0_bar(t, row_cap, mem_cap, start)
    eng = TailEngine(t, n)
    # pair forms dominate: one int64 tail vector per ordered pair, held twice
    est = 2 * 8 * n * n * eng.R
    if est > mem_cap:
        raise ResourceLimitError(f"estimated working set {est} bytes exceeds the cap of {mem_cap}", {"stage": "setup"})
    h2 = eng.run()
    R = eng.R
    forms = eng.pair_forms()
    S = [_dense(r, R) for r in eng.Z.rows]
    subs = bicyclic_subgroups(t)
    cache: dict = {}
    for count, a in enumerate(subs):
        if progress:
            progress(count, len(subs))
        if a.order == 1 or not S:
            continue
        data = cache.get(a.members)
        if data is None:
            data = SubgroupTails(t, a, n)
            cache[a.members] = data
        M = data.restriction_matrix(forms)
        images = [(M @ s) % n for s in S]
        if all(data.vanishes(im) for im in images):
            continue
        S = _intersect_kernel(S, [{i: int(v) for i, v in enumerate(im) if v} for im in images], data.span, n, R)
    lower = [dict(r) for r in eng.B.rows] + [dict(r) for r in eng.D.rows]
    Sb = zl.howell_from_rows(n, R, [{i: int(x) for i, x in enumerate(s) if x} for s in S] + lower)
    inv = zl.quotient_invariants(Sb, lower)
    gens = _generating_classes(Sb, lower, eng)
    return B0Result(inv, gens, len(subs), time.perf_counter() - start, h2.invariants_qz, "tails")


def _generating_classes(Sb: zl.HowellBasis, lower, eng: TailEngine) -> list:
    low = zl.howell_from_rows(Sb.n, Sb.ncols, lower)
    out = []
    for r in Sb.rows:
        if not zl.membership(dict(r), low).member:
            out.append(CocycleVector.from_matrix(eng.t, eng.n, eng.cocycle_matrix(dict(r))))
    return out


def _b0_bar(t: GroupTable, row_cap, mem_cap, start) -> B0Result:
    """Pair-coordinate route: restrictions reindexed onto each subgroup's own table."""
    n = t.order
    h2 = h2_bar(t, n, row_cap, mem_cap)
    nv = (n - 1) ** 2
    S = [CocycleVector(t, n, c.values.copy()) for c in h2.basis]
    subs = bicyclic_subgroups(t)
    for a in subs:
        if a.order == 1 or not S:
            continue
        sub, mem = subgroup_table(a)
        m = sub.order
        rows = []
        for x in range(1, m):
            b = np.zeros(m, dtype=np.int64)
            b[x] = 1
            rows.append(CocycleVector.from_matrix(sub, n, coboundary_matrix(sub, b, n)).as_row())
        for chi in hom_to_cyclic_bar(sub, n):
            rows.append(CocycleVector.from_matrix(sub, n, carry_matrix(sub, chi, n)).as_row())
        span = zl.howell_from_rows(n, (m - 1) ** 2, rows)
        images = [restrict_class(c, a).as_row() for c in S]
        if all(zl.membership(im, span).member for im in images):
            continue
        ker = zl.left_kernel(images + [dict(r) for r in span.rows], (m - 1) ** 2, n)
        new = []
        for v in ker:
            acc = np.zeros(nv, dtype=np.int64)
            for c, g in zip(v[: len(S)], S):
                if c:
                    acc += c * g.values
            acc %= n
            if np.any(acc):
                new.append({i: int(x) for i, x in enumerate(acc) if x})
        hb = zl.howell_from_rows(n, nv, new)
        S = [CocycleVector(t, n, _dense(r, nv)) for r in hb.rows]
    lower = [dict(r) for r in h2.coboundary_span.rows] + [dict(r) for r in h2.connecting_span.rows]
    Sb = zl.howell_from_rows(n, nv, [s.as_row() for s in S] + lower)
    inv = zl.quotient_invariants(Sb, lower)
    low = zl.howell_from_rows(n, nv, lower)
    gens = [CocycleVector(t, n, _dense(r, nv)) for r in Sb.rows if not zl.membership(dict(r), low).member]
    return B0Result(inv, gens, len(subs), time.perf_counter() - start, h2.invariants_qz, "bar")


def commuting_pair_test(f: np.ndarray, t: GroupTable, n: int) -> bool:
    """True iff f(a,b) = f(b,a) mod n for every commuting pair (a, b).

    For an abelian A = <a, b>, a class in H^2(A, Q/Z) is determined by the
    alternating form (a, b) -> f(a,b) - f(b,a); this gives an independent
    criterion for membership in B0 used by the tests.
    """
    p = t.product
    comm = p == p.T
    return not np.any(((f - f.T) % n)[comm])
