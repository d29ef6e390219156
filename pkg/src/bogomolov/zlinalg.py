"""Exact linear algebra over Z/n and over Z.

Row spans over Z/n are kept in Howell normal form, which is canonical and
supports membership and kernel computations even when n is composite.
Abelian-group invariants come from an integer Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

Row = dict  # column -> residue (nonzero)


@dataclass(frozen=True)
class SparseMatModN:
    """A sparse matrix over Z/n with rows stored as sorted (column, residue) pairs."""

    n: int
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, n: int, ncols: int, rows: Iterable) -> "SparseMatModN":
        out = []
        for r in rows:
            items = r.items() if isinstance(r, dict) else enumerate(r) if not _is_pairs(r) else r
            d: dict[int, int] = {}
            for c, v in items:
                if not 0 <= c < ncols:
                    raise ValueError(f"column {c} out of range 0..{ncols - 1}")
                d[c] = (d.get(c, 0) + v) % n
            out.append(tuple(sorted((c, v) for c, v in d.items() if v)))
        return cls(n, len(out), ncols, tuple(out))

    def dense(self) -> list[list[int]]:
        m = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for c, v in r:
                m[i][c] = v
        return m


def _is_pairs(r) -> bool:
    return len(r) > 0 and isinstance(r[0], tuple)


@dataclass(frozen=True)
class HowellBasis:
    """Canonical Howell basis of a row span over Z/n.

    ``rows`` are sorted by pivot column; each pivot entry divides n and the
    entries above each pivot are reduced into [0, pivot).
    """

    n: int
    ncols: int
    rows: tuple  # tuple of tuple[(col, val)]
    pivots: tuple  # pivot column of each row

    @property
    def rank_profile(self) -> tuple:
        return self.pivots

    def __len__(self) -> int:
        return len(self.rows)

    def row_dicts(self) -> list[dict]:
        return [dict(r) for r in self.rows]

    def dense(self) -> list[list[int]]:
        out = []
        for r in self.rows:
            v = [0] * self.ncols
            for c, x in r:
                v[c] = x
            out.append(v)
        return out

    def span_size(self) -> int:
        """Number of elements in the span (product of n / pivot)."""
        s = 1
        for r, c in zip(self.rows, self.pivots):
            s *= self.n // dict(r)[c]
        return s


@dataclass(frozen=True)
class AbelianInvariants:
    """Elementary divisors d1 | d2 | ... of a finite abelian group (all > 1)."""

    divisors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ds = tuple(int(d) for d in self.divisors)
        for d in ds:
            if d <= 1:
                raise ValueError("elementary divisors must exceed 1")
        for a, b in zip(ds, ds[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {ds}")
        object.__setattr__(self, "divisors", ds)

    @property
    def order(self) -> int:
        o = 1
        for d in self.divisors:
            o *= d
        return o

    def as_list(self) -> list[int]:
        return list(self.divisors)

    def __repr__(self) -> str:
        return f"AbelianInvariants({list(self.divisors)})"


# ---------------------------------------------------------------- helpers


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def unit_normalizer(a: int, n: int) -> int:
    """A unit u mod n with u*a = gcd(a, n) (mod n)."""
    a %= n
    g = gcd(a, n)
    if a == 0:
        return 1
    ap, np_ = a // g, n // g
    u0 = pow(ap, -1, np_) if np_ > 1 else 0
    u = u0
    while gcd(u, n) != 1:
        u += np_
    return u % n


def _val2(x: int) -> int:
    if x == 0:
        return 1 << 30
    return (x & -x).bit_length() - 1


def _axpy(r: Row, p: Row, q: int, n: int) -> Row:
    """r - q*p mod n (new dict)."""
    out = dict(r)
    for c, v in p.items():
        x = (out.get(c, 0) - q * v) % n
        if x:
            out[c] = x
        else:
            out.pop(c, None)
    return out


def _lincomb(a: int, r: Row, b: int, s: Row, n: int) -> Row:
    out: dict[int, int] = {}
    for c, v in r.items():
        out[c] = a * v
    for c, v in s.items():
        out[c] = out.get(c, 0) + b * v
    return {c: v % n for c, v in out.items() if v % n}


def _scale(r: Row, k: int, n: int) -> Row:
    return {c: (k * v) % n for c, v in r.items() if (k * v) % n}


def _normalize(r: Row, n: int) -> Row:
    c = min(r)
    u = unit_normalizer(r[c], n)
    return r if u == 1 else _scale(r, u, n)


class _Echelon:
    """Incremental Howell echelon keyed by pivot column."""

    def __init__(self, n: int):
        self.n = n
        self.piv: dict[int, Row] = {}

    def insert(self, row: Row) -> None:
        n = self.n
        stack = [{c: v % n for c, v in row.items() if v % n}]
        piv = self.piv
        while stack:
            r = stack.pop()
            while r:
                c = min(r)
                p = piv.get(c)
                if p is None:
                    r = _normalize(r, n)
                    piv[c] = r
                    ann = n // r[c]
                    if ann != n and ann != 1:
                        a = _scale(r, ann, n)
                        if a:
                            stack.append(a)
                    break
                a, b = r[c], p[c]
                if a % b == 0:
                    r = _axpy(r, p, a // b, n)
                    continue
                g, s, t = xgcd(b, a)
                newp = _normalize(_lincomb(s, p, t, r, n), n)
                elim = _lincomb(a // g, p, -(b // g), r, n)
                piv[c] = newp
                ann = n // newp[c]
                if ann != 1:
                    x = _scale(newp, ann, n)
                    if x:
                        stack.append(x)
                r = elim

    def basis(self, ncols: int) -> HowellBasis:
        n = self.n
        cols = sorted(self.piv)
        rows = {c: dict(self.piv[c]) for c in cols}
        for c in cols:
            r = rows[c]
            for c2 in cols:
                if c2 <= c:
                    continue
                v = r.get(c2)
                if v:
                    q = v // rows[c2][c2]
                    if q:
                        r = _axpy(r, rows[c2], q, n)
            rows[c] = r
        return HowellBasis(
            n,
            ncols,
            tuple(tuple(sorted(rows[c].items())) for c in cols),
            tuple(cols),
        )


# ---------------------------------------------------------------- public ops


def _row_dicts(m) -> tuple[int, int, list[Row]]:
    if isinstance(m, SparseMatModN):
        return m.n, m.ncols, [dict(r) for r in m.rows]
    raise TypeError("expected SparseMatModN")


def howell_form(m: SparseMatModN) -> HowellBasis:
    n, ncols, rows = _row_dicts(m)
    if n == 1:
        return HowellBasis(1, ncols, (), ())
    # Process rows with small 2-adic valuation at their leading entry first;
    # the result is canonical regardless, this only limits intermediate growth.
    order = sorted(
        range(len(rows)),
        key=lambda i: (min(rows[i]) if rows[i] else ncols, _val2(rows[i][min(rows[i])]) if rows[i] else 0, i),
    )
    ech = _Echelon(n)
    for i in order:
        if rows[i]:
            ech.insert(rows[i])
    return ech.basis(ncols)


def howell_from_rows(n: int, ncols: int, rows: Iterable[Row]) -> HowellBasis:
    return howell_form(SparseMatModN.from_rows(n, ncols, (dict(r) for r in rows)))


def extend_basis(b: HowellBasis, rows: Iterable[Row]) -> HowellBasis:
    ech = _Echelon(b.n)
    for r, c in zip(b.rows, b.pivots):
        ech.piv[c] = dict(r)
    for r in rows:
        ech.insert(dict(r))
    return ech.basis(b.ncols)


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: tuple  # coefficient per basis row (empty when not a member)


def membership(v, b: HowellBasis) -> Membership:
    """Decide whether v lies in the span of b; the witness recombines to v."""
    if isinstance(v, dict):
        vd = {c: x % b.n for c, x in v.items() if x % b.n}
    else:
        if len(v) != b.ncols:
            raise ValueError(f"dimension mismatch: {len(v)} vs {b.ncols}")
        vd = {c: x % b.n for c, x in enumerate(v) if x % b.n}
    if any(not 0 <= c < b.ncols for c in vd):
        raise ValueError("dimension mismatch")
    index = {c: i for i, c in enumerate(b.pivots)}
    rows = [dict(r) for r in b.rows]
    wit = [0] * len(rows)
    while vd:
        c = min(vd)
        i = index.get(c)
        if i is None:
            return Membership(False, ())
        p = rows[i][c]
        if vd[c] % p:
            return Membership(False, ())
        q = vd[c] // p
        wit[i] = q
        vd = _axpy(vd, rows[i], q, b.n)
    return Membership(True, tuple(wit))


def recombine(witness: Sequence[int], b: HowellBasis) -> list[int]:
    out = [0] * b.ncols
    for q, r in zip(witness, b.rows):
        for c, x in r:
            out[c] = (out[c] + q * x) % b.n
    return out


def left_kernel(rows: Sequence[Row], ncols: int, n: int) -> list[list[int]]:
    """Generators of {x in (Z/n)^k : sum_i x_i rows_i = 0}."""
    k = len(rows)
    aug = []
    for i, r in enumerate(rows):
        d = {c: v % n for c, v in r.items() if v % n}
        d[ncols + i] = 1
        aug.append(d)
    hb = howell_from_rows(n, ncols + k, aug)
    out = []
    for r, c in zip(hb.rows, hb.pivots):
        if c >= ncols:
            v = [0] * k
            for cc, x in r:
                v[cc - ncols] = x
            out.append(v)
    return out


# ---------------------------------------------------------------- Smith form


def smith_diagonal(rel: Sequence[Sequence[int]], ncols: int | None = None, modulus: int | None = None) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix.

    With ``modulus`` set, the row lattice is assumed to contain modulus*Z^ncols
    and all arithmetic is reduced mod modulus (zeros on the diagonal then mean
    ``modulus``).
    """
    a = [list(map(int, r)) for r in rel]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if modulus:
        a = [[x % modulus for x in r] for r in a]
    m = len(a)
    diag = []
    t = 0
    while t < min(m, ncols):
        # pick a nonzero entry of minimal absolute value in the remaining block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, ncols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // p
                    ri, rt = a[i], a[t]
                    for j in range(t, ncols):
                        ri[j] -= q * rt[j]
                    if modulus:
                        a[i] = [y % modulus for y in ri]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                x = a[t][j]
                if x:
                    q = x // p
                    for r in a:
                        r[j] -= q * r[t]
                    if modulus:
                        for r in a:
                            r[j] %= modulus
                    if a[t][j]:
                        done = False
            if not done:
                # move the smallest nonzero entry of row/column t to the pivot
                best = (abs(a[t][t]), t, t) if a[t][t] else None
                for i in range(t + 1, m):
                    x = a[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                for j in range(t + 1, ncols):
                    x = a[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), t, j)
                _, i, j = best
                a[t], a[i] = a[i], a[t]
                for r in a:
                    r[t], r[j] = r[j], r[t]
                continue
            # divisibility: the pivot must divide the rest of the block
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, ncols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(t, ncols):
                a[t][j] += a[bad][j]
            if modulus:
                a[t] = [y % modulus for y in a[t]]
        diag.append(abs(a[t][t]))
        t += 1
    while len(diag) < ncols:
        diag.append(0)
    if modulus:
        diag = [gcd(d, modulus) if d else modulus for d in diag]
    return diag


def smith_invariants(rel: Sequence[Sequence[int]], ncols: int | None = None) -> AbelianInvariants:
    """Invariants of Z^ncols / rowspan(rel); generators are columns."""
    if ncols is None:
        ncols = len(rel[0]) if rel else 0
    d = smith_diagonal(rel, ncols)
    if any(x == 0 for x in d):
        raise ValueError("infinite cokernel: relation matrix has rank below column count")
    return AbelianInvariants(tuple(sorted(x for x in d if x > 1)))


def quotient_invariants(upper: HowellBasis, lower_rows: Iterable[Row]) -> AbelianInvariants:
    """Invariants of span(upper) / span(lower_rows) over Z/n (lower must lie in upper)."""
    n = upper.n
    r = len(upper.rows)
    if r == 0:
        return AbelianInvariants(())
    rel: list[list[int]] = []
    for v in lower_rows:
        mb = membership(v, upper)
        if not mb.member:
            raise ValueError("lower span is not contained in upper span")
        rel.append(list(mb.witness))
    rel.extend(left_kernel([dict(x) for x in upper.rows], upper.ncols, n))
    for i in range(r):
        e = [0] * r
        e[i] = n
        rel.append(e)
    d = smith_diagonal(rel, r, modulus=n)
    return AbelianInvariants(tuple(sorted(x for x in d if x > 1)))
