"""Polycyclic presentations realized as explicit multiplication tables.

Generators are 0-based internally and 1-based in the text format.  A word is
a tuple of ``(generator, exponent)`` factors.  Relations read

    g_i^{r_i} = w_i          and          [g_j, g_i] = w_ji   (j > i)

with the commutator convention [a, b] = a^-1 b^-1 a b, so that
``g_j g_i = g_i g_j w_ji``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import lcm

import numpy as np

Word = tuple  # tuple[(gen, exp), ...]

DEFAULT_BOUND = 1024


class PresentationError(ValueError):
    """Raised for malformed or filtration-violating presentations."""


class InconsistentPresentation(ValueError):
    """Raised when the collected table fails associativity."""


# ------------------------------------------------------------------ presentations


@dataclass(frozen=True)
class PcPresentation:
    n: int
    relative_orders: tuple
    power_relations: dict = field(default_factory=dict)  # i -> word
    commutator_relations: dict = field(default_factory=dict)  # (j, i) -> word

    def __post_init__(self):
        if len(self.relative_orders) != self.n:
            raise PresentationError("relative_orders length differs from generator count")
        for r in self.relative_orders:
            if r < 2:
                raise PresentationError(f"relative order {r} < 2")
        for i, w in self.power_relations.items():
            self._check_word(w, i, f"g{i + 1}^{self.relative_orders[i]}")
        for (j, i), w in self.commutator_relations.items():
            if not 0 <= i < j < self.n:
                raise PresentationError(f"commutator [g{j + 1},g{i + 1}] needs j > i")
            self._check_word(w, i, f"[g{j + 1},g{i + 1}]")

    def _check_word(self, w, i, where):
        for k, e in w:
            if not 0 <= k < self.n:
                raise PresentationError(f"{where}: generator g{k + 1} out of range")
            if k <= i:
                raise PresentationError(
                    f"{where}: filtration violation, g{k + 1} must have index greater than {i + 1}"
                )
            if not 0 <= e < self.relative_orders[k]:
                raise PresentationError(f"{where}: exponent {e} of g{k + 1} outside [0, {self.relative_orders[k]})")

    @property
    def order(self) -> int:
        o = 1
        for r in self.relative_orders:
            o *= r
        return o

    def power_word(self, i: int) -> Word:
        return self.power_relations.get(i, ())

    def comm_word(self, j: int, i: int) -> Word:
        return self.commutator_relations.get((j, i), ())

    def relation_count(self) -> int:
        return self.n + self.n * (self.n - 1) // 2

    def relation_index(self, kind: str, j: int, i: int | None = None) -> int:
        """Position of a relation in the tail vector: powers first, then commutators."""
        if kind == "power":
            return j
        # commutator (j, i) with j > i, enumerated lexicographically by (i, j)
        idx = self.n
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if (b, a) == (j, i):
                    return idx
                idx += 1
        raise KeyError((j, i))

    def to_text(self) -> str:
        def wtxt(w):
            if not w:
                return "1"
            return "*".join(f"g{k + 1}" if e == 1 else f"g{k + 1}^{e}" for k, e in w)

        lines = [f"pcgroup {self.n}", "orders " + " ".join(map(str, self.relative_orders))]
        for i in sorted(self.power_relations):
            if self.power_relations[i]:
                lines.append(f"g{i + 1}^{self.relative_orders[i]} = {wtxt(self.power_relations[i])}")
        for (j, i) in sorted(self.commutator_relations, key=lambda t: (t[0], t[1])):
            if self.commutator_relations[(j, i)]:
                lines.append(f"[g{j + 1},g{i + 1}] = {wtxt(self.commutator_relations[(j, i)])}")
        return "\n".join(lines) + "\n"


_GEN = re.compile(r"g(\d+)(?:\^(-?\d+))?$")


def _parse_word(src: str, lineno: int, col: int) -> list:
    src = src.strip()
    if src == "1":
        return []
    out = []
    pos = col
    for tok in src.split("*"):
        t = tok.strip()
        m = _GEN.match(t)
        if not m:
            raise PresentationError(f"line {lineno}, column {pos}: bad factor {t!r}")
        k = int(m.group(1)) - 1
        e = int(m.group(2)) if m.group(2) is not None else 1
        out.append((k, e))
        pos += len(tok) + 1
    return out


def parse_presentation(text: str) -> PcPresentation:
    """Parse the .pcg text format (grammar in README.md)."""
    n = None
    orders = None
    powers: dict = {}
    comms: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("pcgroup"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise PresentationError(f"line {lineno}, column 1: expected 'pcgroup <n>'")
            n = int(parts[1])
            continue
        if n is None:
            raise PresentationError(f"line {lineno}, column 1: missing 'pcgroup <n>' header")
        if line.startswith("orders"):
            parts = line.split()[1:]
            try:
                orders = tuple(int(x) for x in parts)
            except ValueError:
                raise PresentationError(f"line {lineno}, column 8: non-integer relative order") from None
            if len(orders) != n:
                raise PresentationError(f"line {lineno}, column 1: expected {n} relative orders")
            continue
        if orders is None:
            raise PresentationError(f"line {lineno}, column 1: 'orders' line must precede relations")
        if "=" not in line:
            raise PresentationError(f"line {lineno}, column 1: expected a relation")
        lhs, rhs = line.split("=", 1)
        col = raw.index("=") + 2
        word = _parse_word(rhs, lineno, col)
        lhs = lhs.strip()
        m = re.fullmatch(r"\[\s*g(\d+)\s*,\s*g(\d+)\s*\]", lhs)
        if m:
            j, i = int(m.group(1)) - 1, int(m.group(2)) - 1
            if not (0 <= i < n and 0 <= j < n):
                raise PresentationError(f"line {lineno}, column 1: generator index out of range")
            if j <= i:
                raise PresentationError(f"line {lineno}, column 1: commutator [g{j + 1},g{i + 1}] needs j > i")
            key = (j, i)
            target = comms
        else:
            m = re.fullmatch(r"g(\d+)\s*\^\s*(\d+)", lhs)
            if not m:
                raise PresentationError(f"line {lineno}, column 1: bad left-hand side {lhs!r}")
            i = int(m.group(1)) - 1
            if not 0 <= i < n:
                raise PresentationError(f"line {lineno}, column 1: generator g{i + 1} out of range")
            if int(m.group(2)) != orders[i]:
                raise PresentationError(
                    f"line {lineno}, column 1: power must be the relative order {orders[i]} of g{i + 1}"
                )
            key = i
            target = powers
        for k, e in word:
            if not 0 <= k < n:
                raise PresentationError(f"line {lineno}, column {col}: generator g{k + 1} out of range")
            if not 0 <= e < orders[k]:
                raise PresentationError(
                    f"line {lineno}, column {col}: exponent {e} of g{k + 1} outside [0, {orders[k]})"
                )
        if key in target:
            raise PresentationError(f"line {lineno}, column 1: duplicate relation")
        target[key] = tuple(word)
    if n is None:
        raise PresentationError("line 1, column 1: empty presentation")
    if orders is None:
        if n == 0:
            orders = ()
        else:
            raise PresentationError("missing 'orders' line")
    return PcPresentation(n, orders, powers, comms)


# ------------------------------------------------------------------ collection


class Collector:
    """Collection to normal form, optionally tracking relation usage.

    ``mulgen(x, i)`` multiplies the normal form with index x on the right by
    generator i and returns the resulting index together with an integer
    vector counting how often each relation was applied.  Those counts are
    exactly the tail contributions in a central extension, which is how the
    cohomology module reuses this routine.
    """

    def __init__(self, pres: PcPresentation):
        self.p = pres
        self.n = pres.n
        self.r = pres.relative_orders
        strides = [1] * self.n
        for k in range(self.n - 2, -1, -1):
            strides[k] = strides[k + 1] * self.r[k + 1]
        self.strides = strides
        self.order = pres.order
        self.R = pres.relation_count()
        self._cidx = {}
        idx = self.n
        for a in range(self.n):
            for b in range(a + 1, self.n):
                self._cidx[(b, a)] = idx
                idx += 1
        self._memo: dict = {}
        self.pw = [self._letters(pres.power_word(i)) for i in range(self.n)]
        self.cw = {key: self._letters(pres.comm_word(*key)) for key in self._cidx}

    @staticmethod
    def _letters(w):
        out = []
        for k, e in w:
            out.extend([k] * e)
        return tuple(out)

    def encode(self, e) -> int:
        return sum(x * s for x, s in zip(e, self.strides))

    def decode(self, x: int) -> tuple:
        out = []
        for s, r in zip(self.strides, self.r):
            q, x = divmod(x, s)
            out.append(q)
        return tuple(out)

    def mulgen(self, x: int, i: int):
        key = (x, i)
        got = self._memo.get(key)
        if got is not None:
            return got
        e = list(self.decode(x))
        form = np.zeros(self.R, dtype=np.int64)
        suffix = [(k, e[k]) for k in range(i + 1, self.n) if e[k]]
        if not suffix:
            if e[i] < self.r[i] - 1:
                e[i] += 1
                h = self.encode(e)
            else:
                e[i] = 0
                h = self.encode(e)
                form[i] += 1
                for k in self.pw[i]:
                    h, f = self.mulgen(h, k)
                    form += f
        else:
            for k, _ in suffix:
                e[k] = 0
            h, f = self.mulgen(self.encode(e), i)
            form += f
            for k, ek in suffix:
                cw = self.cw[(k, i)]
                ci = self._cidx[(k, i)]
                for _ in range(ek):
                    h, f = self.mulgen(h, k)
                    form += f
                    for l in cw:
                        h, f = self.mulgen(h, l)
                        form += f
                    form[ci] += 1
        self._memo[key] = (h, form)
        return h, form

    def letters_of(self, x: int) -> tuple:
        out = []
        for k, ek in enumerate(self.decode(x)):
            out.extend([k] * ek)
        return tuple(out)

    def mul_word(self, x: int, letters):
        form = np.zeros(self.R, dtype=np.int64)
        for k in letters:
            x, f = self.mulgen(x, k)
            form += f
        return x, form


# ------------------------------------------------------------------ tables


@dataclass(eq=False)
class GroupTable:
    order: int
    elements: list
    product: np.ndarray
    inverse: np.ndarray
    identity: int = 0
    pcp: PcPresentation | None = None
    pc_gens: tuple | None = None  # element indices of the pc generators
    label: str = ""

    def mul(self, a: int, b: int) -> int:
        return int(self.product[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def comm(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        p = self.product
        return int(p[p[self.inverse[a], self.inverse[b]], p[a, b]])

    def power(self, a: int, k: int) -> int:
        x = 0
        for _ in range(k % self.element_orders[a]):
            x = int(self.product[x, a])
        return x

    @cached_property
    def element_orders(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            x, k = a, 1
            while x != 0:
                x = int(self.product[x, a])
                k += 1
            out[a] = k
        return out

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    def name_of(self, x: int) -> str:
        if self.pcp is not None:
            parts = [f"g{k + 1}" if e == 1 else f"g{k + 1}^{e}" for k, e in enumerate(self.elements[x]) if e]
            return "*".join(parts) or "1"
        return str(self.elements[x])

    def index_of_word(self, word) -> int:
        x = 0
        gens = self.pc_gens
        for k, e in word:
            for _ in range(e):
                x = int(self.product[x, gens[k]])
        return x


def _finish_table(order, elements, prod, check=True, pcp=None, pc_gens=None, label=""):
    prod = np.asarray(prod, dtype=np.int32)
    inv = np.zeros(order, dtype=np.int32)
    ids = np.argwhere(prod == 0)
    inv[ids[:, 0]] = ids[:, 1]
    t = GroupTable(order, elements, prod, inv, 0, pcp, pc_gens, label)
    if check:
        check_table(t)
    return t


def check_table(t: GroupTable, sample: int = 200_000, seed: int = 0) -> None:
    """Identity, associativity (exhaustive up to order 256), then the Latin property."""
    n = t.order
    p = t.product
    ar = np.arange(n)
    if not (np.all(p[0] == ar) and np.all(p[:, 0] == ar)):
        raise InconsistentPresentation("index 0 is not a two-sided identity")
    if n <= 256:
        for a in range(n):
            left = p[p[a]]  # (a*b)*c over b, c
            right = p[a][p]  # a*(b*c)
            bad = np.argwhere(left != right)
            if len(bad):
                b, c = bad[0]
                raise InconsistentPresentation(
                    f"associativity fails for ({t.name_of(a)}, {t.name_of(int(b))}, {t.name_of(int(c))})"
                )
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, sample))
        lhs = p[p[a, b], c]
        rhs = p[a, p[b, c]]
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            k = bad[0]
            raise InconsistentPresentation(f"associativity fails for ({a[k]}, {b[k]}, {c[k]})")
    for a in range(n):
        if len(np.unique(p[a])) != n or len(np.unique(p[:, a])) != n:
            raise InconsistentPresentation(f"row/column {a} is not a permutation")


def build_table(pres: PcPresentation, bound: int = DEFAULT_BOUND, check: bool = True, label: str = "") -> GroupTable:
    order = pres.order
    if order > bound:
        raise ValueError(f"group order {order} exceeds the configured bound {bound}")
    col = Collector(pres)
    n = pres.n
    gen = np.zeros((order, max(n, 1)), dtype=np.int32)
    for x in range(order):
        for i in range(n):
            gen[x, i] = col.mulgen(x, i)[0]
    prod = np.zeros((order, order), dtype=np.int32)
    prod[:, 0] = np.arange(order)
    elements = [col.decode(x) for x in range(order)]
    for h in range(1, order):
        e = list(elements[h])
        last = max(k for k in range(n) if e[k])
        e[last] -= 1
        hp = col.encode(e)
        prod[:, h] = gen[prod[:, hp], last]
    pc_gens = tuple(col.encode(tuple(1 if k == i else 0 for k in range(n))) for i in range(n))
    t = _finish_table(order, elements, prod, check, pres, pc_gens, label)
    if check:
        _check_relations_hold(t)
    return t


def _check_relations_hold(t: GroupTable) -> None:
    p = t.pcp
    g = t.pc_gens
    for i in range(p.n):
        lhs = t.power(g[i], p.relative_orders[i])
        if lhs != t.index_of_word(p.power_word(i)):
            raise InconsistentPresentation(f"power relation of g{i + 1} does not hold after collection")
        for j in range(i + 1, p.n):
            if t.comm(g[j], g[i]) != t.index_of_word(p.comm_word(j, i)):
                raise InconsistentPresentation(f"commutator [g{j + 1},g{i + 1}] does not hold after collection")


def load_pcg(path) -> GroupTable:
    from pathlib import Path

    path = Path(path)
    return build_table(parse_presentation(path.read_text()), label=path.stem)


# ------------------------------------------------------------------ subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: GroupTable
    members: tuple
    generators: tuple = ()

    def __post_init__(self):
        if self.parent.order % len(self.members):
            raise AssertionError("subgroup order does not divide the group order")

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.member_set

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def key(self) -> tuple:
        return self.members


def closure(t: GroupTable, gens) -> tuple:
    """Sorted member tuple of the subgroup generated by gens."""
    gens = [int(g) for g in gens if int(g) != 0]
    seen = {0}
    frontier = [0]
    p = t.product
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(p[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def subgroup(t: GroupTable, gens) -> Subgroup:
    return Subgroup(t, closure(t, gens), tuple(int(g) for g in gens))


def is_normal(t: GroupTable, s: Subgroup) -> bool:
    mem = s.member_set
    gens = t.pc_gens if t.pc_gens else range(t.order)
    p, inv = t.product, t.inverse
    for g in gens:
        for x in s.members:
            if int(p[p[inv[g], x], g]) not in mem:
                return False
    return True


def structure(t: GroupTable):
    """(center, derived subgroup, exponent)."""
    p = t.product
    center = tuple(a for a in range(t.order) if np.array_equal(p[a], p[:, a]))
    comms = set()
    inv = t.inverse
    for a in range(t.order):
        comms.update(p[p[inv[a]][inv], p[a]].tolist())
    derived = closure(t, sorted(comms))
    exp = 1
    for o in set(t.element_orders.tolist()):
        exp = lcm(exp, int(o))
    return Subgroup(t, center, center), Subgroup(t, derived, tuple(sorted(comms))), exp


def cyclic_subgroups(t: GroupTable) -> dict:
    """member tuple -> generator, for every cyclic subgroup."""
    out: dict = {}
    p = t.product
    for a in range(t.order):
        x, mem = a, [0]
        while x != 0:
            mem.append(x)
            x = int(p[x, a])
        key = tuple(sorted(mem))
        out.setdefault(key, a)
    return out


def bicyclic_subgroups(t: GroupTable) -> list:
    """All subgroups <a, b> with [a, b] = 1, deduplicated and canonically ordered."""
    cyc = cyclic_subgroups(t)
    items = sorted(cyc.items(), key=lambda kv: (len(kv[0]), kv[0]))
    p = t.product
    found: dict = {}
    for key, g in items:
        found.setdefault(key, (g,) if g else ())
    for ia, (ka, a) in enumerate(items):
        if a == 0:
            continue
        for kb, b in items[ia + 1 :]:
            if b == 0 or p[a, b] != p[b, a]:
                continue
            sb = set(kb)
            if a in sb:
                continue
            sa = set(ka)
            if b in sa:
                continue
            mem = tuple(sorted({int(p[x, y]) for x in ka for y in kb}))
            found.setdefault(mem, (a, b))
    subs = [Subgroup(t, mem, gens) for mem, gens in found.items()]
    subs.sort(key=lambda s: (s.order, s.members))
    return subs


def quotient(t: GroupTable, nsub: Subgroup):
    """(G/N table, projection index list)."""
    if not is_normal(t, nsub):
        raise ValueError("subgroup is not normal")
    proj = [-1] * t.order
    reps = []
    p = t.product
    for a in range(t.order):
        if proj[a] >= 0:
            continue
        k = len(reps)
        reps.append(a)
        for x in nsub.members:
            proj[int(p[a, x])] = k
    q = len(reps)
    prod = np.zeros((q, q), dtype=np.int32)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            prod[i, j] = proj[int(p[a, b])]
    qt = _finish_table(q, [(r,) for r in reps], prod, check=q <= 64)
    return qt, proj


def direct_product(a: GroupTable, b: GroupTable, bound: int = DEFAULT_BOUND) -> GroupTable:
    order = a.order * b.order
    if order > bound:
        raise ValueError(f"direct product order {order} exceeds bound {bound}")
    pa = a.product.astype(np.int64)
    pb = b.product.astype(np.int64)
    prod = (pa[:, None, :, None] * b.order + pb[None, :, None, :]).reshape(order, order)
    elements = [tuple(x) + tuple(y) for x in a.elements for y in b.elements]
    pcp = pcg = None
    if a.pcp is not None and b.pcp is not None:
        na = a.pcp.n
        powers = dict(a.pcp.power_relations)
        comms = dict(a.pcp.commutator_relations)
        for i, w in b.pcp.power_relations.items():
            powers[i + na] = tuple((k + na, e) for k, e in w)
        for (j, i), w in b.pcp.commutator_relations.items():
            comms[(j + na, i + na)] = tuple((k + na, e) for k, e in w)
        pcp = PcPresentation(na + b.pcp.n, a.pcp.relative_orders + b.pcp.relative_orders, powers, comms)
        pcg = tuple(g * b.order for g in a.pc_gens) + tuple(b.pc_gens)
    label = f"{a.label}x{b.label}" if a.label or b.label else ""
    return _finish_table(order, elements, prod, check=order <= 256, pcp=pcp, pc_gens=pcg, label=label)


def subgroup_table(s: Subgroup) -> tuple:
    """(table of s with identity at index 0, list mapping new index -> parent index)."""
    mem = list(s.members)
    pos = {x: i for i, x in enumerate(mem)}
    p = s.parent.product
    sub = p[np.ix_(mem, mem)]
    prod = np.vectorize(pos.__getitem__)(sub) if len(mem) > 1 else np.zeros((1, 1), dtype=np.int32)
    return _finish_table(len(mem), [(x,) for x in mem], prod, check=False), mem


# ------------------------------------------------------------------ induced pc sequences


def induced_pcgs(t: GroupTable, members=None):
    """A polycyclic generating sequence with prime relative orders for a solvable
    (sub)group, built bottom-up along the derived series.

    Returns (gens, relative_orders), listed top-down.
    """
    mem = tuple(range(t.order)) if members is None else tuple(members)
    series = [mem]
    while len(series[-1]) > 1:
        cur = series[-1]
        comms = set()
        for a in cur:
            for b in cur:
                comms.add(t.comm(a, b))
        nxt = closure(t, sorted(comms))
        if len(nxt) == len(cur):
            raise ValueError("group is not solvable")
        series.append(nxt)
    seq: list = []
    orders: list = []
    H = set(series[-1])
    for k in range(len(series) - 2, -1, -1):
        top = series[k]
        while len(H) < len(top):
            # pick x outside H whose image mod H has prime order
            y = min(x for x in top if x not in H)
            m = 1
            z = y
            while z not in H:
                z = t.mul(z, y)
                m += 1
            pr = _smallest_prime(m)
            x = t.power(y, m // pr)
            seq.append(x)
            orders.append(pr)
            H = set(closure(t, list(H) + [x]))
    seq.reverse()
    orders.reverse()
    return tuple(seq), tuple(orders)


def _smallest_prime(m: int) -> int:
    d = 2
    while d * d <= m:
        if m % d == 0:
            return d
        d += 1
    return m


class Sifter:
    """Normal-form exponents of elements relative to a pc sequence of a subgroup."""

    def __init__(self, t: GroupTable, gens, orders):
        self.t = t
        self.gens = tuple(gens)
        self.orders = tuple(orders)
        m = len(gens)
        self.layers = [None] * (m + 1)
        self.layers[m] = frozenset([0])
        for i in range(m - 1, -1, -1):
            self.layers[i] = frozenset(closure(t, self.gens[i:]))
        self.inv_pows = []
        for g, r in zip(self.gens, self.orders):
            gi = t.inv(g)
            pw = [0]
            for _ in range(r - 1):
                pw.append(t.mul(pw[-1], gi))
            self.inv_pows.append(pw)

    def exponents(self, x: int) -> tuple:
        t = self.t
        out = []
        for i, r in enumerate(self.orders):
            for e in range(r):
                y = t.mul(self.inv_pows[i][e], x)
                if y in self.layers[i + 1]:
                    out.append(e)
                    x = y
                    break
            else:
                raise ValueError("element not in the subgroup")
        if x != 0:
            raise ValueError("sifting did not terminate at the identity")
        return tuple(out)

    def word(self, x: int) -> tuple:
        return tuple((k, e) for k, e in enumerate(self.exponents(x)) if e)

    def presentation(self) -> PcPresentation:
        t = self.t
        g = self.gens
        m = len(g)
        powers = {}
        comms = {}
        for i in range(m):
            w = self.word(t.power(g[i], self.orders[i]))
            if w:
                powers[i] = w
            for j in range(i + 1, m):
                w = self.word(t.comm(g[j], g[i]))
                if w:
                    comms[(j, i)] = w
        return PcPresentation(m, self.orders, powers, comms)


def cyclic_group(m: int) -> GroupTable:
    """C_m via a prime-factor chain (generator g1 of order m)."""
    primes = []
    x = m
    d = 2
    while x > 1:
        while x % d == 0:
            primes.append(d)
            x //= d
        d += 1
    k = len(primes)
    powers = {i: ((i + 1, 1),) for i in range(k - 1)}
    return build_table(PcPresentation(k, tuple(primes), powers, {}), label=f"C{m}")
