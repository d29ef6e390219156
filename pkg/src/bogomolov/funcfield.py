"""Rational functions over Q(zeta_m), substitution maps, and exponent matrices.

Representation
--------------
A ``MultiPoly`` stores integer coefficients over Z[zeta_m] = Z[t]/Phi_m(t).
Each term key packs the exponent of t (lowest slot) and of every variable
into one Python int, 16 bits per slot, so multiplying monomials is integer
addition.  Rational constants never appear inside polynomials; a ``RatFunc``
moves denominators of constants into its own denominator.  Equality of
rational functions is decided by cross-multiplication, no GCDs involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from .cyclofield import CycloField, CycloNum

try:  # multivariate gcd keeps substitution results small; correctness never depends on it
    import flint
except ImportError:  # pragma: no cover
    flint = None

SLOT = 16
SMASK = (1 << SLOT) - 1
HIGH = 1 << (SLOT - 1)


class SubstitutionError(ArithmeticError):
    """A substituted denominator became zero."""


class PolyRing:
    """Z[zeta_m][x_1..x_k]; variables are ordered by declaration."""

    _cache: dict = {}

    def __new__(cls, m: int, names):
        names = tuple(names)
        key = (m, names)
        got = cls._cache.get(key)
        if got is not None:
            return got
        self = super().__new__(cls)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.m = m
        self.field = CycloField(m)
        self.d = self.field.degree
        self.names = names
        self.k = len(names)
        self.index = {v: i for i, v in enumerate(names)}
        self.shift = [SLOT * (i + 1) for i in range(self.k)]
        self.overflow = sum(HIGH << (SLOT * i) for i in range(self.k + 1))
        phi = self.field.phi_m
        self.tail = [(i, -c) for i, c in enumerate(phi[:-1]) if c]  # t^d = sum tail
        cls._cache[key] = self
        return self

    def __repr__(self):
        return f"PolyRing({self.m}, {self.names})"

    def __reduce__(self):
        return (PolyRing, (self.m, self.names))

    # packing
    def pack(self, exps, t: int = 0) -> int:
        key = t
        for e, s in zip(exps, self.shift):
            if e < 0 or e >= HIGH:
                raise OverflowError(f"exponent {e} out of range")
            key |= e << s
        return key

    def unpack(self, key: int) -> tuple:
        return tuple((key >> s) & SMASK for s in self.shift)

    def var_key(self, name: str, e: int = 1) -> int:
        return e << self.shift[self.index[name]]

    # constructors
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {0: 1})

    def var(self, name: str) -> "MultiPoly":
        return MultiPoly(self, {self.var_key(name): 1})

    def zeta_poly(self, k: int = 1) -> "MultiPoly":
        return MultiPoly(self, _reduce_t(self, {k % self.m: 1}) if self.m > 1 else {0: 1})

    def const_int(self, c: int) -> "MultiPoly":
        return MultiPoly(self, {0: c} if c else {})


def _reduce_t(ring: PolyRing, terms: dict) -> dict:
    """Rewrite t^j for j >= deg Phi_m in place; drop zeros."""
    d = ring.d
    high = [k for k in terms if (k & SMASK) >= d]
    if high:
        high.sort(key=lambda k: -(k & SMASK))
        tail = ring.tail
        pending = high
        while pending:
            nxt = []
            for k in pending:
                c = terms.pop(k, 0)
                if not c:
                    continue
                base = k - d  # lowers t by d
                for i, pc in tail:
                    kk = base + i
                    v = terms.get(kk, 0) + c * pc
                    if v:
                        terms[kk] = v
                    else:
                        terms.pop(kk, None)
                    if (kk & SMASK) >= d:
                        nxt.append(kk)
            pending = sorted(set(nxt), key=lambda k: -(k & SMASK))
    return {k: v for k, v in terms.items() if v}


class MultiPoly:
    __slots__ = ("ring", "t")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.t = terms

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.t

    def __len__(self):
        return len(self.t)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring is other.ring and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def terms(self) -> dict:
        """Exponent tuple -> CycloNum (API view; internal storage is packed)."""
        out: dict = {}
        F = self.ring.field
        for k, c in self.t.items():
            e = self.ring.unpack(k)
            out[e] = out.get(e, F.zero()) + F.zeta(k & SMASK) * c
        return {e: v for e, v in sorted(out.items(), key=lambda kv: (sum(kv[0]), kv[0])) if v}

    def degree_in(self, i: int) -> int:
        s = self.ring.shift[i]
        return max(((k >> s) & SMASK for k in self.t), default=0)

    def min_exps(self) -> list:
        r = self.ring
        if not self.t:
            return [0] * r.k
        return [min((k >> s) & SMASK for k in self.t) for s in r.shift]

    def content(self) -> int:
        return reduce(gcd, self.t.values(), 0)

    def is_term(self) -> bool:
        """True for c * monomial with c in Z[zeta] (all keys share variable part)."""
        if not self.t:
            return False
        vs = {k >> SLOT for k in self.t}
        return len(vs) == 1

    # -- arithmetic
    def _check(self, other):
        if not isinstance(other, MultiPoly):
            raise TypeError("expected MultiPoly")
        if other.ring is not self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        if len(other.t) > len(self.t):
            self, other = other, self
        out = dict(self.t)
        for k, v in other.t.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                del out[k]
        return MultiPoly(self.ring, out)

    def __neg__(self):
        return MultiPoly(self.ring, {k: -v for k, v in self.t.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "MultiPoly":
        if not c:
            return self.ring.zero()
        return MultiPoly(self.ring, {k: v * c for k, v in self.t.items()})

    def shift_by(self, key: int) -> "MultiPoly":
        """Multiply by the monomial with packed key (may raise t above the bound)."""
        if not key:
            return self
        out = {k + key: v for k, v in self.t.items()}
        if key & SMASK:
            out = _reduce_t(self.ring, out)
        return MultiPoly(self.ring, out)

    def __mul__(self, other):
        self._check(other)
        a, b = self.t, other.t
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, vb), = b.items()
            out = {k + kb: v * vb for k, v in a.items()}
        else:
            out: dict = {}
            get = out.get
            for kb, vb in b.items():
                for ka, va in a.items():
                    kk = ka + kb
                    out[kk] = get(kk, 0) + va * vb
        ring = self.ring
        ov = ring.overflow
        for k in out:
            if k & ov:
                raise OverflowError("exponent overflow in polynomial product")
        if ring.d >= 1:
            out = _reduce_t(ring, out)
        else:
            out = {k: v for k, v in out.items() if v}
        return MultiPoly(ring, out)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def exact_div_int(self, c: int) -> "MultiPoly":
        return MultiPoly(self.ring, {k: v // c for k, v in self.t.items()})

    def __repr__(self):
        return f"MultiPoly({poly_str(self)})"


def _coef_str(ring: PolyRing, coeffs: dict) -> str:
    """coeffs: t-exponent -> int."""
    parts = []
    for j in sorted(coeffs):
        c = coeffs[j]
        mono = "" if j == 0 else ("zeta" if j == 1 else f"zeta^{j}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def poly_str(p: MultiPoly) -> str:
    ring = p.ring
    if not p.t:
        return "0"
    groups: dict = {}
    for k, c in p.t.items():
        groups.setdefault(k >> SLOT, {})[k & SMASK] = c
    out = []
    order = sorted(groups, key=lambda v: (-sum(ring.unpack(v << SLOT)), [-x for x in ring.unpack(v << SLOT)]))
    for v in order:
        exps = ring.unpack(v << SLOT)
        mono = "*".join(
            (n if e == 1 else f"{n}^{e}") for n, e in zip(ring.names, exps) if e
        )
        cs = groups[v]
        cstr = _coef_str(ring, cs)
        if not mono:
            out.append(cstr if len(cs) == 1 or len(groups) == 1 else f"({cstr})")
        elif len(cs) == 1 and cs.get(0) == 1:
            out.append(mono)
        elif len(cs) == 1 and cs.get(0) == -1:
            out.append("-" + mono)
        elif len(cs) == 1 and 0 in cs:
            out.append(f"{cs[0]}*{mono}")
        else:
            out.append(f"({cstr})*{mono}")
    return " + ".join(out).replace("+ -", "- ")


# ------------------------------------------------------------------ rational functions


class RatFunc:
    """num/den over Z[zeta]; content and common monomial factors stripped."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, normalize: bool = True):
        ring = num.ring
        if den is None:
            den = ring.one()
        if den.ring is not ring:
            raise ValueError("ring mismatch")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @classmethod
    def const(cls, ring: PolyRing, c) -> "RatFunc":
        if isinstance(c, CycloNum):
            if c.field is not ring.field:
                raise ValueError("constant from a different field")
            den = lcm(*(Fraction(x).denominator for x in c.coeffs)) if c.coeffs else 1
            terms = {j: int(x * den) for j, x in enumerate(c.coeffs) if x}
            return cls(MultiPoly(ring, terms), ring.const_int(den))
        c = Fraction(c)
        return cls(ring.const_int(c.numerator), ring.const_int(c.denominator))

    @classmethod
    def var(cls, ring: PolyRing, name: str) -> "RatFunc":
        return cls(ring.var(name), ring.one(), normalize=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = _lift(self.ring, other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-_lift(self.ring, other))

    def __rsub__(self, other):
        return _lift(self.ring, other) + (-self)

    def __mul__(self, other):
        other = _lift(self.ring, other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, normalize=False)

    def __truediv__(self, other):
        return self * _lift(self.ring, other).inverse()

    def __rtruediv__(self, other):
        return _lift(self.ring, other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num**e, self.den**e)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = _lift(self.ring, other)
            except TypeError:
                return NotImplemented
        return rf_equal(self, other)

    __hash__ = None

    def is_monomial(self) -> bool:
        return self.num.is_term() and self.den.is_term()

    def monomial_parts(self):
        """(coefficient CycloNum, exponent vector) if this is c * Laurent monomial, else None."""
        if not self.is_monomial():
            return None
        ring = self.ring
        kn = next(iter(self.num.t)) >> SLOT
        kd = next(iter(self.den.t)) >> SLOT
        en = ring.unpack(kn << SLOT)
        ed = ring.unpack(kd << SLOT)
        F = ring.field
        cn = sum((F.zeta(k & SMASK) * v for k, v in self.num.t.items()), F.zero())
        cd = sum((F.zeta(k & SMASK) * v for k, v in self.den.t.items()), F.zero())
        return cn / cd, tuple(a - b for a, b in zip(en, ed))

    def free_of(self, names) -> bool:
        idx = [self.ring.index[n] for n in names if n in self.ring.index]
        return all(self.num.degree_in(i) == 0 and self.den.degree_in(i) == 0 for i in idx)

    def __str__(self):
        n = poly_str(self.num)
        if len(self.den.t) == 1 and self.den.t.get(0) == 1:
            return n
        d = poly_str(self.den)
        n = n if len(self.num.t) <= 1 else f"({n})"
        d = d if len(self.den.t) <= 1 and not any(ch in d for ch in "+*") else f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self})"


def _lift(ring, x) -> RatFunc:
    if isinstance(x, RatFunc):
        if x.ring is not ring:
            raise ValueError(f"ring mismatch: {x.ring} vs {ring}")
        return x
    if isinstance(x, MultiPoly):
        return RatFunc(x)
    if isinstance(x, (int, Fraction, CycloNum)):
        return RatFunc.const(ring, x)
    raise TypeError(f"cannot use {type(x).__name__} as a rational function")


def _normalize(num: MultiPoly, den: MultiPoly):
    ring = num.ring
    if num.is_zero():
        return num, ring.one()
    # common monomial factor (variables only, not t)
    mn, md = num.min_exps(), den.min_exps()
    common = [min(a, b) for a, b in zip(mn, md)]
    if any(common):
        key = ring.pack(common)
        num = MultiPoly(ring, {k - key: v for k, v in num.t.items()})
        den = MultiPoly(ring, {k - key: v for k, v in den.t.items()})
    # a pure power of zeta in the denominator moves to the numerator
    if len(den.t) == 1:
        (k, v), = den.t.items()
        tj = k & SMASK
        if tj:
            inv = ring.m - tj
            num = num.shift_by(inv)
            den = MultiPoly(ring, {k - tj: v})
    g = gcd(num.content(), den.content())
    # make the denominator's leading integer coefficient positive
    lead = den.t[max(den.t)]
    if lead < 0:
        g = -g
    if g != 1:
        num = num.exact_div_int(g)
        den = den.exact_div_int(g)
    return num, den


def rf_binary(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_equal(a: RatFunc, b: RatFunc) -> bool:
    if a.ring is not b.ring:
        raise ValueError("ring mismatch")
    if a.den == b.den:
        return a.num == b.num
    return (a.num * b.den) == (b.num * a.den)


# ------------------------------------------------------------------ maps


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Images of the source ring's variables, as rational functions in the target ring."""

    source: PolyRing
    target: PolyRing
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.k:
            raise ValueError("one image per source variable required")
        for im in self.images:
            if im.ring is not self.target:
                raise ValueError("image in the wrong ring")

    @classmethod
    def identity(cls, ring: PolyRing) -> "FieldMap":
        return cls(ring, ring, tuple(RatFunc.var(ring, v) for v in ring.names))

    @classmethod
    def from_dict(cls, source: PolyRing, target: PolyRing, imgs: dict) -> "FieldMap":
        """Variables absent from imgs map to the same-named target variable."""
        out = []
        for v in source.names:
            if v in imgs:
                out.append(imgs[v])
            elif v in target.index:
                out.append(RatFunc.var(target, v))
            else:
                raise ValueError(f"no image for {v}")
        return cls(source, target, tuple(out))

    def image(self, name: str) -> RatFunc:
        return self.images[self.source.index[name]]

    def is_identity(self) -> bool:
        if self.source is not self.target:
            return False
        return all(rf_equal(im, RatFunc.var(self.target, v)) for v, im in zip(self.source.names, self.images))

    def equals(self, other: "FieldMap") -> bool:
        return all(rf_equal(a, b) for a, b in zip(self.images, other.images))

    def __str__(self):
        return ", ".join(f"{v} -> {im}" for v, im in zip(self.source.names, self.images))


class _MapCache:
    """Per-map memo of powers of image numerators and denominators."""

    def __init__(self, m: FieldMap):
        self.m = m
        self.pn = [[im.num.ring.one(), im.num] for im in m.images]
        self.pd = [[im.den.ring.one(), im.den] for im in m.images]
        self.mono = all(im.is_monomial() for im in m.images)

    def pw(self, table, i, e):
        lst = table[i]
        while len(lst) <= e:
            lst.append(lst[-1] * lst[1])
        return lst[e]


def _eval_hom(cache: _MapCache, p: MultiPoly, degs: list) -> MultiPoly:
    """sum_c c * prod_i num_i^{e_i} den_i^{degs_i - e_i}, recursively by variable."""
    src = p.ring
    tgt = cache.m.target
    # group terms by their exponent of variable 0, then recurse
    return _eval_rec(cache, src, tgt, p.t, 0, degs)


def _eval_rec(cache, src, tgt, terms: dict, i: int, degs) -> MultiPoly:
    if i == src.k:
        # constant in Z[t]: translate t-exponents
        return MultiPoly(tgt, _reduce_t(tgt, {k & SMASK: v for k, v in terms.items()}) if tgt.d else dict(terms))
    s = src.shift[i]
    buckets: dict = {}
    for k, v in terms.items():
        e = (k >> s) & SMASK
        buckets.setdefault(e, {})[k & ~(SMASK << s)] = v
    D = degs[i]
    out = tgt.zero()
    for e, sub in buckets.items():
        inner = _eval_rec(cache, src, tgt, sub, i + 1, degs)
        fac = cache.pw(cache.pn, i, e) * cache.pw(cache.pd, i, D - e)
        out = out + inner * fac
    return out


def apply_map(m: FieldMap, f: RatFunc, cache: _MapCache | None = None) -> RatFunc:
    """Simultaneous substitution of every variable of f by its image."""
    if f.ring is not m.source:
        raise ValueError(f"map source {m.source} does not match {f.ring}")
    cache = cache or _MapCache(m)
    if cache.mono:
        return _apply_monomial(m, f)
    k = m.source.k
    degs = [max(f.num.degree_in(i), f.den.degree_in(i)) for i in range(k)]
    num = _eval_hom(cache, f.num, degs)
    den = _eval_hom(cache, f.den, degs)
    if den.is_zero():
        raise SubstitutionError(f"denominator {poly_str(f.den)} vanishes under the substitution")
    return cancel(RatFunc(num, den))


def _apply_monomial(m: FieldMap, f: RatFunc) -> RatFunc:
    """Fast path: every image is (Z[zeta] term)/(Z[zeta] term)."""
    tgt = m.target
    parts = []
    for im in m.images:
        parts.append((im.num, im.den))
    degs = [max(f.num.degree_in(i), f.den.degree_in(i)) for i in range(m.source.k)]

    def ev(p: MultiPoly) -> MultiPoly:
        out = tgt.zero()
        acc_cache: dict = {}
        res: dict = {}
        for key, c in p.t.items():
            exps = m.source.unpack(key)
            vk = key >> SLOT
            mono = acc_cache.get(vk)
            if mono is None:
                mono = tgt.one()
                for i, e in enumerate(exps):
                    n_, d_ = parts[i]
                    if e:
                        mono = mono * _term_pow(n_, e)
                    if degs[i] - e:
                        mono = mono * _term_pow(d_, degs[i] - e)
                acc_cache[vk] = mono
            tj = key & SMASK
            for kk, vv in mono.t.items():
                kk2 = kk + tj
                res[kk2] = res.get(kk2, 0) + vv * c
        return MultiPoly(tgt, _reduce_t(tgt, res) if tgt.d else {k: v for k, v in res.items() if v})

    num, den = ev(f.num), ev(f.den)
    if den.is_zero():
        raise SubstitutionError("denominator vanishes under the substitution")
    return RatFunc(num, den)


_TPOW: dict = {}


def _term_pow(p: MultiPoly, e: int) -> MultiPoly:
    key = (id(p), e)
    got = _TPOW.get(key)
    if got is not None and got[0] is p:
        return got[1]
    r = p**e
    if len(_TPOW) > 100_000:
        _TPOW.clear()
    _TPOW[key] = (p, r)
    return r


def map_images(m: FieldMap, fs) -> list:
    cache = _MapCache(m)
    return [apply_map(m, f, cache) for f in fs]


def compose_maps(outer: FieldMap, inner: FieldMap) -> FieldMap:
    """v -> inner applied to outer(v).

    Reading generator actions as substitutions, the composite performs the
    substitution of ``inner`` after ``outer``'s images are formed; for
    automorphisms acting on the left this is inner . outer.
    """
    if outer.target is not inner.source:
        raise ValueError("incompatible maps for composition")
    return FieldMap(outer.source, inner.target, tuple(map_images(inner, outer.images)))


def is_monomial_map(m: FieldMap):
    """(True, [(coeff, exponent vector), ...]) or (False, None)."""
    parts = []
    for im in m.images:
        mp = im.monomial_parts()
        if mp is None:
            return False, None
        parts.append(mp)
    return True, parts


# ------------------------------------------------------------------ exponent matrices


class NonMonomialError(ValueError):
    pass


def exponent_matrix(monomials) -> list:
    rows = []
    for f in monomials:
        mp = f.monomial_parts()
        if mp is None:
            raise NonMonomialError(f"{f} is not a monomial")
        rows.append(list(mp[1]))
    return rows


def int_det(mat) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(map(int, r)) for r in mat]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exponent_det(monomials) -> int:
    mat = exponent_matrix(monomials)
    if mat and len(mat) != len(mat[0]):
        raise ValueError(f"{len(mat)} monomials in {len(mat[0])} variables: not square")
    return int_det(mat)


# ------------------------------------------------------------------ expression parser


class ExprSyntaxError(ValueError):
    pass


def _tokenize(src: str):
    i = 0
    out = []
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(("int", src[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            out.append(("id", src[i:j], i))
            i = j
        elif ch in "+-*/^()":
            out.append((ch, ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r} at column {i + 1}")
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, ring: PolyRing, env: dict | None):
        self.toks = _tokenize(src)
        self.pos = 0
        self.ring = ring
        self.env = env or {}
        self.src = src

    def peek(self):
        return self.toks[self.pos][0]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r} at column {tok[2] + 1} in {self.src!r}")
        self.pos += 1
        return tok

    def parse(self) -> RatFunc:
        v = self.expr()
        if self.peek() != "end":
            tok = self.toks[self.pos]
            raise ExprSyntaxError(f"trailing input at column {tok[2] + 1} in {self.src!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in "+-" and self.peek() != "end":
            op = self.take()[0]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.exponent()
            return base**e
        return base

    def exponent(self) -> int:
        sign = 1
        if self.peek() == "(":
            self.take()
            while self.peek() in ("-", "+"):
                if self.take()[0] == "-":
                    sign = -sign
            e = int(self.take("int")[1])
            self.take(")")
            return sign * e
        while self.peek() == "-":
            self.take()
            sign = -sign
        return sign * int(self.take("int")[1])

    def atom(self):
        kind, text, col = self.take()
        if kind == "int":
            return RatFunc.const(self.ring, int(text))
        if kind == "id":
            if text in self.env:
                return self.env[text]
            if text == "zeta":
                return RatFunc(self.ring.zeta_poly(1))
            if text in self.ring.index:
                return RatFunc.var(self.ring, text)
            raise ExprSyntaxError(f"unknown identifier {text!r} at column {col + 1} in {self.src!r}")
        if kind == "(":
            v = self.expr()
            self.take(")")
            return v
        raise ExprSyntaxError(f"unexpected {text or kind!r} at column {col + 1} in {self.src!r}")


def parse_expr(src: str, ring: PolyRing, env: dict | None = None) -> RatFunc:
    """Parse an expression over ``ring``; ``env`` maps extra names to RatFuncs."""
    return _Parser(src, ring, env).parse()


def transfer(f: RatFunc, ring: PolyRing) -> RatFunc:
    """Re-home f into ``ring`` by variable name (same conductor).

    Raises if f involves a variable that ``ring`` lacks.
    """
    src = f.ring
    if src is ring:
        return f
    if src.m != ring.m:
        raise ValueError("conductor mismatch")
    pos = []
    for i, name in enumerate(src.names):
        pos.append(ring.shift[ring.index[name]] if name in ring.index else None)

    def move(p: MultiPoly) -> MultiPoly:
        out = {}
        for k, v in p.t.items():
            nk = k & SMASK
            for i, s in enumerate(src.shift):
                e = (k >> s) & SMASK
                if e:
                    if pos[i] is None:
                        raise ValueError(f"variable {src.names[i]} not available in {ring.names}")
                    nk |= e << pos[i]
            out[nk] = v
        return MultiPoly(ring, out)

    return RatFunc(move(f.num), move(f.den), normalize=False)


def substitute_constants(f: RatFunc, values: dict) -> RatFunc:
    """Replace the named variables by integers (other variables untouched)."""
    ring = f.ring
    imgs = {name: RatFunc.const(ring, c) for name, c in values.items()}
    return apply_map(FieldMap.from_dict(ring, ring, imgs), f)


def _flint_ctx(ring: PolyRing):
    return flint.fmpz_mpoly_ctx.get(("t_",) + tuple(f"x{i}_" for i in range(ring.k)), "lex")


def _to_flint(p: MultiPoly, ctx):
    ring = p.ring
    return ctx.from_dict({(k & SMASK,) + ring.unpack(k): v for k, v in p.t.items()})


def _from_flint(q, ring: PolyRing) -> MultiPoly:
    out = {}
    for exps, c in q.to_dict().items():
        out[ring.pack(exps[1:], exps[0])] = int(c)
    return MultiPoly(ring, out)


def cancel(f: RatFunc) -> RatFunc:
    """Divide out a common polynomial factor of numerator and denominator.

    The zeta slot is treated as an extra indeterminate, so every factor found
    is a true common factor; factors visible only modulo the cyclotomic
    polynomial can survive.  Without python-flint this is the identity.
    """
    if flint is None or f.num.is_zero() or (len(f.num.t) == 1 and len(f.den.t) == 1):
        return f
    ctx = _flint_ctx(f.ring)
    a, b = _to_flint(f.num, ctx), _to_flint(f.den, ctx)
    g = a.gcd(b)
    if g.is_constant():
        return f
    return RatFunc(_from_flint(a // g, f.ring), _from_flint(b // g, f.ring))
