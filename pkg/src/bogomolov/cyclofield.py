"""Exact arithmetic in Q(zeta_m) with rational coefficients modulo Phi_m."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def _poly_divmod(a: list, b: list) -> tuple:
    """Integer polynomial division by a monic b (coefficient lists, low degree first)."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for i, bi in enumerate(b):
                a[k - db + i] -= c * bi
    return q, a[:db] if db else []


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Coefficients of Phi_m, lowest degree first, via x^m - 1 = prod_{d|m} Phi_d."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not any(rem)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


class FieldMismatch(ValueError):
    pass


class CycloField:
    _cache: dict = {}

    def __new__(cls, m: int):
        got = cls._cache.get(m)
        if got is not None:
            return got
        self = super().__new__(cls)
        self.m = m
        self.phi_m = cyclotomic_poly(m)
        self.degree = len(self.phi_m) - 1
        cls._cache[m] = self
        return self

    def __repr__(self):
        return f"CycloField({self.m})"

    def __reduce__(self):
        return (CycloField, (self.m,))

    def zero(self) -> "CycloNum":
        return CycloNum(self, ())

    def one(self) -> "CycloNum":
        return CycloNum(self, (1,))

    def __call__(self, x) -> "CycloNum":
        if isinstance(x, CycloNum):
            if x.field is not self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        return CycloNum(self, (Fraction(x),))

    def zeta(self, k: int = 1) -> "CycloNum":
        k %= self.m
        return CycloNum(self, tuple([0] * k + [1]))

    def reduce(self, coeffs) -> tuple:
        """Coefficients reduced mod Phi_m, trailing zeros dropped."""
        c = list(coeffs)
        d = self.degree
        phi = self.phi_m
        for k in range(len(c) - 1, d - 1, -1):
            v = c[k]
            if v:
                for i in range(d + 1):
                    c[k - d + i] -= v * phi[i]
        c = c[:d]
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)


class CycloNum:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: CycloField, coeffs):
        self.field = field
        self.coeffs = field.reduce(Fraction(c) for c in coeffs)
        self._hash = None

    # -- helpers
    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.field is not self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.field, (other,))
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return other.field is self.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == self.field.reduce((Fraction(other),))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.m, self.coeffs))
        return self._hash

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return CycloNum(self.field, [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return self.field.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return CycloNum(self.field, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid over Q[x]: s*a + t*phi = 1
        r0, r1 = [Fraction(c) for c in self.field.phi_m], list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or (len(r1) == 1 and r1[0] == 0):
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
            if not r1:
                break
        if len(r1) == 1 and r1[0] != 0:
            return CycloNum(self.field, [c / r1[0] for c in s1])
        # gcd is r0 (nonconstant would contradict irreducibility)
        raise ArithmeticError("non-invertible element: cyclotomic polynomial not irreducible?")

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def embed(self, target: CycloField) -> "CycloNum":
        return cyclo_embed(self, target)

    def __repr__(self):
        return f"CycloNum({self.field.m}, {self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("zeta" if k == 1 else f"zeta^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _psub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _qdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    a = list(a)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return _trim(q), _trim(a[: len(b) - 1])


def cyclo_arith(op: str, a: CycloNum, b) -> CycloNum:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("exponent must be an integer")
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def cyclo_embed(a: CycloNum, target: CycloField) -> CycloNum:
    m, M = a.field.m, target.m
    if M % m:
        raise FieldMismatch(f"conductor {m} does not divide {M}")
    step = M // m
    out = [Fraction(0)] * (step * max(len(a.coeffs) - 1, 0) + 1)
    for k, c in enumerate(a.coeffs):
        out[k * step] += c
    return CycloNum(target, out)
