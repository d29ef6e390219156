"""Independent oracles: nothing here imports the package's linear algebra."""

from itertools import product
from math import gcd

import numpy as np


def elementary_divisors(mat) -> list:
    """Nontrivial invariant factors of an integer matrix (plain Smith reduction)."""
    a = [list(map(int, r)) for r in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    r0 = 0
    for c0 in range(cols):
        if r0 >= rows:
            break
        while True:
            piv = None
            for i in range(r0, rows):
                for j in range(c0, cols):
                    if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return _chain(diag)
            i, j = piv
            a[r0], a[i] = a[i], a[r0]
            for row in a:
                row[c0], row[j] = row[j], row[c0]
            p = a[r0][c0]
            dirty = False
            for i in range(r0 + 1, rows):
                q = a[i][c0] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r0])]
                dirty |= a[i][c0] != 0
            for j in range(c0 + 1, cols):
                q = a[r0][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[c0]
                dirty |= a[r0][j] != 0
            if not dirty:
                break
        diag.append(abs(a[r0][c0]))
        r0 += 1
    return _chain(diag)


def _chain(diag):
    d = [x for x in diag if x]
    # turn an arbitrary diagonal into a divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = gcd(d[i], d[j])
                l = d[i] * d[j] // g
                if (d[i], d[j]) != (g, l):
                    d[i], d[j] = g, l
                    changed = True
    return sorted(x for x in d if x > 1)


def schur_multiplier_integral(t) -> list:
    """Torsion of H_2(G, Z) from the normalized bar complex: invariant factors of d3.

    ker d2 is saturated in C_2, so the torsion of C_2 / im d3 is exactly H_2's.
    """
    m = t.order
    p = t.product
    idx = {}
    for g in range(1, m):
        for h in range(1, m):
            idx[(g, h)] = len(idx)
    cols = []
    for g in range(1, m):
        for h in range(1, m):
            for k in range(1, m):
                col = {}
                for sign, pair in ((1, (h, k)), (-1, (int(p[g, h]), k)), (1, (g, int(p[h, k]))), (-1, (g, h))):
                    if 0 in pair:
                        continue
                    r = idx[pair]
                    col[r] = col.get(r, 0) + sign
                cols.append(col)
    mat = [[0] * len(cols) for _ in range(len(idx))]
    for j, col in enumerate(cols):
        for r, v in col.items():
            mat[r][j] = v
    return elementary_divisors(mat)


def _homs_to_cyclic(t, N: int) -> list:
    """Every homomorphism G -> Z/N, as value arrays, by extending generator images."""
    gens = [int(g) for g in t.pc_gens]
    p = t.product
    out = []
    for imgs in product(range(N), repeat=len(gens)):
        a = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, v in zip(gens, imgs):
                    y, w = int(p[x, g]), (a[x] + v) % N
                    if y not in a:
                        a[y] = w
                        nxt.append(y)
                    elif a[y] != w:
                        ok = False
            frontier = nxt
        if ok and len(a) == t.order:
            arr = np.array([a[x] for x in range(t.order)])
            if not np.any((arr[:, None] + arr[None, :] - arr[p]) % N):
                out.append(arr)
    return out


def enumerate_cocycles(t, n: int, chunk: int = 1 << 18, materialize: bool = True):
    """All normalized 2-cocycles G x G -> Z/n, yielded in blocks of flattened rows.

    The (|G|-1)^2 cochain values are fixed one at a time, trying every residue.
    A partial assignment is dropped as soon as some cocycle identity among the
    fixed values fails, so the search is exhaustive over all cochains while
    only ever holding consistent prefixes.  Blocks are split depth-first so
    memory stays bounded by ``chunk`` rows per level.  With ``materialize``
    off, only the number of cocycles in each block is yielded.
    """
    m = t.order
    p = t.product
    nv = (m - 1) ** 2

    def var(g, h):
        return None if g == 0 or h == 0 else (g - 1) * (m - 1) + (h - 1)

    constraints = []
    for g in range(1, m):
        for h in range(1, m):
            for k in range(1, m):
                coef: dict = {}
                for sign, (a, b) in ((1, (g, h)), (1, (int(p[g, h]), k)), (-1, (h, k)), (-1, (g, int(p[h, k])))):
                    v = var(a, b)
                    if v is not None:
                        coef[v] = coef.get(v, 0) + sign
                coef = {v: c for v, c in coef.items() if c % n}
                if coef:
                    constraints.append(coef)
    # greedy order: next variable is the one completing the most identities
    order, placed = [], set()
    pending = list(range(len(constraints)))
    while len(order) < nv:
        score = {}
        for ci in pending:
            missing = [v for v in constraints[ci] if v not in placed]
            if len(missing) == 1:
                score[missing[0]] = score.get(missing[0], 0) + 1
        nxt = max(score, key=lambda v: (score[v], -v)) if score else min(set(range(nv)) - placed)
        order.append(nxt)
        placed.add(nxt)
        pending = [ci for ci in pending if not set(constraints[ci]) <= placed]
    pos = {v: i for i, v in enumerate(order)}
    by_last: dict = {}
    for coef in constraints:
        last = max(pos[v] for v in coef)
        by_last.setdefault(last, []).append(
            (np.array([pos[v] for v in coef]), np.array(list(coef.values()), dtype=np.int64)))
    back = [pos[v] for v in range(nv)]  # to (g, h) row-major column order
    pow2 = n & (n - 1) == 0

    def reduce(x):
        return x & (n - 1) if pow2 else x % n

    def holds(cols, idx, c):
        acc = np.zeros(cols.shape[1], dtype=np.int16)
        for j, cj in zip(idx.tolist(), c.tolist()):
            acc += cj * cols[j]
        return reduce(acc) == 0

    # partial assignments are stored column-major: cols[j] holds variable j of
    # every row; rows i.. are scratch space until variable i is placed
    def extend(cols, i):
        rows = cols.shape[1]
        if i == nv:
            yield cols[back].T.astype(np.int64) if materialize else cols.shape[1]
            return
        checks = by_last.get(i, ())
        solver = next((k for k, (idx, c) in enumerate(checks) if gcd(int(c[idx == i][0]), n) == 1), None)
        if solver is None:
            if rows * n > chunk and rows > 1:
                half = rows // 2
                yield from extend(cols[:, :half], i)
                yield from extend(cols[:, half:], i)
                return
            cols = np.repeat(cols, n, axis=1)
            cols[i] = np.tile(np.arange(n, dtype=np.int16), rows)
        else:
            # only one residue can satisfy this identity; every other one is pruned by it
            idx, c = checks[solver]
            acc = np.zeros(rows, dtype=np.int16)
            for j, cj in zip(idx.tolist(), c.tolist()):
                if j != i:
                    acc = (acc + cj * cols[j]) % n
            cols[i] = (-acc * pow(int(c[idx == i][0]), -1, n)) % n
        if checks:
            keep = holds(cols, *checks[0])
            for idx, c in checks[1:]:
                keep &= holds(cols, idx, c)
            if not keep.all():
                cols = cols[:, keep]
        if cols.shape[1]:
            yield from extend(cols, i + 1)

    yield from extend(np.zeros((nv, 1), dtype=np.int16), 0)


def _coboundaries(t, n: int) -> np.ndarray:
    """Sorted distinct coboundaries of all normalized 1-cochains, as byte rows."""
    m = t.order
    p = t.product
    grid = np.stack(np.meshgrid(*[np.arange(n, dtype=np.int16)] * (m - 1), indexing="ij"), -1).reshape(-1, m - 1)
    b = np.concatenate([np.zeros((len(grid), 1), dtype=np.int16), grid], axis=1)
    g, h = np.meshgrid(np.arange(1, m), np.arange(1, m), indexing="ij")
    g, h = g.ravel(), h.ravel()
    d = ((b[:, g] + b[:, h] - b[:, p[g, h]]) % n).astype(np.int8)
    return np.unique(np.ascontiguousarray(d).view(np.dtype((np.void, d.shape[1]))).ravel())


def _is_member(sorted_rows: np.ndarray, row: np.ndarray) -> bool:
    key = np.ascontiguousarray(row.astype(np.int8)).view(sorted_rows.dtype)[0]
    i = np.searchsorted(sorted_rows, key)
    return bool(i < len(sorted_rows) and sorted_rows[i] == key)


def brute_h2(t, n: int) -> tuple:
    """(|H^2(G,Z/n)|, |M(G)[n]|) by exhaustive search over normalized cochains.

    The second number is the size of the image of H^2(G,Z/n) in H^2(G,Q/Z),
    i.e. the n-torsion of the Schur multiplier.  The kernel of that map is
    spanned by carry cocycles of characters G -> Z/|G| reduced mod n.
    """
    m = t.order
    p = t.product
    count = sum(enumerate_cocycles(t, n, materialize=False))
    cob = _coboundaries(t, n)
    homs = _homs_to_cyclic(t, m)

    def carry(a):
        return ((((a[:, None] + a[None, :] - a[p]) // m) % n)[1:, 1:]).ravel()

    carries = [carry(a) for a in homs]
    # distinct carry classes modulo B^2
    reps: list = []
    for c in carries:
        if not any(_is_member(cob, (c - r) % n) for r in reps):
            reps.append(c)
    # they must form a subgroup, else B^2 + <carries> would be bigger than counted
    for x in reps:
        for y in reps:
            assert any(_is_member(cob, (x + y - r) % n) for r in reps)
    return count // len(cob), count // (len(cob) * len(reps))
