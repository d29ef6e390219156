"""Commutator pairings and a certified isoclinism search.

Two groups are isoclinic when there are isomorphisms ``theta`` between the
central quotients and ``phi`` between the derived subgroups such that
``phi([g, h]) = [g', h']`` whenever ``g'``, ``h'`` lift ``theta(gZ)``,
``theta(hZ)``.  The search assigns images to a generating sequence of
``G1/Z1`` depth-first; every partial assignment is extended homomorphically
over the subgroup it generates and the forced values of ``phi`` are checked
for consistency, so dead branches are cut early.  A node budget turns an
expensive search into an explicit ``"undecided"`` verdict.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .pcgroup import GroupTable, quotient, structure, subgroup_table

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass(eq=False)
class CommutatorPairing:
    group: GroupTable
    quotient: GroupTable
    derived: GroupTable
    pairing: np.ndarray  # |Q| x |Q| derived-table indices
    projection: list  # G index -> Q index
    derived_embedding: list  # derived-table index -> G index

    @property
    def values(self) -> list:
        return sorted(set(self.pairing.ravel().tolist()))


def commutator_pairing(g: GroupTable) -> CommutatorPairing:
    center, derived, _ = structure(g)
    qt, proj = quotient(g, center)
    dt, emb = subgroup_table(derived)
    pos = {x: i for i, x in enumerate(emb)}
    p, inv = g.product, g.inverse
    proj_arr = np.asarray(proj)
    pair = np.full((qt.order, qt.order), -1, dtype=np.int64)
    # every lift is visited, so a disagreement between lifts would be caught here
    for a in range(g.order):
        row = p[p[inv[a]][inv], p[a]]  # [a, b] for all b
        qa = proj[a]
        for b, c in enumerate(row.tolist()):
            d = pos[c]
            cur = pair[qa, proj_arr[b]]
            if cur < 0:
                pair[qa, proj_arr[b]] = d
            elif cur != d:
                raise AssertionError(f"commutator pairing depends on the lift at ({a}, {b})")
    return CommutatorPairing(g, qt, dt, pair, proj, emb)


def _row_profile(cp: CommutatorPairing, x: int) -> tuple:
    orders = cp.derived.element_orders
    row = cp.pairing[x].tolist()
    counts = Counter(row)
    return tuple(sorted((int(orders[v]), c) for v, c in counts.items()))


def fingerprint(g) -> tuple:
    """Isoclinism invariant: sizes, pairing-value orders, and per-row value distributions."""
    cp = g if isinstance(g, CommutatorPairing) else commutator_pairing(g)
    orders = cp.derived.element_orders
    value_orders = tuple(sorted(Counter(int(orders[v]) for v in cp.pairing.ravel().tolist()).items()))
    rows = tuple(sorted(_row_profile(cp, x) for x in range(cp.quotient.order)))
    return (cp.quotient.order, cp.derived.order, value_orders, rows)


@dataclass
class IsoclinismCertificate:
    theta: list  # Q1 index -> Q2 index
    phi: list  # D1 index -> D2 index

    def as_dict(self) -> dict:
        return {"theta": list(self.theta), "phi": list(self.phi)}


@dataclass
class IsoclinismResult:
    verdict: str  # "isoclinic" | "not isoclinic" | "undecided"
    certificate: IsoclinismCertificate | None = None
    nodes: int = 0
    reason: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def isoclinic(self) -> bool | None:
        return {"isoclinic": True, "not isoclinic": False}.get(self.verdict)

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "nodes": self.nodes,
            "reason": self.reason,
            "certificate": self.certificate.as_dict() if self.certificate else None,
        }


def _is_bijective_hom(t1: GroupTable, t2: GroupTable, f: list) -> bool:
    if t1.order != t2.order or sorted(f) != list(range(t2.order)):
        return False
    fa = np.asarray(f)
    return bool(np.array_equal(fa[t1.product], t2.product[np.ix_(fa, fa)]))


def verify_certificate(c1: CommutatorPairing, c2: CommutatorPairing, cert: IsoclinismCertificate) -> bool:
    """Independent check of both isomorphisms and all |Q|^2 pairing equations."""
    if not _is_bijective_hom(c1.quotient, c2.quotient, cert.theta):
        return False
    if not _is_bijective_hom(c1.derived, c2.derived, cert.phi):
        return False
    th = np.asarray(cert.theta)
    ph = np.asarray(cert.phi)
    return bool(np.array_equal(ph[c1.pairing], c2.pairing[np.ix_(th, th)]))


def _generating_sequence(t: GroupTable) -> list:
    """Greedy generators, largest element order first (fewer candidate images)."""
    orders = t.element_orders
    chosen: list = []
    have = {0}
    for x in sorted(range(1, t.order), key=lambda a: (-int(orders[a]), a)):
        if x in have:
            continue
        chosen.append(x)
        have = _span(t, chosen)
        if len(have) == t.order:
            break
    return chosen


def _span(t: GroupTable, gens) -> set:
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
    return seen


def _extend_hom(t1: GroupTable, t2: GroupTable, gens, images) -> dict | None:
    """Homomorphic extension over <gens>, or None if inconsistent or non-injective."""
    f = {0: 0}
    frontier = [0]
    p1, p2 = t1.product, t2.product
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for g, h in zip(gens, images):
                y = int(p1[x, g])
                fy = int(p2[fx, h])
                old = f.get(y)
                if old is None:
                    f[y] = fy
                    nxt.append(y)
                elif old != fy:
                    return None
        frontier = nxt
    if len(set(f.values())) != len(f):
        return None
    return f


def are_isoclinic(a, b, budget: int = DEFAULT_BUDGET) -> IsoclinismResult:
    c1 = a if isinstance(a, CommutatorPairing) else commutator_pairing(a)
    c2 = b if isinstance(b, CommutatorPairing) else commutator_pairing(b)
    f1, f2 = fingerprint(c1), fingerprint(c2)
    if f1 != f2:
        return IsoclinismResult("not isoclinic", reason="fingerprints differ")
    q1, q2 = c1.quotient, c2.quotient
    gens = _generating_sequence(q1)
    prof1 = [_row_profile(c1, x) for x in range(q1.order)]
    prof2 = [_row_profile(c2, x) for x in range(q2.order)]
    ord1, ord2 = q1.element_orders, q2.element_orders
    cands = [
        [y for y in range(q2.order) if ord2[y] == ord1[x] and prof2[y] == prof1[x]]
        for x in gens
    ]
    P1, P2 = c1.pairing, c2.pairing
    state = {"nodes": 0}

    def phi_constraints(theta: dict, phi: dict) -> dict | None:
        phi = dict(phi)
        dom = list(theta)
        img = [theta[x] for x in dom]
        v1 = P1[np.ix_(dom, dom)].ravel().tolist()
        v2 = P2[np.ix_(img, img)].ravel().tolist()
        for s, t in zip(v1, v2):
            old = phi.get(s)
            if old is None:
                phi[s] = t
            elif old != t:
                return None
        if len(set(phi.values())) != len(phi):
            return None
        return phi

    def search(k: int, images: list, phi: dict):
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise BudgetExceeded
        if k == len(gens):
            full = _extend_hom(c1.derived, c2.derived, list(phi), list(phi.values()))
            if full is None or len(full) != c1.derived.order:
                return None
            cert = IsoclinismCertificate(
                [theta_full[x] for x in range(q1.order)],
                [full[x] for x in range(c1.derived.order)],
            )
            return cert if verify_certificate(c1, c2, cert) else None
        for y in cands[k]:
            trial = images + [y]
            th = _extend_hom(q1, q2, gens[: k + 1], trial)
            if th is None:
                continue
            ph = phi_constraints(th, phi)
            if ph is None:
                continue
            if k + 1 == len(gens):
                if len(th) != q1.order:
                    continue
                theta_full.clear()
                theta_full.update(th)
            got = search(k + 1, trial, ph)
            if got is not None:
                return got
        return None

    theta_full: dict = {0: 0}  # completed theta; trivial when both quotients are
    try:
        cert = search(0, [], {0: 0})
    except BudgetExceeded:
        return IsoclinismResult("undecided", nodes=state["nodes"], reason="node budget exhausted")
    if cert is None:
        return IsoclinismResult("not isoclinic", nodes=state["nodes"], reason="search exhausted")
    return IsoclinismResult("isoclinic", cert, state["nodes"])
