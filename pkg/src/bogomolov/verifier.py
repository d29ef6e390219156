"""Checker for declarative reduction scripts (``.act`` files).

A script fixes a cyclotomic conductor, a group presentation, a list of
variables and the action of every generator on them.  The steps then walk
the field down through changes of variables and fixed-field computations.
Each step carries a certificate that is checked exactly; the report says
which identity failed first when something is wrong.

Action convention
-----------------
An action ``g: x -> f(x)`` lists the images of the variables under the
field automorphism g, so g sends a rational function F to F(g(x)).  A word
``g h`` acts as the composite automorphism g . h: the image of x is h(x)
with g's images substituted for the variables.  Under this convention a
commutator relation ``[b, a] = w`` of a presentation becomes ``b a = a b w``
as an identity of automorphisms.  The relation-check step guards it; the
reversed reading already fails on [g2,g1] = g4 for G(2^7,227).

Script grammar
--------------
One directive per line.  Indented lines continue the previous directive and
``#`` starts a comment.  Expressions use ``+ - * / ^ ( )``, integers,
``zeta`` and declared names.

    field zeta 8
    const i = zeta^2
    group g128_227.pcg
    vars y1 y2 y3
    action g1: y1 -> i*y2, y2 -> y1, y3 -> y3
    step relation-check
    step faithful
    step change-of-vars forward: z1 = y1/y2, ... backward: y1 = ..., ...
    step tail-linearize cite=thAHK vars=z5,z6
    step central-trivial gens=g5,g6
    step monomial-fixed-field det=4 subgroup=g3,g4 defs: u1 = ..., ...
    step index-d subgroup=g2 defs: v1 = ..., ... theta: ... minpoly: ...
         express: u1 = ..., ...
    step generated gen=g4 word=g1*g1
    step target file=L1.act gens=g1:tau fixes=X5 map: X1=X1, ...

Every step except the checks may carry ``action gX: ...`` clauses that
display the expected action on the new variables.  Displayed actions are
verified.  Undisplayed ones are computed when that is possible.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cyclofield import CycloField
from .funcfield import (
    ExprSyntaxError,
    FieldMap,
    PolyRing,
    RatFunc,
    SMASK,
    SubstitutionError,
    apply_map,
    compose_maps,
    exponent_det,
    is_monomial_map,
    parse_expr,
    rf_equal,
    substitute_constants,
    transfer,
)
from .pcgroup import GroupTable, load_pcg

DATA_ENV = "BOGOMOLOV_DATA"
THETA = "theta"
CLOSURE_CAP = 4096


class ScriptError(ValueError):
    """Malformed script or unresolved reference."""


class StepFailure(Exception):
    def __init__(self, message: str, lhs=None, rhs=None):
        super().__init__(message)
        self.message = message
        self.lhs = None if lhs is None else str(lhs)
        self.rhs = None if rhs is None else str(rhs)


# ------------------------------------------------------------------ script data


@dataclass
class Step:
    kind: str
    options: dict
    clauses: dict  # clause name -> list of (lhs, rhs) or a raw string
    line: int
    actions: dict = field(default_factory=dict)  # generator -> list of (var, src)


@dataclass
class ActionScript:
    m: int
    group: str | None
    variables: tuple
    consts: tuple  # ((name, src), ...)
    generator_actions: dict  # generator -> ((var, src), ...)
    steps: list
    path: Path | None = None


@dataclass
class StepReport:
    index: int
    kind: str
    verdict: str  # "pass", "fail" or "incomplete"
    message: str = ""
    lhs: str | None = None
    rhs: str | None = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "verdict": self.verdict,
            "message": self.message,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "elapsed": round(self.elapsed, 4),
            "details": self.details,
        }


STEP_KINDS = (
    "relation-check",
    "faithful",
    "central-trivial",
    "tail-linearize",
    "monomial-fixed-field",
    "index-d",
    "change-of-vars",
    "generated",
    "target",
)

_CLAUSE = re.compile(r"(?:(?<=\s)|^)(forward|backward|defs|express|map|theta|minpoly|action\s+[A-Za-z_]\w*)\s*:")
_OPTION = re.compile(r"([A-Za-z_]\w*)=(\S+)")


def _split_assignments(text: str, line: int) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "->" in item:
            lhs, rhs = item.split("->", 1)
        elif "=" in item:
            lhs, rhs = item.split("=", 1)
        else:
            raise ScriptError(f"line {line}: expected 'name = expr' or 'name -> expr', got {item!r}")
        lhs = lhs.strip()
        if not re.fullmatch(r"[A-Za-z_][\w']*", lhs):
            raise ScriptError(f"line {line}: bad left-hand side {lhs!r}")
        out.append((lhs, rhs.strip()))
    return out


def _logical_lines(text: str):
    cur, start = None, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t":
            if cur is None:
                raise ScriptError(f"line {no}: continuation without a directive")
            cur += " " + line.strip()
        else:
            if cur is not None:
                yield start, cur
            cur, start = line.strip(), no
    if cur is not None:
        yield start, cur


def parse_script(text: str, path=None) -> ActionScript:
    """Parse ``.act`` text into an ActionScript.  Nothing is evaluated here."""
    m = None
    group = None
    variables = None
    consts = []
    actions = {}
    steps = []
    for no, line in _logical_lines(text):
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "field":
            parts = rest.split()
            if len(parts) != 2 or parts[0] != "zeta":
                raise ScriptError(f"line {no}: expected 'field zeta <m>'")
            m = int(parts[1])
            if m < 1:
                raise ScriptError(f"line {no}: conductor must be positive")
        elif word == "group":
            group = rest
        elif word == "vars":
            variables = tuple(rest.split())
        elif word == "const":
            (name, src), *more = _split_assignments(rest, no)
            if more:
                raise ScriptError(f"line {no}: one constant per line")
            consts.append((name, src))
        elif word == "action":
            gen, _, body = rest.partition(":")
            gen = gen.strip()
            if gen in actions:
                raise ScriptError(f"line {no}: duplicate action for {gen}")
            actions[gen] = tuple(_split_assignments(body, no))
        elif word == "step":
            steps.append(_parse_step(rest, no))
        else:
            raise ScriptError(f"line {no}: unknown directive {word!r}")
    if m is None:
        raise ScriptError("missing 'field zeta <m>'")
    if variables is None:
        raise ScriptError("missing 'vars'")
    for gen, imgs in actions.items():
        names = [v for v, _ in imgs]
        unknown = set(names) - set(variables)
        if unknown:
            raise ScriptError(f"action {gen}: unknown variables {sorted(unknown)}")
    return ActionScript(m, group, variables, tuple(consts), actions, steps, Path(path) if path else None)


def _parse_step(text: str, no: int) -> Step:
    kind, _, rest = text.partition(" ")
    if kind not in STEP_KINDS:
        raise ScriptError(f"line {no}: unknown step kind {kind!r}")
    marks = list(_CLAUSE.finditer(rest))
    head = rest[: marks[0].start()] if marks else rest
    options = {}
    for tok in head.split():
        mo = _OPTION.fullmatch(tok)
        if not mo:
            raise ScriptError(f"line {no}: bad option {tok!r}")
        options[mo.group(1)] = mo.group(2)
    clauses, acts = {}, {}
    for k, mk in enumerate(marks):
        name = re.sub(r"\s+", " ", mk.group(1))
        body = rest[mk.end() : marks[k + 1].start() if k + 1 < len(marks) else len(rest)].strip()
        if name.startswith("action "):
            acts[name.split()[1]] = _split_assignments(body, no)
        elif name in ("theta", "minpoly"):
            clauses[name] = body
        else:
            clauses[name] = _split_assignments(body, no)
    return Step(kind, options, clauses, no, acts)


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path(__file__).resolve().parent / "data"


def resolve(ref: str, base: Path | None = None) -> Path:
    """Find a referenced file next to the script, in the data dir (or its
    fixtures/ area), or as given."""
    cands = []
    if base is not None:
        cands.append(base / ref)
    cands.append(data_dir() / ref)
    cands.append(data_dir() / Path(ref).name)
    cands.append(data_dir() / "fixtures" / Path(ref).name)
    cands.append(Path(ref))
    for c in cands:
        if c.is_file():
            return c
    raise ScriptError(f"cannot resolve {ref!r}")


def load_script(path) -> ActionScript:
    p = Path(path)
    if not p.is_file():
        p = resolve(str(path))
    return parse_script(p.read_text(encoding="utf-8"), p)


# ------------------------------------------------------------------ state


class State:
    """Current field, generator actions, and the generators still acting."""

    def __init__(self, script: ActionScript, table: GroupTable | None):
        self.script = script
        self.m = script.m
        self.table = table
        self.ring = PolyRing(self.m, script.variables)
        self._envs = {}
        self.actions = {}
        for gen, imgs in script.generator_actions.items():
            self.actions[gen] = self.map_from(imgs, self.ring)
        if table is not None:
            n = table.pcp.n
            want = [f"g{i + 1}" for i in range(n)]
            missing = [g for g in want if g not in self.actions]
            if missing:
                raise ScriptError(f"no action given for {', '.join(missing)}")
            extra = set(self.actions) - set(want)
            if extra:
                raise ScriptError(f"actions for unknown generators {sorted(extra)}")
            self.active = want
        else:
            self.active = list(self.actions)

    def env(self, ring: PolyRing) -> dict:
        got = self._envs.get(ring)
        if got is None:
            got = {}
            for name, src in self.script.consts:
                got[name] = parse_expr(src, ring, got)
            self._envs[ring] = got
        return got

    def parse(self, src: str, ring: PolyRing | None = None) -> RatFunc:
        ring = ring or self.ring
        return parse_expr(src, ring, self.env(ring))

    def map_from(self, imgs, source: PolyRing, target: PolyRing | None = None) -> FieldMap:
        target = target or source
        d = {}
        for v, src in imgs:
            if v not in source.index:
                raise ScriptError(f"{v} is not a current variable ({' '.join(source.names)})")
            if v in d:
                raise ScriptError(f"{v} assigned twice")
            d[v] = self.parse(src, target)
        missing = [v for v in source.names if v not in d]
        if missing:
            raise ScriptError(f"no image given for {', '.join(missing)}")
        return FieldMap.from_dict(source, target, d)

    def word_map(self, word) -> FieldMap:
        """Action of a word given as a sequence of generator names."""
        out = FieldMap.identity(self.ring)
        for g in word:
            out = then(out, self.actions[g])
        return out


def then(left: FieldMap, right: FieldMap) -> FieldMap:
    """Action of the word ``left right``: the automorphism left . right.

    On a variable x this is right(x) with left's images substituted in.
    """
    return compose_maps(right, left)


def _gen_word(word) -> list:
    out = []
    for g, e in word:
        out.extend([f"g{g + 1}"] * e)
    return out


def _require_active(state: State, gens):
    for g in gens:
        if g not in state.actions:
            raise ScriptError(f"unknown generator {g}")
        if g not in state.active:
            raise ScriptError(f"generator {g} no longer acts")


def _same(a: RatFunc, b: RatFunc, what: str):
    if not rf_equal(a, b):
        raise StepFailure(what, a, b)


# ------------------------------------------------------------------ group-level checks


def check_relations(actions: dict, g: GroupTable, state: State | None = None) -> StepReport:
    """Every power and commutator relation holds as an identity of substitutions."""
    t0 = time.perf_counter()
    pcp = g.pcp
    if state is None:
        ring = next(iter(actions.values())).source if actions else PolyRing(1, ())
        fake = ActionScript(ring.m, None, ring.names, (), {}, [])
        state = State.__new__(State)
        state.script, state.m, state.table, state.ring = fake, ring.m, g, ring
        state._envs, state.actions, state.active = {}, dict(actions), list(actions)
    count = 0
    try:
        for i in range(pcp.n):
            gi = f"g{i + 1}"
            lhs = state.word_map([gi] * pcp.relative_orders[i])
            rhs = state.word_map(_gen_word(pcp.power_word(i)))
            _cmp_maps(lhs, rhs, f"{gi}^{pcp.relative_orders[i]}")
            count += 1
        for j in range(pcp.n):
            for i in range(j):
                gi, gj = f"g{i + 1}", f"g{j + 1}"
                w = _gen_word(pcp.comm_word(j, i))
                lhs = state.word_map([gj, gi])
                rhs = state.word_map([gi, gj] + w)
                _cmp_maps(lhs, rhs, f"[{gj},{gi}]")
                count += 1
    except StepFailure as e:
        return StepReport(0, "relation-check", "fail", e.message, e.lhs, e.rhs, time.perf_counter() - t0)
    return StepReport(0, "relation-check", "pass", f"{count} relations hold", elapsed=time.perf_counter() - t0)


def _cmp_maps(lhs: FieldMap, rhs: FieldMap, label: str):
    for v, a, b in zip(lhs.source.names, lhs.images, rhs.images):
        if not rf_equal(a, b):
            raise StepFailure(f"relation {label} fails at {v}", a, b)


class _Mono:
    """A monomial substitution as (coefficient, exponent vector) per variable."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = tuple(parts)

    @classmethod
    def identity(cls, field: CycloField, k: int):
        return cls((field.one(), tuple(int(i == j) for j in range(k))) for i in range(k))

    def then(self, second: "_Mono") -> "_Mono":
        """Images of self with second's images substituted: second . self."""
        out = []
        for c, e in self.parts:
            cc = c
            acc = [0] * len(e)
            for j, ej in enumerate(e):
                if ej:
                    c2, e2 = second.parts[j]
                    cc = cc * c2**ej
                    for k, x in enumerate(e2):
                        acc[k] += ej * x
            out.append((cc, tuple(acc)))
        return _Mono(out)

    def key(self):
        return tuple((c.coeffs, e) for c, e in self.parts)


def check_faithful(actions: dict, g: GroupTable) -> StepReport:
    """Only the identity of ``g`` acts trivially."""
    t0 = time.perf_counter()
    monos = {}
    for name, fm in actions.items():
        ok, parts = is_monomial_map(fm)
        if not ok:
            return StepReport(0, "faithful", "fail", f"action of {name} is not monomial", elapsed=time.perf_counter() - t0)
        monos[name] = _Mono(parts)
    field_ = next(iter(actions.values())).source.field
    k = next(iter(actions.values())).source.k
    ident = _Mono.identity(field_, k)
    maps = {0: ident}
    queue = [0]
    gens = [(g.pc_gens[i], monos[f"g{i + 1}"]) for i in range(g.pcp.n)]
    while queue:
        x = queue.pop()
        for ge, mo in gens:
            y = g.mul(x, ge)
            if y not in maps:
                maps[y] = mo.then(maps[x])  # automorphism maps[x] . g
                queue.append(y)
    if len(maps) != g.order:
        return StepReport(0, "faithful", "fail", "generators do not reach every element", elapsed=time.perf_counter() - t0)
    idk = ident.key()
    kernel = sorted(x for x, mp in maps.items() if x != 0 and mp.key() == idk)
    if kernel:
        names = ", ".join(g.name_of(x) for x in kernel[:8])
        return StepReport(0, "faithful", "fail", f"non-identity elements act trivially: {names}",
                          elapsed=time.perf_counter() - t0, details={"kernel_size": len(kernel) + 1})
    images = len({mp.key() for mp in maps.values()})
    return StepReport(0, "faithful", "pass", f"{images} distinct substitutions for {g.order} elements",
                      elapsed=time.perf_counter() - t0)


# ------------------------------------------------------------------ field-level steps


def _closure(maps: list, ring: PolyRing, cap: int = CLOSURE_CAP) -> list:
    ident = FieldMap.identity(ring)
    seen = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in maps:
                b = then(a, g)
                if not any(b.equals(s) for s in seen):
                    seen.append(b)
                    nxt.append(b)
                    if len(seen) > cap:
                        raise StepFailure(f"acting group exceeds {cap} elements")
        frontier = nxt
    return seen


def _display_or_compute(state, step, new_ring, defs_map, compute):
    """Actions of the remaining generators on the new variables.

    ``defs_map`` sends new variables to their definitions in the old ring.
    Displayed images are checked by pushing them into the old ring; missing
    ones come from ``compute(gen)``.
    """
    out = {}
    for gen in state.active:
        old_act = state.actions[gen]
        shown = step.actions.get(gen)
        if shown is not None:
            disp = state.map_from(shown, new_ring)
            for v, defn, im in zip(new_ring.names, defs_map.images, disp.images):
                lhs = apply_map(old_act, defn)
                rhs = apply_map(defs_map, im)
                _same(lhs, rhs, f"displayed action of {gen} on {v}")
            out[gen] = disp
        else:
            out[gen] = compute(gen)
    for gen in step.actions:
        if gen not in state.active:
            raise ScriptError(f"action displayed for {gen}, which no longer acts")
    return out


def step_change_of_vars(state: State, step: Step) -> dict:
    fwd = step.clauses.get("forward")
    bwd = step.clauses.get("backward")
    if not fwd or not bwd:
        raise ScriptError("change-of-vars needs forward: and backward:")
    old = state.ring
    new = PolyRing(state.m, [v for v, _ in fwd])
    fmap = FieldMap(new, old, tuple(state.parse(src, old) for _, src in fwd))
    bvars = [v for v, _ in bwd]
    if sorted(bvars) != sorted(old.names):
        raise ScriptError("backward: must give every old variable exactly once")
    bmap = state.map_from(bwd, old, new)
    for v, im in zip(old.names, bmap.images):
        _same(apply_map(fmap, im), RatFunc.var(old, v), f"backward then forward on {v}")
    for v, im in zip(new.names, fmap.images):
        _same(apply_map(bmap, im), RatFunc.var(new, v), f"forward then backward on {v}")

    def compute(gen):
        act = state.actions[gen]
        return FieldMap(new, new, tuple(apply_map(bmap, apply_map(act, f)) for f in fmap.images))

    acts = _display_or_compute(state, step, new, fmap, compute)
    state.ring = new
    state.actions = {g: acts[g] for g in state.active}
    return {"variables": list(new.names)}


def _affine_parts(f: RatFunc, v: str, ring: PolyRing):
    """(a, b) with f == a*v + b, or None."""
    for p, q in ((0, 1), (2, 3), (5, 7), (-3, 11)):
        try:
            fp = substitute_constants(f, {v: p})
            fq = substitute_constants(f, {v: q})
        except (SubstitutionError, ZeroDivisionError):
            continue
        a = (fq - fp) * RatFunc.const(ring, Fraction(1, q - p))
        b = fp - a * RatFunc.const(ring, p)
        if rf_equal(a * RatFunc.var(ring, v) + b, f):
            return a, b
        return None
    return None


def step_tail_linearize(state: State, step: Step) -> dict:
    tails = [v for v in step.options.get("vars", "").split(",") if v]
    cite = step.options.get("cite", "thAHK")
    if cite not in ("thAHK", "thHK"):
        raise ScriptError(f"unknown citation {cite!r}")
    ring = state.ring
    for v in tails:
        if v not in ring.index:
            raise ScriptError(f"{v} is not a current variable")
    if not tails:
        raise ScriptError("tail-linearize needs vars=")
    heads = [v for v in ring.names if v not in tails]
    for gen in state.active:
        act = state.actions[gen]
        for v in heads:
            im = act.image(v)
            if not im.free_of(tails):
                raise StepFailure(f"{gen} moves head variable {v} into the tail", im, "free of " + ",".join(tails))
        if cite == "thAHK":
            for v in tails:
                im = act.image(v)
                others = [w for w in tails if w != v]
                if not im.free_of(others):
                    raise StepFailure(f"{gen}({v}) involves other tail variables", im)
                ab = _affine_parts(im, v, ring)
                if ab is None:
                    raise StepFailure(f"{gen}({v}) is not affine in {v}", im, "a*" + v + " + b")
                a, b = ab
                if a.is_zero():
                    raise StepFailure(f"{gen}({v}) has zero linear coefficient", im)
                if not (a.free_of(tails) and b.free_of(tails)):
                    raise StepFailure(f"coefficients of {gen}({v}) involve tail variables", a, b)
        else:
            _check_matrix_affine(act, gen, tails, ring)
    head_ring = PolyRing(state.m, heads)
    new_actions = {}
    for gen in state.active:
        act = state.actions[gen]
        new_actions[gen] = FieldMap(head_ring, head_ring, tuple(transfer(act.image(v), head_ring) for v in heads))
    details = {"cite": cite, "conclusion": "justified by citation", "head": heads}
    if cite == "thHK":
        if state.table is None or set(state.active) != set(state.actions):
            raise StepFailure("faithfulness on the head field needs the whole group acting")
        rep = check_faithful(new_actions, state.table)
        if not rep.passed:
            raise StepFailure("head action not faithful: " + rep.message)
    state.ring = head_ring
    state.actions = new_actions
    return details


def _check_matrix_affine(act: FieldMap, gen: str, tails: list, ring: PolyRing):
    zero = {w: 0 for w in tails}
    rows = []
    for v in tails:
        im = act.image(v)
        try:
            b = substitute_constants(im, zero)
            row = [substitute_constants(im, {**zero, w: 1}) - b for w in tails]
        except (SubstitutionError, ZeroDivisionError):
            raise StepFailure(f"{gen}({v}) is not affine in the tail", im)
        rebuilt = b
        for w, a in zip(tails, row):
            if not (a.free_of(tails)):
                raise StepFailure(f"{gen}({v}) has tail-dependent coefficients", im)
            rebuilt = rebuilt + a * RatFunc.var(ring, w)
        _same(im, rebuilt, f"{gen}({v}) is not affine in the tail")
        rows.append(row)
    if _rf_det(rows).is_zero():
        raise StepFailure(f"linear part of {gen} on the tail is singular")


def _rf_det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    det = None
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if piv is None:
            return a[0][0] - a[0][0]
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        det = a[c][c] if det is None else det * a[c][c]
        inv = a[c][c].inverse()
        for r in range(c + 1, n):
            if not a[r][c].is_zero():
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det if sign > 0 else -det


def step_central_trivial(state: State, step: Step) -> dict:
    gens = [g for g in step.options.get("gens", "").split(",") if g]
    if not gens:
        raise ScriptError("central-trivial needs gens=")
    _require_active(state, gens)
    names = [v for v in step.options.get("vars", "").split(",") if v] or list(state.ring.names)
    t = state.table
    for g in gens:
        if t is not None:
            x = t.pc_gens[int(g[1:]) - 1]
            for y in range(t.order):
                if t.mul(x, y) != t.mul(y, x):
                    raise StepFailure(f"{g} is not central (fails against {t.name_of(y)})")
        act = state.actions[g]
        for v in names:
            _same(act.image(v), RatFunc.var(state.ring, v), f"{g} moves {v}")
    if set(names) == set(state.ring.names):
        state.active = [g for g in state.active if g not in gens]
    return {"removed": gens}


def _diagonal_character(act: FieldMap, gen: str):
    chars = []
    for v, im in zip(act.source.names, act.images):
        mp = im.monomial_parts()
        k = act.source.index[v]
        if mp is None or any(e != int(i == k) for i, e in enumerate(mp[1])):
            raise StepFailure(f"{gen} does not scale {v}", im, f"c*{v}")
        chars.append(mp[0])
    return tuple(chars)


def _character_group_order(chars: list) -> int:
    k = len(chars[0]) if chars else 0
    one = tuple(chars[0][0].field.one() for _ in range(k)) if chars else ()
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for c in chars:
                b = tuple(x * y for x, y in zip(a, c))
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > CLOSURE_CAP:
                        raise StepFailure("acting character group too large")
        frontier = nxt
    return len(seen)


def _solve_rational(rows: list, target: list):
    """x with x * rows == target over Q (rows square, nonsingular)."""
    n = len(rows)
    # transpose system: sum_i x_i rows[i][j] = target[j]
    a = [[Fraction(rows[i][j]) for i in range(n)] + [Fraction(target[j])] for j in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


def step_monomial_fixed_field(state: State, step: Step) -> dict:
    defs = step.clauses.get("defs")
    if not defs:
        raise ScriptError("monomial-fixed-field needs defs:")
    sub = [g for g in step.options.get("subgroup", "").split(",") if g]
    _require_active(state, sub)
    if "det" not in step.options:
        raise ScriptError("monomial-fixed-field needs det=")
    expected = int(step.options["det"])
    old = state.ring
    new = PolyRing(state.m, [v for v, _ in defs])
    cands = [state.parse(src, old) for _, src in defs]
    if len(cands) != old.k:
        raise StepFailure(f"{len(cands)} candidates for {old.k} variables (non-square system)")
    parts = []
    for (v, _), c in zip(defs, cands):
        mp = c.monomial_parts()
        if mp is None:
            raise StepFailure(f"candidate {v} is not a monomial", c)
        parts.append(mp)
    chars = [_diagonal_character(state.actions[g], g) for g in sub]
    order = _character_group_order(chars)
    for g in sub:
        act = state.actions[g]
        for (v, _), c in zip(defs, cands):
            _same(apply_map(act, c), c, f"{v} is not invariant under {g}")
    det = exponent_det(cands)
    if abs(det) != order:
        raise StepFailure(f"|det| = {abs(det)} but the acting group has order {order}", det, order)
    if det != expected:
        raise StepFailure(f"det = {det}, expected {expected}", det, expected)
    rows = [list(e) for _, e in parts]
    cmap = FieldMap(new, old, tuple(cands))
    state.active = [g for g in state.active if g not in sub]

    def compute(gen):
        act = state.actions[gen]
        imgs = []
        for c in cands:
            gc = apply_map(act, c)
            mp = gc.monomial_parts()
            if mp is None:
                raise StepFailure(f"{gen} is not monomial on the candidates; display its action", gc)
            t = _solve_rational(rows, list(mp[1]))
            if any(x.denominator != 1 for x in t):
                raise StepFailure(f"image under {gen} leaves the candidate lattice", gc)
            t = [int(x) for x in t]
            mono = RatFunc.const(new, 1)
            back = RatFunc.const(old, 1)
            for i, e in enumerate(t):
                if e:
                    mono = mono * RatFunc.var(new, new.names[i]) ** e
                    back = back * cands[i] ** e
            coef = gc / back
            cp = coef.monomial_parts()
            if cp is None or any(cp[1]):
                raise StepFailure("non-constant cofactor in the lattice solve", coef)
            imgs.append(RatFunc.const(new, cp[0]) * mono)
        return FieldMap(new, new, tuple(imgs))

    acts = _display_or_compute(state, step, new, cmap, compute)
    state.ring = new
    state.actions = acts
    return {"det": det, "acting_order": order, "variables": list(new.names)}


def _t_degree_and_lead(p, ring: PolyRing):
    it = ring.index[THETA]
    deg = p.num.degree_in(it)
    lead = {}
    s = ring.shift[it]
    for k, v in p.num.t.items():
        if (k >> s) & SMASK == deg:
            lead[k - (deg << s)] = v
    return deg, lead


def step_index_d(state: State, step: Step) -> dict:
    defs = step.clauses.get("defs")
    theta_src = step.clauses.get("theta")
    minpoly_src = step.clauses.get("minpoly")
    express = step.clauses.get("express")
    sub = [g for g in step.options.get("subgroup", "").split(",") if g]
    _require_active(state, sub)
    if not defs:
        raise ScriptError("index-d needs defs:")
    if not (theta_src and minpoly_src and express):
        return {"incomplete": "no witness given (theta:, minpoly:, express:)"}
    old = state.ring
    new = PolyRing(state.m, [v for v, _ in defs])
    if THETA in new.index or THETA in old.index:
        raise ScriptError(f"variable name {THETA!r} is reserved")
    wring = PolyRing(state.m, list(new.names) + [THETA])
    cands = [state.parse(src, old) for _, src in defs]
    if len(cands) != old.k:
        raise StepFailure(f"{len(cands)} candidates for {old.k} variables")
    theta = state.parse(theta_src, old)
    sub_maps = [state.actions[g] for g in sub]
    for g, act in zip(sub, sub_maps):
        for (v, _), c in zip(defs, cands):
            _same(apply_map(act, c), c, f"{v} is not invariant under {g}")
    group = _closure(sub_maps, old)
    d = len(group)
    mp = state.parse(minpoly_src, wring)
    den_deg = mp.den.degree_in(wring.index[THETA])
    if den_deg:
        raise StepFailure("minimal polynomial has theta in a denominator", mp)
    deg, lead = _t_degree_and_lead(mp, wring)
    if deg != d:
        raise StepFailure(f"witness polynomial has degree {deg}, acting group has order {d}", deg, d)
    if lead != mp.den.t:
        raise StepFailure("witness polynomial is not monic in theta", mp)
    wmap = FieldMap(wring, old, tuple(cands) + (theta,))
    _same(apply_map(wmap, mp), RatFunc.const(old, 0), "theta is not a root of the witness polynomial")
    exprs = dict(express)
    if sorted(exprs) != sorted(old.names):
        raise ScriptError("express: must give every old variable exactly once")
    for v in old.names:
        e = state.parse(exprs[v], wring)
        _same(apply_map(wmap, e), RatFunc.var(old, v), f"expression for {v} does not evaluate back")
    cmap = FieldMap(new, old, tuple(cands))
    state.active = [g for g in state.active if g not in sub]

    emap = FieldMap(old, wring, tuple(state.parse(exprs[v], wring) for v in old.names))

    def compute(gen):
        act = state.actions[gen]
        imgs = []
        for v, c in zip(new.names, cands):
            r = apply_map(emap, apply_map(act, c))
            if not r.free_of([THETA]):
                raise StepFailure(f"display the action of {gen} on {v}", r)
            imgs.append(transfer(r, new))
        return FieldMap(new, new, tuple(imgs))

    acts = _display_or_compute(state, step, new, cmap, compute)
    state.ring = new
    state.actions = acts
    return {"degree": d, "variables": list(new.names)}


def step_generated(state: State, step: Step) -> dict:
    gen = step.options.get("gen")
    word = [w for w in step.options.get("word", "").split("*") if w]
    if not gen or not word:
        raise ScriptError("generated needs gen= and word=")
    _require_active(state, [gen] + word)
    if gen in word:
        raise ScriptError("word may not use the generator it replaces")
    lhs = state.actions[gen]
    rhs = state.word_map(word)
    _cmp_maps(lhs, rhs, f"{gen} = {'*'.join(word)}")
    state.active = [g for g in state.active if g != gen]
    return {"removed": [gen]}


def step_target(state: State, step: Step) -> dict:
    ref = step.options.get("file")
    if not ref:
        raise ScriptError("target needs file=")
    base = state.script.path.parent if state.script.path else None
    target = load_script(resolve(ref, base))
    if state.m % target.m:
        raise ScriptError(f"target conductor {target.m} does not divide {state.m}")
    pairs = []
    for item in step.options.get("gens", "").split(","):
        if item:
            a, _, b = item.partition(":")
            if not b:
                raise ScriptError("gens= takes pairs like g1:tau")
            pairs.append((a, b))
    if sorted(a for a, _ in pairs) != sorted(state.active):
        raise StepFailure(f"acting generators {state.active} differ from the designated {[a for a, _ in pairs]}")
    corr = dict(step.clauses.get("map", []))
    fixes = [v for v in step.options.get("fixes", "").split(",") if v]
    cur = state.ring
    if sorted(corr) != sorted(target.variables):
        raise ScriptError("map: must name every target variable once")
    used = list(corr.values()) + fixes
    if sorted(used) != sorted(cur.names):
        raise ScriptError("map: and fixes= must cover the current variables exactly once")
    tring = PolyRing(state.m, target.variables)
    tstate_env = {}
    if target.m != state.m:
        tstate_env["zeta"] = RatFunc(tring.zeta_poly(state.m // target.m))
    for name, src in target.consts:
        tstate_env[name] = parse_expr(src, tring, tstate_env)
    rename = FieldMap(tring, cur, tuple(RatFunc.var(cur, corr[v]) for v in tring.names))
    for gen, tgen in pairs:
        if tgen not in target.generator_actions:
            raise ScriptError(f"target has no generator {tgen}")
        timgs = dict(target.generator_actions[tgen])
        act = state.actions[gen]
        for tv in tring.names:
            want = apply_map(rename, parse_expr(timgs.get(tv, tv), tring, tstate_env))
            _same(act.image(corr[tv]), want, f"{gen} differs from {tgen} at {tv}")
        for v in fixes:
            _same(act.image(v), RatFunc.var(cur, v), f"{gen} moves {v}")
    return {"target": ref, "generators": dict(pairs)}


_HANDLERS = {
    "change-of-vars": step_change_of_vars,
    "tail-linearize": step_tail_linearize,
    "central-trivial": step_central_trivial,
    "monomial-fixed-field": step_monomial_fixed_field,
    "index-d": step_index_d,
    "generated": step_generated,
    "target": step_target,
}


def prepare(script: ActionScript) -> State:
    table = None
    if script.group:
        base = script.path.parent if script.path else None
        table = load_pcg(resolve(script.group, base))
    return State(script, table)


def run_script(script: ActionScript, stop_at: int | None = None) -> list:
    """Run the steps in order and return one StepReport per step.

    After the first failure the remaining steps are reported as failing
    with a pointer to it, since later states are undefined.
    """
    reports = []
    try:
        state = prepare(script)
    except (ScriptError, ExprSyntaxError, OSError, ValueError) as e:
        return [StepReport(0, "load", "fail", str(e))]
    broken = None
    for k, step in enumerate(script.steps, 1):
        if stop_at is not None and k > stop_at:
            break
        if broken is not None:
            reports.append(StepReport(k, step.kind, "fail", f"not run: step {broken} failed"))
            continue
        t0 = time.perf_counter()
        try:
            if step.kind == "relation-check":
                rep = check_relations(state.actions, _need_table(state), state)
            elif step.kind == "faithful":
                rep = check_faithful(state.actions, _need_table(state))
            else:
                details = _HANDLERS[step.kind](state, step)
                verdict = "incomplete" if "incomplete" in details else "pass"
                rep = StepReport(k, step.kind, verdict, details.get("incomplete", ""), details=details)
        except StepFailure as e:
            rep = StepReport(k, step.kind, "fail", e.message, e.lhs, e.rhs)
        except (ScriptError, ExprSyntaxError) as e:
            rep = StepReport(k, step.kind, "fail", f"script error: {e}")
        except (SubstitutionError, ZeroDivisionError) as e:
            rep = StepReport(k, step.kind, "fail", f"substitution singularity: {e}")
        rep.index = k
        rep.elapsed = time.perf_counter() - t0
        reports.append(rep)
        if not rep.passed:
            broken = k
    return reports


def _need_table(state: State) -> GroupTable:
    if state.table is None:
        raise ScriptError("this step needs a 'group' line")
    return state.table


def script_passes(reports: list) -> bool:
    return bool(reports) and all(r.passed for r in reports)


def step_determinant(script: ActionScript, k: int) -> int:
    """Exponent determinant recorded by monomial step ``k`` (1-based)."""
    if not 1 <= k <= len(script.steps) or script.steps[k - 1].kind != "monomial-fixed-field":
        raise ScriptError(f"step {k} is not a monomial-fixed-field step")
    reports = run_script(script, stop_at=k)
    last = reports[-1]
    if not last.passed:
        raise StepFailure(f"step {last.index} failed: {last.message}", last.lhs, last.rhs)
    return last.details["det"]


def format_report(reports: list) -> str:
    lines = []
    for r in reports:
        extra = ""
        if "det" in r.details:
            extra = f" det={r.details['det']}"
        lines.append(f"[{r.verdict.upper():4}] step {r.index:2} {r.kind}{extra} ({r.elapsed:.2f}s) {r.message}".rstrip())
        if r.lhs is not None or r.rhs is not None:
            lines.append(f"         lhs: {r.lhs}")
            lines.append(f"         rhs: {r.rhs}")
    return "\n".join(lines)
