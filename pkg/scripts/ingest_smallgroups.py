"""Export selected SmallGroups p-group presentations as .pcg fixtures.

The GAP small groups library stores most groups as a single integer, the
"pc code".  This script decodes those integers for prime-power orders and
writes them in the package's presentation format.  GAP itself is not needed,
only the library's data files (the ``small*/`` directories of the ``smallgrp``
package; the ``passagemath-gap-pkg-smallgrp-data`` wheel ships them).

Layout of a code for order p^l, as decoded here:

* the low ``l(l+1)/2 - 1`` bits are flags, least significant first: one per
  power relation of g1 .. g(l-1), then one per pair (i, j), i < j, ordered
  lexicographically;
* the remaining quotient holds one word per set flag, each a base-p number
  modulo p^l whose digits (g1 most significant) are the exponents;
* a flagged power word is the value of ``gi^p``; a flagged pair word is the
  value of the commutator ``[gj, gi]``.  Unflagged relations are trivial.

Every decoded group is checked against the per-order property records that
ship in the same files (abelian ids, lower exponent-p central series length,
generator rank), and each written presentation is rebuilt with the package's
consistency check.

    python scripts/ingest_smallgroups.py /path/to/gap/pkg/smallgrp [outdir]
"""

from __future__ import annotations

import argparse
import gzip
import re
import sys
from pathlib import Path

from bogomolov.pcgroup import build_table, closure, parse_presentation
from bogomolov.verifier import data_dir

# order -> (prime, exponent, ids to export; None means all)
WANTED = {
    32: (2, 5, None),
    64: (2, 6, [149, 150, 151, 170, 171, 172, 177, 178, 182, 241]),
    243: (3, 5, [27, 28, 29, 30]),
}


def find_record(root: Path, size: int) -> tuple[list[int], str]:
    pat = re.compile(r"SMALL_GROUP_LIB\[ ?%d ?\] :=\s*\[(.*?)\];" % size, re.S)
    prop = re.compile(r"PROPERTIES_SMALL_GROUPS\[ ?%d ?\] := rec\((.*?)\);" % size, re.S)
    for f in sorted(root.glob("small*/*.gz")):
        txt = gzip.open(f, "rt").read()
        m = pat.search(txt)
        if m:
            codes = [int(x) for x in re.sub(r"\s", "", m.group(1)).split(",")]
            return codes, prop.search(txt).group(1)
    raise SystemExit(f"no SMALL_GROUP_LIB entry for order {size} under {root}")


def _digits(n: int, p: int, l: int) -> list[int]:
    out = []
    for _ in range(l):
        out.append(n % p)
        n //= p
    return out[::-1]


def decode(code: int, p: int, l: int):
    size = p**l
    nflags = l * (l + 1) // 2 - 1
    flags = [(code >> k) & 1 for k in range(nflags)]
    n = code >> nflags
    powers, comms = {}, {}
    for i in range(l - 1):
        if flags[i]:
            powers[i] = _digits(n % size, p, l)
            n //= size
    z = l - 1
    for i in range(l - 1):
        for j in range(i + 1, l):
            if flags[z]:
                comms[(j, i)] = _digits(n % size, p, l)
                n //= size
            z += 1
    if n:
        raise ValueError(f"pc code {code} has {n} left over after decoding")
    return powers, comms


def _word(exps) -> str:
    parts = [f"g{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(exps) if e]
    return " * ".join(parts) or "1"


def to_pcg(size: int, k: int, code: int, p: int, l: int) -> str:
    powers, comms = decode(code, p, l)
    lines = [
        f"# SmallGroup({size},{k}), decoded from the GAP smallgrp library (pc code {code})",
        f"pcgroup {l}",
        "orders " + " ".join([str(p)] * l),
    ]
    lines += [f"g{i + 1}^{p} = {_word(w)}" for i, w in sorted(powers.items())]
    lines += [f"[g{j + 1},g{i + 1}] = {_word(w)}" for (j, i), w in sorted(comms.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- validation


def _ids(lst: list[int]) -> set[int]:
    """GAP's compressed id lists: a negative entry -b after a means a..b."""
    out: set[int] = set()
    prev = 0
    for x in lst:
        if x < 0:
            out.update(range(prev, -x + 1))
        else:
            out.add(x)
        prev = x
    return out


def _ints(s: str) -> list[int]:
    return [int(x) for x in re.findall(r"-?\d+", s)]


def expected_properties(props: str, count: int) -> dict[int, tuple]:
    abelian = _ids(_ints(re.search(r"isAbelian := \[(.*?)\]", props, re.S).group(1)))
    lg = re.search(r"lgLength := \[(.*?)\], pos := \[(.*)\] \)", props, re.S)
    length = {}
    for value, ids in zip(_ints(lg.group(1)), re.findall(r"\[([^\[\]]*)\]", lg.group(2))):
        length.update(dict.fromkeys(_ids(_ints(ids)), value))
    # pos lists the last id of each block of equal Frattini quotient size
    ends = _ints(re.search(r"frattFacs := rec\(.*?pos := \[(.*?)\]", props, re.S).group(1))
    out = {}
    for k in range(1, count + 1):
        rank = next((r for r, e in enumerate(ends, 1) if k <= e), len(ends) + 1)
        out[k] = (k in abelian, length[k], rank)
    return out


def observed_properties(t, p: int) -> tuple:
    g = t.pc_gens
    abelian = all(t.mul(a, b) == t.mul(b, a) for a in g for b in g)
    # lower exponent-p central series P_{i+1} = [P_i, G] P_i^p
    P, length = tuple(range(t.order)), 0
    while len(P) > 1:
        P = closure(t, [t.comm(x, y) for x in P for y in g] + [t.power(x, p) for x in P])
        length += 1
    frattini = closure(t, [t.comm(x, y) for x in range(t.order) for y in g] + [t.power(x, p) for x in range(t.order)])
    rank, q = 0, t.order // len(frattini)
    while q > 1:
        q //= p
        rank += 1
    return abelian, length, rank


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("smallgrp", type=Path, help="directory of the smallgrp package (contains small2/ ...)")
    ap.add_argument("outdir", type=Path, nargs="?", default=data_dir() / "fixtures")
    args = ap.parse_args(argv)
    args.outdir.mkdir(parents=True, exist_ok=True)
    written = 0
    for size, (p, l, ids) in WANTED.items():
        codes, props = find_record(args.smallgrp, size)
        want = expected_properties(props, len(codes))
        bad = []
        for k, code in enumerate(codes, 1):
            t = build_table(parse_presentation(to_pcg(size, k, code, p, l)))
            got = observed_properties(t, p)
            if got != want[k]:
                bad.append((k, got, want[k]))
        print(f"order {size}: {len(codes)} groups decoded, {len(bad)} property mismatches")
        if bad:
            for row in bad[:10]:
                print("  mismatch", row, file=sys.stderr)
            return 1
        for k in ids or range(1, len(codes) + 1):
            (args.outdir / f"g{size}_{k}.pcg").write_text(to_pcg(size, k, codes[k - 1], p, l), encoding="utf-8")
            written += 1
    print(f"wrote {written} presentations to {args.outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
