"""Small groups built from pc presentations, shared by several test modules."""

from bogomolov.pcgroup import build_table, parse_presentation

SMALL = {
    "C1": "pcgroup 0\norders\n",
    "C2": "pcgroup 1\norders 2\n",
    "C3": "pcgroup 1\norders 3\n",
    "C4": "pcgroup 2\norders 2 2\ng1^2 = g2\n",
    "C2xC2": "pcgroup 2\norders 2 2\n",
    "C5": "pcgroup 1\norders 5\n",
    "C6": "pcgroup 2\norders 2 3\n",
    "S3": "pcgroup 2\norders 2 3\n[g2,g1] = g2\n",
    "C7": "pcgroup 1\norders 7\n",
    "C8": "pcgroup 3\norders 2 2 2\ng1^2 = g2\ng2^2 = g3\n",
    "C4xC2": "pcgroup 3\norders 2 2 2\ng1^2 = g3\n",
    "C2^3": "pcgroup 3\norders 2 2 2\n",
    "D4": "pcgroup 3\norders 2 2 2\n[g2,g1] = g3\n",
    "Q8": "pcgroup 3\norders 2 2 2\ng1^2 = g3\ng2^2 = g3\n[g2,g1] = g3\n",
}

# Schur multipliers of the groups above (classical values, used as a cross-check)
SCHUR = {"C2xC2": [2], "C4xC2": [2], "C2^3": [2, 2, 2], "D4": [2]}

_cache: dict = {}


def small(name: str):
    if name not in _cache:
        _cache[name] = build_table(parse_presentation(SMALL[name]), label=name)
    return _cache[name]
