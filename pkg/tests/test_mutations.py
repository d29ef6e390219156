"""Single-token mutations of the case scripts must each break at least one step."""

import pytest

from bogomolov.verifier import data_dir, parse_script, run_script

# (case, original fragment, mutated fragment); only the first occurrence is changed
MUTANTS = [
    # sign flips in generator actions
    (1, "y1 -> zeta4*y4", "y1 -> -zeta4*y4"),
    (2, "y7 -> -y7, y8 -> y8", "y7 -> y7, y8 -> y8"),
    (3, "y3 -> -zeta4*y4", "y3 -> zeta4*y4"),
    (5, "y6 -> -zeta4*y7", "y6 -> zeta4*y7"),
    (9, "y8 -> -zeta4*y7", "y8 -> zeta4*y7"),
    (11, "y7 -> -y8, y8 -> -y7", "y7 -> y8, y8 -> -y7"),
    # sign flips in displayed actions
    (1, "u4 -> -1/u4", "u4 -> 1/u4"),
    (1, "v4 -> -1/v1", "v4 -> 1/v1"),
    (1, "X1 -> -X1", "X1 -> X1"),
    (2, "u4 -> -u4", "u4 -> u4"),
    (3, "u6 -> -1/u6", "u6 -> 1/u6"),
    (5, "u6 -> -1/u6", "u6 -> 1/u6"),
    # exponent changes
    (1, "u1 = z2*z3/z1", "u1 = z2*z3/z1^2"),
    (3, "u2 = z3/(z1^3*z4)", "u2 = z3/(z1^2*z4)"),
    (5, "u5 = z5*z4", "u5 = z5*z4^2"),
    (2, "v1 = ((u1+1)/(u1-1))^2", "v1 = ((u1+1)/(u1-1))^3"),
    (1, "z6 -> eta*z4*z6", "z6 -> eta*z4^2*z6"),
    (9, "z8 -> -zeta4*z7*z8", "z8 -> -zeta4*z7^2*z8"),
    # changes of variables, witnesses and bookkeeping
    (1, "z1 = y1/y4", "z1 = y1/y3"),
    (1, "backward: y1 = z1*z5", "backward: y1 = z1*z6"),
    (1, "minpoly: theta^2 - v1/v4", "minpoly: theta^2 + v1/v4"),
    (1, "det=4", "det=-4"),
    (3, "det=-8", "det=8"),
    (11, "det=2", "det=-2"),
    (2, "gens=g5,g6,g7", "gens=g4,g6,g7"),
    (1, "vars=z5,z6", "vars=z4,z6"),
    (9, "word=g1*g1", "word=g1*g2"),
    (1, "gens=g1:tau", "gens=g2:tau"),
    (11, "g2:lambda2", "g2:lambda1"),
    (10, "map: X1=X1, X2=X2, X3=X3, X4=X4", "map: X1=X1, X2=X2, X3=X4, X4=X3"),
    (10, "p3 = X2,", "p3 = -X2,"),
]


def _mutant(k, old, new):
    path = data_dir() / f"case{k}.act"
    text = path.read_text()
    assert old in text, f"{old!r} missing from case{k}.act"
    out = text.replace(old, new, 1)
    assert out != text
    return parse_script(out, path)


def test_suite_size():
    assert len(MUTANTS) >= 20
    assert len(set(MUTANTS)) == len(MUTANTS)


@pytest.mark.parametrize("k, old, new", MUTANTS, ids=[f"case{k}:{o}" for k, o, _ in MUTANTS])
def test_mutant_is_caught(k, old, new):
    reports = run_script(_mutant(k, old, new))
    failing = [r for r in reports if r.verdict == "fail"]
    assert failing, "mutant survived"
    assert failing[0].kind != "load"
