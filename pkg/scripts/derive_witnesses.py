"""Derive inverse substitutions for the change-of-vars steps of the case scripts.

The verifier only checks certificates; this helper finds them once with
sympy so they can be frozen into the .act files.  Usage:

    python scripts/derive_witnesses.py case1
"""

import sys

import sympy as sp

zeta4 = sp.I
eta = sp.sqrt(2) / 2 * (1 + sp.I)
omega = sp.exp(sp.I * sp.pi / 8)


def invert(forward: dict, old: list, extra=()):
    """Solve new = forward(old) for the old variables."""
    eqs = [sp.Symbol(k) - v for k, v in forward.items()]
    sols = sp.solve(eqs, old, dict=True)
    return [{k: sp.factor(sp.simplify(v)) for k, v in s.items()} for s in sols]


def show(sol: dict):
    for k, v in sol.items():
        print(f"  {k} = {sp.sstr(v).replace('**', '^').replace('I', 'zeta4')},")


def case1():
    v1, v2, v3, v4, w1, w2, w3, w4, X1, X2, X3, X4 = sp.symbols("v1 v2 v3 v4 w1 w2 w3 w4 X1 X2 X3 X4")
    print("v in terms of w")
    for s in invert({"w1": v1, "w2": v1 * v2 + v2 * v4 + 2 * v3 * v4, "w3": 2 * v1 * v2 + v1 * v3 + v3 * v4, "w4": v1 / v4},
                    [v1, v2, v3, v4]):
        show(s)
    print("w in terms of X")
    fw = {
        "X1": (w2 * w4 - w3) / (w2 - w3),
        "X2": zeta4 * w1,
        "X3": (w2 - 2 * w3 + w2 * w4) * (w2**2 * w4 - w3**2) / (2 * w2 * (w2 - w3) * (w4 - 1)),
        "X4": w4,
    }
    for s in invert(fw, [w1, w2, w3, w4]):
        show(s)


def nest(template: str, **parts) -> str:
    """Textual substitution of named sub-expressions (parenthesized)."""
    out = template
    for k, v in parts.items():
        out = out.replace("{" + k + "}", f"({v})")
    return out


def flat(src: str, m: int, names, consts=None) -> str:
    """Parse with the package's own arithmetic and print the reduced form."""
    from bogomolov.funcfield import PolyRing, cancel, parse_expr

    ring = PolyRing(m, tuple(names))
    env = {}
    for k, v in (consts or {}).items():
        env[k] = parse_expr(v, ring, env)
    return str(cancel(parse_expr(src, ring, env)))


C8 = {"zeta4": "zeta^2", "eta": "zeta"}


def case3():
    s = "4*v1*(1+v3^2)/(v3^2-v2^2)"
    p = nest("v1*{s}", s=s)
    d = nest("2*theta-{s}", s=s)
    print("minpoly:", nest("theta^2 - {s}*theta + {p}", s=s, p=p))
    print("u2 =", nest("{s}-theta", s=s))
    print("u3 =", nest("({s}*v2 + {d}*v3)/(2*{p})", s=s, d=d, p=p))
    print("u5 =", nest("v5*{d}", d=d), ", u6 =", nest("v6*{d}", d=d))
    A = "X4/X1"
    v3 = "zeta4*(X1+1)/(X1-1)"
    v2 = nest("zeta4*({A}+1)/({A}-1)", A=A)
    v4 = nest("(X5+{A})/(X5-{A})", A=A)
    B = nest("X6/{A}", A=A)
    r = nest("zeta4*({B}+1)/({B}-1)", B=B)
    v1 = nest("X3*eta*({v2}-zeta4)/(4*{v2}*X1)", v2=v2)
    v6 = nest("X2*{v1}*{v2}*({v3}-zeta4)/({v3}*({v2}+zeta4))", v1=v1, v2=v2, v3=v3)
    v5 = nest("{r}*{v6}", r=r, v6=v6)
    for k, v in dict(v1=v1, v2=v2, v3=v3, v4=v4, v5=v5, v6=v6).items():
        print(f"{k} = {flat(v, 8, ['X1','X2','X3','X4','X5','X6'], C8)},")
    vs = ["v1", "v2", "v3", "v4", "v5", "v6", "theta"]
    print("minpoly:", flat(nest("theta^2 - {s}*theta + {p}", s=s, p=p), 8, vs))
    print("u2 =", flat(nest("{s}-theta", s=s), 8, vs))
    print("u3 =", flat(nest("({s}*v2 + {d}*v3)/(2*{p})", s=s, d=d, p=p), 8, vs))
    print("u5 =", flat(nest("v5*{d}", d=d), 8, vs), ", u6 =", flat(nest("v6*{d}", d=d), 8, vs))


if __name__ == "__main__":
    for name in sys.argv[1:]:
        globals()[name]()
