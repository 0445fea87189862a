"""Regenerate src/gmbif/data/cusp_oracle.json with exact symbolic arithmetic.

Replays the cusp reduction chain over Q(c, beta) with d = c and
b = c^2 beta^2 / 4, using sympy sparse polynomial rings (no floats), and
writes every stage coefficient up to degree 5 as a string expression in
``c`` and ``beta``.  Offline tool: sympy is not a runtime dependency.

    python3 tools/make_oracle.py
"""

from __future__ import annotations

import json
from pathlib import Path

import sympy as sp
from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.rings import ring

K, c, beta = field("c,beta", QQ)
R, X, Y = ring("X,Y", K)
N = 5


def tr(p, n=N):
    return R({m: v for m, v in p.items() if sum(m) <= n})


def mul(a, b):
    return tr(a * b)


def comp(p, g1, g2):
    p1, p2 = [R(1)], [R(1)]
    for _ in range(N):
        p1.append(mul(p1[-1], g1))
        p2.append(mul(p2[-1], g2))
    out = R(0)
    for (i, j), v in p.items():
        out += tr(p1[i] * p2[j]) * v
    return tr(out)


def recip(a):
    a0 = dict(a).get((0, 0))
    h = tr(a * (1 / a0)) - 1
    s, term = R(1), R(1)
    for _ in range(N):
        term = mul(term, -h)
        s += term
    return tr(s * (1 / a0))


def subst(F, T):
    g1, g2 = comp(F[0], *T), comp(F[1], *T)
    a, b_, cc, d = T[0].diff(X), T[0].diff(Y), T[1].diff(X), T[1].diff(Y)
    inv = recip(tr(a * d - b_ * cc))
    return mul(tr(d * g1 - b_ * g2), inv), mul(tr(a * g2 - cc * g1), inv)


def invert(T):
    S = (X, Y)
    for _ in range(N + 2):
        S = (tr(X - (comp(T[0], *S) - S[0])), tr(Y - (comp(T[1], *S) - S[1])))
    return S


def table(F):
    def one(p):
        return {f"{i},{j}": str(sp.factor(v.as_expr())) for (i, j), v in sorted(p.items()) if v != 0}

    return {"x": one(F[0]), "y": one(F[1])}


def main() -> None:
    d = c
    u1, v1 = d * beta / 2, d * beta**2 / 2
    u, v = X + u1, Y + v1
    F1 = tr(c * beta * mul(mul(u, u), recip(R(v1) + Y)) - c * u)
    F2 = tr(R(d**2 * beta**2 / 4) + mul(u, u) - d * v)
    stages = {"translated": (F1, F2)}
    S2 = subst((F1, F2), (X, beta * (X - Y / c)))
    stages["nilpotent_basis"] = S2
    S3 = subst(S2, (X, Y + X**2 + 2 / (c * beta) * X * Y - 2 / (c**2 * beta) * Y**2))
    stages["quadratic_shear"] = S3
    P = S3[0]
    Q = Y
    for _ in range(N + 2):
        Q = tr(Y - (comp(P, X, Q) - Q))
    G = comp(tr(P.diff(X) * S3[0] + P.diff(Y) * S3[1]), X, Q)
    stages["lienard"] = (Y, G)
    Pt = R({m: v for m, v in P.items() if sum(m) <= 2})
    stages["lienard_truncated"] = subst(S3, invert((X, Pt)))

    E = dict(G)
    e = lambda i, j: E.get((i, j), K(0))  # noqa: E731
    e20, e02, e21, e12, e03 = e(2, 0), e(0, 2), e(2, 1), e(1, 2), e(0, 3)
    e22, e13, e04, e30 = e(2, 2), e(1, 3), e(0, 4), e(3, 0)
    x2, y2 = X, Y
    phi = (x2 - e02 / 2 * x2**2 - e21 / (3 * e20) * x2 * y2 - (e12 - e02**2) / 6 * x2**3
           - (e03 * e20 - e02 * e21) / (2 * e20) * x2**2 * y2
           - (9 * e02**3 * e20 - 27 * e12 * e02 * e20 + 18 * e20 * e22 - 32 * e21**2) / (216 * e20) * x2**4
           - (7 * e02**2 * e21 - 12 * e02 * e03 * e20 - 4 * e12 * e21 + 3 * e13 * e20) / (18 * e20) * x2**3 * y2
           + (e03 * e21 - e04 * e20) / (2 * e20) * x2**2 * y2**2)
    psi = (y2 - e02 * x2 * y2 - e21 / (3 * e20) * y2**2 - e21 / 3 * x2**3
           - (e12 - e02**2) / 2 * x2**2 * y2 - (-2 * e02 * e21 + 3 * e03 * e20) / (3 * e20) * x2 * y2**2
           - (-3 * e02 * e20 * e21 + 3 * e03 * e20**2 + 2 * e21 * e30) / (6 * e20) * x2**4
           - (9 * e02**3 * e20 - 27 * e02 * e12 * e20 + 18 * e20 * e22 - 14 * e21**2) / (54 * e20) * x2**3 * y2
           - (4 * e20**2 * e21 - 9 * e02 * e03 * e20 - 2 * e12 * e21 + 3 * e13 * e20) / (6 * e20) * x2**2 * y2**2
           - (-2 * e03 * e21 + 3 * e04 * e20) / (3 * e20) * x2 * y2**3)
    H = subst((Y, G), invert((phi, psi)))
    # degree-4 homological cleanup (same rule as the float pipeline)
    p4 = {m: v for m, v in dict(H[0]).items() if sum(m) == 4}
    P4 = R(p4)
    q4 = dict(tr(H[1] + Y * P4.diff(X), 4))
    a4 = -q4.get((2, 2), K(0)) / 12
    a3 = -q4.get((1, 3), K(0)) / 6
    a2 = -q4.get((0, 4), K(0)) / 2
    A = R({(4, 0): a4, (3, 1): a3, (2, 2): a2})
    B = P4 + Y * A.diff(X)
    H = subst(H, invert((X + A, Y + B)))
    stages["hypernormal"] = H

    out = {name: table(F) for name, F in stages.items()}
    path = Path(__file__).resolve().parents[1] / "src" / "gmbif" / "data" / "cusp_oracle.json"
    path.write_text(json.dumps({"order": N, "stages": out}, indent=1) + "\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
