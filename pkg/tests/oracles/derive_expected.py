"""Independent derivation of expected values; writes ../fixtures/expected.json.

Nothing here imports the package under test.  Numbers over 1/3 are Fractions,
keys are tuples, and each rule is written out in its literal form.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction as Fr
from pathlib import Path

THIRD = Fr(1, 3)


def literal_parity(sigma, rho, keys):
    par = {}
    for k in sorted(keys, key=len):
        if len(k) == 1:
            par[k] = "even"
        elif len(k) == 2:
            par[k] = "even" if k[1] <= sigma[k[:1]] else "odd"
        else:
            v = k[:-1]
            same = rho[v] < k[-1] <= sigma[v]
            par[k] = par[v] if same else ("odd" if par[v] == "even" else "even")
    return par


def literal_ends(elements, par, lam, rho, sigma):
    out = {}
    for e in elements:
        v, h = tuple(e[:-1]), e[-1]
        if len(v) >= 2 and par[v] == "even":
            alpha = h in (0, rho[v] + THIRD)
        elif len(v) >= 2:
            alpha = h in (lam[v] + 1, sigma[v] + 2 * THIRD)
        else:
            alpha = False
        out[e] = "alpha" if alpha else "omega"
    return out


def show(e):
    return "(" + ",".join(str(c) for c in e) + ")"


def simplest():
    keys = [(1,), (1, 1)]
    lam = {(1,): 1, (1, 1): 0}
    sigma = {(1,): 1, (1, 1): 0}
    rho = {(1, 1): 0}
    elements = [(1, Fr(2)), (1, Fr(5, 3)), (1, 1, Fr(0)), (1, 1, THIRD), (1, 1, 2 * THIRD),
                (1, 1, Fr(1))]
    par = literal_parity(sigma, rho, keys)
    ends = literal_ends(elements, par, lam, rho, sigma)
    word = sorted(elements)  # tuples of Fractions compare componentwise
    classes = []
    for e in word:
        v, h = e[:-1], e[-1]
        rep = h.denominator != 1
        kind = ("het" if len(v) == 1 else "hom") + ("_rep" if rep else "_sep")
        classes.append([kind, ends[e]])
    return {
        "parity": {show(k): p for k, p in par.items()},
        "ends": {show(e): ends[e] for e in elements},
        "word": [show(e) for e in word],
        "word_marks": classes,
    }


def table3_facts():
    sigma = {(2,): 0, (2, 1): 2}
    rho = {(2, 1): 0}
    lam = {(2, 1): 2}
    keys = [(2,), (2, 1), (2, 1, 1), (2, 1, 2)]
    sigma.update({(2, 1, 1): 0, (2, 1, 2): 0})
    rho.update({(2, 1, 1): 0, (2, 1, 2): 0})
    par = literal_parity(sigma, rho, keys)
    e = (2, 1, Fr(3))
    ends = literal_ends([e], par, lam, rho, sigma)
    return {"parity": {show(k): p for k, p in par.items()}, "end_2_1_3": ends[e]}


def f_block_zeros(s, j):
    pts = {Fr(-i, s) for i in range(s + 1)} if s else set()
    pts |= {Fr(i, j - s) for i in range(j - s + 1)} if j != s else set()
    return [str(p) for p in sorted(pts)]


def lex_examples():
    return {
        "(1,1,0)<(1,5/3)": (1, 1, 0) < (1, Fr(5, 3)),
        "(1,1,1/3)<(1,1,2/3)": (1, 1, THIRD) < (1, 1, 2 * THIRD),
    }


def strip_examples():
    # F block at local (0, 1) with kappa(0) = 0: (kappa+y^2)*(u(u^2-1), -y)
    u, y, k = Fr(0), Fr(1), Fr(0)
    f = ((k + y * y) * u * (u * u - 1), -(k + y * y) * y)
    # G+ block at local (0, 1) with kappa(0) = 0
    w = Fr(1)
    q = 1 - (1 - w) ** 2 / 2
    g = ((u * u - 1) * (u * u - q * q), w * (w - 1) * u)
    pref = (k + w * w) * (1 - u * u)
    return {"F_top_center": [str(c) for c in f], "Gplus_top_center": [str(pref * c) for c in g]}


def example_system():
    def P(x, y):
        return -((1 + x * x) * y + x ** 3) ** 5

    def Q(x, y):
        return y * y * (y * y + x ** 3)

    x, y = Fr(0), Fr(2)
    return {
        "field_1_1": [int(P(1, 1)), int(Q(1, 1))],
        "flattening_0_2": {"P": str(P(x, y)), "Q": str(Q(x, y)), "ratio": str(Q(x, y) / P(x, y))},
        "factor3_at_minus_eighth": float(1 / (1 + Fr(1, 64)) ** 5),
        "region_minus1_08": {"cusp": str(Fr(4, 5) ** 2 + (-1) ** 3),
                             "flat": str((1 + 1) * Fr(4, 5) + (-1) ** 3)},
        "plane_0_minus1": [math.exp(-1), 0.0],
    }


def main():
    out = {
        "simplest": simplest(),
        "table3": table3_facts(),
        "f_block_2_5_zeros": f_block_zeros(2, 5),
        "lex": lex_examples(),
        "strip": strip_examples(),
        "example": example_system(),
    }
    path = Path(__file__).resolve().parent.parent / "fixtures" / "expected.json"
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
