#!/usr/bin/env python3
"""Generate and check the 6-dimensional catalog model.

Structure: de4 = e12, de5 = e13, de6 = e23 (a 2-step nilpotent algebra).
J: e1 -> e6, e2 -> e5, e3 -> e4; g = diag(1, 2, 1, 1, 2, 1).
omega(X, Y) = g(JX, Y) = e16 + 2 e25 + e34, which is closed while J is not
integrable. Writes models/nilpotent6.toml.
"""
import itertools
import pathlib
import sys

import sympy as sp

DIM = 6
DCOEFFS = [(4, 1, 2, 1), (5, 1, 3, 1), (6, 2, 3, 1)]
J_IMAGES = {1: (6, 1), 2: (5, 1), 3: (4, 1), 6: (1, -1), 5: (2, -1), 4: (3, -1)}
G_DIAG = [1, 2, 1, 1, 2, 1]


def brackets():
    # de^k = sum coeff e^i ^ e^j  <=>  [e_i, e_j] = -coeff e_k
    c = [[[0] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for k, i, j, coeff in DCOEFFS:
        c[k - 1][i - 1][j - 1] += -coeff
        c[k - 1][j - 1][i - 1] += coeff
    return c


def bracket(c, x, y):
    return sp.Matrix([sum(c[k][i][j] * x[i] * y[j] for i in range(DIM) for j in range(DIM)) for k in range(DIM)])


def main():
    c = brackets()
    basis = [sp.Matrix([1 if r == i else 0 for r in range(DIM)]) for i in range(DIM)]
    for a, b, d in itertools.product(range(DIM), repeat=3):
        ea, eb, ed = basis[a], basis[b], basis[d]
        jac = bracket(c, bracket(c, ea, eb), ed) + bracket(c, bracket(c, eb, ed), ea) + bracket(c, bracket(c, ed, ea), eb)
        assert jac == sp.zeros(DIM, 1), "Jacobi"

    J = sp.zeros(DIM, DIM)
    for src, (dst, sign) in J_IMAGES.items():
        J[dst - 1, src - 1] = sign
    g = sp.diag(*G_DIAG)
    assert J * J == -sp.eye(DIM), "J^2"
    assert J.T * g * J == g, "compatibility"
    omega = J.T * g
    assert omega == -omega.T

    # d omega on eps^a ^ eps^b ^ eps^c: (d omega)(X,Y,Z) = -omega([X,Y],Z) + cyclic
    for a, b, d in itertools.combinations(range(DIM), 3):
        ea, eb, ed = basis[a], basis[b], basis[d]
        val = 0
        for x, y, z in ((ea, eb, ed), (eb, ed, ea), (ed, ea, eb)):
            val += -(bracket(c, x, y).T * omega * z)[0]
        assert val == 0, "d omega"

    def nij(x, y):
        return bracket(c, x, y) + J * bracket(c, x, J * y) + J * bracket(c, J * x, y) - bracket(c, J * x, J * y)

    assert any(nij(basis[a], basis[b]) != sp.zeros(DIM, 1) for a in range(DIM) for b in range(DIM)), "integrable"

    lines = ["# generated by tools/gen_nilpotent6.py", "[model]", 'name = "nilpotent6"', "dim = 6", "",
             "[structure]", "dcoeffs = ["]
    lines += [f"  [{k}.0, {i}.0, {j}.0, {float(v)}]," for k, i, j, v in DCOEFFS]
    lines += ["]", "", "[metric]", "g = ["]
    lines += ["  [" + ", ".join(f"{float(g[r, s])}" for s in range(DIM)) + "]," for r in range(DIM)]
    lines += ["]", "", "[acs]", "J = ["]
    lines += ["  [" + ", ".join(f"{float(J[r, s])}" for s in range(DIM)) + "]," for r in range(DIM)]
    lines += ["]", ""]
    out = pathlib.Path(__file__).resolve().parent.parent / "models" / "nilpotent6.toml"
    out.write_text("\n".join(lines))
    print(f"wrote {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
