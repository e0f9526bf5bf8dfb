#!/usr/bin/env python3
"""Regenerates the instance corpus in this directory."""
import itertools
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent


def write(name, doc):
    doc = {"schema": 1, "name": name, **doc}
    (HERE / f"{name}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def pair_groupoid(n, prefix=""):
    """The full equivalence relation on n points, graded by j - i."""
    lab = lambda i, j: f"{prefix}E{i}{j}"
    pts = range(1, n + 1)
    arrows = [lab(i, j) for i in pts for j in pts]
    return {
        "arrows": arrows,
        "units": [lab(i, i) for i in pts],
        "src": {lab(i, j): lab(j, j) for i in pts for j in pts},
        "rng": {lab(i, j): lab(i, i) for i in pts for j in pts},
        "compose": [[lab(i, j), lab(j, k), lab(i, k)] for i in pts for j in pts for k in pts],
    }, {lab(i, j): j - i for i in pts for j in pts}


def cyclic_group(n, names):
    """Z/n as a one-unit groupoid; names[0] is the unit."""
    return {
        "arrows": list(names),
        "units": [names[0]],
        "src": {a: names[0] for a in names},
        "rng": {a: names[0] for a in names},
        "compose": [[names[a], names[b], names[(a + b) % n]] for a in range(n) for b in range(n)],
    }


def matrix_units(n, p):
    g, deg = pair_groupoid(n)
    g["grading"] = deg
    write(
        f"m{n}_f{p}",
        {
            "description": f"M_{n}(F_{p}) with diagonal C, graded by j - i",
            "ring": {"mod": p},
            "gamma": "Z",
            "groupoid": g,
        },
    )


for n, p in [(2, 2), (2, 3), (3, 2), (3, 3)]:
    matrix_units(n, p)

z2 = cyclic_group(2, ["1", "x"])
write(
    "grouping_f5_z2_graded",
    {
        "description": "F_5[Z/2] with C = F_5 1, graded by the group itself",
        "ring": {"mod": 5},
        "gamma": {"cyclic": 2},
        "groupoid": {**z2, "grading": {"1": "0", "x": "1"}},
    },
)
write(
    "grouping_f5_z2_trivial",
    {
        "description": "F_5[Z/2] with C = F_5 1, trivially graded",
        "ring": {"mod": 5},
        "groupoid": z2,
    },
)
write(
    "z2_cocycle_f5",
    {
        "description": "Z/2 over F_5 twisted by omega(x, x) = -1, graded by Z/2",
        "ring": {"mod": 5},
        "gamma": {"cyclic": 2},
        "groupoid": {**z2, "grading": {"1": "0", "x": "1"}},
        "twist": {"omega": [["x", "x", 4]]},
    },
)
write(
    "z2_cocycle2_f5",
    {
        "description": "Z/2 over F_5 twisted by the non-square omega(x, x) = 2, graded by Z/2",
        "ring": {"mod": 5},
        "gamma": {"cyclic": 2},
        "groupoid": {**z2, "grading": {"1": "0", "x": "1"}},
        "twist": {"omega": [["x", "x", 2]]},
    },
)

# omega(a, b) = f(a) f(b) / f(a + b) with f = (1, 3, 5) on Z/3 over F_7
inv7 = {k: pow(k, 5, 7) for k in range(1, 7)}
f = [1, 3, 5]
z3 = cyclic_group(3, ["1", "g", "g2"])
omega = [
    [z3["arrows"][a], z3["arrows"][b], f[a] * f[b] * inv7[f[(a + b) % 3]] % 7]
    for a in range(3)
    for b in range(3)
]
write(
    "z3_coboundary_f7",
    {
        "description": "Z/3 over F_7 with a coboundary twist, graded by Z/3",
        "ring": {"mod": 7},
        "gamma": {"cyclic": 3},
        "groupoid": {**z3, "grading": {"1": "0", "g": "1", "g2": "2"}},
        "twist": {"omega": [w for w in omega if w[2] != 1]},
    },
)
write(
    "group_ring_f3_z3_trivial",
    {
        "description": "F_3[Z/3] with C = F_3 1, trivially graded",
        "ring": {"mod": 3},
        "groupoid": z3,
    },
)

g, _ = pair_groupoid(2)
write(
    "m2_f2_trivial_grading",
    {
        "description": "M_2(F_2) with diagonal C and the trivial grading",
        "ring": {"mod": 2},
        "groupoid": g,
    },
)

# R_2 disjoint union Z/2, graded by Z/2: off-diagonal units and x in degree 1
g, _ = pair_groupoid(2)
union = {key: g[key] + z2[key] if isinstance(g[key], list) else {**g[key], **z2[key]} for key in g}
union["grading"] = {"E12": "1", "E21": "1", "x": "1"}
write(
    "r2_plus_z2",
    {
        "description": "R_2 disjoint union Z/2 over F_3, graded by Z/2",
        "ring": {"mod": 3},
        "gamma": {"cyclic": 2},
        "groupoid": union,
    },
)

# S_3 over F_4 with A_3 = F_4^x: the unit image is not central.
f4 = ["0", "1", "a", "b"]  # b = a + 1 = a^2
f4_add = [[f4[i ^ j] for j in range(4)] for i in range(4)]
log = {1: 0, 2: 1, 3: 2}
f4_mul = [
    [f4[0] if i == 0 or j == 0 else f4[[1, 2, 3][(log[i] + log[j]) % 3]] for j in range(4)]
    for i in range(4)
]
perms = list(itertools.permutations(range(3)))
name = {p: "".join(str(k + 1) for k in p) for p in perms}
compose = lambda p, q: tuple(p[q[k]] for k in range(3))
sign = lambda p: sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j]) % 2
rot = {0: (0, 1, 2), 1: (1, 2, 0), 2: (2, 0, 1)}
sigma_arrows = [name[p] for p in perms]
e = name[(0, 1, 2)]
write(
    "s3_dt3_fail",
    {
        "description": "S_3 over Z/2 with the three rotations as F_4^x; fails DT3",
        "ring": {"table": {"elements": f4, "add": f4_add, "mul": f4_mul}},
        "groupoid": {
            "arrows": ["1", "s"],
            "units": ["1"],
            "src": {"1": "1", "s": "1"},
            "rng": {"1": "1", "s": "1"},
            "compose": [["1", "1", "1"], ["1", "s", "s"], ["s", "1", "s"], ["s", "s", "1"]],
        },
        "twist": {
            "explicit": {
                "sigma": {
                    "arrows": sigma_arrows,
                    "units": [e],
                    "src": {a: e for a in sigma_arrows},
                    "rng": {a: e for a in sigma_arrows},
                    "compose": [[name[p], name[q], name[compose(p, q)]] for p in perms for q in perms],
                },
                "q": {name[p]: ["1", "s"][sign(p)] for p in perms},
                "i": [["1", f4[[1, 2, 3][k]], name[rot[k]]] for k in range(3)],
            }
        },
    },
)

write(
    "z6_wt_fail",
    {
        "description": "Z/6 over itself with C = R 1; 2 and 3 violate WT",
        "ring": {"mod": 6},
        "algebra": {"basis": ["1"], "mul": [["1", "1", [["1", 1]]]], "C": ["1"], "P": [["1", [["1", 1]]]]},
    },
)

# The omega(x, x) = 2 twist again, written out as an explicit extension of Z/2
# by F_5^x: (g, s)(h, t) = (gh, omega(g, h) s t).
units5 = [1, 2, 3, 4]
om = lambda g, h: 2 if g == h == 1 else 1
arr = lambda g, t: f"({z2['arrows'][g]}, {t})"
ext = [arr(g, t) for g in range(2) for t in units5]
write(
    "z2_cocycle2_f5_explicit",
    {
        "description": "Z/2 over F_5 with the non-square twist as an explicit extension, graded by Z/2",
        "ring": {"mod": 5},
        "gamma": {"cyclic": 2},
        "groupoid": {**z2, "grading": {"1": "0", "x": "1"}},
        "twist": {
            "explicit": {
                "sigma": {
                    "arrows": ext,
                    "units": [arr(0, 1)],
                    "src": {a: arr(0, 1) for a in ext},
                    "rng": {a: arr(0, 1) for a in ext},
                    "compose": [
                        [arr(g, s), arr(h, t), arr((g + h) % 2, om(g, h) * s * t % 5)]
                        for g in range(2)
                        for s in units5
                        for h in range(2)
                        for t in units5
                    ],
                    "grading": {arr(1, t): "1" for t in units5},
                },
                "q": {arr(g, t): z2["arrows"][g] for g in range(2) for t in units5},
                "i": [["1", t, arr(0, t)] for t in units5],
            }
        },
    },
)
