#!/usr/bin/env python3
"""Regenerates the JSON corpus under data/ from first principles (stdlib only)."""

import argparse
import itertools
import json
from pathlib import Path


def group_from_elements(elements, mul):
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    ident = next(i for i, e in enumerate(elements) if all(table[i][j] == j for j in range(len(elements))))
    inverse = [next(j for j in range(len(elements)) if table[i][j] == ident) for i in range(len(elements))]
    return {"schema": "group.v1", "order": len(elements), "table": table, "inverse": inverse}


def compose_perm(p, q):
    """(p q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def perm_closure(gens):
    n = len(gens[0])
    ident = tuple(range(n))
    seen = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose_perm(g, a)
                if b not in seen:
                    seen.append(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def cyclic(n):
    return group_from_elements(list(range(n)), lambda a, b: (a + b) % n)


def symmetric(k):
    return group_from_elements(sorted(itertools.permutations(range(k))), compose_perm)


def dihedral(m):
    rot = tuple((x + 1) % m for x in range(m))
    ref = tuple((-x) % m for x in range(m))
    return group_from_elements(perm_closure([rot, ref]), compose_perm)


def quaternion():
    # Elements as (sign, unit) with unit in 1, i, j, k; order 1, i, j, k, -1, -i, -j, -k.
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elements = [(s, u) for s in (1, -1) for u in ("1", "i", "j", "k")]

    def mul(a, b):
        s, u = units[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return group_from_elements(elements, mul)


def distance_scheme(vertices, adjacent, classes):
    n = len(vertices)
    dist = [[0 if x == y else None for y in range(n)] for x in range(n)]
    for s in range(n):
        frontier, d = [s], 0
        while frontier:
            d += 1
            nxt = []
            for x in frontier:
                for y in range(n):
                    if dist[s][y] is None and adjacent(vertices[x], vertices[y]):
                        dist[s][y] = d
                        nxt.append(y)
            frontier = nxt
    mats = [[[1 if dist[x][y] == c else 0 for y in range(n)] for x in range(n)] for c in range(classes)]
    return {"schema": "scheme.v1", "classes": classes, "matrices": mats}


def cycle_scheme(n):
    return distance_scheme(list(range(n)), lambda a, b: (a - b) % n in (1, n - 1), n // 2 + 1)


def petersen_scheme():
    verts = list(itertools.combinations(range(5), 2))
    return distance_scheme(verts, lambda a, b: not set(a) & set(b), 3)


def intersection_numbers(scheme):
    mats = scheme["matrices"]
    r, n = len(mats), len(mats[0])
    rep = [next((x, y) for x in range(n) for y in range(n) if m[x][y]) for m in mats]
    p = [[[sum(mats[i][rep[k][0]][z] * mats[j][z][rep[k][1]] for z in range(n)) for k in range(r)]
          for j in range(r)] for i in range(r)]
    return {"schema": "scheme.v1", "classes": r, "p": p}


def groupoid(arrows, mul):
    """arrows: list of (src, tgt, label); mul(a, b) -> label for composable a after b."""
    index = {a: i for i, a in enumerate(arrows)}
    compose = []
    for ia, a in enumerate(arrows):
        for ib, b in enumerate(arrows):
            if a[0] == b[1]:
                compose.append({"a": ia, "b": ib, "ab": index[mul(a, b)]})
    objects = 1 + max(max(a[0], a[1]) for a in arrows)
    return {"schema": "groupoid.v1", "objects": objects,
            "arrows": [{"src": a[0], "tgt": a[1]} for a in arrows], "compose": compose}


def pair_groupoid(k, h=1):
    arrows = [(s, t, g) for t in range(k) for s in range(k) for g in range(h)]
    return groupoid(arrows, lambda a, b: (b[0], a[1], (a[2] + b[2]) % h))


def disjoint_z2():
    arrows = [(o, o, g) for o in range(2) for g in range(2)]
    return groupoid(arrows, lambda a, b: (a[0], a[1], (a[2] + b[2]) % 2))


def matrix_algebra(n):
    """Matrix units e_ij (index i * n + j), e_ij e_kl = delta_jk e_il, e_ij* = e_ji."""
    idx = lambda i, j: i * n + j
    structure = [{"i": idx(i, j), "j": idx(j, l), "k": idx(i, l), "re": 1.0, "im": 0.0}
                 for i in range(n) for j in range(n) for l in range(n)]
    star = [{"i": idx(i, j), "k": idx(j, i), "re": 1.0, "im": 0.0} for i in range(n) for j in range(n)]
    unit = [[1.0 if i == j else 0.0, 0.0] for i in range(n) for j in range(n)]
    return {"schema": "algebra.v1", "dim": n * n, "unit": unit, "structure": structure, "star": star}


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def conjugated_transpose_map(left, right):
    """Matrix of a -> left a^T right on the matrix units of M_2."""
    entries = []
    for i in range(2):
        for j in range(2):
            unit_t = [[1.0 if (r, c) == (j, i) else 0.0 for c in range(2)] for r in range(2)]
            img = matmul(matmul(left, unit_t), right)
            for r in range(2):
                for c in range(2):
                    if img[r][c] != 0.0:
                        entries.append({"i": i * 2 + j, "k": r * 2 + c, "re": img[r][c], "im": 0.0})
    return {"schema": "antimap.v1", "dim": 4, "matrix": entries}


def transpose_antimap(m):
    """varsigma = S^T on the dual basis."""
    return {"schema": "antimap.v1", "dim": m["dim"],
            "matrix": [{"i": e["k"], "k": e["i"], "re": e["re"], "im": e["im"]} for e in m["matrix"]]}


def dual_coalgebra(alg):
    """Dual basis: Delta(c^k) = sum c[i][j][k] c^i (x) c^j, counit = unit, star matrix adjoint."""
    delta = [{"i": e["i"], "j": e["j"], "k": e["k"], "re": e["re"], "im": e["im"]} for e in alg["structure"]]
    star = [{"i": e["k"], "k": e["i"], "re": e["re"], "im": -e["im"]} for e in alg["star"]]
    return {"schema": "coalgebra.v1", "dim": alg["dim"], "counit": alg["unit"], "delta": delta, "star": star}


def group_algebra_json(g):
    n = g["order"]
    ident = next(i for i in range(n) if g["table"][i] == list(range(n)))
    structure = [{"i": a, "j": b, "k": g["table"][a][b], "re": 1.0, "im": 0.0} for a in range(n) for b in range(n)]
    star = [{"i": a, "k": g["inverse"][a], "re": 1.0, "im": 0.0} for a in range(n)]
    unit = [[1.0 if a == ident else 0.0, 0.0] for a in range(n)]
    return {"schema": "algebra.v1", "dim": n, "unit": unit, "structure": structure, "star": star}


def corpus():
    files = {}
    for n in range(1, 9):
        files[f"groups/z{n}.json"] = cyclic(n)
    files["groups/s3.json"] = symmetric(3)
    files["groups/s4.json"] = symmetric(4)
    files["groups/d4.json"] = dihedral(4)
    files["groups/q8.json"] = quaternion()

    files["schemes/c5.json"] = cycle_scheme(5)
    files["schemes/petersen.json"] = petersen_scheme()
    broken = intersection_numbers(cycle_scheme(5))
    broken["p"][1][1][0] = -1
    files["invalid/broken_scheme.json"] = broken

    files["groupoids/pair2.json"] = pair_groupoid(2)
    files["groupoids/pair3.json"] = pair_groupoid(3)
    files["groupoids/pair4.json"] = pair_groupoid(4)
    files["groupoids/z2_disjoint_z2.json"] = disjoint_z2()
    files["groupoids/pair2_times_z3.json"] = pair_groupoid(2, 3)

    m2 = matrix_algebra(2)
    files["algebras/m2.json"] = m2
    u = [[0.0, 0.5], [2.0, 0.0]]
    v = [[0.0, 1.0], [-1.0, 0.0]]
    v_inv = [[0.0, -1.0], [1.0, 0.0]]
    s_u = conjugated_transpose_map(u, u)
    s_v = conjugated_transpose_map(v, v_inv)
    files["antimaps/m2_u.json"] = s_u
    files["antimaps/m2_v.json"] = s_v

    files["coalgebras/m2c.json"] = dual_coalgebra(m2)
    files["coalgebras/z3_dual.json"] = dual_coalgebra(group_algebra_json(cyclic(3)))
    files["antimaps/m2c_u.json"] = transpose_antimap(s_u)
    files["antimaps/m2c_v.json"] = transpose_antimap(s_v)

    files["involutions/z3_inversion.json"] = {"schema": "involution.v1", "perm": [0, 2, 1]}
    files["involutions/c5_swap.json"] = {"schema": "involution.v1", "perm": [0, 2, 1]}
    return files


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    root = Path(args.out)
    for name, doc in corpus().items():
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, separators=(",", ":")) + "\n")
        print(path)


if __name__ == "__main__":
    main()
