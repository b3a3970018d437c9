"""Brute-force reference implementations used to cross-check the package.

Everything here is plain Python over nested lists and dicts and shares no
code with ``heapmorita`` beyond the ``PartialBijection`` value type.
"""
from __future__ import annotations

from itertools import combinations, permutations, product
from math import comb, factorial


def tolist(a):
    return a.tolist() if hasattr(a, "tolist") else a


# ---------------------------------------------------------------------------
# semigroups


def assoc_failures(mul):
    mul = tolist(mul)
    n = len(mul)
    for a, b, c in product(range(n), repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            yield (a, b, c)


def first_assoc_failure(mul):
    return next(assoc_failures(mul), None)


def generalized_inverses(mul, x):
    mul = tolist(mul)
    n = len(mul)
    return [y for y in range(n) if mul[mul[x][y]][x] == x and mul[mul[y][x]][y] == y]


def inverse_map(mul):
    """Unique inverse of each element, or None when some element has 0 or 2+."""
    out = []
    for x in range(len(tolist(mul))):
        g = generalized_inverses(mul, x)
        if len(g) != 1:
            return None
        out.append(g[0])
    return out


def idempotents(mul):
    mul = tolist(mul)
    return [x for x in range(len(mul)) if mul[x][x] == x]


def is_isomorphism(mul_a, mul_b, phi):
    mul_a, mul_b = tolist(mul_a), tolist(mul_b)
    n = len(mul_a)
    if len(mul_b) != n or sorted(phi) != list(range(n)):
        return False
    return all(phi[mul_a[a][b]] == mul_b[phi[a]][phi[b]] for a in range(n) for b in range(n))


# ---------------------------------------------------------------------------
# partial injections as dicts


def all_partial_injections(src, dst):
    """Every injective partial map, found by filtering all subsets of src x dst."""
    cells = [(s, d) for s in range(src) for d in range(dst)]
    out = []
    for r in range(min(src, dst) + 1):
        for pairs in combinations(cells, r):
            srcs = [s for s, _ in pairs]
            dsts = [d for _, d in pairs]
            if len(set(srcs)) == r and len(set(dsts)) == r:
                out.append(dict(pairs))
    return out


def count_partial_injections(k):
    return sum(comb(k, j) ** 2 * factorial(j) for j in range(k + 1))


def as_dict(f):
    return dict(f.pairs)


def compose(f: dict, g: dict) -> dict:
    """t -> f(g(t))."""
    return {t: f[g[t]] for t in g if g[t] in f}


def invert(f: dict) -> dict:
    return {v: k for k, v in f.items()}


def key(f: dict):
    return tuple(sorted(f.items()))


# ---------------------------------------------------------------------------
# heaps


def heap_of_semigroup(mul, inv):
    mul = tolist(mul)
    n = len(mul)
    return [[[mul[mul[x][inv[y]]][z] for z in range(n)] for y in range(n)] for x in range(n)]


def heap_axiom_holds(t, axiom, args):
    if axiom == "A1":
        (x,) = args
        return t[x][x][x] == x
    if axiom == "A2":
        a, b, c, d, e = args
        left = t[t[a][b][c]][d][e]
        return left == t[a][t[d][c][b]][e] and left == t[a][b][t[c][d][e]]
    if axiom == "A3":
        x, y, z = args
        return t[x][x][t[y][y][z]] == t[y][y][t[x][x][z]]
    if axiom == "A4":
        x, y, z = args
        return t[t[z][x][x]][y][y] == t[t[z][y][y]][x][x]
    raise KeyError(axiom)


HEAP_ARITY = {"A1": 1, "A2": 5, "A3": 3, "A4": 3}


def first_heap_failure(t, axiom):
    t = tolist(t)
    n = len(t)
    for args in product(range(n), repeat=HEAP_ARITY[axiom]):
        if not heap_axiom_holds(t, axiom, args):
            return args
    return None


def closure(maps):
    """Close a list of dict maps under x y^-1 z by naive iteration."""
    elems = {key(f): f for f in maps}
    while True:
        new = {}
        vals = list(elems.values())
        for x, y, z in product(vals, repeat=3):
            f = compose(x, compose(invert(y), z))
            k = key(f)
            if k not in elems:
                new[k] = f
        if not new:
            return list(elems.values())
        elems.update(new)


# ---------------------------------------------------------------------------
# concrete X X^-1 and X^-1 X of an atlas heap


def concrete_groupoid(maps, side):
    """Admissible pairs and their concrete products for a closed set of maps.

    On the left side ``(x, y)`` is admissible when ``x`` and ``y`` share a
    domain and stands for ``x y^-1``; on the right side they must share an
    image and the pair stands for ``x^-1 y``.
    """
    pairs = {}
    for i, x in enumerate(maps):
        for j, y in enumerate(maps):
            if side == "left" and set(x) == set(y):
                pairs[(i, j)] = key(compose(x, invert(y)))
            elif side == "right" and set(x.values()) == set(y.values()):
                pairs[(i, j)] = key(compose(invert(x), y))
    return pairs


# ---------------------------------------------------------------------------
# bimodules


def mc_holds(B, axiom, args):
    """Evaluate one bracket axiom on one tuple of a bimodule given as nested lists."""
    L, R, bs, bt = B["actL"], B["actR"], B["brS"], B["brT"]
    ms, mt, invs, invt = B["S"], B["T"], B["invS"], B["invT"]
    if axiom == "MC1":
        s, x, y = args
        return bs[L[s][x]][y] == ms[s][bs[x][y]]
    if axiom == "MC2":
        x, y = args
        return bs[y][x] == invs[bs[x][y]]
    if axiom == "MC3":
        (x,) = args
        return L[bs[x][x]][x] == x
    if axiom == "MC4":
        x, y, t = args
        return bt[x][R[y][t]] == mt[bt[x][y]][t]
    if axiom == "MC5":
        x, y = args
        return bt[x][y] == invt[bt[y][x]]
    if axiom == "MC6":
        (x,) = args
        return R[x][bt[x][x]] == x
    if axiom == "MC7":
        x, y, z = args
        return L[bs[x][y]][z] == R[x][bt[y][z]]
    raise KeyError(axiom)


def mc_ranges(B, axiom):
    m, ns, nt = len(B["brS"]), len(B["S"]), len(B["T"])
    return {
        "MC1": (ns, m, m),
        "MC2": (m, m),
        "MC3": (m,),
        "MC4": (m, m, nt),
        "MC5": (m, m),
        "MC6": (m,),
        "MC7": (m, m, m),
    }[axiom]


def first_mc_failure(B, axiom):
    for args in product(*(range(r) for r in mc_ranges(B, axiom))):
        if not mc_holds(B, axiom, args):
            return args
    return None


def bimodule_lists(B):
    return {
        "S": tolist(B.S.mul),
        "T": tolist(B.T.mul),
        "invS": tolist(B.S.inv),
        "invT": tolist(B.T.inv),
        "actL": tolist(B.act_left),
        "actR": tolist(B.act_right),
        "brS": tolist(B.br_s),
        "brT": tolist(B.br_t),
    }


def brute_iso(mul_a, mul_b):
    """Try every bijection; only for tiny inputs."""
    n = len(tolist(mul_a))
    for phi in permutations(range(n)):
        if is_isomorphism(mul_a, mul_b, list(phi)):
            return list(phi)
    return None
