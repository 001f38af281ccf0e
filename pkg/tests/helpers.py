"""Shared random samplers and independent-model oracles for the test suite."""

import cmath
import math
import random

from margulis.gtree import Tree, TreeAut
from margulis.hyp3 import Isometry, PointH3, apply, displacement


def random_point(rng: random.Random, spread: float = 1.0) -> PointH3:
    return PointH3(rng.gauss(0.0, spread), rng.gauss(0.0, spread),
                   math.exp(rng.gauss(0.0, spread)))


def random_isometry(rng: random.Random, scale: float = 1.0) -> Isometry:
    """Random unit-determinant matrix: a, b, c free, d = (1 + bc)/a."""
    while True:
        a = complex(rng.gauss(1.0, scale), rng.gauss(0.0, scale))
        if abs(a) > 1e-3:
            break
    b = complex(rng.gauss(0.0, scale), rng.gauss(0.0, scale))
    c = complex(rng.gauss(0.0, scale), rng.gauss(0.0, scale))
    return Isometry(a, b, c, (1.0 + b * c) / a)


def random_su2(rng: random.Random) -> Isometry:
    """Uniform rotation fixing the base point, via a random unit quaternion."""
    while True:
        q = [rng.gauss(0.0, 1.0) for _ in range(4)]
        n = math.sqrt(sum(x * x for x in q))
        if n > 1e-9:
            break
    w, x, y, z = (v / n for v in q)
    return Isometry(complex(w, x), complex(y, z), complex(-y, z), complex(w, -x))


def loxodromic_through_base(rng: random.Random, ell: float,
                            theta: float | None = None) -> Isometry:
    """Loxodromic with translation length ell whose axis passes the base point.

    Conjugating diag(e^{(ell + i theta)/2}, .) by a base-point rotation keeps
    the base point on the axis, so its displacement there is exactly ell.
    """
    if theta is None:
        theta = rng.uniform(-math.pi, math.pi)
    k = random_su2(rng)
    core = Isometry.diagonal(cmath.exp(complex(ell, theta) / 2.0))
    return k * core * k.inverse()


def hypothesis_pair(rng: random.Random, nu: float):
    """(x, y) with d_P(.) <= nu < d_P(.^2) at the base point, by construction
    or light rejection; mixes on-axis loxodromics with perturbed ones."""
    base = PointH3(0.0, 0.0, 1.0)
    out = []
    while len(out) < 2:
        style = rng.random()
        if style < 0.6:
            ell = rng.uniform(nu / 2.0 * 1.001, nu * 0.999)
            out.append(loxodromic_through_base(rng, ell))
            continue
        if style < 0.85:
            ell = rng.uniform(nu / 2.0 * 1.001, nu * 0.93)
            g = loxodromic_through_base(rng, ell)
            h = Isometry.parabolic(complex(rng.gauss(0, 0.02), rng.gauss(0, 0.02)))
            cand = h * g * h.inverse()
        else:
            k = random_su2(rng)
            rot = Isometry.diagonal(cmath.exp(1j * rng.uniform(0.4, math.pi) / 2.0))
            h = Isometry.parabolic(complex(rng.gauss(0, 0.25), rng.gauss(0, 0.25)))
            cand = k * h * rot * h.inverse() * k.inverse()
        dv = displacement(cand, base)
        d2 = displacement(cand * cand, base)
        if dv <= nu < d2:
            out.append(cand)
    return out[0], out[1]


# --- hyperboloid-model oracle (independent of the law-of-cosines path) -----

def to_hyperboloid(p: PointH3):
    n2 = p.z_re * p.z_re + p.z_im * p.z_im + p.t * p.t
    return ((n2 + 1.0) / (2.0 * p.t), p.z_re / p.t, p.z_im / p.t,
            (n2 - 1.0) / (2.0 * p.t))


def mink(u, v):
    return u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]


def hyperboloid_cos_angle(q: PointH3, p: PointH3, r: PointH3) -> float:
    """Cosine of the angle at p from tangent vectors in the hyperboloid model."""
    hp, hq, hr = to_hyperboloid(p), to_hyperboloid(q), to_hyperboloid(r)
    cq = mink(hp, hq)
    cr = mink(hp, hr)
    u = tuple(hq[i] - cq * hp[i] for i in range(4))
    v = tuple(hr[i] - cr * hp[i] for i in range(4))
    nu = -mink(u, u)
    nv = -mink(v, v)
    val = -mink(u, v) / math.sqrt(nu * nv)
    return min(1.0, max(-1.0, val))


def hyperboloid_dist(p: PointH3, q: PointH3) -> float:
    return math.acosh(max(mink(to_hyperboloid(p), to_hyperboloid(q)), 1.0))


# --- random trees with planted symmetry -------------------------------------

def random_attachment_edges(rng: random.Random, n: int, offset: int = 0):
    """Random recursive tree on ids offset..offset+n-1."""
    return [(offset + rng.randrange(i), offset + i) for i in range(1, n)]


def random_symmetric_tree(rng: random.Random, max_total: int = 50):
    """A random tree carrying a planted nontrivial automorphism.

    A random core gets 2 or 3 identical copies of a random branch attached
    at one or two sites; the returned automorphism permutes copies at each
    site cyclically and fixes the core.
    """
    core_n = rng.randint(1, 8)
    edges = random_attachment_edges(rng, core_n)
    images = list(range(core_n))
    next_id = core_n
    sites = rng.randint(1, 2)
    for _ in range(sites):
        branch_n = rng.randint(1, 5)
        copies = rng.randint(2, 3)
        if next_id + branch_n * copies > max_total:
            break
        site = rng.randrange(core_n)
        branch_edges = random_attachment_edges(rng, branch_n)
        ids = []
        for _ in range(copies):
            base = next_id
            ids.append(base)
            edges.append((site, base))
            for u, v in branch_edges:
                edges.append((base + u, base + v))
            images.extend(range(base, base + branch_n))
            next_id += branch_n
        for c in range(copies):
            src, dst = ids[c], ids[(c + 1) % copies]
            for k in range(branch_n):
                images[src + k] = dst + k
    tree = Tree(next_id, edges)
    return tree, TreeAut(tree, images)


def brute_displacement_table(tree: Tree, aut: TreeAut):
    """Edge-distance d(v, g v) for defined v, via networkx BFS (oracle path)."""
    import networkx as nx
    g = nx.Graph()
    g.add_nodes_from(range(tree.n_vertices))
    g.add_edges_from(tree.edges)
    table = {}
    for v in aut.domain:
        table[v] = nx.shortest_path_length(g, v, aut.images[v])
    return table
