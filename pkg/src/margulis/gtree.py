"""Finite simplicial trees with (possibly window-restricted) group actions.

Actions of infinite groups are materialized on finite windows: a TreeAut
may be a partial injective map, defined only where the acting element keeps
the window.  Operations that would need information beyond the window raise
TruncationAmbiguous instead of guessing.

The hyperbolicity certificate in classify_aut rests on a fact about
distance to a subtree: across any edge, the distance to a fixed subtree
changes by exactly one.  Displacement satisfies d(v, gv) = m + 2 d(v, A)
with A the invariant axis (or fixed tree, with m = 0), so two *adjacent*
displacement minimizers must both lie on A and the observed minimum is the
true translation length; an argmin set with no adjacent pair proves
nothing, and the classification refuses.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    NotDisjoint,
    PreconditionFailed,
    TruncationAmbiguous,
)

Word = Union[str, Sequence[tuple[str, int]]]


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------

class Tree:
    """Finite tree on dense integer vertex ids 0..n-1."""

    def __init__(self, n_vertices: int, edges: Iterable[tuple[int, int]]):
        if n_vertices < 1:
            raise ValueError("a tree needs at least one vertex")
        self.n_vertices = n_vertices
        adj: list[list[int]] = [[] for _ in range(n_vertices)]
        edge_set: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in edge_set:
                raise ValueError(f"parallel edge ({u}, {v})")
            edge_set.add(key)
            adj[u].append(v)
            adj[v].append(u)
        if len(edge_set) != n_vertices - 1:
            raise ValueError("edge count must be n_vertices - 1")
        self.adjacency = tuple(tuple(ns) for ns in adj)
        self.edges = frozenset(edge_set)
        # rooted structure at 0 for O(log n) distances via binary lifting
        parent = [-1] * n_vertices
        depth = [0] * n_vertices
        seen = [False] * n_vertices
        order = deque([0])
        seen[0] = True
        visited = 0
        while order:
            v = order.popleft()
            visited += 1
            for w in self.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    order.append(w)
        if visited != n_vertices:
            raise ValueError("tree is not connected")
        self.parent = tuple(parent)
        self.depth = tuple(depth)
        levels = max(1, max(depth).bit_length())
        up = [parent]
        for _ in range(levels - 1):
            prev = up[-1]
            up.append([-1 if prev[v] == -1 else prev[prev[v]] for v in range(n_vertices)])
        self._up = tuple(tuple(row) for row in up)

    @classmethod
    def from_edges(cls, edges: Sequence[tuple[int, int]]) -> "Tree":
        n = max(max(u, v) for u, v in edges) + 1 if edges else 1
        return cls(n, edges)

    @classmethod
    def path_graph(cls, n: int) -> "Tree":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def star(cls, leaves: int) -> "Tree":
        return cls(leaves + 1, [(0, i + 1) for i in range(leaves)])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def lca(self, u: int, v: int) -> int:
        du, dv = self.depth[u], self.depth[v]
        if du < dv:
            u, v, du, dv = v, u, dv, du
        diff = du - dv
        k = 0
        while diff:
            if diff & 1:
                u = self._up[k][u]
            diff >>= 1
            k += 1
        if u == v:
            return u
        for k in range(len(self._up) - 1, -1, -1):
            if self._up[k][u] != self._up[k][v]:
                u = self._up[k][u]
                v = self._up[k][v]
        return self.parent[u]

    def distance(self, u: int, v: int) -> int:
        return self.depth[u] + self.depth[v] - 2 * self.depth[self.lca(u, v)]

    def path(self, u: int, v: int) -> list[int]:
        """Vertices of the unique path from u to v, inclusive."""
        a = self.lca(u, v)
        left = []
        while u != a:
            left.append(u)
            u = self.parent[u]
        right = []
        while v != a:
            right.append(v)
            v = self.parent[v]
        return left + [a] + right[::-1]

    def component_without_edge(self, u: int, v: int, side: int) -> frozenset[int]:
        """Vertex set of the component of T - {u, v} containing ``side``."""
        if not self.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge")
        out = {side}
        queue = deque([side])
        banned = frozenset((u, v))
        while queue:
            w = queue.popleft()
            for nb in self.adjacency[w]:
                if nb in out:
                    continue
                if w in banned and nb in banned:
                    continue
                out.add(nb)
                queue.append(nb)
        return frozenset(out)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(f"tree {self.n_vertices}\n")
            for u, v in sorted(self.edges):
                fh.write(f"{u} {v}\n")

    @classmethod
    def load(cls, path: str) -> "Tree":
        with open(path) as fh:
            header = fh.readline().split()
            if len(header) != 2 or header[0] != "tree":
                raise ValueError("expected header 'tree <num_vertices>'")
            n = int(header[1])
            edges = []
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                u, v = line.split()
                edges.append((int(u), int(v)))
        return cls(n, edges)


@dataclass(frozen=True)
class Subtree:
    """A connected (or empty) set of vertices of a tree."""

    tree: Tree
    vertices: frozenset[int]

    def __post_init__(self):
        vs = frozenset(self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            return
        for v in vs:
            if not 0 <= v < self.tree.n_vertices:
                raise ValueError(f"vertex {v} out of range")
        start = next(iter(vs))
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self.tree.adjacency[v]:
                if w in vs and w not in seen:
                    seen.add(w)
                    queue.append(w)
        if seen != vs:
            raise ValueError("vertex set does not induce a connected subgraph")

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def intersects(self, other: "Subtree") -> bool:
        return bool(self.vertices & other.vertices)


# ---------------------------------------------------------------------------
# automorphisms (total or window-restricted)
# ---------------------------------------------------------------------------

class TreeAut:
    """Adjacency-preserving injective partial map without edge inversions.

    A total mapping is an automorphism; a partial one is the restriction of
    an automorphism of a larger tree to a finite window.
    """

    def __init__(self, tree: Tree, images: Sequence[Optional[int]]):
        if len(images) != tree.n_vertices:
            raise ValueError("image list must cover every vertex")
        self.tree = tree
        self.images = tuple(images)
        defined = [v for v, img in enumerate(self.images) if img is not None]
        values = [self.images[v] for v in defined]
        for img in values:
            if not 0 <= img < tree.n_vertices:
                raise ValueError(f"image {img} out of range")
        if len(set(values)) != len(values):
            raise ValueError("mapping is not injective")
        for u, v in tree.edges:
            gu, gv = self.images[u], self.images[v]
            if gu is not None and gv is not None:
                if not tree.has_edge(gu, gv):
                    raise ValueError(f"edge ({u}, {v}) not preserved")
                if gu == v and gv == u:
                    raise ValueError(f"edge ({u}, {v}) is inverted")
        self.domain = tuple(defined)

    @classmethod
    def identity(cls, tree: Tree) -> "TreeAut":
        return cls(tree, tuple(range(tree.n_vertices)))

    @classmethod
    def from_mapping(cls, tree: Tree, mapping: dict[int, int]) -> "TreeAut":
        return cls(tree, tuple(mapping.get(v) for v in range(tree.n_vertices)))

    @property
    def is_total(self) -> bool:
        return len(self.domain) == self.tree.n_vertices

    def __call__(self, v: int) -> Optional[int]:
        return self.images[v]

    def __mul__(self, other: "TreeAut") -> "TreeAut":
        """Composition acting right-to-left: (f * g)(v) = f(g(v))."""
        if not isinstance(other, TreeAut):
            return NotImplemented
        images = []
        for v in range(self.tree.n_vertices):
            w = other.images[v]
            images.append(None if w is None else self.images[w])
        return TreeAut(self.tree, images)

    def inverse(self) -> "TreeAut":
        images: list[Optional[int]] = [None] * self.tree.n_vertices
        for v, img in enumerate(self.images):
            if img is not None:
                images[img] = v
        return TreeAut(self.tree, images)

    def power(self, k: int) -> "TreeAut":
        if k < 0:
            return self.inverse().power(-k)
        out = TreeAut.identity(self.tree)
        for _ in range(k):
            out = self * out
        return out

    def fixed_vertices(self) -> frozenset[int]:
        return frozenset(v for v in self.domain if self.images[v] == v)

    def order(self) -> int:
        """Order as a permutation; total maps only."""
        if not self.is_total:
            raise ValueError("order is defined for total automorphisms only")
        seen = [False] * self.tree.n_vertices
        out = 1
        for v in range(self.tree.n_vertices):
            if seen[v]:
                continue
            length = 0
            w = v
            while not seen[w]:
                seen[w] = True
                w = self.images[w]
                length += 1
            out = out * length // math.gcd(out, length)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreeAut):
            return NotImplemented
        return self.tree is other.tree and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)


class AutKind(Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AutClassification:
    kind: AutKind
    translation: int
    fix: Optional[Subtree] = None
    axis: Optional[Subtree] = None

    @property
    def is_elliptic(self) -> bool:
        return self.kind is AutKind.ELLIPTIC


def classify_aut(g: TreeAut) -> AutClassification:
    """Elliptic (with its fixed subtree) or hyperbolic (axis and translation).

    On a window restriction, a positive minimum displacement is certified to
    be the true translation length only when two adjacent vertices attain
    it (see the module docstring); otherwise TruncationAmbiguous.
    """
    if not g.domain:
        raise TruncationAmbiguous("automorphism has empty domain in this window")
    tree = g.tree
    disp = {v: tree.distance(v, g.images[v]) for v in g.domain}
    m = min(disp.values())
    if m == 0:
        return AutClassification(AutKind.ELLIPTIC, 0, fix=fix_subtree(g))
    argmin = {v for v, d in disp.items() if d == m}
    certified = any(w in argmin for v in argmin for w in tree.adjacency[v])
    if not certified:
        raise TruncationAmbiguous(
            f"minimum displacement {m} attained only at isolated vertices; "
            "the axis may lie outside the window")
    # all minimizers lie on the invariant line; take the hull between extremes
    start = next(iter(argmin))
    far1 = max(argmin, key=lambda v: tree.distance(start, v))
    far2 = max(argmin, key=lambda v: tree.distance(far1, v))
    axis = Subtree(tree, frozenset(tree.path(far1, far2)))
    return AutClassification(AutKind.HYPERBOLIC, m, axis=axis)


def fix_subtree(g: TreeAut) -> Subtree:
    """Fixed vertices of g; always a subtree or empty."""
    return Subtree(g.tree, g.fixed_vertices())


def _divisors(n: int) -> list[int]:
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def per_subtree(g: TreeAut) -> Subtree:
    """Union of the fixed subtrees of all powers of g.

    Total maps use the divisors of the permutation order (equivalent to the
    factorial tower on a finite tree).  Window restrictions iterate powers
    until the domain empties; if the union fails to be connected the window
    was too small, and TruncationAmbiguous is raised.
    """
    acc: set[int] = set()
    if g.is_total:
        order = g.order()
        for k in _divisors(order):
            acc |= g.power(k).fixed_vertices()
    else:
        cur = g
        seen_maps = set()
        for _ in range(g.tree.n_vertices):
            if not cur.domain or cur.images in seen_maps:
                break
            seen_maps.add(cur.images)
            acc |= cur.fixed_vertices()
            cur = cur * g
    try:
        return Subtree(g.tree, frozenset(acc))
    except ValueError as exc:
        raise TruncationAmbiguous(
            "periodic vertices are disconnected in this window") from exc


def bridge(t1: Subtree, t2: Subtree) -> list[int]:
    """The unique minimal vertex path from t1 to t2, interior disjoint from both."""
    if t1.is_empty or t2.is_empty:
        raise ValueError("bridge endpoints must be nonempty")
    if t1.intersects(t2):
        raise NotDisjoint("subtrees intersect")
    tree = t1.tree
    parent: dict[int, int] = {v: -1 for v in t1.vertices}
    queue = deque(t1.vertices)
    while queue:
        v = queue.popleft()
        for w in tree.adjacency[v]:
            if w in parent:
                continue
            parent[w] = v
            if w in t2.vertices:
                path = [w]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(w)
    raise ValueError("subtrees live in different components")  # unreachable on a tree


# ---------------------------------------------------------------------------
# named actions and words
# ---------------------------------------------------------------------------

def parse_word(word: Word) -> tuple[tuple[str, int], ...]:
    """Normalize a word to ((name, exponent), ...).

    Strings may be token form ("x y^-1" or "x*y^2") or, when every
    generator is a single lowercase letter, compact form ("xyX" with
    uppercase meaning inverse).  The empty word is allowed.
    """
    if not isinstance(word, str):
        out = []
        for name, exp in word:
            if exp != 0:
                out.append((str(name), int(exp)))
        return tuple(out)
    text = word.strip()
    if not text:
        return ()
    if any(ch in text for ch in " *^"):
        out = []
        for token in text.replace("*", " ").split():
            if "^" in token:
                name, _, exp_text = token.partition("^")
                exp = int(exp_text)
            else:
                name, exp = token, 1
            if not name:
                raise ValueError(f"malformed token in word {word!r}")
            if exp != 0:
                out.append((name, exp))
        return tuple(out)
    out = []
    for ch in text:
        if ch.isupper():
            out.append((ch.lower(), -1))
        else:
            out.append((ch, 1))
    return tuple(out)


def format_word(word: Word) -> str:
    syllables = parse_word(word)
    if not syllables:
        return "1"
    return " ".join(name if exp == 1 else f"{name}^{exp}" for name, exp in syllables)


class ActionSpec:
    """Named generators acting on one tree; evaluates words as composites."""

    def __init__(self, tree: Tree, generators: dict[str, TreeAut]):
        self.tree = tree
        for name, aut in generators.items():
            if aut.tree is not tree:
                raise ValueError(f"generator {name!r} acts on a different tree")
        self.generators = dict(generators)
        self._letters: dict[tuple[str, int], TreeAut] = {}
        for name, aut in generators.items():
            self._letters[(name, 1)] = aut
            self._letters[(name, -1)] = aut.inverse()

    def _letter(self, name: str, sign: int) -> TreeAut:
        try:
            return self._letters[(name, sign)]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def aut_of_word(self, word: Word) -> TreeAut:
        out = TreeAut.identity(self.tree)
        for name, exp in parse_word(word):
            sign = 1 if exp > 0 else -1
            letter = self._letter(name, sign)
            for _ in range(abs(exp)):
                out = out * letter
        return out

    def apply_word(self, word: Word, vertex: int) -> Optional[int]:
        """Image of a single vertex, applying letters right to left."""
        v: Optional[int] = vertex
        for name, exp in reversed(parse_word(word)):
            sign = 1 if exp > 0 else -1
            letter = self._letter(name, sign)
            for _ in range(abs(exp)):
                if v is None:
                    return None
                v = letter.images[v]
        return v

    def apply_word_to_edge(self, word: Word, edge: tuple[int, int]) -> Optional[tuple[int, int]]:
        u = self.apply_word(word, edge[0])
        v = self.apply_word(word, edge[1])
        if u is None or v is None:
            return None
        return (u, v)


# ---------------------------------------------------------------------------
# the XY edge decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XYDecomposition:
    x_word: str
    y_word: str
    edge: tuple[int, int]
    n: int
    tags: dict[str, str]            # element word -> "X" | "Y" | "Stab"
    violations: tuple[str, ...]
    side_x: frozenset[int]
    side_y: frozenset[int]

    @property
    def ok(self) -> bool:
        return not self.violations

    def counts(self) -> dict[str, int]:
        out = {"X": 0, "Y": 0, "Stab": 0}
        for tag in self.tags.values():
            out[tag] += 1
        return out


def _edge_key(e: tuple[int, int]) -> tuple[int, int]:
    return e if e[0] <= e[1] else (e[1], e[0])


def xy_decomposition(act: ActionSpec, x_word: Word, y_word: Word,
                     e: tuple[int, int], n: int,
                     elements: Sequence[Word]) -> XYDecomposition:
    """Tag elements by the side of T - e their e-image lands on, and verify
    the shuffle laws x^{+-k} Y inside X, y^{+-k} X inside Y, and the
    disjointness of the translates x^i Y (and y^i X) for |i| <= n.

    Preconditions checked: x and y elliptic with disjoint fixed trees, e on
    the arc between them, and neither x^k nor y^k fixing e for k <= 2n.
    """
    if n < 1:
        raise PreconditionFailed("n must be a positive integer")
    tree = act.tree
    x = act.aut_of_word(x_word)
    y = act.aut_of_word(y_word)
    cx = classify_aut(x)
    cy = classify_aut(y)
    if not cx.is_elliptic or cx.fix.is_empty:
        raise PreconditionFailed("x is not elliptic on this tree")
    if not cy.is_elliptic or cy.fix.is_empty:
        raise PreconditionFailed("y is not elliptic on this tree")
    if cx.fix.intersects(cy.fix):
        raise PreconditionFailed("Fix(x) and Fix(y) intersect")
    arc = bridge(cx.fix, cy.fix)
    arc_edges = {_edge_key((arc[i], arc[i + 1])): i for i in range(len(arc) - 1)}
    ek = _edge_key(e)
    if ek not in arc_edges:
        raise PreconditionFailed("edge does not lie between Fix(x) and Fix(y)")
    i = arc_edges[ek]
    v_x, v_y = arc[i], arc[i + 1]

    for word, name in ((x_word, "x"), (y_word, "y")):
        img = (e[0], e[1])
        for k in range(1, 2 * n + 1):
            img = act.apply_word_to_edge(word, img)
            if img is None:
                raise TruncationAmbiguous(
                    f"{name}^{k} pushes the edge outside the window")
            if _edge_key(img) == ek:
                raise PreconditionFailed(f"{name}^{k} fixes the edge (k <= 2n)")

    side_x = tree.component_without_edge(v_x, v_y, v_x)
    side_y = tree.component_without_edge(v_x, v_y, v_y)

    def tag_of(word: Word) -> str:
        img = act.apply_word_to_edge(word, (v_x, v_y))
        if img is None:
            raise TruncationAmbiguous(
                f"element {format_word(word)} pushes the edge outside the window")
        if _edge_key(img) == ek:
            if img != (v_x, v_y):
                raise PreconditionFailed(
                    f"element {format_word(word)} inverts the distinguished edge")
            return "Stab"
        return "X" if img[0] in side_x else "Y"

    tags: dict[str, str] = {}
    parsed = [parse_word(w) for w in elements]
    for w in parsed:
        tags[format_word(w)] = tag_of(w)

    violations: list[str] = []
    x_syll = parse_word(x_word)
    y_syll = parse_word(y_word)

    def power_word(syllables, k):
        if k >= 0:
            return syllables * k
        inv = tuple((nm, -ex) for nm, ex in reversed(syllables))
        return inv * (-k)

    for w in parsed:
        tag = tags[format_word(w)]
        for k in range(1, n + 1):
            for sign in (+1, -1):
                if tag == "Y":
                    moved = power_word(x_syll, sign * k) + w
                    if tag_of(moved) != "X":
                        violations.append(
                            f"x^{sign * k} ({format_word(w)}) not in X")
                if tag == "X":
                    moved = power_word(y_syll, sign * k) + w
                    if tag_of(moved) != "Y":
                        violations.append(
                            f"y^{sign * k} ({format_word(w)}) not in Y")

    # translate-disjointness through the edge orbit: on a tree whose edges
    # have trivial stabilizer the e-image identifies the element
    for letter_syll, source_tag, label in ((x_syll, "Y", "x"), (y_syll, "X", "y")):
        images: dict[int, set[tuple[int, int]]] = {}
        for i_pow in range(-n, n + 1):
            bucket: set[tuple[int, int]] = set()
            for w in parsed:
                if tags[format_word(w)] != source_tag:
                    continue
                moved = power_word(letter_syll, i_pow) + w
                img = act.apply_word_to_edge(moved, (v_x, v_y))
                if img is None:
                    raise TruncationAmbiguous(
                        f"{label}^{i_pow} translate exits the window")
                bucket.add(_edge_key(img))
            images[i_pow] = bucket
        for i_pow in range(-n, n + 1):
            for j_pow in range(i_pow + 1, n + 1):
                inter = images[i_pow] & images[j_pow]
                if inter:
                    violations.append(
                        f"{label}^{i_pow} {source_tag} meets {label}^{j_pow} "
                        f"{source_tag} at {sorted(inter)}")

    return XYDecomposition(format_word(x_word), format_word(y_word), ek, n,
                           tags, tuple(violations), side_x, side_y)


# ---------------------------------------------------------------------------
# ping-pong witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InclusionRow:
    element: int        # 0 or 1
    power: int
    checked: int
    skipped: int
    violations: int


@dataclass(frozen=True)
class PingPongWitness:
    s: tuple[int, int]
    boundary_edges: tuple[tuple[int, int], tuple[int, int]]
    omega0: frozenset[int]
    omega1: frozenset[int]
    rows: tuple[InclusionRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.violations == 0 and r.checked > 0 for r in self.rows)


def ping_pong_witness(act: ActionSpec, g0_word: Word, g1_word: Word,
                      max_power: int) -> PingPongWitness:
    """Construct the arc between the periodic subtrees and verify the
    shuffled inclusions g_i^n Omega_i inside Omega_{1-i} for 0 < |n| <= max_power.

    Vertices whose g_i^n-image leaves the window are skipped and counted; a
    row with nothing checkable raises TruncationAmbiguous.  A fully checked
    table is a window-scale Klein-criterion certificate that g0 and g1
    generate a rank-2 free group.
    """
    if max_power < 1:
        raise PreconditionFailed("max_power must be positive")
    tree = act.tree
    g0 = act.aut_of_word(g0_word)
    g1 = act.aut_of_word(g1_word)
    for name, g in (("g0", g0), ("g1", g1)):
        c = classify_aut(g)
        if not c.is_elliptic or c.fix.is_empty:
            raise PreconditionFailed(f"{name} is not elliptic on this tree")
    per0 = per_subtree(g0)
    per1 = per_subtree(g1)
    if per0.intersects(per1):
        raise PreconditionFailed("periodic subtrees intersect")
    arc = bridge(per0, per1)
    s0, s1 = arc[0], arc[-1]
    e0 = (arc[0], arc[1])
    e1 = (arc[-2], arc[-1])
    omega1 = tree.component_without_edge(e0[0], e0[1], s0)
    omega0 = tree.component_without_edge(e1[0], e1[1], s1)

    rows: list[InclusionRow] = []
    for idx, (g, source, target) in enumerate(((g0, omega0, omega1),
                                               (g1, omega1, omega0))):
        for direction in (g, g.inverse()):
            current = {v: v for v in source}
            for p in range(1, max_power + 1):
                nxt = {}
                for v, img in current.items():
                    w = direction.images[img]
                    if w is not None:
                        nxt[v] = w
                current = nxt
                violations = sum(1 for w in current.values() if w not in target)
                checked = len(current)
                row = InclusionRow(idx, p if direction is g else -p,
                                   checked, len(source) - checked, violations)
                if checked == 0:
                    raise TruncationAmbiguous(
                        f"g{idx}^{row.power}: no vertex of its side survives "
                        "in the window")
                rows.append(row)
    return PingPongWitness((s0, s1), (e0, e1), omega0, omega1, tuple(rows))


def identity_alternating_words(act: ActionSpec, g0_word: Word, g1_word: Word,
                               max_letters: int) -> list[str]:
    """Reduced alternating words in g0, g1 (total exponent <= max_letters)
    that act as the identity on the window; expected empty for a free pair.

    A word counts as acting nontrivially as soon as one vertex with a
    defined image moves; only words that fix everything they can see are
    reported.
    """
    syll0 = parse_word(g0_word)
    syll1 = parse_word(g1_word)

    def power_word(which, k):
        base = syll0 if which == 0 else syll1
        if k >= 0:
            return base * k
        inv = tuple((nm, -ex) for nm, ex in reversed(base))
        return inv * (-k)

    words: list[tuple[tuple[int, int], ...]] = []

    def extend(prefix, last, budget):
        for which in (0, 1):
            if which == last:
                continue
            for mag in range(1, budget + 1):
                for sign in (1, -1):
                    w = prefix + ((which, sign * mag),)
                    words.append(w)
                    extend(w, which, budget - mag)

    extend((), None, max_letters)

    offenders = []
    for w in words:
        letters: tuple = ()
        for which, k in w:
            letters = letters + power_word(which, k)
        moved = False
        any_defined = False
        for v in range(act.tree.n_vertices):
            img = None
            cur = v
            ok = True
            for name, exp in reversed(letters):
                sign = 1 if exp > 0 else -1
                letter = act._letter(name, sign)
                for _ in range(abs(exp)):
                    cur = letter.images[cur]
                    if cur is None:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            any_defined = True
            if cur != v:
                moved = True
                break
        if any_defined and not moved:
            offenders.append(" ".join(f"g{which}^{k}" for which, k in w))
    return offenders


def axes_distinct(act: ActionSpec, g0_word: Word, g1_word: Word) -> bool:
    """True when the two hyperbolic words provably have different axes.

    The window axes are truncations of the true invariant lines, so plain
    set inequality would wrongly separate g from g^2.  Distinctness is
    reported only when the union of the two window axes fails to lie on a
    single path, which no common line could explain.  True therefore
    certifies distinct axes, hence (by the distinct-axes criterion) a free
    semigroup; False means the window cannot tell the axes apart.
    """
    c0 = classify_aut(act.aut_of_word(g0_word))
    c1 = classify_aut(act.aut_of_word(g1_word))
    if c0.is_elliptic or c1.is_elliptic:
        raise PreconditionFailed("both elements must be hyperbolic")
    union = c0.axis.vertices | c1.axis.vertices
    tree = act.tree
    start = next(iter(union))
    far1 = max(union, key=lambda v: tree.distance(start, v))
    far2 = max(union, key=lambda v: tree.distance(far1, v))
    return not union <= set(tree.path(far1, far2))


# ---------------------------------------------------------------------------
# finite orbits
# ---------------------------------------------------------------------------

class OrbitStatus(Enum):
    FIXED_VERTEX = "FixedVertexFound"
    NO_FIXED_VERTEX = "NoFixedVertex"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FiniteOrbitVerdict:
    status: OrbitStatus
    vertex: Optional[int] = None
    orbit: frozenset[int] = frozenset()
    spanned: frozenset[int] = frozenset()


def finite_orbit_fixed_vertex(act: ActionSpec, s: int, bound: int) -> FiniteOrbitVerdict:
    """Search the subtree spanned by a stabilized orbit for a global fixed vertex.

    If the orbit fails to close within ``bound`` rounds, or runs off the
    window, the verdict is Inconclusive.  When the action on the spanned
    subtree factors through a finite group, a fixed vertex must exist.
    """
    letters = [act._letter(name, sign)
               for name in act.generators for sign in (1, -1)]
    orbit = {s}
    frontier = {s}
    stabilized = False
    for _ in range(bound):
        new = set()
        for v in frontier:
            for letter in letters:
                w = letter.images[v]
                if w is None:
                    return FiniteOrbitVerdict(OrbitStatus.INCONCLUSIVE,
                                              orbit=frozenset(orbit))
                if w not in orbit:
                    new.add(w)
        if not new:
            stabilized = True
            break
        orbit |= new
        frontier = new
    if not stabilized:
        # one more closure probe: bound rounds were exhausted while growing
        return FiniteOrbitVerdict(OrbitStatus.INCONCLUSIVE, orbit=frozenset(orbit))

    tree = act.tree
    anchor = next(iter(orbit))
    spanned: set[int] = set()
    for v in orbit:
        spanned.update(tree.path(anchor, v))
    for v in spanned:
        for letter in letters:
            if letter.images[v] is None:
                return FiniteOrbitVerdict(OrbitStatus.INCONCLUSIVE,
                                          orbit=frozenset(orbit),
                                          spanned=frozenset(spanned))
    for v in sorted(spanned):
        if all(letter.images[v] == v for letter in letters):
            return FiniteOrbitVerdict(OrbitStatus.FIXED_VERTEX, vertex=v,
                                      orbit=frozenset(orbit),
                                      spanned=frozenset(spanned))
    return FiniteOrbitVerdict(OrbitStatus.NO_FIXED_VERTEX,
                              orbit=frozenset(orbit),
                              spanned=frozenset(spanned))


# ---------------------------------------------------------------------------
# coset-tree windows for rank-2 free products
# ---------------------------------------------------------------------------

def _canonical_exp(exp: int, order: int) -> int:
    if order == 0:
        return exp
    return exp % order


def _syllable_length(exp: int, order: int) -> int:
    if order == 0:
        return abs(exp)
    e = exp % order
    return min(e, order - e)


def _prepend(syllables, gen: str, exp: int, order: int):
    """Normal form of gen^exp * syllables in Z_order(gen) * (other factor)."""
    exp = _canonical_exp(exp, order)
    if exp == 0:
        return syllables
    if syllables and syllables[0][0] == gen:
        merged = _canonical_exp(syllables[0][1] + exp, order)
        if merged == 0:
            return syllables[1:]
        return ((gen, merged),) + syllables[1:]
    return ((gen, exp),) + syllables


def _strip_trailing(syllables, gen: str):
    if syllables and syllables[-1][0] == gen:
        return syllables[:-1]
    return syllables


def _format_nf(syllables) -> str:
    if not syllables:
        return "1"
    return " ".join(f"{g}^{e}" if e != 1 else g for g, e in syllables)


@dataclass(frozen=True)
class CosetTreeWindow:
    """Window of the coset tree of <x> * <y> out to a word-length radius.

    Vertices are cosets w<x> and w<y> over reduced words of length at most
    the radius; edges correspond to the words themselves.  The generator
    actions are the partial left-multiplication maps.
    """

    tree: Tree
    action: ActionSpec
    base_edge: tuple[int, int]
    radius: int
    orders: tuple[int, int]
    labels: tuple[str, ...] = field(repr=False)
    _vertex_ids: dict = field(repr=False)

    def vertex_of_coset(self, factor: str, word: Word) -> Optional[int]:
        syllables = tuple(parse_word(word))
        nf: tuple = ()
        orders = {"x": self.orders[0], "y": self.orders[1]}
        for name, exp in reversed(syllables):
            nf = _prepend(nf, name, exp, orders[name])
        key = (factor, _strip_trailing(nf, factor))
        return self._vertex_ids.get(key)


def coset_tree(radius: int, order_x: int = 0, order_y: int = 0) -> CosetTreeWindow:
    """Build the radius-``radius`` window of the coset tree of Z_px * Z_py.

    order 0 means an infinite cyclic factor.  Finite orders must be >= 2.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    for order in (order_x, order_y):
        if order < 0 or order == 1:
            raise ValueError("factor order must be 0 (infinite) or >= 2")
    orders = {"x": order_x, "y": order_y}

    def syllable_exponents(gen: str, budget: int):
        order = orders[gen]
        if order == 0:
            for mag in range(1, budget + 1):
                yield mag, mag
                yield -mag, mag
        else:
            for e in range(1, order):
                length = _syllable_length(e, order)
                if length <= budget:
                    yield e, length

    words: list[tuple] = []

    def extend(prefix, last_gen, budget):
        for gen in ("x", "y"):
            if gen == last_gen:
                continue
            for exp, length in syllable_exponents(gen, budget):
                w = prefix + ((gen, exp),)
                words.append(w)
                extend(w, gen, budget - length)

    words.append(())
    extend((), None, radius)

    vertex_ids: dict = {}
    labels: list[str] = []

    def vertex_id(factor: str, rep) -> int:
        key = (factor, rep)
        if key not in vertex_ids:
            vertex_ids[key] = len(labels)
            labels.append(f"{_format_nf(rep)}<{factor}>")
        return vertex_ids[key]

    edges = []
    for w in words:
        u = vertex_id("x", _strip_trailing(w, "x"))
        v = vertex_id("y", _strip_trailing(w, "y"))
        edges.append((u, v))
    tree = Tree(len(labels), edges)

    def generator_map(gen: str) -> TreeAut:
        images: list[Optional[int]] = [None] * tree.n_vertices
        for (factor, rep), vid in vertex_ids.items():
            moved = _strip_trailing(_prepend(rep, gen, 1, orders[gen]), factor)
            images[vid] = vertex_ids.get((factor, moved))
        return TreeAut(tree, images)

    action = ActionSpec(tree, {"x": generator_map("x"), "y": generator_map("y")})
    base = (vertex_ids[("x", ())], vertex_ids[("y", ())])
    return CosetTreeWindow(tree, action, base, radius, (order_x, order_y),
                           tuple(labels), vertex_ids)
