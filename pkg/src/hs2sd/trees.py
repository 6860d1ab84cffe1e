"""Small-tree verification tools for the word-trace view of tree isomorphism.

Trees are unweighted; their adjacency and degree matrices are evaluated on
words over ``{A, D}`` and compared through power traces. Everything here is
exhaustive and intended for ``n <= 10``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .topology import TopologyGraph, evaluate_word, thue_morse_words

ISO_LIMIT = 10
SURVEY_LIMIT = 9
TRACE_TOL = 1e-6

WORD_PRESETS = {
    "tm4": thue_morse_words(3),
    "tm5": thue_morse_words(4),
    "adjacency": ["A"],
    "adjacency-degree": ["A", "D"],
}


@dataclass(frozen=True)
class Tree:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"a tree needs at least one vertex, got n={self.n}")
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        if len(edges) != self.n - 1:
            raise InputError(f"a tree on {self.n} vertices has {self.n - 1} edges, got {len(edges)}")
        if len(set(edges)) != len(edges):
            raise InputError("duplicate edge")
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) leaves the vertex range 0..{self.n - 1}")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise InputError(f"edge ({u}, {v}) closes a cycle")
            parent[ru] = rv
        # n - 1 edges with no cycle on n vertices is connected
        object.__setattr__(self, "edges", edges)

    def neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return nb

    def relabel(self, perm) -> Tree:
        """Tree with vertex ``v`` renamed ``perm[v]``."""
        return Tree(self.n, tuple((int(perm[u]), int(perm[v])) for u, v in self.edges))

    def degrees(self) -> list[int]:
        return [len(x) for x in self.neighbors()]


def tree_adjacency_degree(t: Tree) -> tuple[np.ndarray, np.ndarray]:
    a = np.zeros((t.n, t.n), dtype=np.int64)
    for u, v in t.edges:
        a[u, v] = a[v, u] = 1
    return a, np.diag(a.sum(axis=1))


def distance_matrix_stack(t: Tree, r_max: int | None = None) -> list[np.ndarray]:
    """0/1 matrices ``Δ_0 .. Δ_r_max`` marking vertex pairs at distance exactly ``r``.

    Uses ``Δ_0 = I``, ``Δ_1 = A``, ``Δ_2 = A² - D`` and, for ``r >= 2``,
    ``Δ_{r+1} = A Δ_r - (D - I) Δ_{r-1}``: extending a shortest path by one
    edge overcounts the ``deg - 1`` ways of stepping back. Leaving ``r_max``
    unset stops at the diameter.
    """
    a, d = tree_adjacency_degree(t)
    eye = np.eye(t.n, dtype=np.int64)
    stack = [eye, a]
    if r_max is not None and r_max < 0:
        raise InputError(f"r_max must be >= 0, got {r_max}")
    limit = r_max if r_max is not None else t.n
    if limit >= 2:
        stack.append(a @ a - d)
    while len(stack) <= limit:
        stack.append(a @ stack[-1] - (d - eye) @ stack[-2])
    stack = stack[: limit + 1]
    for r, delta in enumerate(stack):
        if not np.isin(delta, (0, 1)).all():
            raise ArithmeticError(f"distance matrix Δ_{r} has entries outside {{0, 1}}; input is not a tree")
    if r_max is None:
        while len(stack) > 1 and not stack[-1].any():
            stack.pop()
    return stack


def bfs_distances(t: Tree) -> np.ndarray:
    nb = t.neighbors()
    out = np.full((t.n, t.n), -1, dtype=np.int64)
    for s in range(t.n):
        out[s, s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in nb[u]:
                if out[s, v] < 0:
                    out[s, v] = out[s, u] + 1
                    q.append(v)
    return out


def tree_center(t: Tree) -> tuple[int, ...]:
    """Vertices of minimum eccentricity (one vertex or two adjacent ones)."""
    ecc = bfs_distances(t).max(axis=1)
    return tuple(int(v) for v in np.flatnonzero(ecc == ecc.min()))


def _power_traces(m: np.ndarray, k: int) -> np.ndarray:
    out = np.empty(k)
    p = np.eye(m.shape[0])
    for i in range(k):
        p = p @ m
        out[i] = np.trace(p)
    return out


def traces_close(a, b, tol: float = TRACE_TOL) -> bool:
    """Entrywise ``|a - b| <= tol * max(1, |a|, |b|)``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        return False
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return bool(np.all(np.abs(a - b) <= tol * scale))


def cospectral(m1, m2, tol: float = TRACE_TOL) -> bool:
    """Equal power traces ``tr(M^k)``, ``k = 1..n``, within a relative ``tol``."""
    m1 = np.asarray(m1, dtype=np.float64)
    m2 = np.asarray(m2, dtype=np.float64)
    if m1.ndim != 2 or m1.shape[0] != m1.shape[1] or m1.shape != m2.shape:
        raise InputError(f"cospectral needs two square matrices of one size, got {m1.shape} and {m2.shape}")
    n = m1.shape[0]
    return traces_close(_power_traces(m1, n), _power_traces(m2, n), tol)


def word_trace_signature(t: Tree, words, max_power: int | None = None) -> np.ndarray:
    """Traces of ``w(A, D)^m`` for each word and ``m = 1..max_power`` (word-major)."""
    max_power = t.n if max_power is None else max_power
    if max_power < 1:
        raise InputError(f"max_power must be >= 1, got {max_power}")
    a, _ = tree_adjacency_degree(t)
    g = TopologyGraph.from_adjacency(a)
    return np.concatenate([_power_traces(evaluate_word(w, g), max_power) for w in words])


def brute_force_isomorphic(t1: Tree, t2: Tree, limit: int = ISO_LIMIT) -> bool:
    """Search vertex bijections for one mapping edges onto edges."""
    if max(t1.n, t2.n) > limit:
        raise InputError(f"brute-force isomorphism is capped at n={limit}")
    if t1.n != t2.n:
        return False
    deg1, deg2 = t1.degrees(), t2.degrees()
    if sorted(deg1) != sorted(deg2):
        return False
    a1, _ = tree_adjacency_degree(t1)
    a2, _ = tree_adjacency_degree(t2)
    n = t1.n
    image = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or deg2[w] != deg1[v]:
                continue
            if any(a1[v, u] != a2[w, image[u]] for u in range(v)):
                continue
            image[v], used[w] = w, True
            if extend(v + 1):
                return True
            used[w] = False
        image[v] = -1
        return False

    return extend(0)


def _rooted_code(nb, root: int) -> str:
    def code(v, parent):
        return "(" + "".join(sorted(code(u, v) for u in nb[v] if u != parent)) + ")"

    return code(root, -1)


def canonical_form(t: Tree) -> str:
    """Isomorphism-complete string invariant (AHU code rooted at the center)."""
    nb = t.neighbors()
    return min(_rooted_code(nb, c) for c in tree_center(t))


def canonical_tree(t: Tree) -> Tree:
    """Relabel ``t`` deterministically so isomorphic trees get identical edge lists."""
    nb = t.neighbors()
    root = min(tree_center(t), key=lambda c: _rooted_code(nb, c))
    codes: dict[tuple[int, int], str] = {}

    def code(v, parent):
        key = (v, parent)
        if key not in codes:
            codes[key] = "(" + "".join(sorted(code(u, v) for u in nb[v] if u != parent)) + ")"
        return codes[key]

    code(root, -1)
    label = {root: 0}
    q = deque([(root, -1)])
    while q:
        v, parent = q.popleft()
        for u in sorted((u for u in nb[v] if u != parent), key=lambda u: code(u, v)):
            label[u] = len(label)
            q.append((u, v))
    return t.relabel([label[v] for v in range(t.n)])


def prufer_decode(seq, n: int) -> Tree:
    if n == 1:
        return Tree(1, ())
    if len(seq) != n - 2:
        raise InputError(f"a Prüfer sequence for n={n} has length {n - 2}")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (w for w in range(n) if degree[w] == 1)
    edges.append((u, v))
    return Tree(n, tuple(edges))


def labeled_trees(n: int):
    """All ``n^(n-2)`` labeled trees via Prüfer sequences."""
    if n <= 2:
        yield Tree(n, ((0, 1),) if n == 2 else ())
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def unlabeled_trees(n: int, *, method: str = "grow") -> list[Tree]:
    """One canonically labeled representative per isomorphism class, sorted by canonical form.

    ``grow`` attaches a leaf to every vertex of every tree on ``n - 1``
    vertices; ``prufer`` deduplicates all labeled trees and is only practical
    for ``n <= 8``.
    """
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if method == "prufer":
        source = labeled_trees(n)
    elif method == "grow":
        if n == 1:
            source = [Tree(1, ())]
        else:
            source = (
                Tree(n, t.edges + ((v, n - 1),)) for t in unlabeled_trees(n - 1) for v in range(n - 1)
            )
    else:
        raise InputError(f"unknown enumeration method {method!r}")
    reps: dict[str, Tree] = {}
    for t in source:
        key = canonical_form(t)
        if key not in reps:
            reps[key] = canonical_tree(t)
    return [reps[k] for k in sorted(reps)]


def resolve_words(words) -> tuple[str, list[str]]:
    """Accept a preset name or an explicit list of words; return (name, words)."""
    if isinstance(words, str):
        if words not in WORD_PRESETS:
            raise InputError(f"unknown word preset {words!r}; choose from {sorted(WORD_PRESETS)}")
        return words, list(WORD_PRESETS[words])
    words = [str(w) for w in words]
    for w in words:
        if set(w) - {"A", "D"} or not w:
            raise InputError(f"words must be non-empty strings over 'A'/'D', got {w!r}")
    return "custom", words


def signature_collision_survey(
    n: int, words="tm4", max_power: int | None = None, tol: float = TRACE_TOL
) -> dict:
    """Count non-isomorphic tree pairs on ``n`` vertices whose word-trace signatures agree.

    This measures how far a finite word set is from separating all trees; the
    count is reported, never assumed to be zero.
    """
    if not 1 <= n <= SURVEY_LIMIT:
        raise InputError(f"survey needs 1 <= n <= {SURVEY_LIMIT}, got {n}")
    name, word_list = resolve_words(words)
    power = n if max_power is None else max_power
    trees = unlabeled_trees(n)
    sigs = [word_trace_signature(t, word_list, power) for t in trees]
    collisions = [
        [[list(e) for e in trees[i].edges], [list(e) for e in trees[j].edges]]
        for i, j in itertools.combinations(range(len(trees)), 2)
        if traces_close(sigs[i], sigs[j], tol)
    ]
    return {
        "format_version": 1,
        "n": n,
        "word_preset": name,
        "word_set": word_list,
        "max_power": power,
        "tolerance": tol,
        "tree_count": len(trees),
        "pair_count": len(trees) * (len(trees) - 1) // 2,
        "collision_count": len(collisions),
        "collisions": collisions,
    }
