"""Ball enumeration and exact combinatorial counters on marked groups.

Everything here is exact: balls are breadth-first enumerations with full
adjacency among ball vertices (and an explicit "outside" marker), and the
counters (cogrowth, growth, self-avoiding walks, Cheeger ratios) return
integers or rationals, never floats.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List

import numpy as np

from .marked import MarkedGroup

OUTSIDE = -1

DEFAULT_VERTEX_BUDGET = 5_000_000


class BallBudgetError(RuntimeError):
    """Raised when a ball exceeds the vertex budget.

    ``achieved_radius`` is the last radius whose layer completed.
    """

    def __init__(self, achieved_radius: int, budget: int):
        self.achieved_radius = achieved_radius
        self.budget = budget
        super().__init__(
            f"vertex budget {budget} exceeded; completed radius {achieved_radius}"
        )


@dataclass
class CayleyBall:
    radius: int
    vertices: list
    index: dict
    dist: np.ndarray
    adjacency: list  # per generator: np.ndarray of target index or OUTSIDE
    layer_offsets: list  # vertices[layer_offsets[r]:layer_offsets[r+1]] is sphere r
    group: MarkedGroup

    @property
    def size(self) -> int:
        return len(self.vertices)

    def layer_sizes(self) -> list:
        return [
            self.layer_offsets[r + 1] - self.layer_offsets[r]
            for r in range(self.radius + 1)
        ]

    def sphere_indices(self, r: int) -> range:
        return range(self.layer_offsets[r], self.layer_offsets[r + 1])

    def ball_size(self, r: int) -> int:
        return self.layer_offsets[r + 1]

    def edge_list(self) -> list:
        """(source index, symbol, target index or OUTSIDE) triples."""
        out = []
        for s, sym in enumerate(self.group.symbols):
            col = self.adjacency[s]
            for u in range(self.size):
                out.append((u, sym, int(col[u])))
        return out

    def to_dot(self) -> str:
        lines = ["digraph ball {"]
        for u in range(self.size):
            lbl = self.group.describe_element(self.vertices[u]).replace('"', "'")
            lines.append(f'  v{u} [label="{lbl}"];')
        lines.append("  outside [label=\"...\", shape=plaintext];")
        for u, sym, v in self.edge_list():
            tgt = f"v{v}" if v != OUTSIDE else "outside"
            lines.append(f'  v{u} -> {tgt} [label="{sym}"];')
        lines.append("}")
        return "\n".join(lines)


def bfs_ball(
    g: MarkedGroup, n: int, max_vertices: int = DEFAULT_VERTEX_BUDGET
) -> CayleyBall:
    """Complete radius-n ball with adjacency for every ball vertex."""
    if n < 0:
        raise ValueError("radius must be >= 0")
    e = g.identity()
    vertices = [e]
    index = {e: 0}
    dist = [0]
    offsets = [0, 1]
    gens = g.generators()
    k = g.k
    adjacency = [array("q") for _ in range(k)]  # compact; ball can hit 1e6 vertices
    frontier = [0]
    for layer in range(1, n + 1):
        nxt = []
        for u in frontier:
            x = vertices[u]
            for s in range(k):
                y = g.mul(x, gens[s])
                j = index.get(y)
                if j is None:
                    if len(vertices) >= max_vertices:
                        raise BallBudgetError(layer - 1, max_vertices)
                    j = len(vertices)
                    index[y] = j
                    vertices.append(y)
                    dist.append(layer)
                    nxt.append(j)
                adjacency[s].append(j)  # row u grows in expansion order
        frontier = nxt
        offsets.append(len(vertices))
    # adjacency rows were appended in expansion order, which is vertex
    # order; finish the rows for the outermost layer
    for u in frontier:
        x = vertices[u]
        for s in range(k):
            y = g.mul(x, gens[s])
            adjacency[s].append(index.get(y, OUTSIDE))
    cols = [np.frombuffer(adjacency[s], dtype=np.int64).copy() for s in range(k)]
    return CayleyBall(
        radius=n,
        vertices=vertices,
        index=index,
        dist=np.array(dist, dtype=np.int64),
        adjacency=cols,
        layer_offsets=offsets,
        group=g,
    )


@dataclass
class CountSeries:
    kind: str  # cogrowth | growth | saw
    values: list  # exact ints, index = n

    def __post_init__(self):
        assert self.kind in ("cogrowth", "growth", "saw")

    def normalized(self, k: int) -> list:
        """Float companion column: n-th root scaled by the degree.

        growth: log b(n)/(n k); cogrowth: c(n)^(1/n)/k; saw: v(n)^(1/n).
        """
        out = [float("nan")]
        for n, v in enumerate(self.values):
            if n == 0:
                continue
            if v <= 0:
                out.append(0.0)
            elif self.kind == "growth":
                out.append(math.log(v) / (n * k))
            elif self.kind == "cogrowth":
                out.append(math.exp(math.log(v) / n) / k)
            else:
                out.append(math.exp(math.log(v) / n))
        return out


def cogrowth(
    g: MarkedGroup,
    n_max: int,
    ball: CayleyBall | None = None,
    force_exact: bool = False,
) -> CountSeries:
    """Exact counts of length-n words over the symbols equal to identity.

    Backtracking allowed; a returning walk of length n stays within
    radius n/2, so the dynamic program runs on bfs_ball(g, n_max/2).
    force_exact skips the int64 fast path (counts can exceed 2^62).
    """
    if n_max < 0 or n_max % 2 != 0:
        raise ValueError("n_max must be an even nonnegative integer")
    if ball is None or ball.radius < n_max // 2:
        ball = bfs_ball(g, n_max // 2)
    k = g.k
    # incoming adjacency: predecessors of v through s are v * s^{-1}
    rev = [ball.adjacency[g.inverse_symbol_index(s)] for s in range(k)]
    V = ball.size
    values = [1]
    exact_limit = not force_exact and k**n_max < 2**62
    if exact_limit:
        old = np.zeros(V, dtype=np.int64)
        old[0] = 1
        for _ in range(n_max):
            new = np.zeros(V, dtype=np.int64)
            for s in range(k):
                idx = rev[s]
                contrib = old[np.maximum(idx, 0)]
                contrib = np.where(idx >= 0, contrib, 0)
                new += contrib
            old = new
            values.append(int(old[0]))
    else:
        rev_lists = [c.tolist() for c in rev]
        old = [0] * V
        old[0] = 1
        for _ in range(n_max):
            new = [0] * V
            for s in range(k):
                idx = rev_lists[s]
                for v in range(V):
                    u = idx[v]
                    if u >= 0 and old[u]:
                        new[v] += old[u]
            old = new
            values.append(old[0])
    return CountSeries("cogrowth", values)


def growth(g: MarkedGroup, n_max: int, ball: CayleyBall | None = None) -> CountSeries:
    """Exact ball sizes b(0..n_max)."""
    if ball is None or ball.radius < n_max:
        ball = bfs_ball(g, n_max)
    return CountSeries("growth", [ball.ball_size(r) for r in range(n_max + 1)])


def saw_count(
    g: MarkedGroup, n_max: int, ball: CayleyBall | None = None
) -> CountSeries:
    """Exact self-avoiding walk counts v(0..n_max) from the identity.

    Walks are counted as vertex paths: parallel generator edges to the
    same neighbor contribute one walk (so v(1) is the number of distinct
    nontrivial generator images).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if ball is None or ball.radius < n_max:
        ball = bfs_ball(g, n_max)
    V = ball.size
    neigh: List[tuple] = []
    for u in range(V):
        seen = set()
        for s in range(g.k):
            v = int(ball.adjacency[s][u])
            if v != OUTSIDE and v != u:
                seen.add(v)
        neigh.append(tuple(sorted(seen)))
    counts = [0] * (n_max + 1)
    counts[0] = 1
    visited = bytearray(V)
    visited[0] = 1
    # iterative DFS: stack of (vertex, next neighbor position)
    stack = [(0, 0)]
    while stack:
        u, pos = stack[-1]
        if pos < len(neigh[u]) and len(stack) <= n_max:
            stack[-1] = (u, pos + 1)
            v = neigh[u][pos]
            if not visited[v]:
                visited[v] = 1
                counts[len(stack)] += 1
                stack.append((v, 0))
        else:
            stack.pop()
            visited[u] = 0
    return CountSeries("saw", counts)


# --------------------------------------------------------------- cheeger


def boundary_ratio(g: MarkedGroup, X: Iterable) -> Fraction:
    """|edge boundary| / (k |X|) for a finite set X of elements, exact."""
    X = set(X)
    if not X:
        raise ValueError("need a nonempty set")
    gens = g.generators()
    out = 0
    for x in X:
        for s in range(g.k):
            if g.mul(x, gens[s]) not in X:
                out += 1
    return Fraction(out, g.k * len(X))


def _ball_candidates(g, n_max):
    ball = bfs_ball(g, n_max)
    for r in range(n_max + 1):
        yield [ball.vertices[i] for i in range(ball.ball_size(r))]


def _box_candidates(g, n_max):
    # axis-aligned boxes for grid groups; elements are integer tuples
    from .marked import GridGroup

    if not isinstance(g, GridGroup):
        raise ValueError("boxes strategy needs a grid group")
    from itertools import product as iproduct

    for s in range(1, n_max + 1):
        yield [tuple(p) for p in iproduct(range(s), repeat=g.dim)]


def _greedy_candidates(g, n_max):
    # grow from the identity, always absorbing the outside neighbor that
    # minimizes the resulting ratio; bounded by n_max added vertices
    ball = bfs_ball(g, max(2, min(n_max, 12)))
    gens = g.generators()
    X = {g.identity()}
    yield list(X)
    for _ in range(n_max):
        boundary = set()
        for x in X:
            for s in range(g.k):
                y = g.mul(x, gens[s])
                if y not in X and y in ball.index:
                    boundary.add(y)
        if not boundary:
            return
        best = None
        for y in sorted(boundary, key=lambda e: ball.index[e]):
            r = boundary_ratio(g, X | {y})
            if best is None or r < best[0]:
                best = (r, y)
        X.add(best[1])
        yield list(X)


_STRATEGIES = {
    "balls": _ball_candidates,
    "boxes": _box_candidates,
    "greedy": _greedy_candidates,
}


def cheeger_upper(
    g: MarkedGroup, candidates: str = "balls", n_max: int = 6
) -> list:
    """Decreasing certified upper bounds on the isoperimetric constant.

    Evaluates the exact boundary ratio over a family of candidate sets
    and returns the running minimum, so every prefix is a valid certified
    upper-bound sequence.
    """
    if candidates not in _STRATEGIES:
        raise ValueError(f"unknown strategy {candidates!r}")
    out = []
    best = None
    for X in _STRATEGIES[candidates](g, n_max):
        r = boundary_ratio(g, X)
        best = r if best is None or r < best else best
        out.append(best)
    return out


def series_csv(series: CountSeries, k: int) -> str:
    rows = ["n,value,normalized_value"]
    norm = series.normalized(k)
    for n, v in enumerate(series.values):
        nv = "" if n == 0 else f"{norm[n]:.10g}"
        rows.append(f"{n},{v},{nv}")
    return "\n".join(rows) + "\n"
