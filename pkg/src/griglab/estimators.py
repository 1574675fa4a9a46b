"""Monotone-parameter estimators with certified bounds where exactness allows.

Every public estimator returns an EstimateReport carrying the point
estimate, any one-sided certified bound (exact arithmetic up to final
float rounding), confidence data for the Monte Carlo ones, and the full
series/curve so callers can render CSV without recomputation.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cayley import OUTSIDE, CayleyBall, bfs_ball, cheeger_upper, cogrowth, growth, saw_count
from .marked import FreeGroup, MarkedGroup

SCHEMA = "griglab/estimate/1"


@dataclass
class EstimateReport:
    parameter: str
    group: str
    estimate: float | None
    certified: dict | None = None  # {"value": float, "direction": "lower"|"upper"}
    ci: tuple | None = None  # (lo, hi), 95%
    parameters: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime: float = 0.0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "parameter": self.parameter,
            "group": self.group,
            "estimate": self.estimate,
            "certified": self.certified,
            "ci": list(self.ci) if self.ci is not None else None,
            "parameters": self.parameters,
            "series": self.series,
            "notes": self.notes,
            "runtime_seconds": round(self.runtime, 6),
        }


# ---------------------------------------------------------------- radial chains

def free_distance_counts(rank: int, n_max: int) -> list:
    """M_t(d): exact number of length-t generator words of a free group
    whose product lies at distance d.  Row t sums to (2*rank)^t."""
    k = 2 * rank
    rows = [[1]]
    cur = [1]
    for _ in range(n_max):
        new = [0] * (len(cur) + 1)
        for d, m in enumerate(cur):
            if m == 0:
                continue
            if d == 0:
                new[1] += m * k
            else:
                new[d + 1] += m * (k - 1)
                new[d - 1] += m
        cur = new
        rows.append(cur)
    return rows


def free_sphere_size(rank: int, d: int) -> int:
    k = 2 * rank
    return 1 if d == 0 else k * (k - 1) ** (d - 1)


def tree_return_counts(rank: int, n_max: int) -> list:
    """Exact closed-walk counts on the 2*rank-regular tree (independent
    of the ball construction; cross-check oracle for the cogrowth DP)."""
    rows = free_distance_counts(rank, n_max)
    return [row[0] for row in rows]


# ------------------------------------------------------------- walk distribution

@dataclass
class WalkDistribution:
    """Exact distribution of the simple random walk at time n.

    counts[v] is the number of length-n symbol words evaluating to ball
    vertex v; the total is k^n, so probabilities are exact Fractions.
    """

    group: MarkedGroup
    n: int
    ball: CayleyBall
    counts: list

    @property
    def total(self) -> int:
        return self.group.k ** self.n

    def prob(self, v: int) -> Fraction:
        return Fraction(self.counts[v], self.total)

    def mean_distance(self) -> Fraction:
        num = sum(c * int(self.ball.dist[v]) for v, c in enumerate(self.counts))
        return Fraction(num, self.total)

    def entropy(self) -> float:
        """H = n log k - (1/k^n) sum c log c, compensated summation."""
        total = self.total
        acc = math.fsum(c * math.log(c) for c in self.counts if c > 1)
        return self.n * math.log(self.group.k) - acc / float(total)


def walk_distribution(
    g: MarkedGroup, n: int, ball: CayleyBall | None = None
) -> WalkDistribution:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n * math.log(g.k) > 700:
        raise ValueError("k^n exceeds float range; use a radial method")
    if ball is None or ball.radius < n:
        ball = bfs_ball(g, n)
    k = g.k
    V = ball.size
    adj = ball.adjacency
    exact64 = k**n < 2**62
    if exact64:
        cur = np.zeros(V, dtype=np.int64)
        cur[0] = 1
        for _ in range(n):
            new = np.zeros(V, dtype=np.int64)
            for s in range(k):
                idx = adj[g.inverse_symbol_index(s)]
                contrib = cur[np.maximum(idx, 0)]
                new += np.where(idx >= 0, contrib, 0)
            cur = new
        counts = [int(x) for x in cur]
    else:
        rev = [adj[g.inverse_symbol_index(s)].tolist() for s in range(k)]
        cur = [0] * V
        cur[0] = 1
        for _ in range(n):
            new = [0] * V
            for s in range(k):
                idx = rev[s]
                for v in range(V):
                    u = idx[v]
                    if u >= 0 and cur[u]:
                        new[v] += cur[u]
            cur = new
        counts = cur
    return WalkDistribution(g, n, ball, counts)


# --------------------------------------------------------------- spectral radius

def spectral_radius(
    g: MarkedGroup, n_max: int, ball: CayleyBall | None = None
) -> EstimateReport:
    """Random walk spectral radius from exact return counts.

    c(n)^(1/n)/k is a lower bound for every even n (running max is the
    certified value); the point estimate removes the polynomial factor
    n^(-3/2) in c(2n) ~ A n^(-3/2) (k rho)^(2n) using the last two even
    terms.
    """
    t0 = time.perf_counter()
    if n_max < 4 or n_max % 2 != 0:
        raise ValueError("n_max must be an even integer >= 4")
    series = cogrowth(g, n_max, ball=ball)
    k = g.k
    evens = list(range(2, n_max + 1, 2))
    roots = [series.values[n] ** (1.0 / n) / k for n in evens]
    certified_seq = []
    best = 0.0
    for r in roots:
        best = max(best, r)
        certified_seq.append(best)
    c_hi, c_lo = series.values[n_max], series.values[n_max - 2]
    if c_lo > 0 and c_hi > 0:
        m = n_max // 2
        delta = math.log(c_hi) - math.log(c_lo)
        log_krho = (delta + 1.5 * math.log(m / (m - 1))) / 2.0
        estimate = math.exp(log_krho) / k
    else:
        estimate = None
    rep = EstimateReport(
        parameter="rho",
        group=g.label,
        estimate=estimate,
        certified={"value": best, "direction": "lower"},
        parameters={"n_max": n_max, "k": k},
        series={
            "n": evens,
            "return_count": [series.values[n] for n in evens],
            "certified_lower": certified_seq,
        },
        notes=["certified lower bounds use exact integer return counts"],
    )
    rep.runtime = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------- entropy

def entropy(
    g: MarkedGroup,
    n_max: int,
    method: str = "auto",
    ball: CayleyBall | None = None,
) -> EstimateReport:
    """Asymptotic entropy h = lim H(walk at n)/n.

    Exact H(n) for each n; by subadditivity every H(n)/n is an upper
    bound for h, so the certified value is the running minimum.
    method: "ball" (any group, needs the full radius-n ball) or
    "radial" (free groups only, distance-counts recursion, no ball).
    """
    t0 = time.perf_counter()
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if method == "auto":
        method = "radial" if isinstance(g, FreeGroup) else "ball"
    k = g.k
    hs = []
    if method == "radial":
        if not isinstance(g, FreeGroup):
            raise ValueError("radial entropy needs a free group")
        rows = free_distance_counts(g.rank, n_max)
        logk = math.log(k)
        for t in range(1, n_max + 1):
            total = k**t
            terms = []
            for d, m in enumerate(rows[t]):
                if m == 0:
                    continue
                p = float(Fraction(m, total))
                terms.append(p * (math.log(m) - math.log(free_sphere_size(g.rank, d))))
            hs.append(t * logk - math.fsum(terms))
    elif method == "ball":
        if ball is None or ball.radius < n_max:
            ball = bfs_ball(g, n_max)
        # ball mode is for small n_max; recomputing the DP per prefix
        # keeps walk_distribution simple and the ball build dominates
        for t in range(1, n_max + 1):
            hs.append(walk_distribution(g, t, ball=ball).entropy())
    else:
        raise ValueError(f"unknown entropy method: {method}")
    rates = [h / t for t, h in zip(range(1, n_max + 1), hs)]
    best = math.inf
    certified_seq = []
    for r in rates:
        best = min(best, r)
        certified_seq.append(best)
    rep = EstimateReport(
        parameter="entropy",
        group=g.label,
        estimate=rates[-1],
        certified={"value": best, "direction": "upper"},
        parameters={"n_max": n_max, "method": method, "k": k},
        series={
            "n": list(range(1, n_max + 1)),
            "H": hs,
            "rate": rates,
            "certified_upper": certified_seq,
        },
        notes=["H(n)/n upper-bounds the limit by subadditivity"],
    )
    rep.runtime = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------------------ speed

def speed(
    g: MarkedGroup,
    n: int,
    samples: int = 2000,
    seed: int = 0,
    method: str = "auto",
) -> EstimateReport:
    """Mean displacement rate E|walk at n| / n.

    method "radial" (free groups, exact), "ball" (exact via the walk
    distribution; needs the radius-n ball), "mc" (sampled; per-sample
    counter RNG streams so results are reproducible and thread-count
    independent).
    """
    t0 = time.perf_counter()
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "auto":
        method = "radial" if isinstance(g, FreeGroup) else "mc"
    k = g.k
    ci = None
    notes = []
    if method == "radial":
        if not isinstance(g, FreeGroup):
            raise ValueError("radial speed needs a free group")
        rows = free_distance_counts(g.rank, n)
        means = []
        for t in range(1, n + 1):
            num = sum(d * m for d, m in enumerate(rows[t]))
            means.append(float(Fraction(num, k**t)))
        rates = [m / t for t, m in zip(range(1, n + 1), means)]
        estimate = rates[-1]
        series = {"n": list(range(1, n + 1)), "mean_distance": means, "rate": rates}
        notes.append("exact finite-time means from the distance recursion")
    elif method == "ball":
        dist = walk_distribution(g, n)
        mean = dist.mean_distance()
        estimate = float(mean) / n
        series = {"n": [n], "mean_distance": [float(mean)], "rate": [estimate]}
        notes.append("exact finite-time mean from the full walk distribution")
    elif method == "mc":
        gens = g.generators()
        ball = None
        if g.distance(g.identity()) is None:
            ball = bfs_ball(g, n)
        acc = []
        for i in range(samples):
            rng = np.random.Generator(np.random.Philox(key=[seed, i]))
            x = g.identity()
            for s in rng.integers(0, k, size=n):
                x = g.mul(x, gens[int(s)])
            d = g.distance(x)
            if d is None:
                d = int(ball.dist[ball.index[x]])
            acc.append(d)
        mean = sum(acc) / samples
        sd = math.sqrt(sum((a - mean) ** 2 for a in acc) / max(samples - 1, 1))
        half = 1.96 * sd / math.sqrt(samples)
        estimate = mean / n
        ci = (estimate - half / n, estimate + half / n)
        series = {"n": [n], "mean_distance": [mean], "rate": [estimate]}
        notes.append(f"monte carlo over {samples} walks")
    else:
        raise ValueError(f"unknown speed method: {method}")
    rep = EstimateReport(
        parameter="speed",
        group=g.label,
        estimate=estimate,
        ci=ci,
        parameters={"n": n, "method": method, "samples": samples, "seed": seed},
        series=series,
        notes=notes,
    )
    rep.runtime = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------------- percolation

class _DSU:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def _undirected_edges(g: MarkedGroup, ball: CayleyBall) -> list:
    """Each geometric edge once; parallel generator edges stay distinct."""
    edges = []
    for s in range(g.k):
        si = g.inverse_symbol_index(s)
        if si < s:
            continue  # partner symbol already emitted these
        col = ball.adjacency[s]
        for u in range(ball.size):
            v = int(col[u])
            if v == OUTSIDE or v == u:
                continue
            if si == s and v < u:
                continue  # involution: each edge seen from both ends
            edges.append((u, v))
    return edges


def _site_neighbors(g: MarkedGroup, ball: CayleyBall) -> list:
    out = []
    for u in range(ball.size):
        nbrs = set()
        for s in range(g.k):
            v = int(ball.adjacency[s][u])
            if v != OUTSIDE and v != u:
                nbrs.add(v)
        out.append(sorted(nbrs))
    return out


def _bond_trial(args):
    edges, boundary, V, seed, trial = args
    rng = np.random.Generator(np.random.Philox(key=[seed, trial]))
    u = rng.random(len(edges))
    order = np.argsort(u, kind="stable")
    dsu = _DSU(V + 1)
    bnd = V
    for b in boundary:
        dsu.union(b, bnd)
    if dsu.find(0) == dsu.find(bnd):  # root on the sphere: R too small
        return 0.0
    for e in order:
        a, b = edges[e]
        dsu.union(a, b)
        if dsu.find(0) == dsu.find(bnd):
            return float(u[e])
    return 1.0  # unreachable for a connected ball; defensive


def _site_trial(args):
    neighbors, boundary_mask, V, seed, trial = args
    rng = np.random.Generator(np.random.Philox(key=[seed, trial]))
    u = rng.random(V)
    order = np.argsort(u, kind="stable")
    dsu = _DSU(V + 1)
    bnd = V
    open_ = bytearray(V)
    for v in order:
        v = int(v)
        open_[v] = 1
        for w in neighbors[v]:
            if open_[w]:
                dsu.union(v, w)
        if boundary_mask[v]:
            dsu.union(v, bnd)
        if open_[0] and dsu.find(0) == dsu.find(bnd):
            return float(u[v])
    return 1.0


def percolation_pstars(
    g: MarkedGroup,
    mode: str,
    radius: int,
    trials: int,
    seed: int = 0,
    threads: int | None = None,
    ball: CayleyBall | None = None,
) -> np.ndarray:
    """Per-trial bottleneck values: trial t connects root to the radius-R
    sphere at occupation p exactly when pstars[t] < p.  Trial t only
    depends on (seed, t), never on trial count or thread count."""
    if mode not in ("site", "bond"):
        raise ValueError("mode must be 'site' or 'bond'")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if ball is None or ball.radius < radius:
        ball = bfs_ball(g, radius)
    boundary = list(ball.sphere_indices(radius))
    if not boundary:
        return np.array([])  # ball closed before R: no sphere to reach
    V = ball.size
    if mode == "bond":
        edges = _undirected_edges(g, ball)
        jobs = [(edges, boundary, V, seed, t) for t in range(trials)]
        worker = _bond_trial
    else:
        neighbors = _site_neighbors(g, ball)
        mask = bytearray(V)
        for b in boundary:
            mask[b] = 1
        jobs = [(neighbors, mask, V, seed, t) for t in range(trials)]
        worker = _site_trial
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(worker, jobs, chunksize=max(1, trials // threads)))
    else:
        out = [worker(j) for j in jobs]
    return np.array(out)


def _wilson_ci(hits: int, n: int, z: float = 1.96) -> tuple:
    if n == 0:
        return (0.0, 1.0)
    phat = hits / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def percolation(
    g: MarkedGroup,
    mode: str,
    radius: int = 32,
    trials: int = 1000,
    seed: int = 0,
    p_grid: list | None = None,
    threads: int | None = None,
    bootstrap: int = 200,
    ball: CayleyBall | None = None,
) -> EstimateReport:
    """Critical density estimate on the radius-R ball with an absorbing
    sphere: the crossing event is 'root cluster touches the sphere'.

    theta_hat(p) = fraction of trials with bottleneck below p is exactly
    nondecreasing in p by construction.  p_c estimate is the median
    bottleneck (the 0.5 crossing); CI by bootstrap over trials.
    """
    t0 = time.perf_counter()
    pstars = percolation_pstars(g, mode, radius, trials, seed, threads, ball)
    if p_grid is None:
        p_grid = [round(0.02 * i, 2) for i in range(51)]
    param = {"mode": mode, "radius": radius, "trials": trials, "seed": seed}
    if pstars.size == 0:
        rep = EstimateReport(
            parameter=f"pc-{mode}",
            group=g.label,
            estimate=None,
            parameters=param,
            series={"curve": []},
            notes=["ball closed before the requested radius: finite group, no threshold"],
        )
        rep.runtime = time.perf_counter() - t0
        return rep
    sorted_p = np.sort(pstars)
    curve = []
    for p in p_grid:
        hits = int(np.searchsorted(sorted_p, p, side="left"))
        lo, hi = _wilson_ci(hits, trials)
        curve.append((float(p), hits / trials, lo, hi))
    est = float(np.median(pstars))
    brng = np.random.Generator(np.random.Philox(key=[seed, 1 << 32]))
    idx = brng.integers(0, trials, size=(bootstrap, trials))
    medians = np.median(pstars[idx], axis=1)
    ci = (float(np.quantile(medians, 0.025)), float(np.quantile(medians, 0.975)))
    rep = EstimateReport(
        parameter=f"pc-{mode}",
        group=g.label,
        estimate=est,
        ci=ci,
        parameters=param,
        series={
            "curve": curve,
            "p_star_quartiles": [
                float(np.quantile(pstars, q)) for q in (0.25, 0.5, 0.75)
            ],
        },
        notes=[
            "finite-radius proxy: crossing to the sphere of the stated radius",
            f"bootstrap over {bootstrap} resamples",
        ],
    )
    rep.runtime = time.perf_counter() - t0
    return rep


# --------------------------------------------------------- connective constant

def connective_constant(g: MarkedGroup, n_max: int) -> EstimateReport:
    """Growth rate of self-avoiding walks.  v(n)^(1/n) upper-bounds the
    limit (submultiplicativity), running minimum is certified; the
    point estimate is the last ratio v(n)/v(n-1)."""
    t0 = time.perf_counter()
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    series = saw_count(g, n_max)
    v = series.values
    ns = list(range(1, n_max + 1))
    bounds = [v[n] ** (1.0 / n) if v[n] > 0 else 0.0 for n in ns]
    best = math.inf
    certified_seq = []
    for b in bounds:
        if b > 0:
            best = min(best, b)
        certified_seq.append(best if best < math.inf else 0.0)
    notes = []
    if v[n_max] > 0 and v[n_max - 1] > 0:
        estimate = v[n_max] / v[n_max - 1]
        certified = {"value": certified_seq[-1], "direction": "upper"}
    else:
        estimate = None
        certified = None
        notes.append("self-avoiding walks die out: finite geometry")
    rep = EstimateReport(
        parameter="mu",
        group=g.label,
        estimate=estimate,
        certified=certified,
        parameters={"n_max": n_max},
        series={"n": ns, "saw": [v[n] for n in ns], "certified_upper": certified_seq},
        notes=notes,
    )
    rep.runtime = time.perf_counter() - t0
    return rep


# --------------------------------------------------- wrappers for cayley series

def cheeger_report(g: MarkedGroup, candidates: str = "balls", n_max: int = 6) -> EstimateReport:
    t0 = time.perf_counter()
    vals = cheeger_upper(g, candidates=candidates, n_max=n_max)
    rep = EstimateReport(
        parameter="cheeger",
        group=g.label,
        estimate=float(vals[-1]),
        certified={"value": float(vals[-1]), "direction": "upper"},
        parameters={"candidates": candidates, "n_max": n_max},
        series={
            "step": list(range(1, len(vals) + 1)),
            "bound": [str(x) for x in vals],
            "bound_float": [float(x) for x in vals],
        },
        notes=["exact rational edge-boundary ratios; running minimum"],
    )
    rep.runtime = time.perf_counter() - t0
    return rep


def growth_report(g: MarkedGroup, n_max: int) -> EstimateReport:
    t0 = time.perf_counter()
    series = growth(g, n_max)
    v = series.values
    rep = EstimateReport(
        parameter="growth",
        group=g.label,
        estimate=math.log(v[-1]) / n_max if v[-1] > 1 else 0.0,
        parameters={"n_max": n_max},
        series={
            "n": list(range(n_max + 1)),
            "ball_size": v,
            "log_rate": [float("nan")] + [math.log(v[n]) / n for n in range(1, n_max + 1)],
        },
        notes=["exact ball sizes; estimate is log b(n)/n at the last n"],
    )
    rep.runtime = time.perf_counter() - t0
    return rep
