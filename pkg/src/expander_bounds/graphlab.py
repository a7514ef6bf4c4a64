"""Pairing-model laboratory: sampling, cut bookkeeping, local search, exact oracle.

Graphs are delta-regular multigraphs built from a perfect matching on
delta * n labeled points; point q belongs to vertex q // delta. Loops add 2
to a vertex's degree and never cross a cut; parallel edges cross with their
multiplicity. All sampling is seeded and reproducible: randomized routines
take an explicit integer seed and derive per-trial streams with a fixed
arithmetic mix, never Python's salted hash().
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import log_binomial, log_odd_double_factorial

__all__ = [
    "BEST_IMPROVEMENT",
    "CutState",
    "ExperimentSummary",
    "FIRST_IMPROVEMENT",
    "OutDegreeVector",
    "RegularMultigraph",
    "TrialRecord",
    "brute_force_expansion",
    "cut_state",
    "derive_seed",
    "expansion_experiment",
    "local_descent",
    "log_config_prob",
    "sample_out_degree_configurations",
    "sample_pairing",
    "summary_lines",
    "summary_to_csv",
    "swap_delta",
]

BEST_IMPROVEMENT = "best-improvement"
FIRST_IMPROVEMENT = "first-improvement"

_SEED_MULT = 0x9E3779B97F4A7C15
_SEED_STEP = 0xBF58476D1CE4E5B9
_SEED_MOD = 1 << 64


def derive_seed(seed: int, index: int) -> int:
    """Deterministic per-trial seed: (seed * K1 + (index + 1) * K2) mod 2^64."""
    return (seed * _SEED_MULT + (index + 1) * _SEED_STEP) % _SEED_MOD


@dataclass(frozen=True)
class OutDegreeVector:
    """Histogram over out-degrees 0..delta: counts[i] vertices with i crossing edges."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) < 1:
            raise ValueError("histogram must have at least one entry")
        if any(not isinstance(c, int) or c < 0 for c in self.counts):
            raise ValueError("histogram entries must be non-negative integers")
        object.__setattr__(self, "counts", tuple(self.counts))

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    @property
    def delta(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        """Number of vertices counted."""
        return sum(self.counts)

    @property
    def weighted_total(self) -> int:
        """Total crossing edge endpoints, i.e. the cut size for this side."""
        return sum(i * c for i, c in enumerate(self.counts))

    @property
    def max_out_degree(self) -> int:
        """Largest out-degree present; 0 for an empty or all-internal side."""
        for i in range(len(self.counts) - 1, -1, -1):
            if self.counts[i] > 0:
                return i
        return 0


@dataclass(frozen=True)
class RegularMultigraph:
    """delta-regular multigraph on n vertices realized by a point pairing.

    `pairing` is the canonical matching on points {0..delta*n-1}: each pair
    stored (low, high), pairs sorted. Adjacency structures are derived on
    construction and validated against the regularity contract.
    """

    delta: int
    n: int
    pairing: tuple[tuple[int, int], ...]
    _items: tuple = field(init=False, repr=False, compare=False)
    _nloops: tuple = field(init=False, repr=False, compare=False)
    _mult: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.delta, int) or self.delta < 1:
            raise ValueError("delta must be a positive integer")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        num_points = self.delta * self.n
        if num_points % 2 != 0:
            raise ValueError("delta * n must be even")
        canon = tuple(
            sorted((a, b) if a < b else (b, a) for a, b in self.pairing)
        )
        object.__setattr__(self, "pairing", canon)
        seen = [False] * num_points
        for a, b in canon:
            for q in (a, b):
                if not 0 <= q < num_points:
                    raise ValueError(f"point {q} out of range")
                if seen[q]:
                    raise ValueError(f"point {q} appears in two pairs")
                seen[q] = True
        if len(canon) * 2 != num_points:
            raise ValueError("pairing must cover every point exactly once")

        mult: dict[tuple[int, int], int] = {}
        nloops = [0] * self.n
        for a, b in canon:
            va, vb = a // self.delta, b // self.delta
            if va == vb:
                nloops[va] += 1
            key = (va, vb) if va < vb else (vb, va)
            mult[key] = mult.get(key, 0) + 1
        items: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for (va, vb), m in sorted(mult.items()):
            if va != vb:
                items[va].append((vb, m))
                items[vb].append((va, m))
        object.__setattr__(self, "_mult", mult)
        object.__setattr__(self, "_nloops", tuple(nloops))
        object.__setattr__(self, "_items", tuple(tuple(row) for row in items))
        for v in range(self.n):
            deg = 2 * nloops[v] + sum(m for _, m in items[v])
            if deg != self.delta:
                raise ValueError(f"vertex {v} has degree {deg}, expected {self.delta}")

    @classmethod
    def from_pairing(cls, delta: int, n: int, pairing) -> "RegularMultigraph":
        return cls(delta, n, tuple(tuple(p) for p in pairing))

    @classmethod
    def from_edges(cls, delta: int, n: int, edges) -> "RegularMultigraph":
        """Build a pairing realization of an edge multiset (loops as (v, v))."""
        next_point = [v * delta for v in range(n)]
        limit = [(v + 1) * delta for v in range(n)]

        def take(v: int) -> int:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range")
            if next_point[v] >= limit[v]:
                raise ValueError(f"vertex {v} exceeds degree {delta}")
            q = next_point[v]
            next_point[v] += 1
            return q

        pairing = []
        for u, v in edges:
            pairing.append((take(u), take(v)))
        graph = cls(delta, n, tuple(pairing))
        return graph

    @property
    def num_edges(self) -> int:
        return self.delta * self.n // 2

    def vertex_of(self, point: int) -> int:
        return point // self.delta

    def multiplicity(self, u: int, v: int) -> int:
        """Number of u-v edges (loop count when u == v)."""
        key = (u, v) if u <= v else (v, u)
        return self._mult.get(key, 0)

    def loops(self, v: int) -> int:
        return self._nloops[v]

    def neighbor_items(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbor, multiplicity) pairs, neighbors distinct and != v, ascending."""
        return self._items[v]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex neighbor multiset (loops contribute the vertex twice)."""
        rows = []
        for v in range(self.n):
            row: list[int] = [v, v] * self._nloops[v]
            for w, m in self._items[v]:
                row.extend([w] * m)
            rows.append(tuple(sorted(row)))
        return tuple(rows)

    @property
    def is_simple(self) -> bool:
        return all(l == 0 for l in self._nloops) and all(
            m == 1 for (a, b), m in self._mult.items() if a != b
        )


def _raw_matching(rng: random.Random, num_points: int) -> list[tuple[int, int]]:
    """Uniform perfect matching: repeatedly pair the lowest unmatched point
    with a uniformly random other unmatched point."""
    pool = list(range(num_points))
    where = list(range(num_points))

    def remove(p: int) -> None:
        i = where[p]
        last = pool[-1]
        pool[i] = last
        where[last] = i
        pool.pop()
        where[p] = -1

    pairs = []
    for low in range(num_points):
        if where[low] < 0:
            continue
        remove(low)
        partner = pool[rng.randrange(len(pool))]
        remove(partner)
        pairs.append((low, partner))
    return pairs


def _pairs_simple(delta: int, pairs) -> bool:
    seen = set()
    for a, b in pairs:
        va, vb = a // delta, b // delta
        if va == vb:
            return False
        key = (va, vb) if va < vb else (vb, va)
        if key in seen:
            return False
        seen.add(key)
    return True


_SIMPLE_ATTEMPT_LIMIT = 100_000


def sample_pairing(
    delta: int, n: int, seed: int, simple_only: bool = False
) -> RegularMultigraph:
    """Sample a uniform pairing-model graph; optionally rejection-sample to simple.

    Uniform over all (delta*n - 1)!! matchings of the delta*n points; with
    simple_only, uniform over pairings whose merged graph has no loops or
    parallel edges (acceptance probability bounded away from 0 for fixed
    delta, so rejection terminates quickly in practice).
    """
    if not isinstance(delta, int) or delta < 1:
        raise ValueError("delta must be a positive integer")
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if (delta * n) % 2 != 0:
        raise ValueError("delta * n must be even")
    rng = random.Random(seed)
    for _ in range(_SIMPLE_ATTEMPT_LIMIT):
        pairs = _raw_matching(rng, delta * n)
        if not simple_only or _pairs_simple(delta, pairs):
            return RegularMultigraph(delta, n, tuple(pairs))
    raise RuntimeError(
        f"no simple graph found in {_SIMPLE_ATTEMPT_LIMIT} attempts "
        f"(delta={delta}, n={n})"
    )


@dataclass(frozen=True)
class CutState:
    """A vertex set S with its cut size and per-side out-degree histograms."""

    graph: RegularMultigraph
    membership: tuple[bool, ...]
    size_s: int
    cut: int
    hist_s: OutDegreeVector
    hist_comp: OutDegreeVector
    out_degrees: tuple[int, ...]

    @property
    def d(self) -> int:
        """Largest out-degree inside S."""
        return self.hist_s.max_out_degree

    @property
    def d_prime(self) -> int:
        """Largest out-degree outside S."""
        return self.hist_comp.max_out_degree

    @property
    def expansion(self) -> Fraction:
        if self.size_s == 0:
            raise ValueError("expansion undefined for the empty side")
        return Fraction(self.cut, self.size_s)


def _normalize_membership(graph: RegularMultigraph, membership) -> list[bool]:
    if isinstance(membership, (set, frozenset)):
        member = [False] * graph.n
        for v in membership:
            if not isinstance(v, int) or not 0 <= v < graph.n:
                raise ValueError(f"vertex {v} out of range")
            member[v] = True
        return member
    member = [bool(x) for x in membership]
    if len(member) != graph.n:
        raise ValueError("membership length must equal the number of vertices")
    return member


def _histograms(
    graph: RegularMultigraph, member: list[bool], out: list[int]
) -> tuple[OutDegreeVector, OutDegreeVector]:
    hist_s = [0] * (graph.delta + 1)
    hist_c = [0] * (graph.delta + 1)
    for v in range(graph.n):
        (hist_s if member[v] else hist_c)[out[v]] += 1
    return OutDegreeVector(tuple(hist_s)), OutDegreeVector(tuple(hist_c))


def _state_from_arrays(
    graph: RegularMultigraph, member: list[bool], out: list[int], cut: int
) -> CutState:
    hist_s, hist_c = _histograms(graph, member, out)
    return CutState(
        graph=graph,
        membership=tuple(member),
        size_s=sum(member),
        cut=cut,
        hist_s=hist_s,
        hist_comp=hist_c,
        out_degrees=tuple(out),
    )


def cut_state(graph: RegularMultigraph, membership) -> CutState:
    """Cut size and out-degree histograms for a vertex set.

    membership is a length-n boolean sequence or a set of vertex ids. A
    crossing edge is a pairing pair whose endpoints' vertices sit on opposite
    sides; loops never cross.
    """
    member = _normalize_membership(graph, membership)
    out = [0] * graph.n
    cut = 0
    for a, b in graph.pairing:
        va, vb = a // graph.delta, b // graph.delta
        if member[va] != member[vb]:
            cut += 1
            out[va] += 1
            out[vb] += 1
    return _state_from_arrays(graph, member, out, cut)


def swap_delta(state: CutState, u: int, v: int) -> int:
    """Exact cut change if u (inside S) and v (outside) trade sides.

    2*delta - 2*out(u) - 2*out(v) - 2*loops(u) - 2*loops(v) + 2*mult(u, v):
    internal edges of each swapped vertex start crossing, crossing ones stop,
    loops never cross, and each parallel u-v edge crosses both before and
    after (the -2 counted for each endpoint is returned as +2m).
    """
    graph = state.graph
    if not 0 <= u < graph.n or not 0 <= v < graph.n:
        raise ValueError("vertex id out of range")
    if not state.membership[u]:
        raise ValueError(f"vertex {u} is not in S")
    if state.membership[v]:
        raise ValueError(f"vertex {v} is in S")
    return (
        2 * graph.delta
        - 2 * (state.out_degrees[u] + graph.loops(u))
        - 2 * (state.out_degrees[v] + graph.loops(v))
        + 2 * graph.multiplicity(u, v)
    )


def _apply_swap(
    graph: RegularMultigraph,
    member: list[bool],
    out: list[int],
    u: int,
    v: int,
) -> None:
    member[u] = False
    member[v] = True
    affected = {u, v}
    affected.update(w for w, _ in graph.neighbor_items(u))
    affected.update(w for w, _ in graph.neighbor_items(v))
    for w in affected:
        out[w] = sum(
            m for x, m in graph.neighbor_items(w) if member[x] != member[w]
        )


def _select_best(
    graph: RegularMultigraph, member: list[bool], out: list[int]
) -> tuple[int, int, int] | None:
    """Most-improving swap, ties broken by smallest (u, v); None at optimum.

    Vertices are bucketed by score = out-degree + loop count; a pair's cut
    change is 2*delta - 2*(score_u + score_v) + 2*mult(u, v) >= the bucket
    base, so high-score bucket pairs are scanned first and scanning stops
    once the base alone cannot beat (or tie) the incumbent.
    """
    delta = graph.delta
    buckets_s: dict[int, list[int]] = defaultdict(list)
    buckets_o: dict[int, list[int]] = defaultdict(list)
    for w in range(graph.n):
        (buckets_s if member[w] else buckets_o)[out[w] + graph.loops(w)].append(w)
    levels_s = sorted(buckets_s, reverse=True)
    levels_o = sorted(buckets_o, reverse=True)

    best_dc = 0
    best_pair: tuple[int, int] | None = None
    for a in levels_s:
        # Even the highest outside bucket cannot improve from this level down.
        if levels_o and 2 * delta - 2 * (a + levels_o[0]) > (
            best_dc if best_pair is not None else -2
        ):
            break
        for b in levels_o:
            base = 2 * delta - 2 * (a + b)
            if base > (best_dc if best_pair is not None else -2):
                break
            for u in buckets_s[a]:
                for v in buckets_o[b]:
                    dc = base + 2 * graph.multiplicity(u, v)
                    if dc >= 0:
                        continue
                    if (
                        best_pair is None
                        or dc < best_dc
                        or (dc == best_dc and (u, v) < best_pair)
                    ):
                        best_dc = dc
                        best_pair = (u, v)
    if best_pair is None:
        return None
    return best_pair[0], best_pair[1], best_dc


def _select_first(
    graph: RegularMultigraph, member: list[bool], out: list[int]
) -> tuple[int, int, int] | None:
    """First improving swap in ascending (u, v) scan order; None at optimum."""
    delta = graph.delta
    inside = [w for w in range(graph.n) if member[w]]
    outside = [w for w in range(graph.n) if not member[w]]
    for u in inside:
        su = out[u] + graph.loops(u)
        for v in outside:
            dc = 2 * delta - 2 * (su + out[v] + graph.loops(v)) + 2 * graph.multiplicity(u, v)
            if dc < 0:
                return u, v, dc
    return None


def local_descent(
    state: CutState, tie_rule: str = BEST_IMPROVEMENT, trace: list | None = None
) -> CutState:
    """Apply strictly improving swaps until the set is locally optimal.

    |S| is preserved by every step and the cut strictly decreases, so the
    descent terminates after at most cut-many swaps. Deterministic for a
    given (state, tie_rule): best-improvement takes the largest cut drop
    (smallest (u, v) on ties), first-improvement takes the first improving
    pair in ascending vertex order. If `trace` is a list, the cut after each
    accepted swap is appended to it.
    """
    if tie_rule not in (BEST_IMPROVEMENT, FIRST_IMPROVEMENT):
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    graph = state.graph
    if 2 * state.size_s > graph.n:
        raise ValueError("descent expects |S| <= n/2")
    select = _select_best if tie_rule == BEST_IMPROVEMENT else _select_first
    member = list(state.membership)
    out = list(state.out_degrees)
    cut = state.cut
    while True:
        found = select(graph, member, out)
        if found is None:
            break
        u, v, dc = found
        _apply_swap(graph, member, out, u, v)
        cut += dc
        if trace is not None:
            trace.append(cut)
    return _state_from_arrays(graph, member, out, cut)


_BRUTE_FORCE_LIMIT = 26


def brute_force_expansion(graph: RegularMultigraph) -> tuple[Fraction, tuple[int, ...]]:
    """Exact edge expansion min_{0 < |S| <= n/2} cut(S)/|S| with its minimizer.

    Enumerates all subsets in Gray-code order with O(delta) incremental cut
    updates, comparing ratios by integer cross-multiplication. Returns the
    lexicographically smallest minimizing set (as a sorted vertex tuple).
    """
    n = graph.n
    if n < 2:
        raise ValueError("expansion needs at least two vertices")
    if n > _BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"n={n} exceeds the exhaustive limit {_BRUTE_FORCE_LIMIT}; "
            "use local_descent over sampled starts instead"
        )
    member = [False] * n
    cut = 0
    size = 0
    best_cut = best_size = 0
    best_set: tuple[int, ...] | None = None
    half = n // 2
    for k in range(1, 1 << n):
        w = (k & -k).bit_length() - 1
        # Flipping w turns its crossing edges internal and vice versa
        # (loops never cross either way).
        crossing = sum(
            m for x, m in graph.neighbor_items(w) if member[x] != member[w]
        )
        internal = graph.delta - 2 * graph.loops(w) - crossing
        cut += internal - crossing
        member[w] = not member[w]
        size += 1 if member[w] else -1
        if not 1 <= size <= half:
            continue
        if best_set is None or cut * best_size < best_cut * size:
            best_cut, best_size = cut, size
            best_set = tuple(v for v in range(n) if member[v])
        elif cut * best_size == best_cut * size:
            cand = tuple(v for v in range(n) if member[v])
            if cand < best_set:
                best_cut, best_size = cut, size
                best_set = cand
    return Fraction(best_cut, best_size), best_set


def log_config_prob(delta: int, n: int, svec, svec_prime) -> float:
    """Natural log-probability that a fixed |S| = sum(svec) produces the
    out-degree histograms (svec, svec_prime) under a uniform pairing.

    Counts the matchings realizing the configuration: choose which vertices
    get which out-degree on each side, which of each vertex's delta points
    cross, one of c! ways to match the crossing points, and any internal
    matching on each side's remaining points; normalized by the total number
    of matchings (the product of odd integers below delta * n).
    """
    s = list(svec)
    sp = list(svec_prime)
    if len(s) != delta + 1 or len(sp) != delta + 1:
        raise ValueError("histograms must have delta + 1 entries")
    if any(not isinstance(x, int) or x < 0 for x in s + sp):
        raise ValueError("histogram entries must be non-negative integers")
    u = sum(s)
    if u + sum(sp) != n:
        raise ValueError("side sizes must total n")
    c = sum(i * x for i, x in enumerate(s))
    if c != sum(i * x for i, x in enumerate(sp)):
        raise ValueError("both sides must have the same crossing-endpoint total")
    inside = delta * u - c
    outside = delta * (n - u) - c
    if inside < 0 or outside < 0:
        raise ValueError("crossing total exceeds a side's points")
    if inside % 2 != 0 or outside % 2 != 0:
        raise ValueError("each side's internal point count must be even")

    def side_log(count: int, hist: list[int]) -> float:
        terms = [math.lgamma(count + 1)]
        for i, x in enumerate(hist):
            if x:
                terms.append(-math.lgamma(x + 1))
                terms.append(x * log_binomial(delta, i))
        return math.fsum(terms)

    return math.fsum(
        [
            side_log(u, s),
            side_log(n - u, sp),
            math.lgamma(c + 1),
            log_odd_double_factorial(inside),
            log_odd_double_factorial(outside),
            -log_odd_double_factorial(delta * n),
        ]
    )


def sample_out_degree_configurations(
    delta: int, n: int, size_s: int, trials: int, seed: int
) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """Tally (svec, svec_prime) over seeded pairings with S = {0..size_s-1}.

    A lean Monte-Carlo loop for validating log_config_prob: works on raw
    matchings without building graph objects.
    """
    if not 0 <= size_s <= n:
        raise ValueError("size_s must lie in [0, n]")
    if (delta * n) % 2 != 0:
        raise ValueError("delta * n must be even")
    rng = random.Random(seed)
    boundary = size_s * delta
    num_points = delta * n
    tally: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    for _ in range(trials):
        out = [0] * n
        for a, b in _raw_matching(rng, num_points):
            if (a < boundary) != (b < boundary):
                out[a // delta] += 1
                out[b // delta] += 1
        hist_s = [0] * (delta + 1)
        hist_c = [0] * (delta + 1)
        for v in range(size_s):
            hist_s[out[v]] += 1
        for v in range(size_s, n):
            hist_c[out[v]] += 1
        key = (tuple(hist_s), tuple(hist_c))
        tally[key] = tally.get(key, 0) + 1
    return tally


@dataclass(frozen=True)
class TrialRecord:
    """Best descent outcome for one sampled graph."""

    index: int
    cut: int
    size_s: int
    d: int
    d_prime: int
    swaps: int

    @property
    def expansion(self) -> Fraction:
        return Fraction(self.cut, self.size_s)


@dataclass(frozen=True)
class ExperimentSummary:
    delta: int
    n: int
    trials: int
    restarts: int
    seed: int
    simple_only: bool
    tie_rule: str
    records: tuple[TrialRecord, ...]
    certified_bound: float | None
    min_expansion: Fraction
    mean_expansion: float
    frac_caps_within_delta: float
    frac_meeting_bound: float | None

    @property
    def flagged_trials(self) -> tuple[int, ...]:
        """Trials whose best-found expansion fell below the certified bound."""
        if self.certified_bound is None:
            return ()
        return tuple(
            r.index for r in self.records if r.expansion < self.certified_bound
        )


def expansion_experiment(
    delta: int,
    n: int,
    trials: int,
    seed: int,
    restarts: int = 1,
    simple_only: bool = False,
    tie_rule: str = BEST_IMPROVEMENT,
) -> ExperimentSummary:
    """Sample graphs, descend from random balanced sets, summarize expansions.

    Per trial (seeded with derive_seed(seed, trial)): sample one graph, run
    local_descent from `restarts` random |S| = n//2 starts, and record the
    best final expansion with its (d, d') and swap count. Every final state
    is required to satisfy d + d' <= delta + 1; a violation raises, because
    it would mean a descent returned a non-locally-optimal state.

    The summary compares best-found expansions against this degree's
    certified lower bound (None when no certificate exists, e.g. delta < 3);
    the bound holds for random graphs only with high probability, so trials
    below it are flagged and counted, not failed.
    """
    if not 1 <= delta <= 20:
        raise ValueError("delta must lie in [1, 20]")
    if not 2 <= n <= 100_000:
        raise ValueError("n must lie in [2, 100000]")
    if not 1 <= trials <= 10_000:
        raise ValueError("trials must lie in [1, 10000]")
    if restarts < 1:
        raise ValueError("restarts must be positive")

    certified: float | None = None
    if delta >= 3:
        from .certifier import NoBound, min_eta

        try:
            certified = min_eta(delta).expansion_bound
        except NoBound:
            certified = None

    half = n // 2
    records = []
    for t in range(trials):
        rng = random.Random(derive_seed(seed, t))
        graph = sample_pairing(
            delta, n, seed=rng.randrange(_SEED_MOD), simple_only=simple_only
        )
        best: tuple[int, int, int, int] | None = None
        for _ in range(restarts):
            start = cut_state(graph, set(rng.sample(range(n), half)))
            trace: list[int] = []
            final = local_descent(start, tie_rule=tie_rule, trace=trace)
            if final.d + final.d_prime > delta + 1:
                raise RuntimeError(
                    f"descent returned d={final.d}, d'={final.d_prime} "
                    f"with delta={delta}: not locally optimal"
                )
            cand = (final.cut, final.d, final.d_prime, len(trace))
            if best is None or cand[0] < best[0]:
                best = cand
        records.append(
            TrialRecord(
                index=t,
                cut=best[0],
                size_s=half,
                d=best[1],
                d_prime=best[2],
                swaps=best[3],
            )
        )

    expansions = [r.expansion for r in records]
    within = sum(1 for r in records if r.d + r.d_prime <= delta)
    meeting: float | None = None
    if certified is not None:
        meeting = sum(1 for e in expansions if e >= certified) / trials
    return ExperimentSummary(
        delta=delta,
        n=n,
        trials=trials,
        restarts=restarts,
        seed=seed,
        simple_only=simple_only,
        tie_rule=tie_rule,
        records=tuple(records),
        certified_bound=certified,
        min_expansion=min(expansions),
        mean_expansion=float(sum(expansions) / trials),
        frac_caps_within_delta=within / trials,
        frac_meeting_bound=meeting,
    )


_CSV_HEADER = "trial,n,delta,best_expansion_num,best_expansion_den,d,d_prime,swaps,restarts"


def summary_to_csv(summary: ExperimentSummary) -> str:
    """Aggregate CSV, one row per trial ('.' decimals, locale-independent)."""
    lines = [_CSV_HEADER]
    for r in summary.records:
        e = r.expansion
        lines.append(
            f"{r.index},{summary.n},{summary.delta},{e.numerator},"
            f"{e.denominator},{r.d},{r.d_prime},{r.swaps},{summary.restarts}"
        )
    return "\n".join(lines) + "\n"


def summary_lines(summary: ExperimentSummary) -> list[str]:
    """Line-delimited report: one record per trial, then the aggregates."""
    out = [
        f"# expansion experiment delta={summary.delta} n={summary.n} "
        f"trials={summary.trials} restarts={summary.restarts} "
        f"seed={summary.seed} simple_only={summary.simple_only} "
        f"tie_rule={summary.tie_rule}"
    ]
    for r in summary.records:
        e = r.expansion
        out.append(
            f"trial={r.index} best_expansion={e.numerator}/{e.denominator} "
            f"({float(e):.6f}) d={r.d} d_prime={r.d_prime} swaps={r.swaps}"
        )
    out.append(
        f"summary: min_expansion={float(summary.min_expansion):.6f} "
        f"mean_expansion={summary.mean_expansion:.6f} "
        f"caps_within_delta={summary.frac_caps_within_delta:.3f}"
    )
    if summary.certified_bound is None:
        out.append("summary: no certified bound for this degree")
    else:
        flagged = summary.flagged_trials
        out.append(
            f"summary: certified_bound={summary.certified_bound:.6f} "
            f"met_in={summary.frac_meeting_bound:.3f} "
            f"flagged={list(flagged) if flagged else '[]'}"
        )
    return out
