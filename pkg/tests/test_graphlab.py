"""Tests for the pairing-model laboratory.

The uniformity test enumerates every matching on delta*n points and runs a
chi-square goodness-of-fit at the 0.999 level against 1e5 seeded samples;
the critical values are fixed constants so the test needs no stats library.
"""

import itertools
import math
from fractions import Fraction

import pytest

from expander_bounds.graphlab import (
    BEST_IMPROVEMENT,
    FIRST_IMPROVEMENT,
    CutState,
    OutDegreeVector,
    RegularMultigraph,
    brute_force_expansion,
    cut_state,
    derive_seed,
    expansion_experiment,
    local_descent,
    log_config_prob,
    sample_out_degree_configurations,
    sample_pairing,
    summary_lines,
    summary_to_csv,
    swap_delta,
)

C8_EDGES = [(i, (i + 1) % 8) for i in range(8)]
K4_EDGES = [(u, v) for u in range(4) for v in range(u + 1, 4)]
# 3-regular two-vertex graph with a loop at each end
DUMBBELL_EDGES = [(0, 0), (1, 1), (0, 1)]
CUBE_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 0),
    (4, 5), (5, 6), (6, 7), (7, 4),
    (0, 4), (1, 5), (2, 6), (3, 7),
]


def test_derive_seed_pins():
    assert derive_seed(0, 0) == 13787848793156543929
    assert derive_seed(424242, 1) == 8676182475379700876
    seeds = [derive_seed(99, i) for i in range(1000)]
    assert len(set(seeds)) == 1000


def test_out_degree_vector():
    v = OutDegreeVector((2, 0, 3))
    assert v.delta == 2
    assert v.total == 5
    assert v.weighted_total == 6
    assert v.max_out_degree == 2
    assert v[1] == 0 and len(v) == 3 and list(v) == [2, 0, 3]
    assert OutDegreeVector((4,)).max_out_degree == 0
    with pytest.raises(ValueError):
        OutDegreeVector(())
    with pytest.raises(ValueError):
        OutDegreeVector((1, -1))
    with pytest.raises(ValueError):
        OutDegreeVector((1.0, 2))


def test_from_edges_k4():
    g = RegularMultigraph.from_edges(3, 4, K4_EDGES)
    assert g.num_edges == 6
    assert g.is_simple
    assert g.multiplicity(0, 3) == 1
    assert g.multiplicity(3, 0) == 1
    assert g.loops(2) == 0
    assert g.adjacency == ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
    assert g.vertex_of(0) == 0 and g.vertex_of(11) == 3
    assert g.neighbor_items(0) == ((1, 1), (2, 1), (3, 1))


def test_from_edges_loops_and_parallels():
    g = RegularMultigraph.from_edges(3, 2, DUMBBELL_EDGES)
    assert g.loops(0) == 1 and g.loops(1) == 1
    assert g.multiplicity(0, 0) == 1
    assert g.multiplicity(0, 1) == 1
    assert not g.is_simple
    assert g.adjacency == ((0, 0, 1), (0, 1, 1))
    doubled = RegularMultigraph.from_edges(2, 2, [(0, 1), (0, 1)])
    assert doubled.multiplicity(0, 1) == 2
    assert not doubled.is_simple


def test_construction_validation():
    with pytest.raises(ValueError):
        RegularMultigraph.from_edges(3, 4, K4_EDGES + [(0, 1)])
    with pytest.raises(ValueError):
        RegularMultigraph.from_edges(3, 4, [(0, 5)])
    with pytest.raises(ValueError):
        RegularMultigraph(1, 3, ((0, 1),))
    with pytest.raises(ValueError):
        RegularMultigraph(1, 4, ((0, 1), (2, 5)))
    with pytest.raises(ValueError):
        RegularMultigraph(1, 4, ((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        RegularMultigraph(1, 4, ((0, 1),))
    with pytest.raises(ValueError):
        RegularMultigraph(0, 4, ())
    # pairing order is canonicalized
    g = RegularMultigraph(1, 4, ((3, 2), (1, 0)))
    assert g.pairing == ((0, 1), (2, 3))


def test_sample_pairing_determinism():
    a = sample_pairing(3, 8, seed=11)
    b = sample_pairing(3, 8, seed=11)
    assert a == b
    assert a != sample_pairing(3, 8, seed=12)
    simple = sample_pairing(3, 8, seed=5, simple_only=True)
    assert simple.is_simple
    with pytest.raises(ValueError):
        sample_pairing(3, 3, seed=0)
    with pytest.raises(ValueError):
        sample_pairing(0, 4, seed=0)
    # a single vertex can only realize loops, so the rejection loop exhausts
    with pytest.raises(RuntimeError):
        sample_pairing(2, 1, seed=0, simple_only=True)


def test_cut_state_on_the_cycle():
    g = RegularMultigraph.from_edges(2, 8, C8_EDGES)
    alt = cut_state(g, {0, 2, 4, 6})
    assert alt.cut == 8
    assert alt.size_s == 4
    assert alt.expansion == Fraction(2)
    assert alt.hist_s == OutDegreeVector((0, 0, 4))
    assert alt.hist_comp == OutDegreeVector((0, 0, 4))
    assert alt.d == 2 and alt.d_prime == 2
    arc = cut_state(g, [True, True, True, True, False, False, False, False])
    assert arc.cut == 2
    assert arc.expansion == Fraction(1, 2)
    assert arc.hist_s == OutDegreeVector((2, 2, 0))
    assert arc.d == 1 and arc.d_prime == 1
    # sets and boolean sequences describe the same state
    assert cut_state(g, {0, 1, 2, 3}) == arc
    with pytest.raises(ValueError):
        cut_state(g, [True] * 7)
    with pytest.raises(ValueError):
        cut_state(g, {0, 9})
    with pytest.raises(ValueError):
        cut_state(g, set()).expansion


def test_swap_delta_known_values():
    k4 = cut_state(RegularMultigraph.from_edges(3, 4, K4_EDGES), {0, 1})
    assert swap_delta(k4, 0, 2) == 0
    cube = cut_state(RegularMultigraph.from_edges(3, 8, CUBE_EDGES), {0, 1, 2, 4})
    assert swap_delta(cube, 2, 5) == -2
    with pytest.raises(ValueError):
        swap_delta(cube, 3, 5)
    with pytest.raises(ValueError):
        swap_delta(cube, 2, 4)
    with pytest.raises(ValueError):
        swap_delta(cube, 2, 9)


def test_swap_delta_matches_recomputation():
    g = sample_pairing(3, 10, seed=3)
    s = set(range(5))
    state = cut_state(g, s)
    for u in sorted(s):
        for v in sorted(set(range(10)) - s):
            swapped = cut_state(g, (s - {u}) | {v})
            assert swap_delta(state, u, v) == swapped.cut - state.cut


def test_local_descent_traces_and_terminates():
    g = sample_pairing(3, 20, seed=7)
    start = cut_state(g, set(range(10)))
    trace: list[int] = []
    final = local_descent(start, trace=trace)
    seq = [start.cut] + trace
    assert all(a > b for a, b in zip(seq, seq[1:]))
    assert final.cut == seq[-1]
    assert final.size_s == start.size_s
    # local optimality: no swap improves the final state
    inside = [v for v in range(20) if final.membership[v]]
    outside = [v for v in range(20) if not final.membership[v]]
    assert all(swap_delta(final, u, v) >= 0 for u in inside for v in outside)
    # both rules are deterministic and end locally optimal
    again = local_descent(start, tie_rule=FIRST_IMPROVEMENT)
    assert again == local_descent(start, tie_rule=FIRST_IMPROVEMENT)
    assert local_descent(start) == final
    with pytest.raises(ValueError):
        local_descent(start, tie_rule="steepest")
    with pytest.raises(ValueError):
        local_descent(cut_state(g, set(range(11))))


def test_brute_force_known_graphs(petersen):
    cycle = RegularMultigraph.from_edges(2, 8, C8_EDGES)
    assert brute_force_expansion(cycle) == (Fraction(1, 2), (0, 1, 2, 3))
    k4 = RegularMultigraph.from_edges(3, 4, K4_EDGES)
    assert brute_force_expansion(k4) == (Fraction(2), (0, 1))
    dumbbell = RegularMultigraph.from_edges(3, 2, DUMBBELL_EDGES)
    assert brute_force_expansion(dumbbell) == (Fraction(1), (0,))
    assert brute_force_expansion(petersen) == (Fraction(1), (0, 1, 2, 3, 4))
    with pytest.raises(ValueError):
        brute_force_expansion(RegularMultigraph(2, 1, ((0, 1),)))
    with pytest.raises(ValueError):
        brute_force_expansion(sample_pairing(1, 28, seed=0))


def _descend_all_starts(g: RegularMultigraph) -> Fraction:
    best: Fraction | None = None
    for k in range(1, g.n // 2 + 1):
        for combo in itertools.combinations(range(g.n), k):
            final = local_descent(cut_state(g, set(combo)))
            e = final.expansion
            if best is None or e < best:
                best = e
    return best


def test_descent_from_every_start_matches_brute_force():
    for i in range(3):
        g = sample_pairing(3, 10, seed=derive_seed(55, i))
        assert _descend_all_starts(g) == brute_force_expansion(g)[0]


def test_log_config_prob_exact_small_cases():
    # one edge, one vertex per side: the edge always crosses
    assert log_config_prob(1, 2, [0, 1], [0, 1]) == 0.0
    # delta=2, n=2, S={0}: 3 matchings, 1 internal and 2 fully crossing
    assert log_config_prob(2, 2, [1, 0, 0], [1, 0, 0]) == pytest.approx(
        math.log(1 / 3), abs=1e-14
    )
    assert log_config_prob(2, 2, [0, 0, 1], [0, 0, 1]) == pytest.approx(
        math.log(2 / 3), abs=1e-14
    )


def test_log_config_prob_validation():
    with pytest.raises(ValueError):
        log_config_prob(2, 2, [1, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        log_config_prob(2, 2, [1, -1, 1], [1, 0, 0])
    with pytest.raises(ValueError):
        log_config_prob(2, 3, [1, 0, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        log_config_prob(2, 2, [0, 1, 0], [1, 0, 0])
    # odd internal point count
    with pytest.raises(ValueError):
        log_config_prob(1, 4, [1, 1], [1, 1])


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def test_log_config_prob_total_mass_is_one():
    for delta, n, u in [(2, 4, 2), (3, 4, 2)]:
        mass = []
        for svec in _compositions(u, delta + 1):
            c = sum(i * x for i, x in enumerate(svec))
            if (delta * u - c) % 2 != 0 or delta * u - c < 0:
                continue
            for svp in _compositions(n - u, delta + 1):
                if sum(i * x for i, x in enumerate(svp)) != c:
                    continue
                if (delta * (n - u) - c) % 2 != 0 or delta * (n - u) - c < 0:
                    continue
                mass.append(math.exp(log_config_prob(delta, n, list(svec), list(svp))))
        assert math.fsum(mass) == pytest.approx(1.0, abs=1e-12)


def test_sample_out_degree_configurations():
    tally = sample_out_degree_configurations(2, 4, 2, trials=500, seed=42)
    assert tally == sample_out_degree_configurations(2, 4, 2, trials=500, seed=42)
    assert sum(tally.values()) == 500
    for svec, svp in tally:
        assert sum(svec) == 2 and sum(svp) == 2
        assert sum(i * x for i, x in enumerate(svec)) == sum(
            i * x for i, x in enumerate(svp)
        )
    with pytest.raises(ValueError):
        sample_out_degree_configurations(2, 4, 5, trials=1, seed=0)
    with pytest.raises(ValueError):
        sample_out_degree_configurations(3, 3, 1, trials=1, seed=0)


def _all_matchings(num_points: int) -> list[tuple[tuple[int, int], ...]]:
    out: list[tuple[tuple[int, int], ...]] = []

    def rec(avail: list[int], acc: list[tuple[int, int]]) -> None:
        if not avail:
            out.append(tuple(sorted(acc)))
            return
        a = avail[0]
        for j in range(1, len(avail)):
            rec(avail[1:j] + avail[j + 1 :], acc + [(a, avail[j])])

    rec(list(range(num_points)), [])
    return out


# chi-square 0.999 critical values keyed by degrees of freedom
_CHI2_CRIT = {2: 13.815510557964274, 14: 36.12327368039814, 104: 154.31407954898626}


@pytest.mark.parametrize("case,delta,n", [(0, 1, 4), (1, 3, 2), (2, 2, 4)])
def test_sampler_is_uniform_over_matchings(case, delta, n):
    support = _all_matchings(delta * n)
    k = len(support)
    base = derive_seed(777, case)
    draws = 100_000
    tally: dict[tuple, int] = {}
    for i in range(draws):
        g = sample_pairing(delta, n, seed=base + i)
        tally[g.pairing] = tally.get(g.pairing, 0) + 1
    assert set(tally) <= set(support)
    assert len(tally) == k
    expected = draws / k
    chi2 = sum((tally.get(m, 0) - expected) ** 2 / expected for m in support)
    assert chi2 < _CHI2_CRIT[k - 1]


def test_expansion_experiment_golden_csv():
    summary = expansion_experiment(3, 12, trials=4, seed=99, restarts=2)
    golden = (
        "trial,n,delta,best_expansion_num,best_expansion_den,d,d_prime,swaps,restarts\n"
        "0,12,3,2,3,2,2,1,2\n"
        "1,12,3,2,3,2,1,1,2\n"
        "2,12,3,2,3,2,1,2,2\n"
        "3,12,3,1,3,1,1,1,2\n"
    )
    assert summary_to_csv(summary) == golden
    assert summary.min_expansion == Fraction(1, 3)
    assert summary.mean_expansion == 0.5833333333333334
    assert summary.frac_caps_within_delta == 0.75
    assert summary.frac_meeting_bound == 1.0
    assert summary.certified_bound == 0.1875
    assert summary.flagged_trials == ()
    # determinism end to end
    again = expansion_experiment(3, 12, trials=4, seed=99, restarts=2)
    assert summary_to_csv(again) == golden
    lines = summary_lines(summary)
    assert lines[0].startswith("# expansion experiment delta=3 n=12 trials=4")
    assert lines[-1] == "summary: certified_bound=0.187500 met_in=1.000 flagged=[]"


def test_expansion_experiment_without_certificate():
    summary = expansion_experiment(2, 8, trials=1, seed=1)
    assert summary.certified_bound is None
    assert summary.frac_meeting_bound is None
    assert summary.flagged_trials == ()
    assert summary_lines(summary)[-1] == "summary: no certified bound for this degree"


def test_expansion_experiment_validation():
    with pytest.raises(ValueError):
        expansion_experiment(0, 8, trials=1, seed=0)
    with pytest.raises(ValueError):
        expansion_experiment(21, 8, trials=1, seed=0)
    with pytest.raises(ValueError):
        expansion_experiment(3, 1, trials=1, seed=0)
    with pytest.raises(ValueError):
        expansion_experiment(3, 8, trials=0, seed=0)
    with pytest.raises(ValueError):
        expansion_experiment(3, 8, trials=1, seed=0, restarts=0)
