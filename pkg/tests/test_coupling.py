import math
import random
from fractions import Fraction

import pytest

from sandwichlab.coupling import (
    ModelParams,
    closed_form_law,
    companion_threshold,
    eta_schedule,
    exact_kernel_step,
    exact_marginal,
    point_mass,
    run_coupled_lower,
    run_coupled_upper,
    run_gstar,
    run_gsub,
    run_lower_addition,
    run_reference_sequences,
    run_upper_deletion,
    sample_f,
    sample_fminus,
    verify_transcript_interleaving,
)
from sandwichlab.graphs import (
    SimpleGraph,
    canonical_key,
    complete_graph,
    empty_graph,
    is_regular,
)
from sandwichlab.oracle import CapacityError, spanning_profile
from sandwichlab.stats import chi_square_uniformity
from sandwichlab.tape import RandomnessTape, derive_seed


def test_eta_schedule_formula_and_support():
    params = ModelParams(n=16, d=6, c0=1.0, mu=0.1)
    sched = eta_schedule(params)
    logn = math.log(16)
    expected = max(0.1 / logn, (16 * logn / 72) ** 0.125)
    assert sched.eta(0) == pytest.approx(expected, abs=1e-14)
    # frozen value from an independent calculator run
    assert sched.eta(0) == pytest.approx(0.9412589469421757, abs=1e-12)
    assert sched.eta(sched.limit) == 0.0
    assert sched.eta(sched.limit + 5) == 0.0
    values = sched.values()
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


def test_companion_threshold_clamped_and_monotone():
    params = ModelParams(n=8, d=3)
    sched = eta_schedule(params)
    limit = params.steps_upper
    taus = [companion_threshold(params, sched, i) for i in range(1, params.npairs + 1)]
    assert all(params.tau_floor <= t <= 1.0 for t in taus)
    regime = taus[: limit - sched.R]
    assert all(a >= b - 1e-12 for a, b in zip(regime, regime[1:]))
    assert all(t == 1.0 for t in taus[limit - sched.R:])
    # raw formula really is negative here, which is what forces the clamp
    assert companion_threshold(params, sched, limit - sched.R, clamped=False) < 0


def test_upper_deletion_already_regular():
    params = ModelParams(n=4, d=3)
    transcript, g = run_upper_deletion(params, RandomnessTape(4, 1))
    assert transcript.steps == []
    assert g == complete_graph(4)


def test_upper_deletion_reaches_two_regular_five_cycle():
    params = ModelParams(n=5, d=2)
    for seed in range(5):
        transcript, g = run_upper_deletion(params, RandomnessTape(5, seed))
        assert is_regular(g, 2)
        assert len(transcript.steps) == params.steps_upper
        assert all(s.max_count > 0 for s in transcript.steps)
        assert transcript.check_monotone()


def test_lower_addition_reaches_regular():
    params = ModelParams(n=5, d=2)
    for seed in range(5):
        transcript, g = run_lower_addition(params, RandomnessTape(5, seed))
        assert is_regular(g, 2)
        assert len(transcript.steps) == params.steps_lower


def test_gstar_edge_count_equals_binomial_draw():
    params = ModelParams(n=6, d=3)
    for seed in range(5):
        transcript, gstar = run_gstar(params, RandomnessTape(6, seed))
        assert gstar.edge_count() == transcript.meta["M"]


def test_coupled_runs_are_deterministic():
    params = ModelParams(n=6, d=3)
    a = run_coupled_upper(params, seed=42)
    b = run_coupled_upper(params, seed=42)
    assert a.g == b.g and a.gstar == b.gstar and a.contained == b.contained
    assert [s.tape_index for s in a.f_transcript.steps] == \
        [s.tape_index for s in b.f_transcript.steps]
    la = run_coupled_lower(params, seed=42)
    lb = run_coupled_lower(params, seed=42)
    assert la.g == lb.g and la.gsub == lb.gsub


def test_interleaving_checks_pass_on_real_runs():
    params = ModelParams(n=6, d=3)
    for seed in range(20):
        run = run_coupled_upper(params, seed=seed)
        report = verify_transcript_interleaving(run)
        assert report["k_le_ell"] and report["k_le_m"]
        assert report["passed"], report


def test_interleaving_negative_control():
    params = ModelParams(n=6, d=3)
    run = run_coupled_upper(params, seed=1)
    run.f_transcript.steps[1].tape_index = run.f_transcript.steps[0].tape_index
    report = verify_transcript_interleaving(run)
    assert not report["monotone"]
    assert not report["passed"]


def test_reference_sequences_basics():
    params = ModelParams(n=6, d=3)
    ref = run_reference_sequences(params, RandomnessTape(6, 9))
    # H loses exactly one edge per distinct tape edge
    assert ref.e_h_horizon == params.npairs - ref.horizon
    assert ref.e_gplus_horizon - ref.e_h_horizon == ref.failures
    # zero-slack variant: thresholds never fail, shadow equals H
    flat = ModelParams(n=6, d=3, c0=0.0)
    ref0 = run_reference_sequences(flat, RandomnessTape(6, 9))
    assert ref0.failures == 0
    assert ref0.e_gplus_horizon == ref0.e_h_horizon


def test_kernel_step_from_complete_graph_is_uniform():
    dist = point_mass(complete_graph(5))
    step = exact_kernel_step(dist, 2, "delete")
    assert len(step.probs) == 10
    assert set(step.probs.values()) == {Fraction(1, 10)}
    assert step.total() == 1


def test_kernel_step_add_from_empty_is_uniform_over_edges():
    dist = point_mass(empty_graph(5))
    step = exact_kernel_step(dist, 2, "add")
    assert len(step.probs) == 10
    assert set(step.probs.values()) == {Fraction(1, 10)}


def test_kernel_preserves_mass_exactly():
    params = ModelParams(n=5, d=2)
    dist = point_mass(complete_graph(5))
    for _ in range(4):
        dist = exact_kernel_step(dist, 2, "delete")
        assert dist.total() == 1


@pytest.mark.parametrize("direction,stages", [("delete", 5), ("add", 5)])
def test_exact_marginals_match_closed_form(direction, stages):
    params = ModelParams(n=5, d=2)
    for stage in range(stages + 1):
        kernel = exact_marginal(params, stage, direction)
        closed = closed_form_law(params, stage, direction)
        assert kernel.probs == closed.probs


def test_marginal_boundary_stages():
    params = ModelParams(n=5, d=2)
    final = exact_marginal(params, params.steps_upper, "delete")
    assert len(final.probs) == 12
    assert set(final.probs.values()) == {Fraction(1, 12)}
    start = exact_marginal(params, 0, "delete")
    assert start.probs == {canonical_key(complete_graph(5)): Fraction(1)}
    start_add = exact_marginal(params, 0, "add")
    assert start_add.probs == {canonical_key(empty_graph(5)): Fraction(1)}


def test_exact_analysis_capacity():
    with pytest.raises(CapacityError):
        exact_marginal(ModelParams(n=8, d=3), 1, "delete")


def test_sampler_edge_cases():
    rng = random.Random(1)
    k, f = sample_f(ModelParams(n=5, d=2, m=0), rng)
    assert f == k
    k, f = sample_f(ModelParams(n=5, d=2, m=5), rng)
    assert f == complete_graph(5)
    k, f = sample_fminus(ModelParams(n=5, d=2, m=0), rng)
    assert f == k
    k, f = sample_fminus(ModelParams(n=5, d=2, m=5), rng)
    assert f == empty_graph(5)
    with pytest.raises(ValueError):
        sample_f(ModelParams(n=5, d=2, m=6), rng)
    with pytest.raises(ValueError):
        sample_fminus(ModelParams(n=5, d=2, m=6), rng)


def test_sample_f_matches_closed_form_law():
    params = ModelParams(n=5, d=2, m=2)
    law = closed_form_law(params, params.steps_upper - 2, "delete")
    rng = random.Random(99)
    samples = [canonical_key(sample_f(params, rng)[1]) for _ in range(20000)]
    fit = chi_square_uniformity(samples, law)
    assert fit.p_value > 1e-3, fit.statistic


def test_sample_fminus_matches_closed_form_law():
    params = ModelParams(n=5, d=2, m=2)
    law = closed_form_law(params, params.steps_lower - 2, "add")
    rng = random.Random(100)
    samples = [canonical_key(sample_fminus(params, rng)[1]) for _ in range(20000)]
    fit = chi_square_uniformity(samples, law)
    assert fit.p_value > 1e-3, fit.statistic


def test_gstar_law_is_binomial_random_graph():
    # uniform over graphs with each edge count, edge count binomial: the full
    # atom law of G(n, (1+eps)d/n)
    params = ModelParams(n=5, d=2)
    p_star = params.p_upper
    from sandwichlab.graphs import graph_from_mask
    law = {}
    for mask in range(1 << 10):
        g = graph_from_mask(5, mask)
        e = g.edge_count()
        law[canonical_key(g)] = p_star ** e * (1 - p_star) ** (10 - e)
    samples = []
    for seed in range(20000):
        _, gstar = run_gstar(params, RandomnessTape(5, derive_seed(7, seed)))
        samples.append(canonical_key(gstar))
    fit = chi_square_uniformity(samples, law)
    assert fit.p_value > 1e-3, (fit.statistic, fit.dof)


def test_gsub_law_is_binomial_random_graph():
    params = ModelParams(n=5, d=2, eps=0.5)
    p_sub = params.p_lower
    from sandwichlab.graphs import graph_from_mask
    law = {}
    for mask in range(1 << 10):
        g = graph_from_mask(5, mask)
        e = g.edge_count()
        law[canonical_key(g)] = p_sub ** e * (1 - p_sub) ** (10 - e)
    samples = []
    for seed in range(20000):
        _, gsub = run_gsub(params, RandomnessTape(5, derive_seed(8, seed)))
        samples.append(canonical_key(gsub))
    fit = chi_square_uniformity(samples, law)
    assert fit.p_value > 1e-3, (fit.statistic, fit.dof)


def test_literal_single_step_agrees_with_kernel_weights():
    # one deletion step from a fixed non-symmetric graph: the removed edge's
    # law must match the conditioned kernel weights
    params = ModelParams(n=5, d=2)
    start = complete_graph(5).without_edge(1, 2)
    total, with_edge = spanning_profile(start, 2)
    weights = {e: total - with_edge.get(e, 0) for e in start.edges()}
    denom = sum(weights.values())
    law = {e: Fraction(w, denom) for e, w in weights.items() if w}
    mx = max(weights.values())
    observed = []
    for seed in range(20000):
        tape = RandomnessTape(5, derive_seed(11, seed))
        t = 0
        while True:
            t += 1
            e = tape.pair(t)
            if not start.has_edge(*e):
                continue
            c = weights.get(e, 0)
            x = tape.x(t)
            a, b = x.as_integer_ratio()
            if c > 0 and a * mx <= c * b:
                observed.append(e)
                break
    fit = chi_square_uniformity(observed, law)
    assert fit.p_value > 1e-3, fit.statistic


def test_dn_odd_rejected_by_processes():
    with pytest.raises(ValueError):
        run_upper_deletion(ModelParams(n=5, d=3), RandomnessTape(5, 0))


def test_literal_single_add_step_agrees_with_kernel_weights():
    # one addition step from a fixed partial graph: the added edge's law must
    # match the extension-count kernel weights
    from sandwichlab.oracle import extension_profile
    start = SimpleGraph(5, [(1, 2), (3, 4)])
    _, tally = extension_profile(start, 2)
    weights = {e: c for e, c in tally.items() if c}
    denom = sum(weights.values())
    law = {e: Fraction(w, denom) for e, w in weights.items()}
    mx = max(weights.values())
    observed = []
    for seed in range(20000):
        tape = RandomnessTape(5, derive_seed(12, seed))
        t = 0
        while True:
            t += 1
            e = tape.pair(t)
            if start.has_edge(*e):
                continue
            c = weights.get(e, 0)
            x = tape.x(t)
            a, b = x.as_integer_ratio()
            if c > 0 and a * mx <= c * b:
                observed.append(e)
                break
    fit = chi_square_uniformity(observed, law)
    assert fit.p_value > 1e-3, fit.statistic


def test_transcript_records_argmax_diagnostics():
    params = ModelParams(n=5, d=2)
    transcript, _ = run_upper_deletion(params, RandomnessTape(5, 3))
    for step in transcript.steps:
        assert step.argmax_edges >= 1
    # at the first stage every edge of the complete graph achieves the max
    assert transcript.steps[0].argmax_edges == 10


def test_gsub_zero_slack_collects_first_distinct_edges():
    # with eta = 0 the lower reference graph keeps every first-appearance edge
    params = ModelParams(n=6, d=3, eta=0.0)
    transcript, _ = run_gsub(params, RandomnessTape(6, 5))
    assert transcript.meta["e_h_horizon"] == transcript.meta["horizon"]
    assert all(step.accepted for step in transcript.steps)
