"""Path-polynomial quantities, concentration-bound evaluators, the schedule
mass check, and goodness-of-fit machinery.

The polynomial statistics treat the count of alternating x,y-paths as a
positive polynomial in independent edge indicators and compute its expectation
together with the conditioned expectations over forced edge subsets, all as
exact rationals.  The concentration bounds are evaluated literally; no
inequality is re-proved here, only computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from scipy import stats as _scipy_stats

from .graphs import SimpleGraph, canonical_pair, complement, vertex_mask, _bits
from .oracle import CapacityError, count_regular_spanning_subgraphs, enumerate_regular
from .coupling import DistributionTable, ModelParams, eta_schedule


class ModelViolationError(ValueError):
    """An observed sample falls outside the support of the reference law."""


# -- path polynomial statistics ---------------------------------------------------

@dataclass
class PolynomialStat:
    """Expectation profile of the alternating-path count polynomial."""

    e_y: Fraction
    e_prime: Fraction
    e_max: Fraction
    by_order: dict
    skeleton_count: int
    deviation_bound: float

    def check(self):
        if self.e_max != max(self.e_y, self.e_prime):
            raise ValueError("inconsistent maxima")
        return self


def _skeleton_odd_edges(non_k_adj, k_adj, x, y, k, zmask, n):
    """Yield the set of odd-position (non-K) edges of each alternating path.

    Paths run x to y with 2k edges, odd positions on non-K pairs and even
    positions on K edges, no interior vertex in the avoided set.  This is an
    independent enumeration from the switching module's counter.
    """
    out = []
    path = [x]

    def extend(v, visited, step):
        row = non_k_adj[v] if step % 2 == 1 else k_adj[v]
        if step == 2 * k:
            if (row >> y) & 1 and not (visited >> y) & 1:
                odd = frozenset(
                    canonical_pair(path[i], path[i + 1])
                    for i in range(0, len(path) - 1, 2)
                )
                # final edge is even-position (K) for step parity 2k
                out.append(odd)
            return
        for w in _bits(row & ~visited & ~zmask):
            path.append(w)
            extend(w, visited | (1 << w), step + 1)
            path.pop()

    extend(x, 1 << x, 1)
    return out


def path_polynomial_stats(k_graph: SimpleGraph, p, x: int, y: int, k: int,
                          z=()) -> PolynomialStat:
    """Expectation profile of Y = #((random excess, K)-alternating x,y-paths).

    Each non-K pair is present independently with probability p; Y sums over
    length-2k alternating paths avoiding interior vertices in z.  E Y is the
    skeleton count times p^k; the order-i value is the maximum over forced
    i-subsets A of the conditioned expectation, p^(k-i) times the number of
    skeletons whose non-K edges contain A.  The reported deviation bound is
    the standard multivariate-polynomial concentration bound evaluated at
    alpha = log^2 n.
    """
    if k < 1 or k > 4:
        raise CapacityError("path polynomial order limited to k <= 4")
    n = k_graph.n
    if x == y:
        raise ValueError("endpoints must be distinct")
    zmask = vertex_mask(z)
    if zmask & ((1 << x) | (1 << y)):
        raise ValueError("avoid set must not contain the endpoints")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0,1]")
    non_k = complement(k_graph)
    skeletons = _skeleton_odd_edges(non_k.adj, k_graph.adj, x, y, k, zmask, n)
    e_y = Fraction(len(skeletons)) * p ** k
    by_order = {0: e_y}
    for order in range(1, k + 1):
        best = 0
        tally = {}
        for odd in skeletons:
            for subset in combinations(sorted(odd), order):
                tally[subset] = tally.get(subset, 0) + 1
        if tally:
            best = max(tally.values())
        by_order[order] = Fraction(best) * p ** (k - order)
    e_prime = max((by_order[i] for i in range(1, k + 1)), default=Fraction(0))
    e_max = max(e_y, e_prime)
    alpha = math.log(n) ** 2
    deviation = (8 ** k) * math.sqrt(math.factorial(k)) \
        * math.sqrt(float(e_max) * float(e_prime)) * alpha ** k
    return PolynomialStat(e_y, e_prime, e_max, by_order, len(skeletons),
                          deviation).check()


# -- concentration bound evaluators --------------------------------------------------

def mcdiarmid_bound(mu: float, eps: float) -> float:
    """Upper-tail bound exp(-eps^2*mu / (2*(1+eps/3))) for sums of [0,1] variables."""
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return 1.0
    return math.exp(-eps * eps * mu / (2 * (1 + eps / 3)))


def chernoff_bound(mu: float, gamma: float) -> float:
    """Two-sided binomial bound 2*exp(-mu*gamma^2/3)."""
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0,1)")
    return 2 * math.exp(-mu * gamma * gamma / 3)


# -- schedule mass -------------------------------------------------------------------

@dataclass
class ScheduleMass:
    e_s: float
    r: int
    passed: bool
    horizon: int
    base_sum: float


def schedule_mass(params: ModelParams) -> ScheduleMass:
    """Finite sum E S of the companion-threshold failure probabilities.

    E S = sum over the first N = C(n,2)-dn/2-2R stages of
    eta_{i+R-1}*(dn/2)/(C(n,2)-dn/2-R-i+1); reported against the budget R/2.
    E S is computed as c0 times a c0-free base sum, so scaling in c0 is exact.
    """
    params.require_even()
    schedule = eta_schedule(params)
    r = schedule.R
    horizon = max(0, params.n_budget)
    logn = math.log(params.n)
    dn_half = params.d * params.n / 2
    base = 0.0
    for i in range(1, horizon + 1):
        j = params.steps_upper - r - i + 1
        eta_base = max(params.mu / logn, (params.n * logn / j) ** 0.125)
        base += eta_base * dn_half / j
    e_s = params.c0 * base
    return ScheduleMass(e_s, r, e_s <= r / 2, horizon, base)


# -- goodness of fit -----------------------------------------------------------------

@dataclass
class FitResult:
    statistic: float
    dof: int
    p_value: float
    cells: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "dof": self.dof,
                "p_value": self.p_value, "cells": len(self.cells)}


def chi_square_uniformity(samples, law, min_expected: float = 5.0) -> FitResult:
    """Pearson chi-square of observed sample keys against an exact law.

    law maps keys to probabilities (a DistributionTable works).  Cells with
    expected count below min_expected are pooled, smallest first.  A sample
    key outside the law raises ModelViolationError.
    """
    if isinstance(law, DistributionTable):
        probs = law.probs
    else:
        probs = law
    counts = {}
    total = 0
    for key in samples:
        if key not in probs:
            raise ModelViolationError(f"sample key {key!r} not in the reference law")
        counts[key] = counts.get(key, 0) + 1
        total += 1
    cells = sorted(((float(p) * total, counts.get(key, 0), key)
                    for key, p in probs.items()), key=lambda c: c[0])
    pooled_exp = 0.0
    pooled_obs = 0
    kept = []
    for exp, obs, key in cells:
        if exp < min_expected or (pooled_exp and pooled_exp < min_expected):
            pooled_exp += exp
            pooled_obs += obs
        else:
            kept.append((key, obs, exp))
    if pooled_exp:
        kept.append(("pooled", pooled_obs, pooled_exp))
    if len(kept) < 2:
        return FitResult(0.0, 0, 1.0, kept)
    statistic = sum((obs - exp) ** 2 / exp for _, obs, exp in kept)
    dof = len(kept) - 1
    p_value = float(_scipy_stats.chi2.sf(statistic, dof))
    return FitResult(statistic, dof, p_value, kept)


@dataclass
class RateEstimate:
    successes: int
    trials: int
    rate: float
    lo: float
    hi: float
    confidence: float


def containment_rate(outcomes, confidence: float = 0.99) -> RateEstimate:
    """Success frequency with an exact (Clopper-Pearson) binomial interval."""
    outcomes = list(outcomes)
    trials = len(outcomes)
    if trials == 0:
        raise ValueError("no trials")
    successes = sum(1 for o in outcomes if o)
    alpha = 1 - confidence
    if successes == 0:
        lo = 0.0
    else:
        lo = float(_scipy_stats.beta.ppf(alpha / 2, successes, trials - successes + 1))
    if successes == trials:
        hi = 1.0
    else:
        hi = float(_scipy_stats.beta.ppf(1 - alpha / 2, successes + 1,
                                         trials - successes))
    return RateEstimate(successes, trials, successes / trials, lo, hi, confidence)


# -- translation identity --------------------------------------------------------------

@dataclass
class TranslationReport:
    lhs: Fraction
    rhs: Fraction
    equal: bool
    bad_fraction_tail: dict
    pairs_checked: int


def translation_check(params: ModelParams, predicate,
                      thresholds=(0.0, 0.25, 0.5, 0.75)) -> TranslationReport:
    """Exact identity transferring planted-pair properties to most subgraphs.

    The probability that the planted pair (F, K) fails the predicate equals
    the double enumeration over supergraphs F and their regular spanning
    subgraphs, both normalized by |K_d(n)| * C(C(n,2)-dn/2, m).  The report
    also carries, for each threshold t, the exact probability that a random F
    has a failing-subgraph proportion exceeding t.
    """
    params.require_even()
    params._need_m()
    if params.n > params.exact_ceiling:
        raise CapacityError(f"n={params.n} exceeds exact-analysis ceiling "
                            f"{params.exact_ceiling}")
    n, d, m = params.n, params.d, params.m
    if not 0 <= m <= params.steps_upper:
        raise ValueError("m out of range")
    from .graphs import complete_graph, pair_list

    denominator = (count_regular_spanning_subgraphs(complete_graph(n), d)
                   * math.comb(params.steps_upper, m))
    # left side: enumerate the planted pairs (K, E)
    lhs_bad = 0
    pairs = 0
    for k in enumerate_regular(complete_graph(n), d):
        non_edges = complement(k).edges()
        for extra in combinations(non_edges, m):
            f = SimpleGraph(n, k.edges() + list(extra))
            pairs += 1
            if not predicate(f, k):
                lhs_bad += 1
    lhs = Fraction(lhs_bad, denominator)
    # right side: enumerate supergraphs and their regular spanning subgraphs
    rhs_bad = 0
    tail = {t: Fraction(0) for t in thresholds}
    target_edges = params.dn_half + m
    for edges in combinations(pair_list(n), target_edges):
        f = SimpleGraph(n, edges)
        members = list(enumerate_regular(f, d))
        if not members:
            continue
        bad = sum(1 for k in members if not predicate(f, k))
        rhs_bad += bad
        f_prob = Fraction(len(members), denominator)
        frac = Fraction(bad, len(members))
        for t in thresholds:
            if frac > t:
                tail[t] += f_prob
    rhs = Fraction(rhs_bad, denominator)
    return TranslationReport(lhs, rhs, lhs == rhs, tail, pairs)
