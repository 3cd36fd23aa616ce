"""The two coupled edge processes and their exact distribution analysis.

The upper pair (G, G*) comes from an edge-deletion process started at the
complete graph: at each stage the next tape edge inside the current graph is
removed with probability |K_d(F-e)| / max_f |K_d(F-f)|, while a companion
stage-indexed threshold rule deletes edges from an independent-looking copy
whose stage graphs are uniform given their edge count.  The lower pair
(G_*, G) is the mirror-image edge-addition process.  Simulation follows the
literal tape; exact verification pushes point masses through the conditioned
Markov kernel, whose transition weights are the oracle counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .graphs import (
    SimpleGraph,
    canonical_key,
    complement,
    complete_graph,
    empty_graph,
    is_regular,
    pair_list,
)
from .oracle import (
    CapacityError,
    count_extensions,
    count_regular_spanning_subgraphs,
    enumerate_regular,
    extension_profile,
    spanning_profile,
)
from .tape import RandomnessTape


@dataclass(frozen=True)
class ModelParams:
    """Model and process parameters; derived quantities are recomputed, never stored."""

    n: int
    d: int
    m: int = None
    eps: float = 0.9
    eta: float = 0.1
    c0: float = 1.0
    mu: float = 0.1
    tau_floor: float = 0.65
    exact_ceiling: int = 6

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.d <= self.n - 1:
            raise ValueError("need 0 <= d <= n-1")
        if self.m is not None and self.m < 0:
            raise ValueError("m must be nonnegative")
        if not 0.0 <= self.tau_floor <= 1.0:
            raise ValueError("tau_floor must lie in [0,1]")

    @property
    def npairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def dn_half(self) -> int:
        return self.d * self.n // 2

    @property
    def steps_upper(self) -> int:
        return self.npairs - self.dn_half

    @property
    def steps_lower(self) -> int:
        return self.dn_half

    @property
    def R(self) -> int:
        return int(self.eps * self.d * self.n / 8)

    @property
    def delta(self) -> float:
        """Expected excess degree 2m/n."""
        self._need_m()
        return 2 * self.m / self.n

    @property
    def p(self) -> float:
        """Non-edge inclusion probability m / (C(n,2) - dn/2)."""
        self._need_m()
        return self.m / (self.npairs - self.dn_half)

    @property
    def p_upper(self) -> float:
        return min(1.0, (1 + self.eps) * self.d / self.n)

    @property
    def p_lower(self) -> float:
        return max(0.0, (1 - self.eps) * self.d / self.n)

    @property
    def n_budget(self) -> int:
        """Stage horizon N = C(n,2) - dn/2 - 2R for the reference sequences."""
        return self.steps_upper - 2 * self.R

    @property
    def n_lower(self) -> int:
        """Stage horizon N = floor(dn/2 - eta*n) for the lower reference graph."""
        return max(0, int(self.d * self.n / 2 - self.eta * self.n))

    def _need_m(self):
        if self.m is None:
            raise ValueError("this quantity needs the planted edge count m")

    def require_even(self):
        if (self.d * self.n) % 2:
            raise ValueError("dn must be even for the coupled processes")


@dataclass(frozen=True)
class EtaSchedule:
    """The stage-dependent slack eta_i driving the companion deletion thresholds."""

    n: int
    d: int
    eps: float
    c0: float
    mu: float

    @property
    def limit(self) -> int:
        return self.n * (self.n - 1) // 2 - self.d * self.n // 2

    @property
    def R(self) -> int:
        return int(self.eps * self.d * self.n / 8)

    def eta(self, i: int) -> float:
        if i >= self.limit:
            return 0.0
        logn = math.log(self.n)
        return self.c0 * max(self.mu / logn, (self.n * logn / (self.limit - i)) ** 0.125)

    def values(self, upto: int = None) -> list:
        upto = self.limit if upto is None else upto
        return [self.eta(i) for i in range(upto)]


def eta_schedule(params: ModelParams) -> EtaSchedule:
    params.require_even()
    return EtaSchedule(params.n, params.d, params.eps, params.c0, params.mu)


def companion_threshold(params: ModelParams, schedule: EtaSchedule, i: int,
                        clamped: bool = True) -> float:
    """Stage-i acceptance threshold of the companion deletion rule.

    1 - eta_{i+R-1}*(dn/2)/(C(n,2)-dn/2-R-(i-1)) inside the scheduled regime,
    1 afterwards.  The raw value is negative at small n for the default
    constants, which would stall the stage process, so by default it is
    clamped into [tau_floor, 1]; the clamp depends on the stage index only,
    which is all the symmetry argument behind the stage law needs.
    """
    limit = params.steps_upper
    r = schedule.R
    if i > limit - r:
        return 1.0
    raw = 1.0 - schedule.eta(i + r - 1) * (params.d * params.n / 2) / (limit - r - (i - 1))
    if not clamped:
        return raw
    return min(1.0, max(params.tau_floor, raw))


# -- transcripts ------------------------------------------------------------

@dataclass
class TranscriptStep:
    stage: int
    tape_index: int
    edge: tuple
    threshold: float
    accepted: bool = True
    min_count: int = None
    max_count: int = None
    argmax_edges: int = None


@dataclass
class ProcessTranscript:
    kind: str
    n: int
    d: int
    steps: list
    final_edges: tuple
    meta: dict = field(default_factory=dict)

    def indices(self) -> list:
        return [s.tape_index for s in self.steps if s.accepted]

    def check_monotone(self) -> bool:
        idx = [s.tape_index for s in self.steps]
        return all(a < b for a, b in zip(idx, idx[1:]))


def _leq_ratio(x: float, num: int, den: int) -> bool:
    """Exact comparison x <= num/den for a float x and integer counts."""
    a, b = x.as_integer_ratio()
    return a * den <= num * b


def _scan_accept(tape, t, graph, counts, mx, want_member):
    """Advance the tape to the next accepted edge; returns (index, edge)."""
    while True:
        t += 1
        e = tape.pair(t)
        if graph.has_edge(*e) != want_member:
            continue
        c = counts.get(e, 0)
        if c > 0 and _leq_ratio(tape.x(t), c, mx):
            return t, e


# -- upper processes ----------------------------------------------------------

def run_upper_deletion(params: ModelParams, tape: RandomnessTape, cache=None):
    """Edge-deletion process from the complete graph down to a d-regular G.

    At each stage the acceptance ratio for removing e is
    |K_d(F-e)| / max_f |K_d(F-f)|, compared exactly against the tape variate.
    Returns (transcript, G); G is always d-regular on termination.
    """
    params.require_even()
    n, d = params.n, params.d
    f = complete_graph(n)
    steps = []
    t = 0
    for i in range(1, params.steps_upper + 1):
        total, with_edge = spanning_profile(f, d, cache=cache)
        counts = {e: total - with_edge.get(e, 0) for e in f.edges()}
        mx = max(counts.values())
        if mx <= 0:
            raise RuntimeError("deletion process stalled: no removable edge")
        t, e = _scan_accept(tape, t, f, counts, mx, want_member=True)
        f = f.without_edge(*e)
        steps.append(TranscriptStep(
            stage=i, tape_index=t, edge=e, threshold=counts[e] / mx,
            min_count=min(counts.values()), max_count=mx,
            argmax_edges=sum(1 for c in counts.values() if c == mx),
        ))
    assert is_regular(f, d)
    return ProcessTranscript("upper-deletion", n, d, steps, tuple(f.edges())), f


def run_gstar(params: ModelParams, tape: RandomnessTape):
    """Companion deletion process; returns (transcript, G*).

    Stage graphs are uniform over all graphs with their edge count because the
    threshold depends on the stage index alone.  The final graph is the stage
    with index C(n,2) - M where M is binomial(C(n,2), (1+eps)d/n) drawn from a
    dedicated substream, so e(G*) = M.
    """
    params.require_even()
    n = params.n
    schedule = eta_schedule(params)
    thresholds = [None] + [companion_threshold(params, schedule, i)
                           for i in range(1, params.npairs + 1)]
    g = complete_graph(n)
    removed = []
    steps = []
    t = 0
    for i in range(1, params.npairs + 1):
        tau = thresholds[i]
        while True:
            t += 1
            e = tape.pair(t)
            if not g.has_edge(*e):
                continue
            if tape.x(t) <= tau:
                break
        g = g.without_edge(*e)
        removed.append(e)
        steps.append(TranscriptStep(stage=i, tape_index=t, edge=e, threshold=tau))
    m_rng = tape.rng("upper-M")
    p_star = params.p_upper
    M = sum(1 for _ in range(params.npairs) if m_rng.random() < p_star)
    gstar = complete_graph(n)
    for e in removed[: params.npairs - M]:
        gstar = gstar.without_edge(*e)
    transcript = ProcessTranscript("companion-deletion", n, params.d, steps,
                                   tuple(gstar.edges()),
                                   meta={"M": M, "p_upper": p_star})
    return transcript, gstar


@dataclass
class ReferenceRun:
    """First-appearance deletion sequence and its threshold-gated shadow."""

    n: int
    R: int
    horizon: int
    k_indices: list
    edges: list
    deleted: list
    e_h_horizon: int
    e_gplus_horizon: int

    @property
    def failures(self) -> int:
        return sum(1 for ok in self.deleted[: self.horizon] if not ok)

    @property
    def budget_ok(self) -> bool:
        return self.e_gplus_horizon <= self.e_h_horizon + self.R


def run_reference_sequences(params: ModelParams, tape: RandomnessTape) -> ReferenceRun:
    """Run the H (always-delete) and G+ (threshold-gated) reference sequences.

    H removes every edge on its first tape appearance, so e(H_i) = C(n,2) - i;
    G+ applies the same stage thresholds as the companion process but never
    revisits a survivor.  The gap e(G+_N) - e(H_N) counts threshold failures
    among the first N distinct edges.
    """
    params.require_even()
    n = params.n
    schedule = eta_schedule(params)
    npairs = params.npairs
    horizon = params.n_budget
    seen = set()
    k_indices = []
    edges = []
    deleted = []
    t = 0
    for i in range(1, npairs + 1):
        while True:
            t += 1
            e = tape.pair(t)
            if e not in seen:
                break
        seen.add(e)
        k_indices.append(t)
        edges.append(e)
        tau = companion_threshold(params, schedule, i)
        deleted.append(tape.x(t) <= tau)
    e_h = npairs - horizon
    e_gplus = npairs - sum(1 for ok in deleted[:horizon] if ok)
    return ReferenceRun(n, schedule.R, horizon, k_indices, edges, deleted, e_h, e_gplus)


@dataclass
class CoupledUpperRun:
    params: ModelParams
    seed: object
    g: SimpleGraph
    gstar: SimpleGraph
    contained: bool
    f_transcript: ProcessTranscript
    gstar_transcript: ProcessTranscript
    reference: ReferenceRun


def run_coupled_upper(params: ModelParams, seed, cache=None) -> CoupledUpperRun:
    """Run both upper processes on one shared tape; contained = (G inside G*)."""
    tape = RandomnessTape(params.n, seed)
    f_tr, g = run_upper_deletion(params, tape, cache=cache)
    g_tr, gstar = run_gstar(params, tape)
    ref = run_reference_sequences(params, tape)
    return CoupledUpperRun(params, seed, g, gstar, g.is_subgraph_of(gstar),
                           f_tr, g_tr, ref)


def verify_transcript_interleaving(run: CoupledUpperRun) -> dict:
    """Deterministic cross-checks between the coupled transcripts.

    Checks the index interleaving k(i) <= l(i), m(i); the budget-conditional
    m(i) <= k(i+R); and, when the per-stage acceptance-ratio hypothesis holds
    along with m(j) <= l(j+R), the stagewise containment F_{i+R} inside G*_i.
    """
    params = run.params
    if run.f_transcript.n != run.gstar_transcript.n:
        raise ValueError("transcripts come from different vertex counts")
    ell = run.f_transcript.indices()
    m_idx = run.gstar_transcript.indices()
    k_idx = run.reference.k_indices
    report = {
        "monotone": run.f_transcript.check_monotone() and run.gstar_transcript.check_monotone()
        and all(a < b for a, b in zip(k_idx, k_idx[1:])),
        "k_le_ell": all(k_idx[i] <= ell[i] for i in range(len(ell))),
        "k_le_m": all(k_idx[i] <= m_idx[i] for i in range(len(ell))),
        "budget_ok": run.reference.budget_ok,
    }
    r = params.R
    horizon = params.n_budget
    if report["budget_ok"]:
        report["m_le_k_shifted"] = all(
            m_idx[i - 1] <= k_idx[i + r - 1] for i in range(1, max(0, horizon - r) + 1)
        )
    else:
        report["m_le_k_shifted"] = None

    # Per-stage hypothesis: min acceptance ratio at stage s at least the
    # (clamped) companion threshold R stages earlier.
    schedule = eta_schedule(params)
    hyp = [None]
    for step in run.f_transcript.steps:
        s = step.stage
        tau = companion_threshold(params, schedule, max(s - r, 1))
        hyp.append(step.min_count >= tau * step.max_count)
    f_stages = [complete_graph(params.n)]
    for step in run.f_transcript.steps:
        f_stages.append(f_stages[-1].without_edge(*step.edge))
    g_stages = [complete_graph(params.n)]
    for step in run.gstar_transcript.steps:
        g_stages.append(g_stages[-1].without_edge(*step.edge))

    checked = 0
    holds = True
    failures = []
    for i in range(1, horizon + 1):
        if i + r > len(f_stages) - 1:
            break
        if not all(m_idx[j - 1] <= ell[j + r - 1] for j in range(1, i + 1)):
            continue
        if not all(hyp[s] for s in range(1, min(i + r, len(hyp) - 1) + 1)):
            continue
        checked += 1
        if not f_stages[i + r].is_subgraph_of(g_stages[i]):
            holds = False
            failures.append(i)
    report["containment_chain"] = {"checked": checked, "holds": holds, "failures": failures}
    report["contained_flag_consistent"] = (
        run.contained == run.g.is_subgraph_of(run.gstar)
    )
    report["passed"] = (
        report["monotone"] and report["k_le_ell"] and report["k_le_m"]
        and (report["m_le_k_shifted"] in (True, None))
        and holds and report["contained_flag_consistent"]
    )
    return report


# -- lower processes ----------------------------------------------------------

def run_lower_addition(params: ModelParams, tape: RandomnessTape, cache=None):
    """Edge-addition process from the empty graph up to a d-regular G.

    The acceptance ratio for adding e is the extension-count ratio
    |{K : F+e in K}| / max_f |{K : F+f in K}|, compared exactly.
    """
    params.require_even()
    n, d = params.n, params.d
    f = empty_graph(n)
    steps = []
    t = 0
    for i in range(1, params.steps_lower + 1):
        total, tally = extension_profile(f, d, cache=cache)
        if total == 0:
            raise RuntimeError("addition process stalled: no extension exists")
        counts = {e: c for e, c in tally.items()}
        mx = max(counts.values())
        t, e = _scan_accept(tape, t, f, counts, mx, want_member=False)
        f = f.with_edge(*e)
        steps.append(TranscriptStep(
            stage=i, tape_index=t, edge=e, threshold=counts[e] / mx,
            min_count=min(counts.values()), max_count=mx,
            argmax_edges=sum(1 for c in counts.values() if c == mx),
        ))
    assert is_regular(f, d)
    return ProcessTranscript("lower-addition", n, d, steps, tuple(f.edges())), f


def run_gsub(params: ModelParams, tape: RandomnessTape):
    """Companion construction for the lower pair; returns (transcript, G_*).

    H collects each first-appearance edge with probability 1-eta; G_* is a
    uniform M-subset of E(H_N) when it is large enough, else of all pairs,
    with M binomial(C(n,2), (1-eps)d/n) from a dedicated substream.
    """
    params.require_even()
    n = params.n
    horizon = params.n_lower
    seen = set()
    steps = []
    h = empty_graph(n)
    t = 0
    for i in range(1, horizon + 1):
        while True:
            t += 1
            e = tape.pair(t)
            if e not in seen:
                break
        seen.add(e)
        accept = tape.x(t) <= 1.0 - params.eta
        if accept:
            h = h.with_edge(*e)
        steps.append(TranscriptStep(stage=i, tape_index=t, edge=e,
                                    threshold=1.0 - params.eta, accepted=accept))
    m_rng = tape.rng("lower-M")
    p_sub = params.p_lower
    M = sum(1 for _ in range(params.npairs) if m_rng.random() < p_sub)
    pick_rng = tape.rng("gsub-subset")
    h_edges = h.edges()
    if len(h_edges) >= M:
        chosen = pick_rng.sample(h_edges, M)
    else:
        chosen = pick_rng.sample(list(pair_list(n)), M)
    gsub = SimpleGraph(n, chosen)
    transcript = ProcessTranscript("companion-addition", n, params.d, steps,
                                   tuple(gsub.edges()),
                                   meta={"M": M, "p_lower": p_sub,
                                         "e_h_horizon": len(h_edges),
                                         "horizon": horizon})
    return transcript, gsub


@dataclass
class CoupledLowerRun:
    params: ModelParams
    seed: object
    g: SimpleGraph
    gsub: SimpleGraph
    contained: bool
    f_transcript: ProcessTranscript
    gsub_transcript: ProcessTranscript


def run_coupled_lower(params: ModelParams, seed, cache=None) -> CoupledLowerRun:
    """Run both lower processes on one shared tape; contained = (G_* inside G)."""
    tape = RandomnessTape(params.n, seed)
    f_tr, g = run_lower_addition(params, tape, cache=cache)
    s_tr, gsub = run_gsub(params, tape)
    return CoupledLowerRun(params, seed, g, gsub, gsub.is_subgraph_of(g), f_tr, s_tr)


# -- exact distribution analysis ------------------------------------------------

@dataclass
class DistributionTable:
    """Exact law over labeled graphs sharing one edge count."""

    n: int
    graphs: dict
    probs: dict

    def edge_count(self) -> int:
        counts = {g.edge_count() for g in self.graphs.values()}
        if len(counts) > 1:
            raise ValueError(f"mixed edge counts in support: {sorted(counts)}")
        return counts.pop() if counts else 0

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))

    def check(self):
        self.edge_count()
        if self.total() != 1:
            raise ValueError(f"probabilities sum to {self.total()}, not 1")
        return self


def point_mass(g: SimpleGraph) -> DistributionTable:
    key = canonical_key(g)
    return DistributionTable(g.n, {key: g}, {key: Fraction(1)})


def exact_kernel_step(dist: DistributionTable, d: int, direction: str,
                      cache=None) -> DistributionTable:
    """Push the law through one step of the conditioned transition kernel.

    Conditioned on a move happening, edge e is chosen with probability
    proportional to |K_d(F-e)| (delete) or |{K : F+e in K}| (add).  All
    arithmetic is exact rational; the output sums to exactly 1.
    """
    if direction not in ("delete", "add"):
        raise ValueError(f"unknown direction {direction!r}")
    graphs = {}
    probs = {}
    for key, g in dist.graphs.items():
        q = dist.probs[key]
        if direction == "delete":
            total, with_edge = spanning_profile(g, d, cache=cache)
            weights = {e: total - with_edge.get(e, 0) for e in g.edges()}
        else:
            _, tally = extension_profile(g, d, cache=cache)
            weights = dict(tally)
        denom = sum(weights.values())
        if denom == 0:
            raise RuntimeError(f"zero total transition weight at {key}")
        for e, w in weights.items():
            if not w:
                continue
            h = g.without_edge(*e) if direction == "delete" else g.with_edge(*e)
            hk = canonical_key(h)
            graphs[hk] = h
            probs[hk] = probs.get(hk, Fraction(0)) + q * Fraction(w, denom)
    return DistributionTable(dist.n, graphs, probs).check()


def exact_marginal(params: ModelParams, i: int, direction: str,
                   cache=None) -> DistributionTable:
    """Exact stage-i law obtained by iterating the conditioned kernel."""
    params.require_even()
    if params.n > params.exact_ceiling:
        raise CapacityError(f"n={params.n} exceeds exact-analysis ceiling "
                            f"{params.exact_ceiling}")
    if direction == "delete":
        if not 0 <= i <= params.steps_upper:
            raise ValueError("stage out of range")
        dist = point_mass(complete_graph(params.n))
    elif direction == "add":
        if not 0 <= i <= params.steps_lower:
            raise ValueError("stage out of range")
        dist = point_mass(empty_graph(params.n))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    for _ in range(i):
        dist = exact_kernel_step(dist, params.d, direction, cache=cache)
    return dist


def closed_form_law(params: ModelParams, i: int, direction: str,
                    cache=None) -> DistributionTable:
    """Exact stage-i law from the closed form.

    Delete direction: P(F) = |K_d(F)| / |K_d(n)| / C(C(n,2)-dn/2, C(n,2)-dn/2-i)
    over all F with C(n,2)-i edges.  Add direction: P(F) =
    |{K : F in K}| / |K_d(n)| / C(dn/2, dn/2-i) over all F with i edges.
    """
    params.require_even()
    if params.n > params.exact_ceiling:
        raise CapacityError(f"n={params.n} exceeds exact-analysis ceiling "
                            f"{params.exact_ceiling}")
    n, d = params.n, params.d
    k_total = count_regular_spanning_subgraphs(complete_graph(n), d, cache=cache)
    if direction == "delete":
        if not 0 <= i <= params.steps_upper:
            raise ValueError("stage out of range")
        edge_count = params.npairs - i
        denominator = k_total * math.comb(params.steps_upper, params.steps_upper - i)
        weight = lambda g: count_regular_spanning_subgraphs(g, d, cache=cache)
    elif direction == "add":
        if not 0 <= i <= params.steps_lower:
            raise ValueError("stage out of range")
        edge_count = i
        denominator = k_total * math.comb(params.steps_lower, params.steps_lower - i)
        weight = lambda g: count_extensions(g, d, cache=cache)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    graphs = {}
    probs = {}
    for edges in combinations(pair_list(n), edge_count):
        g = SimpleGraph(n, edges)
        w = weight(g)
        if w:
            key = canonical_key(g)
            graphs[key] = g
            probs[key] = Fraction(w, denominator)
    return DistributionTable(n, graphs, probs).check()


# -- planted-pair samplers -------------------------------------------------------

@lru_cache(maxsize=None)
def _all_regular(n: int, d: int) -> tuple:
    return tuple(enumerate_regular(complete_graph(n), d))


def uniform_regular(n: int, d: int, rng) -> SimpleGraph:
    """Exactly uniform d-regular graph on {1..n}.

    Small instances draw from the cached full enumeration; larger ones use the
    pairing model with restarts (uniform on simple graphs), run on the sparser
    of degree d and its complement degree.
    """
    from .graphs import random_regular_graph

    if (n * d) % 2:
        raise ValueError("dn must be even")
    if n <= 8:
        ks = _all_regular(n, d)
        if not ks:
            raise ValueError("no d-regular graph exists for these parameters")
        return rng.choice(ks)
    if d <= n - 1 - d:
        return random_regular_graph(n, d, rng)
    return complement(random_regular_graph(n, n - 1 - d, rng))


def sample_f(params: ModelParams, rng):
    """Sample the planted pair (K, F) with F = K plus m uniform non-edges."""
    params.require_even()
    params._need_m()
    if not 0 <= params.m <= params.steps_upper:
        raise ValueError(f"m={params.m} out of range for the planted supergraph model")
    k = uniform_regular(params.n, params.d, rng)
    extras = rng.sample(complement(k).edges(), params.m)
    f = SimpleGraph(params.n, k.edges() + extras)
    return k, f


def sample_fminus(params: ModelParams, rng):
    """Sample the planted pair (K, F) with F = K minus m uniform edges."""
    params.require_even()
    params._need_m()
    if not 0 <= params.m <= params.steps_lower:
        raise ValueError(f"m={params.m} out of range for the planted subgraph model")
    k = uniform_regular(params.n, params.d, rng)
    keep = set(k.edges()) - set(rng.sample(k.edges(), params.m))
    f = SimpleGraph(params.n, keep)
    return k, f
