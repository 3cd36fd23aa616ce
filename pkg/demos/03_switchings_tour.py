"""Tour of the switching constructions and their exact double counts.

Each auxiliary bipartite graph pairs two families of regular graphs and
records one edge per valid switching; enumerating from both sides must tell
one consistent story, so the degree sums are compared exactly.
"""

import random

from sandwichlab import (
    build_le_graph,
    build_lef_graph,
    build_six_cycle_graph,
    build_ten_cycle_graph,
    complement,
    enumerate_regular,
    parse_graph_literal,
    random_regular_graph,
    six_cycle_statistic,
    verify_double_count,
)

rng = random.Random(5)


def show(title, report):
    print(f"{title}: e(L) = {report['edges']}, "
          f"left sum {report['left_sum']}, right sum {report['right_sum']}, "
          f"degrees L[{report['left_min']},{report['left_max']}] "
          f"R[{report['right_min']},{report['right_max']}], "
          f"exact: {report['passed']}")


# single-edge switchings: trade e away along one alternating cycle
base = random_regular_graph(8, 3, rng)
host = base
for extra in rng.sample(complement(base).edges(), 4):
    host = host.with_edge(*extra)
k = next(iter(enumerate_regular(host, 3)))
e = k.edges()[0]
for ell in (1, 2):
    show(f"L_e (n=8, cycle length {2 * ell + 2})",
         verify_double_count(build_le_graph(host, 3, e, ell)))

# two-path switchings between the e-but-not-f and f-but-not-e classes
host10 = parse_graph_literal(
    "n=10;edges=1-2,1-4,1-6,1-8,1-9,1-10,2-3,2-5,2-7,2-9,2-10,3-5,3-8,3-9,"
    "4-7,4-8,4-9,5-6,5-7,6-7,6-8,6-10,9-10")
show("L_ef (n=10, two length-4 paths)",
     verify_double_count(build_lef_graph(host10, 3, (1, 8), (2, 3), 1)))

# six-cycle switchings walking a set statistic down by one.  A cycle with
# exactly two set vertices needs four outside vertices and one-in needs
# five, so the 6-vertex case only supports two-in with a 2-set.
from sandwichlab import complete_graph

members6 = list(enumerate_regular(complete_graph(6), 3))
w = {1, 2}
buckets = {}
for g in members6:
    buckets.setdefault(six_cycle_statistic(g, w, "two-in"), []).append(g)
value, family = max((kv for kv in buckets.items() if kv[0] > 0),
                    key=lambda kv: len(kv[1]))
show(f"six-cycle two-in (n=6, statistic {value}, full class of {len(family)})",
     verify_double_count(build_six_cycle_graph(3, w, "two-in", family)))

members8 = list(enumerate_regular(complete_graph(8), 3))
w = {1, 2, 3}
for mode in ("two-in", "one-in"):
    buckets = {}
    for g in members8:
        buckets.setdefault(six_cycle_statistic(g, w, mode), []).append(g)
    value, family = max((kv for kv in buckets.items() if kv[0] > 0),
                        key=lambda kv: len(kv[1]))
    show(f"six-cycle {mode} (n=8, statistic {value}, full class of {len(family)})",
         verify_double_count(build_six_cycle_graph(3, w, mode, family)))

# ten-cycle switchings between extension classes of a near-regular partial graph
for seed in range(60):
    inner = random.Random(9000 + seed)
    k10 = random_regular_graph(10, 3, inner)
    drop = inner.sample(k10.edges(), 6)
    f10 = k10
    for edge in drop:
        f10 = f10.without_edge(*edge)
    e = drop[0]
    partners = [fe for fe in complement(k10).edges() if not set(fe) & set(e)]
    if not partners:
        continue
    f_edge = partners[inner.randrange(len(partners))]
    report = verify_double_count(build_ten_cycle_graph(f10, 3, e, f_edge))
    if report["edges"]:
        show(f"ten-cycle (n=10, e={e}, f={f_edge})", report)
        break
