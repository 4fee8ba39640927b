"""Acceptance gate: ten headline checks, one pass/fail line each.

Each criterion prints ``ACCEPTANCE NN PASS/FAIL`` with its runtime and
then asserts, so a red line always names the criterion that broke.
Schedules produced along the way are pooled and replayed by the final
token-conservation check.
"""

import itertools
import math
from fractions import Fraction
from time import perf_counter

from teleroute.bounds import (
    cut_value,
    diam_expansion_rhs,
    family_witness_cut,
    vertex_expansion_exact,
)
from teleroute.execute import TokenState, apply_timestep, verify_schedule
from teleroute.graphs import (
    Permutation,
    diameter,
    generate_graph,
    generate_permutation,
)
from teleroute.schedule import Schedule
from teleroute.sparse_routing import Train, advance_train, sparse_route
from teleroute.swap_routing import route_generic
from teleroute.schedule import SwapLocal
from teleroute.tele_routing import (
    greedy_schedule,
    ladder_schedule,
    simulate_round_with_swaps,
)
from teleroute.teleport_circuit import emit_teleport_circuit, verify_teleportation

CORPUS: list = []  # (graph, schedule) pairs replayed by criterion 10


def report(num, desc, ok, t0, budget, extra=""):
    elapsed = perf_counter() - t0
    timely = elapsed < budget
    status = "PASS" if (ok and timely) else "FAIL"
    line = (f"ACCEPTANCE {num:02d} {status}: {desc} "
            f"[{elapsed:.2f}s < {budget:.0f}s]{extra}")
    print(line, flush=True)
    assert ok, line
    assert timely, line


def test_criterion_01_diameter_pair_advantage():
    t0 = perf_counter()
    ok = True
    points = []
    for n in (7, 15, 31, 63):
        g = generate_graph("path", n=n)
        pi = generate_permutation("diam", g)
        tele = greedy_schedule(g, pi)
        swap = route_generic(g, pi)
        ok &= verify_schedule(g, tele, pi) and verify_schedule(g, swap, pi)
        ok &= tele.num_timesteps() == 1 and tele.depth() == 1
        sd = swap.depth()
        ok &= n - 1 <= sd <= 3 * n
        points.append((n, sd / tele.depth()))
        CORPUS.append((g, tele))
        CORPUS.append((g, swap))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    m = len(xs)
    slope = ((m * sum(x * y for x, y in points) - sum(xs) * sum(ys))
             / (m * sum(x * x for x in xs) - sum(xs) ** 2))
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        growth = (y2 - y1) / (x2 - x1)
        ok &= 0.75 * slope <= growth <= 1.25 * slope
    report(1, "path diameter pairs: 1 round vs linear swap depth", ok, t0, 1.0)


def test_criterion_02_rainbow_round_scaling():
    t0 = perf_counter()
    ok = True
    g = generate_graph("path", n=256)
    lo = Fraction(1, g.ancilla_budget // 2)
    ratios = []
    for alpha in (0.25, 0.5, 0.75):
        pi = generate_permutation("rainbow", g, alpha=alpha)
        sched = greedy_schedule(g, pi)
        ok &= verify_schedule(g, sched, pi)
        ratio = Fraction(sched.depth(), int(256 ** alpha))
        ok &= lo <= ratio <= 1
        ratios.append(f"a={alpha}:{ratio}")
        CORPUS.append((g, sched))
    report(2, "rainbow rounds track floor(N^alpha)", ok, t0, 5.0,
           " (" + ", ".join(ratios) + ")")


def test_criterion_03_wheel_single_round():
    t0 = perf_counter()
    ok = True
    floors = []
    for rim in (8, 16):
        for l in (2, 4):
            g = generate_graph("wheel", n=rim)
            pi = generate_permutation("wheel", g, l=l)
            tele = greedy_schedule(g, pi)
            swap = route_generic(g, pi)
            ok &= verify_schedule(g, tele, pi) and verify_schedule(g, swap, pi)
            ok &= tele.num_timesteps() == 1
            ok &= swap.depth() <= 3 * min(l, rim // l) + 2
            floors.append(f"W_{rim + 1},l={l}: swap {swap.depth()}, "
                          f"floor {min(2 * l, rim // l - 1)}")
            CORPUS.append((g, tele))
            CORPUS.append((g, swap))
    report(3, "wheel segment exchange: 1 round, bounded swap depth",
           ok, t0, 1.0, " (" + "; ".join(floors) + ")")


def test_criterion_04_ladder_hundred_permutations():
    t0 = perf_counter()
    ok = True
    worst_inc = worst_load = 0
    for n in (3, 4, 5):
        g = generate_graph("ladder", n=n)
        for seed in range(100):
            pi = generate_permutation("random", g, seed=seed)
            sched = ladder_schedule(g, pi)
            want = 0 if pi.is_identity() else 1
            ok &= sched.num_timesteps() == want
            for step in sched.timesteps:
                for rnd in step:
                    for v in rnd.vertices():
                        worst_inc = max(worst_inc, rnd.incidence(v))
                        worst_load = max(worst_load, rnd.load(v))
            ok &= verify_schedule(g, sched, pi)
            if seed % 10 == 0:
                CORPUS.append((g, sched))
    ok &= worst_inc <= 4 and worst_load <= 6
    report(4, "ladder: 300 random permutations in one round each",
           ok, t0, 10.0, f" (max incidence {worst_inc}, max load {worst_load})")


def test_criterion_05_sparse_routing_caps():
    t0 = perf_counter()
    ok = True
    for side in (5, 7):
        g = generate_graph("grid", n=side, d=2)
        dm = diameter(g)
        for k in (2, 4, 8):
            pi = generate_permutation("random", g, seed=40 + k, k=k)
            sched = sparse_route(g, pi)
            ok &= verify_schedule(g, sched, pi)
            ok &= sched.num_timesteps() <= 20 * (dm + k)
            CORPUS.append((g, sched))
    # every train advance is exactly five timesteps
    g = generate_graph("path", n=6)
    state = TokenState(g)
    apply_timestep(g, state, [SwapLocal(v, 0, 1) for v in range(3, 6)])
    train = Train((0, 1, 2), 5)
    for _ in range(3):
        steps, train = advance_train(g, state, train)
        ok &= len(steps) == 5
    report(5, "sparse router under 20*(diam+k), 5-timestep advances",
           ok, t0, 10.0)


def _family_instances(max_n=20):
    for n in range(2, max_n + 1):
        yield generate_graph("path", n=n)
        yield generate_graph("complete", n=n)
    for rim in range(3, max_n):
        if rim + 1 <= max_n:
            yield generate_graph("wheel", n=rim)
    for n in (2, 3, 4):
        yield generate_graph("ladder", n=n)
    for d in (1, 2, 3, 4):
        yield generate_graph("hypercube", d=d)
    yield generate_graph("butterfly", r=2)
    for n, d in ((2, 2), (3, 2), (4, 2), (2, 3), (2, 4)):
        yield generate_graph("grid", n=n, d=d)


def test_criterion_06_diameter_expansion_tradeoff():
    t0 = perf_counter()
    violations = []
    count = 0
    for g in _family_instances():
        count += 1
        c, _ = vertex_expansion_exact(g)
        rhs = diam_expansion_rhs(g.n, c)
        if diameter(g) > rhs:
            violations.append((g.family, g.n))
    report(6, f"diameter-expansion bound on {count} instances",
           not violations, t0, 60.0,
           f" (violations: {violations})" if violations else "")


def _brute_expansion(n, edges):
    """Independent exact expansion: pure-python subset sweep returning
    the minimum ratio and every argmin cut."""
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    best = None
    argmins = []
    for mask in range(1, (1 << n) - 1):
        cut = [v for v in range(n) if mask >> v & 1]
        outside = set()
        for v in cut:
            outside |= nbrs[v]
        outside.difference_update(cut)
        ratio = Fraction(len(outside), min(len(cut), n - len(cut)))
        if best is None or ratio < best:
            best = ratio
            argmins = [frozenset(cut)]
        elif ratio == best:
            argmins.append(frozenset(cut))
    return best, argmins


def _is_ball_with_shell_prefix(d, cut):
    """True when the cut is a Hamming ball around some center plus a
    partial next shell (the Harper extremal shape)."""
    n = 1 << d
    S = set(cut)
    for center in range(n):
        dist = [bin(v ^ center).count("1") for v in range(n)]
        for r in range(-1, d + 1):
            ball = {v for v in range(n) if dist[v] <= r}
            if not ball <= S:
                break
            rest = S - ball
            if all(dist[v] == r + 1 for v in rest):
                return True
    return False


def test_criterion_07_expansion_witnesses():
    t0 = perf_counter()
    ok = True
    g = generate_graph("butterfly", r=3)
    c, _ = vertex_expansion_exact(g)
    ok &= c <= Fraction(2, 3)
    witness = family_witness_cut(g)
    ok &= witness is not None and cut_value(g, witness) == Fraction(2, 3)
    notes = [f"butterfly c={c}"]
    for d in (3, 4):
        q = generate_graph("hypercube", d=d)
        c_lib, _ = vertex_expansion_exact(q)
        c_brute, argmins = _brute_expansion(q.n, q.edges)
        ok &= c_lib == c_brute
        ok &= any(_is_ball_with_shell_prefix(d, cut) for cut in argmins)
        notes.append(f"Q_{d} c={c_lib}")
    report(7, "expansion witnesses: bit-fixing cut and Harper balls",
           ok, t0, 60.0, " (" + ", ".join(notes) + ")")


def test_criterion_08_teleportation_circuit_sweep():
    t0 = perf_counter()
    ok = True
    layer_counts = set()
    for d in range(1, 65):
        circuit = emit_teleport_circuit(d)
        layer_counts.add(len(circuit.layers))
        ok &= verify_teleportation(circuit, d)
    ok &= len(layer_counts) == 1
    mutant = emit_teleport_circuit(3)
    mutant.layers = mutant.layers[:-1]
    ok &= not verify_teleportation(mutant, 3)
    report(8, "teleportation verifies for d in [1,64] at constant depth",
           ok, t0, 5.0, f" (layers {layer_counts})")


def _self_contained(rnd):
    sources = set()
    dests = set()
    for tr in rnd.transfers:
        sources.add(tr.path[0])
        dests.add(tr.path[-1])
        if tr.kind == "swap":
            sources.add(tr.path[-1])
            dests.add(tr.path[0])
    return dests <= sources


def test_criterion_09_round_swap_simulation():
    t0 = perf_counter()
    ok = True
    g = generate_graph("grid", n=8, d=2)
    dm = diameter(g)
    cap = 20 * (math.isqrt(g.n) + dm)
    rounds = []
    for k, seed in itertools.product((4, 8, 16, 24, 32), range(40)):
        if len(rounds) >= 50:
            break
        pi = generate_permutation("random", g, seed=seed, k=k)
        for step in greedy_schedule(g, pi).timesteps:
            for rnd in step:
                if _self_contained(rnd) and len(rounds) < 50:
                    rounds.append(rnd)
    ok &= len(rounds) == 50
    for rnd in rounds:
        state = TokenState(g)
        apply_timestep(g, state, [rnd])
        image = [None] * g.n
        for v in range(g.n):
            image[state.data(v)] = v
        target = Permutation(tuple(image))
        sim = simulate_round_with_swaps(g, rnd)
        ok &= verify_schedule(g, sim, target)
        ok &= sim.num_timesteps() <= cap
        CORPUS.append((g, sim))
        CORPUS.append((g, Schedule([[rnd]])))
    report(9, "50 teleportation rounds replayed with swaps", ok, t0, 10.0,
           f" (cap {cap})")


def test_criterion_10_token_conservation_everywhere():
    t0 = perf_counter()
    ok = len(CORPUS) > 0
    violations = 0
    checked = 0
    for g, sched in CORPUS:
        state = TokenState(g)
        expected = list(range(g.n))
        for t, step in enumerate(sched.timesteps):
            apply_timestep(g, state, step, t)
            checked += 1
            if state.tokens() != expected:
                violations += 1
    ok &= violations == 0
    report(10, f"token conservation at {checked} timesteps across "
               f"{len(CORPUS)} schedules", ok, t0, 60.0,
           f" (violations: {violations})" if violations else "")
