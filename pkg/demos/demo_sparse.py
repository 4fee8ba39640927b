"""Sparse permutations routed by token trains through ancilla slots.

A k-cycle on a grid moves as clusters that merge into trains; each
train advance costs exactly five timesteps regardless of graph size.
"""

from teleroute.execute import TokenState, apply_timestep, verify_schedule
from teleroute.graphs import diameter, generate_graph, generate_permutation
from teleroute.schedule import SwapLocal
from teleroute.sparse_routing import Train, advance_train, sparse_route


def main():
    g = generate_graph("grid", n=8, d=2)
    dm = diameter(g)
    print(f"8x8 grid, diameter {dm}")
    for k in (2, 4, 8, 16):
        pi = generate_permutation("random", g, seed=3, k=k)
        sched = sparse_route(g, pi)
        assert verify_schedule(g, sched, pi)
        print(f"  {k:2d}-cycle: {sched.num_timesteps():3d} timesteps "
              f"(cap 20*(diam+k) = {20 * (dm + k)})")

    # one train advancing down a cleared path: always five timesteps
    g = generate_graph("path", n=8)
    state = TokenState(g)
    apply_timestep(g, state, [SwapLocal(v, 0, 1) for v in range(3, 8)])
    train = Train((0, 1, 2), 7)
    hops = 0
    while set(train.vertices) != {5, 6, 7}:
        steps, train = advance_train(g, state, train)
        hops += 1
        print(f"  advance {hops}: {len(steps)} timesteps, "
              f"train now at {sorted(train.vertices)}")


if __name__ == "__main__":
    main()
