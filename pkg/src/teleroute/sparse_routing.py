"""Ancilla-assisted routing for sparse permutations.

A permutation moving only k of N tokens is routed in three phases:
hide the unmoved tokens in local ancilla slots, gather the k moving
tokens around a central vertex by advancing token trains, tree-route
the gathered tokens among themselves, then replay the hide/gather
timesteps in reverse (every timestep is an involution) to carry each
token from its gathered slot to its true destination.

A train is a directed path of occupied vertices that advances one
vertex toward its target per round; one round always costs exactly
five timesteps (two edge-swap layers, three ancilla layers), so a
gather that takes R rounds costs 5R timesteps and depth 2R.
"""

from __future__ import annotations

from dataclasses import dataclass

from .execute import TokenState, apply_timestep
from .graphs import (
    ArchGraph,
    Permutation,
    bfs_distances,
    eccentricity,
    graph_center,
    shortest_path,
    spanning_tree,
)
from .schedule import Schedule, SwapEdge, SwapLocal
from .swap_routing import route_tree

__all__ = ["Train", "TokenCluster", "advance_train", "step_clusters",
           "sparse_route"]


@dataclass(frozen=True)
class Train:
    """A maximal path of token-occupied vertices, tail first, head
    last, advancing toward ``target``."""

    vertices: tuple[int, ...]
    target: int

    @property
    def head(self) -> int:
        return self.vertices[-1]

    @property
    def tail(self) -> int:
        return self.vertices[0]


@dataclass(frozen=True)
class TokenCluster:
    """Trains whose tokens span a connected set of vertices."""

    trains: tuple[Train, ...]

    def vertices(self) -> set[int]:
        out: set[int] = set()
        for t in self.trains:
            out.update(t.vertices)
        return out


def _advance_plan(g: ArchGraph, state: TokenState, train: Train,
                  nxt: int) -> list[list]:
    """Validate and build the five timesteps that advance ``train`` one
    vertex onto ``nxt`` without touching the state."""
    p = list(train.vertices) + [nxt]
    l = len(train.vertices)
    if state.data(nxt) is not None:
        raise ValueError(
            f"advance_train: head blocked, vertex {nxt} already holds a "
            f"token in its data slot")
    slot: dict[int, int] = {}
    for j in range(1, l + 1, 2):
        if j == l and l % 2 == 0:
            continue
        s = state.free_slot(p[j])
        if s is None:
            raise ValueError(
                f"advance_train: no free ancilla slot at vertex {p[j]} "
                f"(budget {g.ancilla_budget} exhausted)")
        slot[j] = s
    steps: list[list] = [[], [], [], [], []]
    for j in range(1, l, 2):  # park tokens at odd train positions
        steps[0].append(SwapLocal(p[j], 0, slot[j]))
    for i in range(0, l, 2):  # even positions step forward
        steps[1].append(SwapEdge(p[i], p[i + 1]))
        steps[2].append(SwapLocal(p[i + 1], 0, slot[i + 1]))
    for i in range(1, l, 2):  # odd positions step forward
        steps[3].append(SwapEdge(p[i], p[i + 1]))
    for j in range(1, l + 1, 2):  # unpark
        if j == l and l % 2 == 0:
            continue
        steps[4].append(SwapLocal(p[j], 0, slot[j]))
    return steps


def advance_train(g: ArchGraph, state: TokenState,
                  train: Train) -> tuple[list[list], Train]:
    """Advance ``train`` one vertex toward its target, mutating
    ``state``.  Always returns exactly five timesteps (some possibly
    empty) plus the shifted train.  Raises without touching the state
    if the vertex ahead is occupied or a needed ancilla slot is
    missing."""
    head = train.head
    if head == train.target:
        raise ValueError("advance_train: train is already at its target")
    nxt = shortest_path(g, head, train.target)[1]
    steps = _advance_plan(g, state, train, nxt)
    for ops in steps:
        apply_timestep(g, state, ops)
    return steps, Train(train.vertices[1:] + (nxt,), train.target)


def _regroup(g: ArchGraph, trains: list[Train], r: int,
             dist: dict[int, int]) -> list[TokenCluster]:
    """Concatenate head-to-tail trains, then group trains into clusters
    by token adjacency."""
    trains = list(trains)
    changed = True
    while changed:
        changed = False
        for i, t1 in enumerate(trains):
            for j, t2 in enumerate(trains):
                if i == j:
                    continue
                # only join when t2 continues t1 toward the target, so
                # train bodies stay monotone in distance
                if (g.has_edge(t1.head, t2.tail)
                        and dist[t2.tail] == dist[t1.head] - 1):
                    trains[i] = Train(t1.vertices + t2.vertices, r)
                    del trains[j]
                    changed = True
                    break
            if changed:
                break

    labels = list(range(len(trains)))

    def find(a: int) -> int:
        while labels[a] != a:
            labels[a] = labels[labels[a]]
            a = labels[a]
        return a

    for i, t1 in enumerate(trains):
        for j in range(i + 1, len(trains)):
            t2 = trains[j]
            if any(g.has_edge(u, v) or u == v
                   for u in t1.vertices for v in t2.vertices):
                ra, rb = find(i), find(j)
                if ra != rb:
                    labels[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[Train]] = {}
    for i in range(len(trains)):
        groups.setdefault(find(i), []).append(trains[i])
    return [TokenCluster(tuple(groups[root]))
            for root in sorted(groups)]


def step_clusters(g: ArchGraph, state: TokenState,
                  clusters: list[TokenCluster], r: int
                  ) -> tuple[TokenState, list[list], list[TokenCluster]]:
    """One gathering round: in every cluster the train with head
    closest to r advances one vertex (all clusters share the same five
    timesteps); clusters that become adjacent merge and head-to-tail
    trains concatenate.  Lower-index clusters win vertex conflicts."""
    dist = bfs_distances(g, r)
    batch: list[list] = [[], [], [], [], []]
    claimed: set[int] = set()
    new_trains: list[Train] = []
    for cluster in clusters:
        chosen = None
        for train in sorted(cluster.trains,
                            key=lambda t: (dist[t.head], t.head)):
            if dist[train.head] == 0:
                continue
            nxt = shortest_path(g, train.head, r)[1]
            if state.data(nxt) is not None:
                continue
            footprint = set(train.vertices) | {nxt}
            if footprint & claimed:
                continue
            chosen = (train, nxt, footprint)
            break
        if chosen is None:
            new_trains.extend(cluster.trains)
            continue
        train, nxt, footprint = chosen
        claimed |= footprint
        plan = _advance_plan(g, state, train, nxt)
        for t in range(5):
            batch[t].extend(plan[t])
        new_trains.append(Train(train.vertices[1:] + (nxt,), r))
        new_trains.extend(t for t in cluster.trains if t is not train)
    for ops in batch:
        apply_timestep(g, state, ops)
    return state, batch, _regroup(g, new_trains, r, dist)


def sparse_route(g: ArchGraph, pi: Permutation) -> Schedule:
    """Route a sparse permutation: hide fixed tokens, gather the moving
    ones around the graph center, tree-route them, and replay the
    gather in reverse.  Depth stays within 20 * (diameter + k)."""
    if pi.n != g.n:
        raise ValueError("permutation size does not match the graph")
    if g.ancilla_budget < 1:
        raise ValueError("sparse_route requires at least one ancilla "
                         "slot per vertex")
    support = pi.support()
    if not support:
        return Schedule([])
    k = len(support)
    r = graph_center(g)
    state = TokenState(g)

    # phase 1: hide every fixed token, then gather the movers
    forward: list[list] = []
    hide = []
    for v in range(g.n):
        if v not in support:
            s = state.free_slot(v)
            hide.append(SwapLocal(v, 0, s))
    apply_timestep(g, state, hide)
    forward.append(hide)

    dist = bfs_distances(g, r)
    trains = [Train((v,), r) for v in sorted(support)]
    clusters = _regroup(g, trains, r, dist)
    cap = 5 * (eccentricity(g, r) + k) + 10
    rounds = 0
    while len(clusters) > 1:
        rounds += 1
        if rounds > cap:
            raise AssertionError("gathering failed to converge")
        state, batch, clusters = step_clusters(g, state, clusters, r)
        forward.extend(batch)

    # phase 2: tree-route the gathered tokens among themselves
    gathered = sorted(state.locate(tok)[0] for tok in support)
    index_of = {v: i for i, v in enumerate(gathered)}
    sub_edges = tuple(sorted(
        (index_of[u], index_of[v])
        for i, u in enumerate(gathered) for v in gathered[i + 1:]
        if g.has_edge(u, v)))
    sub = ArchGraph(k, sub_edges, ancilla_budget=g.ancilla_budget)
    tree = ArchGraph(k, tuple(sorted(spanning_tree(sub, 0))),
                     ancilla_budget=g.ancilla_budget)
    image = [None] * k
    for tok in support:
        image[index_of[state.locate(tok)[0]]] = \
            index_of[state.locate(pi(tok))[0]]
    sub_pi = Permutation(tuple(image))
    middle: list[list] = []
    for step in route_tree(tree, sub_pi).timesteps:
        ops = [SwapEdge(gathered[op.u], gathered[op.v]) for op in step]
        apply_timestep(g, state, ops)
        middle.append(ops)

    # phase 3: the hide/gather timesteps are involutions; replaying
    # them in reverse carries each token from its gathered slot home
    backward: list[list] = []
    for ops in reversed(forward):
        apply_timestep(g, state, ops)
        backward.append(ops)

    for tok in range(g.n):
        if state.locate(tok) != (pi(tok), 0):
            raise AssertionError("sparse routing misplaced a token")
    return Schedule(forward + middle + backward)
