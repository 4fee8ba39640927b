"""Token-level execution and verification of schedules.

Each vertex carries one data slot (slot 0) and ``ancilla_budget``
ancilla slots (1..B).  Tokens are integers; token ``v`` starts in the
data slot of vertex ``v`` and ancillas start empty.  Executing a
schedule moves tokens around; the executor enforces physical
realizability (edges exist, slots are touched at most once per
timestep, transfer loads fit in the free ancilla slots) and reports
the permutation a valid schedule achieves.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import ArchGraph, Permutation
from .schedule import Schedule, SwapEdge, SwapLocal, TeleRound

__all__ = [
    "TokenState",
    "ScheduleError",
    "apply_timestep",
    "apply_schedule",
    "achieved_permutation",
    "verify_schedule",
]


class ScheduleError(Exception):
    """A schedule is malformed or physically unrealizable.

    Messages name the offending timestep and primitive.
    """


def _fail(t: int, op, msg: str):
    raise ScheduleError(f"timestep {t}, {type(op).__name__} {op}: {msg}")


class TokenState:
    """Slot contents of every vertex: slots[v][0] is the data slot,
    slots[v][1..B] the ancillas; ``None`` marks an empty slot."""

    def __init__(self, g: ArchGraph):
        self.n = g.n
        self.budget = g.ancilla_budget
        self.slots: list[list[int | None]] = [
            [v] + [None] * g.ancilla_budget for v in range(g.n)
        ]

    def data(self, v: int) -> int | None:
        return self.slots[v][0]

    def get(self, v: int, s: int) -> int | None:
        return self.slots[v][s]

    def tokens(self) -> list[int]:
        """All tokens present, sorted; conservation means this always
        equals list(range(n))."""
        out = [tok for row in self.slots for tok in row if tok is not None]
        return sorted(out)

    def locate(self, token: int) -> tuple[int, int]:
        for v, row in enumerate(self.slots):
            for s, tok in enumerate(row):
                if tok == token:
                    return v, s
        raise KeyError(f"token {token} not present")

    def free_slot(self, v: int) -> int | None:
        """Lowest empty ancilla slot at ``v``, or None."""
        for s in range(1, self.budget + 1):
            if self.slots[v][s] is None:
                return s
        return None

    def copy(self) -> "TokenState":
        other = object.__new__(TokenState)
        other.n = self.n
        other.budget = self.budget
        other.slots = [row[:] for row in self.slots]
        return other


def _check_op(g: ArchGraph, op, t: int):
    if isinstance(op, SwapEdge):
        if not (0 <= op.u < g.n and 0 <= op.v < g.n):
            _fail(t, op, "vertex out of range")
        if not g.has_edge(op.u, op.v):
            _fail(t, op, "no such edge")
    elif isinstance(op, SwapLocal):
        if not 0 <= op.v < g.n:
            _fail(t, op, "vertex out of range")
        if not (0 <= op.s1 <= g.ancilla_budget and 0 <= op.s2 <= g.ancilla_budget):
            _fail(t, op, "slot out of range")
    elif isinstance(op, TeleRound):
        for tr in op.transfers:
            for v in tr.path:
                if not 0 <= v < g.n:
                    _fail(t, op, f"vertex {v} out of range")
            for a, b in zip(tr.path, tr.path[1:]):
                if not g.has_edge(a, b):
                    _fail(t, op, f"path step ({a},{b}) is not an edge")
        for v in op.vertices():
            load = op.load(v)
            if load > g.ancilla_budget:
                _fail(t, op, f"vertex {v} holds {load} pair halves, "
                             f"budget is {g.ancilla_budget}")
    else:
        _fail(t, op, "unknown primitive")


def _claims(g: ArchGraph, op) -> list[tuple[int, int]]:
    """(vertex, slot) pairs the primitive occupies during its timestep.
    A transfer round occupies every slot of every vertex on its paths."""
    if isinstance(op, SwapEdge):
        return [(op.u, 0), (op.v, 0)]
    if isinstance(op, SwapLocal):
        return [(op.v, op.s1), (op.v, op.s2)]
    all_slots = range(g.ancilla_budget + 1)
    return [(v, s) for v in sorted(op.vertices()) for s in all_slots]


def apply_timestep(g: ArchGraph, state: TokenState, ops, t: int = 0):
    """Apply one timestep's primitives simultaneously, in place."""
    taken: dict[tuple[int, int], object] = {}
    for op in ops:
        _check_op(g, op, t)
        for claim in _claims(g, op):
            if claim in taken:
                _fail(t, op, f"slot {claim} already used by "
                             f"{type(taken[claim]).__name__} in this timestep")
            taken[claim] = op

    for op in ops:
        if isinstance(op, SwapEdge):
            su, sv = state.slots[op.u], state.slots[op.v]
            su[0], sv[0] = sv[0], su[0]
        elif isinstance(op, SwapLocal):
            row = state.slots[op.v]
            row[op.s1], row[op.s2] = row[op.s2], row[op.s1]
        elif isinstance(op, TeleRound):
            _apply_tele_round(state, op, t)


def _apply_tele_round(state: TokenState, op: TeleRound, t: int):
    # pair halves live in ancilla slots, so slots holding parked tokens
    # are not available to the round
    for v in sorted(op.vertices()):
        need = op.load(v)
        free = sum(1 for s in range(1, state.budget + 1)
                   if state.slots[v][s] is None)
        if free < need:
            _fail(t, op, f"vertex {v} needs {need} free ancilla slots "
                         f"for its pair halves but only {free} are empty")

    # all transfers in a round act simultaneously: read sources first
    sources = {}
    for tr in op.transfers:
        if tr.source in sources:
            _fail(t, op, f"vertex {tr.source} is the source of two transfers")
        sources[tr.source] = tr
    for tr in op.transfers:
        if tr.kind == "swap" and tr.dest in sources:
            _fail(t, op, f"vertex {tr.dest} both swaps and sends")

    outgoing = {}
    for tr in op.transfers:
        tok = state.data(tr.source)
        if tok is None:
            _fail(t, op, f"transfer source {tr.source} holds no token")
        outgoing[tr.source] = tok
        if tr.kind == "swap":
            back = state.data(tr.dest)
            if back is None:
                _fail(t, op, f"swap endpoint {tr.dest} holds no token")
            outgoing[tr.dest] = back

    dests_written = set()
    for tr in op.transfers:
        if tr.kind == "swap":
            targets = [(tr.dest, tr.source), (tr.source, tr.dest)]
        else:
            targets = [(tr.dest, tr.source)]
        for dest, src in targets:
            if dest in dests_written:
                _fail(t, op, f"two transfers write vertex {dest}")
            if state.data(dest) is not None and dest not in outgoing:
                _fail(t, op, f"destination {dest} is occupied and sends nothing")
            dests_written.add(dest)
    # sources whose token leaves and nothing arrives become empty
    for v in outgoing:
        state.slots[v][0] = None
    for tr in op.transfers:
        state.slots[tr.dest][0] = outgoing[tr.source]
        if tr.kind == "swap":
            state.slots[tr.source][0] = outgoing[tr.dest]


def apply_schedule(g: ArchGraph, schedule: Schedule,
                   on_step=None) -> TokenState:
    """Execute a schedule from the canonical start state.

    ``on_step(t, state)`` is called after each timestep, if given.
    Raises :class:`ScheduleError` on any malformed or conflicting
    primitive, naming the timestep and primitive.
    """
    state = TokenState(g)
    for t, step in enumerate(schedule.timesteps):
        apply_timestep(g, state, step, t)
        if on_step is not None:
            on_step(t, state)
    return state


def achieved_permutation(g: ArchGraph, state: TokenState) -> Permutation:
    """The permutation realized by a final state: token i sits in the
    data slot of vertex image[i].  Requires every ancilla empty and
    every data slot occupied."""
    for v in range(g.n):
        for s in range(1, g.ancilla_budget + 1):
            if state.slots[v][s] is not None:
                raise ScheduleError(
                    f"token {state.slots[v][s]} stranded in ancilla "
                    f"slot {s} of vertex {v}")
    image = [None] * g.n
    for v in range(g.n):
        tok = state.data(v)
        if tok is None:
            raise ScheduleError(f"data slot of vertex {v} is empty")
        image[tok] = v
    return Permutation(tuple(image))


def verify_schedule(g: ArchGraph, schedule: Schedule,
                    pi: Permutation) -> bool:
    """True iff the schedule executes cleanly, conserves tokens at
    every timestep, and achieves exactly ``pi``."""
    expected = list(range(g.n))

    def check(t, state):
        if state.tokens() != expected:
            raise ScheduleError(f"timestep {t}: tokens not conserved")

    final = apply_schedule(g, schedule, on_step=check)
    return achieved_permutation(g, final).image == pi.image
