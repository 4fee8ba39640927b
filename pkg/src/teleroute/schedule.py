"""Schedules: timed sequences of routing primitives, with cost models.

A schedule is a list of timesteps; each timestep is a set of primitives
that act simultaneously.  Three primitives exist:

* ``SwapEdge(u, v)`` — exchange the data tokens of adjacent vertices.
* ``SwapLocal(v, s1, s2)`` — exchange two slots at one vertex (slot 0 is
  the data slot, slots 1..B are ancillas).
* ``TeleRound(transfers)`` — one round of entanglement-mediated
  transfers; each transfer carries a token along a vertex path, either
  one-way (``move``) or exchanging the endpoint tokens (``swap``).

Depth is the sum over timesteps of the most expensive primitive in the
timestep, under a configurable cost model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graphs import ArchGraph

__all__ = [
    "SwapEdge",
    "SwapLocal",
    "Transfer",
    "TeleRound",
    "DepthModel",
    "Schedule",
    "op_to_dict",
    "op_from_dict",
]


@dataclass(frozen=True)
class SwapEdge:
    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("swap_edge endpoints must differ")
        lo, hi = sorted((self.u, self.v))
        object.__setattr__(self, "u", lo)
        object.__setattr__(self, "v", hi)


@dataclass(frozen=True)
class SwapLocal:
    v: int
    s1: int
    s2: int

    def __post_init__(self):
        if self.s1 == self.s2:
            raise ValueError("swap_local slots must differ")
        lo, hi = sorted((self.s1, self.s2))
        object.__setattr__(self, "s1", lo)
        object.__setattr__(self, "s2", hi)


@dataclass(frozen=True)
class Transfer:
    """One entanglement-mediated transfer along ``path`` (a simple path).

    ``kind`` is "move" (token travels path[0] -> path[-1], source slot
    becomes empty) or "swap" (endpoint tokens exchange).
    """

    path: tuple[int, ...]
    kind: str = "move"

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        if len(self.path) < 2:
            raise ValueError("transfer path needs at least two vertices")
        if len(set(self.path)) != len(self.path):
            raise ValueError("transfer path must be a simple path")
        if self.kind not in ("move", "swap"):
            raise ValueError(f"unknown transfer kind {self.kind!r}")

    @property
    def source(self) -> int:
        return self.path[0]

    @property
    def dest(self) -> int:
        return self.path[-1]

    def load(self, v: int) -> int:
        """Entangled-pair halves this transfer parks at vertex ``v``.

        A path of d edges consumes one pair per edge: interiors hold two
        halves, endpoints one.  A "swap" uses a channel in each
        direction, doubling every load.
        """
        if v not in self.path:
            return 0
        base = 1 if v in (self.path[0], self.path[-1]) else 2
        return base * (2 if self.kind == "swap" else 1)


@dataclass(frozen=True)
class TeleRound:
    transfers: tuple[Transfer, ...]

    def __post_init__(self):
        object.__setattr__(self, "transfers", tuple(self.transfers))
        if not self.transfers:
            raise ValueError("tele_round needs at least one transfer")

    def vertices(self) -> set[int]:
        out = set()
        for t in self.transfers:
            out.update(t.path)
        return out

    def load(self, v: int) -> int:
        return sum(t.load(v) for t in self.transfers)

    def incidence(self, v: int) -> int:
        return sum(1 for t in self.transfers if v in t.path)


Op = SwapEdge | SwapLocal | TeleRound


@dataclass(frozen=True)
class DepthModel:
    """Per-primitive time costs; a timestep costs the max over its ops."""

    swap_edge: int = 1
    swap_local: int = 0
    tele_round: int = 1

    @classmethod
    def conservative(cls) -> "DepthModel":
        """Counts local shuffles and charges a full transfer protocol."""
        return cls(swap_edge=1, swap_local=1, tele_round=3)

    def cost(self, op: Op) -> int:
        if isinstance(op, SwapEdge):
            return self.swap_edge
        if isinstance(op, SwapLocal):
            return self.swap_local
        if isinstance(op, TeleRound):
            return self.tele_round
        raise TypeError(f"not a primitive: {op!r}")

    def to_dict(self) -> dict:
        return {"swap_edge": self.swap_edge, "swap_local": self.swap_local,
                "tele_round": self.tele_round}

    @classmethod
    def from_dict(cls, d: dict) -> "DepthModel":
        return cls(**d)


def op_to_dict(op: Op) -> dict:
    if isinstance(op, SwapEdge):
        return {"type": "swap_edge", "u": op.u, "v": op.v}
    if isinstance(op, SwapLocal):
        return {"type": "swap_local", "v": op.v, "s1": op.s1, "s2": op.s2}
    if isinstance(op, TeleRound):
        return {"type": "tele_round",
                "transfers": [{"path": list(t.path), "kind": t.kind}
                              for t in op.transfers]}
    raise TypeError(f"not a primitive: {op!r}")


def op_from_dict(d: dict) -> Op:
    kind = d.get("type")
    if kind == "swap_edge":
        return SwapEdge(d["u"], d["v"])
    if kind == "swap_local":
        return SwapLocal(d["v"], d["s1"], d["s2"])
    if kind == "tele_round":
        return TeleRound(tuple(Transfer(tuple(t["path"]), t.get("kind", "move"))
                               for t in d["transfers"]))
    raise ValueError(f"unknown primitive type {kind!r}")


def _op_sort_key(op: Op):
    return json.dumps(op_to_dict(op), sort_keys=True)


@dataclass
class Schedule:
    """Primitives grouped into simultaneous timesteps.

    ``graph_ref`` is the short hash of the graph the schedule targets;
    it is filled in when serializing with a graph at hand.
    """

    timesteps: list[list]
    depth_model: DepthModel = field(default_factory=DepthModel)
    graph_ref: str | None = None

    def depth(self, model: DepthModel | None = None) -> int:
        model = model or self.depth_model
        return sum(max((model.cost(op) for op in step), default=0)
                   for step in self.timesteps)

    def num_timesteps(self) -> int:
        return len(self.timesteps)

    def ops(self):
        for step in self.timesteps:
            yield from step

    def count(self, optype) -> int:
        return sum(1 for op in self.ops() if isinstance(op, optype))

    def normalized(self) -> "Schedule":
        """Drop empty timesteps and sort ops within each timestep."""
        steps = [sorted(step, key=_op_sort_key)
                 for step in self.timesteps if step]
        return Schedule(steps, self.depth_model, self.graph_ref)

    def extend(self, other: "Schedule") -> None:
        self.timesteps.extend(other.timesteps)

    def to_json(self, graph: ArchGraph | None = None) -> str:
        ref = self.graph_ref
        if graph is not None:
            ref = graph.ref_hash()
        norm = self.normalized()
        doc = {
            "graph_ref": ref,
            "timesteps": [[op_to_dict(op) for op in step]
                          for step in norm.timesteps],
            "depth_model": self.depth_model.to_dict(),
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        doc = json.loads(text)
        steps = [[op_from_dict(d) for d in step] for step in doc["timesteps"]]
        model = DepthModel.from_dict(doc.get("depth_model", {}))
        return cls(steps, model, doc.get("graph_ref"))
