"""Scattering and compact derivatives computed on presentation nodes.

Both derivatives remove, in parallel, every node that is trivial relative to
the current stage.  Because the subtree above an unfolding node depends only on
its tag, stages can be kept as sets of presentation nodes, and the iteration
stabilizes within ``len(nodes)`` rounds.  The reported ranks are these stage
counts; the emptiness verdict is exact.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import AbstractSet, Mapping

from .errors import PreconditionError
from .presentation import TreePresentation, live_nodes


class Operator(str, enum.Enum):
    SCATTER = "SCATTER"
    COMPACT = "COMPACT"


def _edges_into(P: TreePresentation, S: AbstractSet[str], v: str):
    return [e for _, e in P.out_edges[v] if e.dst in S]


def is_chain_above(P: TreePresentation, S: AbstractSet[str], v: str) -> bool:
    """True iff the part of the unfolding above a v-tagged node that stays in S is a chain."""
    if v not in S:
        raise PreconditionError(f"{v!r} is not in the stage set")
    seen = set()
    while v not in seen:
        seen.add(v)
        out = _edges_into(P, S, v)
        if not out:
            return True
        if len(out) > 1:
            return False
        (e,) = out
        if e.mult.infinite or e.mult.value != 1:
            return False
        v = e.dst
    return True


def is_compactly_trivial(P: TreePresentation, S: AbstractSet[str], v: str) -> bool:
    """True iff no node reachable from v inside S has an infinite edge into S."""
    if v not in S:
        raise PreconditionError(f"{v!r} is not in the stage set")
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for e in _edges_into(P, S, u):
            if e.mult.infinite:
                return False
            if e.dst not in seen:
                seen.add(e.dst)
                stack.append(e.dst)
    return True


@dataclass(frozen=True)
class DerivativeTrace:
    operator: Operator
    stages: tuple[frozenset[str], ...]
    rank_of: Mapping[str, int] = field(default_factory=dict)

    @property
    def fixpoint(self) -> frozenset[str]:
        return self.stages[-1]

    @property
    def fixpoint_empty(self) -> bool:
        return not self.stages[-1]

    def stage_of(self, v: str) -> int | None:
        """Largest stage index containing v (None: v survives into the fixpoint)."""
        return self.rank_of.get(v)

    def to_dict(self) -> dict:
        return {
            "operator": self.operator.value,
            "stages": [sorted(s) for s in self.stages],
            "rank": rank(self),
            "rankOf": dict(sorted(self.rank_of.items())),
            "fixpointEmpty": self.fixpoint_empty,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


_TRIVIAL = {
    Operator.SCATTER: is_chain_above,
    Operator.COMPACT: is_compactly_trivial,
}


def derive(P: TreePresentation, operator: Operator | str) -> DerivativeTrace:
    operator = Operator(operator)
    trivial = _TRIVIAL[operator]
    current = live_nodes(P)
    stages = [current]
    rank_of: dict[str, int] = {}
    i = 0
    while current:
        removed = {v for v in current if trivial(P, current, v)}
        nxt = current - removed
        for v in removed:
            rank_of[v] = i
        stages.append(nxt)
        if not removed:
            break
        current = nxt
        i += 1
    return DerivativeTrace(operator, tuple(stages), rank_of)


def rank(trace: DerivativeTrace) -> int | None:
    """Number of stages until the iteration empties; None if it never does."""
    if not trace.fixpoint_empty:
        return None
    return len(trace.stages) - 1
