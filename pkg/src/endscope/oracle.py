"""Brute-force falsifiers working on truncated unfoldings.

Nothing here reads derivative traces.  Every search takes a finite tree (an
explicit :class:`FiniteTree` or the hash-consed :class:`SharedTree`, which
agree on every subtree-recursive quantity) and evaluates the defining
combinatorial condition literally.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Protocol, Sequence

from .derivatives import Operator, derive, rank
from .partitions import contains
from .presentation import ROOT, FiniteTree, TreePresentation, UNode, live_nodes, truncate_shared

__all__ = [
    "FiniteTree",
    "oracle_embedding_search",
    "oracle_baire_search",
    "oracle_finite_derivative",
    "oracle_cover_check",
    "oracle_cover_search",
    "embedding_depth",
    "baire_depth",
    "required_depth",
    "OracleVerdict",
    "agreement",
]


class Truncation(Protocol):
    @property
    def root(self) -> int | None: ...

    def kids(self, i: int) -> Sequence[tuple[int, bool]]: ...

    def is_live(self, i: int) -> bool: ...


def _postorder(F: Truncation) -> list[int]:
    order, seen, stack = [], set(), [(F.root, False)]
    while stack:
        i, done = stack.pop()
        if done:
            order.append(i)
            continue
        if i in seen:
            continue
        seen.add(i)
        stack.append((i, True))
        stack.extend((c, False) for c, _ in F.kids(i) if c not in seen)
    return order


def embedding_depth(F: Truncation) -> int:
    """Largest d such that the full binary tree of height d order-embeds into the live part of F.

    An embedding of height d exists in the cone of x iff some y >= x has two
    distinct live children each carrying a height d-1 embedding in its own
    cone; images in the cones of distinct children are incomparable.
    -1 when F has no live node.
    """
    if F.root is None:
        return -1
    best: dict[int, int] = {}
    for i in _postorder(F):
        if not F.is_live(i):
            best[i] = -1
            continue
        kid_vals = sorted((best[c] for c, _ in F.kids(i) if F.is_live(c)), reverse=True)
        here = kid_vals[1] + 1 if len(kid_vals) >= 2 else 0
        best[i] = max([here, *kid_vals[:1]])
    return best[F.root]


def baire_depth(F: Truncation, width: int) -> int:
    """Largest d with a width-``width`` successor pattern of height d in the live part of F.

    The ``width`` successors of each pattern node must be children through an
    infinite (sampled) edge.
    """
    if F.root is None:
        return -1
    best: dict[int, int] = {}
    for i in _postorder(F):
        if not F.is_live(i):
            best[i] = -1
            continue
        inf_vals = [best[c] for c, inf in F.kids(i) if inf and F.is_live(c)]
        all_vals = [best[c] for c, _ in F.kids(i) if F.is_live(c)]
        here = heapq.nlargest(width, inf_vals)[-1] + 1 if len(inf_vals) >= width > 0 else 0
        best[i] = max([here, *all_vals])
    return best[F.root]


def oracle_embedding_search(F: Truncation, d: int) -> bool:
    return embedding_depth(F) >= d


def oracle_baire_search(F: Truncation, d: int, w: int) -> bool:
    return baire_depth(F, w) >= d


def oracle_finite_derivative(F: Truncation) -> int:
    """Stages until the live part of F empties when every node whose up-set is a chain is removed."""
    if F.root is None or not F.is_live(F.root):
        return 0
    order = _postorder(F)
    alive = {i for i in order if F.is_live(i)}
    stages = 0
    while alive:
        chain: dict[int, bool] = {}
        for i in order:
            if i in alive:
                ks = [c for c, _ in F.kids(i) if c in alive]
                chain[i] = len(ks) == 0 or (len(ks) == 1 and chain[ks[0]])
        alive = {i for i in alive if not chain[i]}
        stages += 1
    return stages


def oracle_cover_check(F: FiniteTree, S: Sequence[UNode]) -> bool:
    """Every live node at the truncation depth lies in the cone of some member of S."""
    if any(t.depth >= F.depth for t in S):
        raise ValueError("cover members must be shallower than the truncation")
    leaves = [n for n in F if n.live and n.depth == F.depth]
    return all(any(contains(m, n.unode) for m in S) for n in leaves)


def oracle_cover_search(P: TreePresentation, S: Sequence[UNode], width: int, depth: int | None = None) -> bool:
    """Lazy oracle_cover_check: the same width-sampled unfolding, walked depth-first.

    The walk stops below a node once a member's cone contains it, and keeps
    only the members whose steps so far match the walk.  Nodes with no ray
    above them are skipped.  ``depth`` defaults to one more than the deepest member.
    """
    D = max((t.depth for t in S), default=0) + 1 if depth is None else depth
    if any(t.depth >= D for t in S):
        raise ValueError("cover members must be shallower than the truncation")
    live = live_nodes(P)

    def walk(d: int, tag: str, cands: list[UNode]) -> bool:
        if any(m.depth == d for m in cands):
            return True
        if tag not in live:
            return True
        if d >= D:
            return False
        for ordinal, e in P.out_edges[tag]:
            for k in range(width if e.mult.infinite else e.mult.value):
                nxt = [
                    m for m in cands
                    if m.steps[d].edge == ordinal
                    and (m.steps[d].index <= k if m.steps[d].tail else m.steps[d].index == k)
                ]
                if not walk(d + 1, e.dst, nxt):
                    return False
        return True

    if P.is_empty:
        return True
    return walk(ROOT.depth, P.root, list(S))


def required_depth(P: TreePresentation, d: int) -> int:
    """Truncation depth that suffices for height-d patterns: each level needs at most |nodes| steps."""
    return (d + 1) * (len(live_nodes(P)) + 1) + 1


@dataclass(frozen=True)
class OracleVerdict:
    operator: Operator
    fixpoint_empty: bool
    rank: int | None
    pattern_depth: int
    found: bool
    tested_depth: int

    @property
    def expected(self) -> bool:
        """What the derivative predicts for a pattern of the tested height."""
        return (not self.fixpoint_empty) or (self.rank is not None and self.rank > self.tested_depth)

    @property
    def strict_agree(self) -> bool:
        """Pattern found iff the fixpoint is nonempty (ignores finite ranks above the tested height)."""
        return self.found == (not self.fixpoint_empty)

    @property
    def agree(self) -> bool:
        return self.found == self.expected

    def describe(self) -> str:
        state = "empty" if self.fixpoint_empty else "nonempty"
        if self.agree and self.strict_agree:
            return f"{self.operator.value}: agree ({state})"
        if self.agree:
            return (f"{self.operator.value}: agree ({state}, finite rank {self.rank} exceeds "
                    f"tested height {self.tested_depth})")
        return f"{self.operator.value}: DISAGREE ({state}, pattern found={self.found})"


def agreement(
    P: TreePresentation,
    scatter_d: int = 3,
    baire_d: int = 2,
    width: int = 3,
    depth: int | None = None,
) -> tuple[OracleVerdict, OracleVerdict]:
    """Run both searches on a shared truncation and pair them with the derivative verdicts."""
    scatter = derive(P, Operator.SCATTER)
    compact = derive(P, Operator.COMPACT)
    D = depth if depth is not None else max(12, required_depth(P, max(scatter_d, baire_d)))
    F = truncate_shared(P, D, width)
    e = embedding_depth(F)
    b = baire_depth(F, width)
    return (
        OracleVerdict(Operator.SCATTER, scatter.fixpoint_empty, rank(scatter), e, e >= scatter_d, scatter_d),
        OracleVerdict(Operator.COMPACT, compact.fixpoint_empty, rank(compact), b, b >= baire_d, baire_d),
    )
