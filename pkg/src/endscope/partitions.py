"""Cone covers and cone partitions of ray spaces.

Members are unfolding nodes read as cones [t] (every ray through t).  Under an
infinite edge only finitely many child indices can be named, so members may
end in or contain *tail* steps ``e3.2+`` standing for all indices >= 2.

All algorithms work on a finite quotient of the unfolding: for each infinite
edge ``e`` let ``B[e]`` be one more than the largest index any member mentions
on ``e``.  Children with index >= B[e] are indistinguishable to every member,
so the child with index ``B[e]`` represents all of them.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import PreconditionError
from .presentation import ROOT, Step, TreePresentation, UNode, live_nodes, resolve

__all__ = [
    "FamilyKind",
    "ConeFamily",
    "CoverCheck",
    "contains",
    "overlaps",
    "cone_cover_check",
    "antichain_normalize",
    "refine_partition",
    "Refinement",
    "KernelRay",
    "d_kernel",
    "parse_cones",
]


class FamilyKind(str, enum.Enum):
    COVER = "COVER"
    PARTITION = "PARTITION"


@dataclass(frozen=True)
class ConeFamily:
    members: tuple[UNode, ...]
    kind: FamilyKind = FamilyKind.COVER

    def __iter__(self) -> Iterator[UNode]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def to_list(self) -> list[str]:
        return [str(m) for m in self.members]


def parse_cones(text: str) -> list[UNode]:
    """Comma-separated serialized UNodes, as given on the command line."""
    return [UNode.parse(part) for part in text.split(",") if part.strip()]


def _step_contains(outer: Step, inner: Step) -> bool:
    if outer.edge != inner.edge:
        return False
    if outer.tail:
        return inner.index >= outer.index
    return not inner.tail and inner.index == outer.index


def _step_overlaps(a: Step, b: Step) -> bool:
    if a.edge != b.edge:
        return False
    if a.tail and b.tail:
        return True
    if a.tail:
        return b.index >= a.index
    if b.tail:
        return a.index >= b.index
    return a.index == b.index


def contains(outer: UNode, inner: UNode) -> bool:
    """Cone of ``outer`` includes the cone of ``inner``."""
    n = outer.depth
    return n <= inner.depth and all(_step_contains(o, i) for o, i in zip(outer.steps, inner.steps))


def overlaps(a: UNode, b: UNode) -> bool:
    return all(_step_overlaps(x, y) for x, y in zip(a.steps, b.steps))


def _validate(P: TreePresentation, cones: Iterable[UNode]) -> None:
    for t in cones:
        resolve(P, t)


def _breakpoints(P: TreePresentation, family: Iterable[UNode]) -> dict[int, int]:
    top = {i: 0 for i, e in enumerate(P.edges) if e.mult.infinite}
    for t in family:
        for s in t.steps:
            if s.edge in top:
                top[s.edge] = max(top[s.edge], s.index + 1)
    return top


def _qkids(P: TreePresentation, t: UNode, tag: str, B: dict[int, int], live: frozenset[str]):
    for ordinal, e in P.out_edges[tag]:
        if e.dst not in live:
            continue
        n = B[ordinal] + 1 if e.mult.infinite else e.mult.value
        for k in range(n):
            yield t.child(ordinal, k), e.dst


def _as_pattern(t: UNode, B: dict[int, int]) -> UNode:
    """Turn representative indices back into tail steps."""
    return UNode(tuple(Step(s.edge, s.index, True) if B.get(s.edge) == s.index else s for s in t.steps))


def _atoms(pattern: UNode, B: dict[int, int]) -> list[UNode]:
    """Quotient nodes whose cones partition the pattern's cone."""
    options = []
    for s in pattern.steps:
        if s.tail:
            options.append([Step(s.edge, k) for k in range(s.index, B[s.edge] + 1)])
        else:
            options.append([s])
    return [UNode(tuple(choice)) for choice in itertools.product(*options)]


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    counterexample: UNode | None = None

    def __bool__(self) -> bool:
        return self.ok


def cone_cover_check(P: TreePresentation, S: Sequence[UNode]) -> CoverCheck:
    """Does every ray of the unfolding pass through some member of S?

    On failure the counterexample is a live node at the largest member depth
    whose cone meets no member.
    """
    _validate(P, S)
    live = live_nodes(P)
    if not live:
        return CoverCheck(True)
    B = _breakpoints(P, S)
    depth = max((t.depth for t in S), default=0)

    def escape(t: UNode, tag: str) -> UNode | None:
        if any(contains(m, t) for m in S):
            return None
        if t.depth >= depth:
            return t
        for c, ctag in _qkids(P, t, tag, B, live):
            found = escape(c, ctag)
            if found is not None:
                return found
        return None

    bad = escape(ROOT, P.root)
    return CoverCheck(bad is None, bad)


def _require_cover(P: TreePresentation, S: Sequence[UNode], what: str) -> None:
    check = cone_cover_check(P, S)
    if not check:
        raise PreconditionError(f"{what} is not covering (ray through {check.counterexample} escapes)")


def _drop_contained(members: list[UNode]) -> list[UNode]:
    unique = list(dict.fromkeys(members))
    return [
        m for i, m in enumerate(unique)
        if not any(j != i and contains(o, m) for j, o in enumerate(unique))
    ]


def antichain_normalize(P: TreePresentation, S: Sequence[UNode]) -> ConeFamily:
    """Drop duplicates and members lying inside another member's cone."""
    _require_cover(P, S, "family")
    kept = _drop_contained(list(S))
    if any(overlaps(a, b) for a, b in itertools.combinations(kept, 2)):
        # tail patterns can overlap without nesting; split them into quotient atoms
        B = _breakpoints(P, kept)
        atoms = [_as_pattern(a, B) for m in kept for a in _atoms(m, B)]
        kept = _drop_contained(atoms)
    return ConeFamily(tuple(kept), FamilyKind.PARTITION)


def is_partition(P: TreePresentation, S: Sequence[UNode]) -> bool:
    disjoint = not any(overlaps(a, b) for a, b in itertools.combinations(S, 2))
    return disjoint and bool(cone_cover_check(P, S))


@dataclass(frozen=True)
class Refinement:
    family: ConeFamily
    parent: dict[UNode, UNode]

    def to_dict(self) -> dict:
        return {
            "partition": self.family.to_list(),
            "descent": {str(s): str(t) for s, t in self.parent.items()},
        }


def refine_partition(
    P: TreePresentation, part: Sequence[UNode] | ConeFamily, cover: Sequence[UNode]
) -> Refinement:
    """Partition refining ``part`` and ``cover`` whose members sit strictly above their part member."""
    part = list(part)
    cover = list(cover)
    _validate(P, part + cover)
    if any(overlaps(a, b) for a, b in itertools.combinations(part, 2)):
        raise PreconditionError("part members overlap; not a partition")
    _require_cover(P, part, "part")
    _require_cover(P, cover, "cover")

    live = live_nodes(P)
    B = _breakpoints(P, part + cover)
    limit = max([t.depth for t in cover] + [t.depth + 1 for t in part])
    members: list[UNode] = []
    parent: dict[UNode, UNode] = {}

    def split(a: UNode, tag: str, origin: UNode) -> None:
        if a.depth >= limit:  # pragma: no cover - guarded by the covering precondition
            raise AssertionError("refinement descended below every cover member")
        for c, ctag in _qkids(P, a, tag, B, live):
            if any(contains(m, c) for m in cover):
                s = _as_pattern(c, B)
                members.append(s)
                parent[s] = origin
            else:
                split(c, ctag, origin)

    for t in part:
        for a in _atoms(t, B):
            tag = resolve(P, a)
            if tag in live:
                split(a, tag, t)
    return Refinement(ConeFamily(tuple(members), FamilyKind.PARTITION), parent)


@dataclass(frozen=True)
class KernelRay:
    cone: UNode
    stem: UNode
    cycle: tuple[Step, ...]

    def prefix(self, periods: int = 2) -> UNode:
        return self.stem.extend(self.cycle * periods)

    def to_dict(self) -> dict:
        return {
            "cone": str(self.cone),
            "stem": str(self.stem),
            "cycle": "/".join(map(str, self.cycle)),
            "prefix": str(self.prefix()),
        }


def least_ray(P: TreePresentation, start: UNode) -> tuple[UNode, tuple[Step, ...]]:
    """Lexicographically least ray through ``start`` as (stem, repeating cycle)."""
    live = live_nodes(P)
    tag = resolve(P, start)
    if tag not in live:
        raise PreconditionError(f"no ray passes through {start}")
    steps: list[Step] = []
    first_seen = {tag: 0}
    while True:
        ordinal = next(i for i, e in P.out_edges[tag] if e.dst in live)
        steps.append(Step(ordinal, 0))
        tag = P.edges[ordinal].dst
        if tag in first_seen:
            cut = first_seen[tag]
            return start.extend(steps[:cut]), tuple(steps[cut:])
        first_seen[tag] = len(steps)


def d_kernel(P: TreePresentation, assignment: Sequence[UNode]) -> list[KernelRay]:
    """One canonical ray per cone of the normalized assignment.

    The cones are pairwise disjoint and cover, so the chosen rays form a
    closed discrete set whose assigned cones cover the space.
    """
    family = antichain_normalize(P, assignment)
    live = live_nodes(P)
    out = []
    for cone in family:
        instance = UNode(tuple(Step(s.edge, s.index) for s in cone.steps))
        if resolve(P, instance) not in live:
            continue
        stem, cycle = least_ray(P, instance)
        out.append(KernelRay(cone, stem, cycle))
    return out
