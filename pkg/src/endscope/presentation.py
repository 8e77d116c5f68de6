"""Regular tree presentations, their unfoldings, pruning and the `.tree` format.

A presentation is a finite pointed multigraph whose edges carry a branching
multiplicity.  Its unfolding is the rooted tree of all finite walks from the
root; a walk ending at presentation node ``v`` has, for every edge
``(v, w, mult)``, ``mult`` many children.  The subtree above an unfolding node
depends only on the presentation node it ends at (its *tag*), which is what
lets every analysis in this package run on the finite presentation.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, Iterator, NamedTuple

from .errors import IllegalNodeError, ParseError

__all__ = [
    "Multiplicity",
    "Cardinal",
    "Edge",
    "TreePresentation",
    "Step",
    "UNode",
    "ROOT",
    "parse_tree",
    "format_tree",
    "live_nodes",
    "prune",
    "is_pruned",
    "resolve",
    "children",
    "TreeNode",
    "FiniteTree",
    "SharedTree",
    "truncate",
    "truncate_shared",
]


@total_ordering
@dataclass(frozen=True)
class Multiplicity:
    """Branching count of an edge: ``FIN(n)`` with n >= 1 or ``ALEPH(k)``.

    ``ALEPH(0)`` is countably infinite; ``ALEPH(k)`` for k >= 1 is a symbolic
    uncountable cardinal that is never unfolded.
    """

    infinite: bool
    value: int

    def __post_init__(self) -> None:
        if self.infinite and self.value < 0:
            raise ValueError("ALEPH(k) requires k >= 0")
        if not self.infinite and self.value < 1:
            raise ValueError("FIN(n) requires n >= 1")

    @classmethod
    def fin(cls, n: int) -> Multiplicity:
        return cls(False, n)

    @classmethod
    def aleph(cls, k: int = 0) -> Multiplicity:
        return cls(True, k)

    @classmethod
    def parse(cls, token: str) -> Multiplicity:
        if token == "*":
            return cls.aleph(0)
        if re.fullmatch(r"w[1-9][0-9]*", token):
            return cls.aleph(int(token[1:]))
        if re.fullmatch(r"[0-9]+", token):
            n = int(token)
            if n == 0:
                raise ValueError("multiplicity 0 is not allowed (FIN(n) needs n >= 1)")
            return cls.fin(n)
        raise ValueError(f"bad multiplicity {token!r}")

    def __lt__(self, other: Multiplicity) -> bool:
        if not isinstance(other, Multiplicity):
            return NotImplemented
        return (self.infinite, self.value) < (other.infinite, other.value)

    def __str__(self) -> str:
        if not self.infinite:
            return str(self.value)
        return "*" if self.value == 0 else f"w{self.value}"

    def __repr__(self) -> str:
        return f"ALEPH({self.value})" if self.infinite else f"FIN({self.value})"


@total_ordering
@dataclass(frozen=True)
class Cardinal:
    """A cardinal value as reported for Lindelöf degree and extent."""

    infinite: bool
    value: int

    @classmethod
    def finite(cls, n: int) -> Cardinal:
        return cls(False, n)

    @classmethod
    def aleph(cls, k: int = 0) -> Cardinal:
        return cls(True, k)

    @classmethod
    def parse(cls, text: str) -> Cardinal:
        kind, _, num = text.partition(":")
        if kind not in ("finite", "aleph") or not num.isdigit():
            raise ValueError(f"bad cardinal {text!r}")
        return cls(kind == "aleph", int(num))

    def __lt__(self, other: Cardinal) -> bool:
        if not isinstance(other, Cardinal):
            return NotImplemented
        return (self.infinite, self.value) < (other.infinite, other.value)

    def __str__(self) -> str:
        return f"{'aleph' if self.infinite else 'finite'}:{self.value}"

    def pretty(self) -> str:
        return f"ℵ{self.value}" if self.infinite else str(self.value)


class Edge(NamedTuple):
    src: str
    dst: str
    mult: Multiplicity


@dataclass(frozen=True)
class TreePresentation:
    """Finite pointed multigraph; the EMPTY presentation has no nodes and no root."""

    name: str
    nodes: tuple[str, ...]
    root: str | None
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("duplicate node identifiers")
        if self.root is None:
            if self.nodes or self.edges:
                raise ValueError("a presentation without a root must be EMPTY")
            return
        if self.root not in known:
            raise ValueError(f"root {self.root!r} is not a node")
        for e in self.edges:
            for end in (e.src, e.dst):
                if end not in known:
                    raise ValueError(f"unknown node {end!r}")

    @classmethod
    def empty(cls, name: str = "empty") -> TreePresentation:
        return cls(name, (), None, ())

    @property
    def is_empty(self) -> bool:
        return self.root is None

    @cached_property
    def out_edges(self) -> dict[str, tuple[tuple[int, Edge], ...]]:
        """Outgoing edges of every node as ``(ordinal, edge)`` in file order."""
        out: dict[str, list[tuple[int, Edge]]] = {v: [] for v in self.nodes}
        for i, e in enumerate(self.edges):
            out[e.src].append((i, e))
        return {v: tuple(es) for v, es in out.items()}

    def __str__(self) -> str:
        return format_tree(self)


# --- `.tree` text format -----------------------------------------------------

_ID = re.compile(r"[A-Za-z0-9_.\-]+")


def parse_tree(text: str) -> TreePresentation:
    """Parse the line-based `.tree` format.

    Nodes are the root, every edge source and every ``node <id>`` declaration;
    an edge target that is none of these is an unknown node.
    """
    name = "tree"
    root: str | None = None
    declared: list[str] = []
    raw_edges: list[tuple[str, str, Multiplicity, int, int]] = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        keyword, kcol = tokens[0]
        args = tokens[1:]
        if keyword == "tree":
            if len(args) != 1:
                raise ParseError("expected `tree <name>`", lineno, kcol)
            name = args[0][0]
        elif keyword == "root":
            if len(args) != 1:
                raise ParseError("expected `root <nodeId>`", lineno, kcol)
            if root is not None:
                raise ParseError("duplicate root declaration", lineno, kcol)
            _check_id(*args[0], lineno)
            root = args[0][0]
        elif keyword == "node":
            if not args:
                raise ParseError("expected `node <nodeId> ...`", lineno, kcol)
            for tok, col in args:
                _check_id(tok, col, lineno)
                declared.append(tok)
        elif keyword == "edge":
            if len(args) != 3:
                raise ParseError("expected `edge <src> <dst> <mult>`", lineno, kcol)
            (src, scol), (dst, dcol), (mtok, mcol) = args
            _check_id(src, scol, lineno)
            _check_id(dst, dcol, lineno)
            try:
                mult = Multiplicity.parse(mtok)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, mcol) from None
            raw_edges.append((src, dst, mult, lineno, dcol))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, kcol)

    if root is None:
        raise ParseError("missing `root` declaration")

    nodes: list[str] = []
    for v in [root, *declared, *(src for src, *_ in raw_edges)]:
        if v not in nodes:
            nodes.append(v)
    known = set(nodes)
    edges = []
    for src, dst, mult, lineno, dcol in raw_edges:
        if dst not in known:
            raise ParseError(f"unknown node {dst!r}", lineno, dcol)
        edges.append(Edge(src, dst, mult))
    return TreePresentation(name, tuple(nodes), root, tuple(edges))


def _check_id(token: str, col: int, lineno: int) -> None:
    if not _ID.fullmatch(token):
        raise ParseError(f"bad identifier {token!r}", lineno, col)


def format_tree(P: TreePresentation) -> str:
    """Serialize to `.tree` text; ``parse_tree(format_tree(P)) == P`` for non-EMPTY P."""
    if P.is_empty:
        return f"tree {P.name}\n# EMPTY presentation: no rays\n"
    lines = [f"tree {P.name}", f"root {P.root}"]
    sources = {e.src for e in P.edges}
    extra = [v for v in P.nodes if v != P.root and v not in sources]
    if extra:
        lines.append("node " + " ".join(extra))
    lines += [f"edge {e.src} {e.dst} {e.mult}" for e in P.edges]
    return "\n".join(lines) + "\n"


# --- pruning -------------------------------------------------------------------


def _reachable(P: TreePresentation, start: str, allowed: Iterable[str] | None = None) -> set[str]:
    allowed_set = set(P.nodes if allowed is None else allowed)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for _, e in P.out_edges[v]:
            if e.dst in allowed_set and e.dst not in seen:
                seen.add(e.dst)
                queue.append(e.dst)
    return seen


def live_nodes(P: TreePresentation) -> frozenset[str]:
    """Nodes reachable from the root that start an infinite walk.

    Peels nodes with no outgoing edge into the surviving set until stable;
    what remains is the greatest set where every node has a successor.
    """
    if P.is_empty:
        return frozenset()
    alive = _reachable(P, P.root)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if not any(e.dst in alive for _, e in P.out_edges[v]):
                alive.discard(v)
                changed = True
    return frozenset(alive)


def is_pruned(P: TreePresentation) -> bool:
    return live_nodes(P) == frozenset(P.nodes)


def prune(P: TreePresentation) -> TreePresentation:
    """Restrict P to its live nodes; EMPTY if the root has no ray above it.

    Edge order is preserved, so edge ordinals are renumbered whenever an edge
    is dropped.
    """
    live = live_nodes(P)
    if P.root not in live:
        return TreePresentation.empty(P.name)
    nodes = tuple(v for v in P.nodes if v in live)
    edges = tuple(e for e in P.edges if e.src in live and e.dst in live)
    return TreePresentation(P.name, nodes, P.root, edges)


# --- unfolding nodes -----------------------------------------------------------


class Step(NamedTuple):
    """One step of a walk: edge ordinal and child index.

    ``tail=True`` (only on infinite edges) denotes every child index >= ``index``
    at once; such steps appear in cone families produced by the partitions
    module, never in plain unfolding nodes.
    """

    edge: int
    index: int
    tail: bool = False

    def __str__(self) -> str:
        return f"e{self.edge}.{self.index}" + ("+" if self.tail else "")


_STEP = re.compile(r"e([0-9]+)\.([0-9]+)(\+?)")


@dataclass(frozen=True)
class UNode:
    """A node of the unfolding, written ``@`` or ``e0.1/e0.0``; also the cone [t]."""

    steps: tuple[Step, ...] = ()

    @classmethod
    def parse(cls, text: str) -> UNode:
        text = text.strip()
        if text == "@":
            return cls(())
        steps = []
        for part in text.split("/"):
            m = _STEP.fullmatch(part)
            if m is None:
                raise ParseError(f"malformed UNode {text!r} (bad step {part!r})")
            steps.append(Step(int(m.group(1)), int(m.group(2)), bool(m.group(3))))
        return cls(tuple(steps))

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def is_pattern(self) -> bool:
        return any(s.tail for s in self.steps)

    @property
    def parent(self) -> UNode:
        if not self.steps:
            raise ValueError("the root has no parent")
        return UNode(self.steps[:-1])

    def child(self, edge: int, index: int, tail: bool = False) -> UNode:
        return UNode(self.steps + (Step(edge, index, tail),))

    def extend(self, steps: Iterable[Step]) -> UNode:
        return UNode(self.steps + tuple(steps))

    def prefix(self, n: int) -> UNode:
        return UNode(self.steps[:n])

    def le(self, other: UNode) -> bool:
        """Tree order on plain nodes: ``self`` lies on the walk to ``other``."""
        n = len(self.steps)
        return n <= len(other.steps) and other.steps[:n] == self.steps

    def lt(self, other: UNode) -> bool:
        return len(self.steps) < len(other.steps) and self.le(other)

    def comparable(self, other: UNode) -> bool:
        return self.le(other) or other.le(self)

    def sort_key(self) -> tuple:
        return tuple((s.edge, s.index, s.tail) for s in self.steps)

    def __str__(self) -> str:
        return "/".join(map(str, self.steps)) if self.steps else "@"

    def __repr__(self) -> str:
        return f"UNode({str(self)!r})"


ROOT = UNode(())


def resolve(P: TreePresentation, t: UNode) -> str:
    """Tag (final presentation node) of ``t``; raises IllegalNodeError if t is not a legal walk."""
    if P.is_empty:
        raise IllegalNodeError("the EMPTY presentation has no nodes")
    v = P.root
    for i, s in enumerate(t.steps):
        if not 0 <= s.edge < len(P.edges):
            raise IllegalNodeError(f"{t}: step {i} uses unknown edge e{s.edge}")
        e = P.edges[s.edge]
        if e.src != v:
            raise IllegalNodeError(f"{t}: step {i} leaves {e.src!r} but the walk is at {v!r}")
        if s.index < 0:
            raise IllegalNodeError(f"{t}: negative child index")
        if not e.mult.infinite:
            if s.tail:
                raise IllegalNodeError(f"{t}: tail step on finite edge e{s.edge}")
            if s.index >= e.mult.value:
                raise IllegalNodeError(
                    f"{t}: child index {s.index} out of range for {e.mult!r} on e{s.edge}"
                )
        v = e.dst
    return v


def children(P: TreePresentation, t: UNode, width: int) -> tuple[list[UNode], bool]:
    """Children of ``t``; infinite edges are sampled at indices ``0..width-1``.

    The flag is True when some infinite edge was truncated.
    """
    if t.is_pattern:
        raise IllegalNodeError(f"{t} is a cone pattern, not an unfolding node")
    v = resolve(P, t)
    kids: list[UNode] = []
    truncated = False
    for i, e in P.out_edges[v]:
        if e.mult.infinite:
            truncated = True
            kids.extend(t.child(i, k) for k in range(width))
        else:
            kids.extend(t.child(i, k) for k in range(e.mult.value))
    return kids, truncated


# --- truncations -----------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    id: int
    parent: int | None
    unode: UNode
    tag: str
    depth: int
    live: bool
    infinite: bool  # the node has an infinite edge whose children were sampled
    via_infinite: bool  # the node was reached through an infinite edge


@dataclass(frozen=True)
class FiniteTree:
    """Explicit truncation of an unfolding; node 0 is the root (if any)."""

    depth: int
    width: int
    nodes: tuple[TreeNode, ...]
    kid_ids: tuple[tuple[int, ...], ...]
    _index: dict[UNode, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def root(self) -> int | None:
        return 0 if self.nodes else None

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[TreeNode]:
        return iter(self.nodes)

    def kids(self, i: int) -> list[tuple[int, bool]]:
        return [(c, self.nodes[c].via_infinite) for c in self.kid_ids[i]]

    def is_live(self, i: int) -> bool:
        return self.nodes[i].live

    def find(self, t: UNode) -> int | None:
        return self._index.get(t)


def truncate(P: TreePresentation, depth: int, width: int) -> FiniteTree:
    """All unfolding nodes up to ``depth``, infinite edges sampled at ``width``."""
    if depth < 0 or width < 0:
        raise ValueError("depth and width must be non-negative")
    if P.is_empty:
        return FiniteTree(depth, width, (), ())
    live = live_nodes(P)
    nodes: list[TreeNode] = []
    kid_ids: list[list[int]] = []
    index: dict[UNode, int] = {}

    def add(parent: int | None, t: UNode, tag: str, d: int, via: bool) -> int:
        i = len(nodes)
        infinite = any(e.mult.infinite for _, e in P.out_edges[tag])
        nodes.append(TreeNode(i, parent, t, tag, d, tag in live, infinite, via))
        kid_ids.append([])
        index[t] = i
        if parent is not None:
            kid_ids[parent].append(i)
        return i

    add(None, ROOT, P.root, 0, False)
    frontier = [0]
    for d in range(1, depth + 1):
        nxt = []
        for i in frontier:
            node = nodes[i]
            for ordinal, e in P.out_edges[node.tag]:
                count = width if e.mult.infinite else e.mult.value
                for k in range(count):
                    nxt.append(add(i, node.unode.child(ordinal, k), e.dst, d, e.mult.infinite))
        frontier = nxt
    return FiniteTree(depth, width, tuple(nodes), tuple(map(tuple, kid_ids)), index)


@dataclass(frozen=True)
class SharedTree:
    """Hash-consed truncation: one node per (tag, remaining depth).

    Children are listed once per occurrence, so a FIN(2) edge yields the same
    child id twice.  Any quantity defined by recursion on subtrees takes the
    same value here as on the explicit truncation.
    """

    depth: int
    width: int
    keys: tuple[tuple[str, int], ...]
    live_flags: tuple[bool, ...]
    kid_lists: tuple[tuple[tuple[int, bool], ...], ...]

    @property
    def root(self) -> int | None:
        return 0 if self.keys else None

    def __len__(self) -> int:
        return len(self.keys)

    def kids(self, i: int) -> tuple[tuple[int, bool], ...]:
        return self.kid_lists[i]

    def is_live(self, i: int) -> bool:
        return self.live_flags[i]

    def tag(self, i: int) -> str:
        return self.keys[i][0]


def truncate_shared(P: TreePresentation, depth: int, width: int) -> SharedTree:
    if P.is_empty:
        return SharedTree(depth, width, (), (), ())
    live = live_nodes(P)
    ids: dict[tuple[str, int], int] = {}
    keys: list[tuple[str, int]] = []
    kid_lists: list[tuple[tuple[int, bool], ...]] = []

    def build(tag: str, remaining: int) -> int:
        key = (tag, remaining)
        if key in ids:
            return ids[key]
        i = len(keys)
        ids[key] = i
        keys.append(key)
        kid_lists.append(())
        kids: list[tuple[int, bool]] = []
        if remaining > 0:
            for _, e in P.out_edges[tag]:
                c = build(e.dst, remaining - 1)
                count = width if e.mult.infinite else e.mult.value
                kids.extend([(c, e.mult.infinite)] * count)
        kid_lists[i] = tuple(kids)
        return i

    build(P.root, depth)
    return SharedTree(depth, width, tuple(keys), tuple(k[0] in live for k in keys), tuple(kid_lists))
