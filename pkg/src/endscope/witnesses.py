"""Finite-depth certificates for non-scatteredness and non-Mengerness.

A :class:`BinaryWitness` is an order-embedding of the binary strings of length
<= depth into the unfolding.  A :class:`BaireWitness` is the width-limited
prefix of the omega^{<omega} successor pattern: for each string ``s`` a node
``t_of[s]`` above ``phi[s]`` whose infinite edge supplies ``phi[s + (n,)]``.

The extractors read the derivative fixpoint; :func:`verify_witness` does not,
and checks every condition directly against the unfolding.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping

from .derivatives import DerivativeTrace, Operator
from .errors import IllegalNodeError, PreconditionError
from .presentation import ROOT, TreePresentation, UNode, live_nodes, resolve

Word = tuple[int, ...]


def words(alphabet: int, max_len: int) -> Iterator[Word]:
    """All words over ``range(alphabet)`` of length <= max_len, shortest first."""
    for n in range(max_len + 1):
        yield from itertools.product(range(alphabet), repeat=n)


def word_str(w: Word, sep: str = "") -> str:
    return sep.join(map(str, w))


def parse_word(text: str, sep: str = "") -> Word:
    if not text:
        return ()
    parts = text.split(sep) if sep else list(text)
    return tuple(int(p) for p in parts)


def is_prefix(s: Word, t: Word) -> bool:
    return len(s) <= len(t) and t[: len(s)] == s


@dataclass(frozen=True)
class BinaryWitness:
    depth: int
    map: Mapping[Word, UNode]

    def to_dict(self) -> dict:
        return {
            "kind": "binary",
            "depth": self.depth,
            "map": {word_str(s): str(t) for s, t in sorted(self.map.items(), key=_word_key)},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> BinaryWitness:
        return cls(int(data["depth"]), {parse_word(k): UNode.parse(v) for k, v in data["map"].items()})


@dataclass(frozen=True)
class BaireWitness:
    depth: int
    width: int
    phi: Mapping[Word, UNode]
    t_of: Mapping[Word, UNode]

    def to_dict(self) -> dict:
        return {
            "kind": "baire",
            "depth": self.depth,
            "width": self.width,
            "phi": {word_str(s, "."): str(t) for s, t in sorted(self.phi.items(), key=_word_key)},
            "tOf": {word_str(s, "."): str(t) for s, t in sorted(self.t_of.items(), key=_word_key)},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> BaireWitness:
        return cls(
            int(data["depth"]),
            int(data["width"]),
            {parse_word(k, "."): UNode.parse(v) for k, v in data["phi"].items()},
            {parse_word(k, "."): UNode.parse(v) for k, v in data["tOf"].items()},
        )


def witness_from_dict(data: Mapping) -> BinaryWitness | BaireWitness:
    if data.get("kind") == "binary":
        return BinaryWitness.from_dict(data)
    if data.get("kind") == "baire":
        return BaireWitness.from_dict(data)
    raise ValueError(f"unknown witness kind {data.get('kind')!r}")


def _word_key(item: tuple[Word, UNode]) -> tuple[int, Word]:
    return len(item[0]), item[0]


def _children_in(P: TreePresentation, S: frozenset[str], t: UNode, tag: str, per_edge: int):
    """Children of t with tags in S, lexicographic, at most ``per_edge`` per edge."""
    for ordinal, e in P.out_edges[tag]:
        if e.dst in S:
            n = per_edge if e.mult.infinite else min(per_edge, e.mult.value)
            for k in range(n):
                yield t.child(ordinal, k), e.dst


def _require(trace: DerivativeTrace, op: Operator) -> None:
    if trace.operator is not op:
        raise PreconditionError(f"expected a {op.value} trace, got {trace.operator.value}")


def binary_witness(P: TreePresentation, trace: DerivativeTrace, depth: int) -> BinaryWitness | None:
    _require(trace, Operator.SCATTER)
    if trace.fixpoint_empty:
        return None
    F = trace.fixpoint
    mapping: dict[Word, UNode] = {(): ROOT}
    tags: dict[Word, str] = {(): P.root}
    for s in words(2, depth - 1):
        x, v = mapping[s], tags[s]
        # fixpoint nodes are never trivial, so the walk hits a branching within |F| steps
        for _ in range(len(F) + 1):
            kids = list(itertools.islice(_children_in(P, F, x, v, 2), 2))
            if len(kids) >= 2:
                break
            x, v = kids[0]
        else:  # pragma: no cover - contradicts the fixpoint property
            raise AssertionError("fixpoint node without a branching above it")
        for bit, (child, tag) in enumerate(kids):
            mapping[s + (bit,)] = child
            tags[s + (bit,)] = tag
    return BinaryWitness(depth, mapping)


def _nearest_infinite(P: TreePresentation, F: frozenset[str], x: UNode, v: str):
    """BFS (lexicographic) from x inside F to the first node with an infinite edge into F."""
    queue = deque([(x, v)])
    seen = {v}
    while queue:
        t, u = queue.popleft()
        for ordinal, e in P.out_edges[u]:
            if e.dst in F and e.mult.infinite:
                return t, ordinal, e.dst
        for ordinal, e in P.out_edges[u]:
            if e.dst in F and e.dst not in seen:
                seen.add(e.dst)
                queue.append((t.child(ordinal, 0), e.dst))
    raise AssertionError("fixpoint node without an infinite edge above it")  # pragma: no cover


def baire_witness(
    P: TreePresentation, trace: DerivativeTrace, depth: int, width: int
) -> BaireWitness | None:
    _require(trace, Operator.COMPACT)
    if trace.fixpoint_empty:
        return None
    F = trace.fixpoint
    phi: dict[Word, UNode] = {(): ROOT}
    tags: dict[Word, str] = {(): P.root}
    t_of: dict[Word, UNode] = {}
    for s in words(width, depth - 1):
        t, ordinal, dst = _nearest_infinite(P, F, phi[s], tags[s])
        t_of[s] = t
        for n in range(width):
            phi[s + (n,)] = t.child(ordinal, n)
            tags[s + (n,)] = dst
    return BaireWitness(depth, width, phi, t_of)


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_nodes(P: TreePresentation, nodes, live: frozenset[str]) -> str | None:
    for t in nodes:
        if t.is_pattern:
            return f"{t} is a cone pattern, not a node"
        try:
            tag = resolve(P, t)
        except IllegalNodeError as exc:
            return f"illegal UNode: {exc}"
        if tag not in live:
            return f"{t} lies on no ray"
    return None


def _check_embedding(mapping: Mapping[Word, UNode]) -> str | None:
    items = list(mapping.items())
    for (s, a), (t, b) in itertools.combinations(items, 2):
        if is_prefix(s, t) or is_prefix(t, s):
            lo, hi, lo_img, hi_img = (s, t, a, b) if len(s) < len(t) else (t, s, b, a)
            if not lo_img.lt(hi_img):
                return f"order not preserved: {word_str(lo)!r}<{word_str(hi)!r} but {lo_img} !< {hi_img}"
        elif a.comparable(b):
            return f"incomparable words {word_str(s)!r}, {word_str(t)!r} map to comparable {a}, {b}"
    return None


def verify_witness(P: TreePresentation, w: BinaryWitness | BaireWitness) -> WitnessCheck:
    live = live_nodes(P)
    if isinstance(w, BinaryWitness):
        if w.depth < 0 or set(w.map) != set(words(2, w.depth)):
            return WitnessCheck(False, "domain is not all binary words up to the depth")
        problem = _check_nodes(P, w.map.values(), live) or _check_embedding(w.map)
        return WitnessCheck(problem is None, problem or "")
    if isinstance(w, BaireWitness):
        if w.depth < 0 or w.width < 1:
            return WitnessCheck(False, "depth/width out of range")
        if set(w.phi) != set(words(w.width, w.depth)):
            return WitnessCheck(False, "phi domain is not all words up to the depth")
        if set(w.t_of) != set(words(w.width, w.depth - 1)):
            return WitnessCheck(False, "tOf domain is not all words shorter than the depth")
        problem = _check_nodes(P, [*w.phi.values(), *w.t_of.values()], live)
        problem = problem or _check_embedding(w.phi)
        if problem:
            return WitnessCheck(False, problem)
        for s, t in w.t_of.items():
            if not w.phi[s].le(t):
                return WitnessCheck(False, f"tOf({word_str(s, '.')!r}) = {t} is not above phi = {w.phi[s]}")
            for n in range(w.width):
                c = w.phi[s + (n,)]
                if c.depth != t.depth + 1 or not t.lt(c):
                    return WitnessCheck(False, f"phi({word_str(s + (n,), '.')!r}) = {c} is not a child of {t}")
                if not P.edges[c.steps[-1].edge].mult.infinite:
                    return WitnessCheck(False, f"{c} is not reached through an infinite edge")
        return WitnessCheck(True)
    return WitnessCheck(False, f"not a witness: {type(w).__name__}")
