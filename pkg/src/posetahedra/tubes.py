"""Tubes and tubings of a finite poset.

A tube is a convex connected nonempty subset; a tubing is a family of tubes
that is pairwise nested-or-disjoint whose dependency digraph (edges between
disjoint tubes carrying an order relation) is acyclic.  The complex of
proper tubings is enumerated by backtracking with incremental cycle checks;
it is not flag, so clique-style shortcuts would be unsound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import MalformedTreeError, NotAPartitionError, NotATubeError, NotATubingError
from .poset import Poset, build_poset, is_connected, is_convex


@dataclass(frozen=True, order=True)
class Tube:
    """Canonical form of a tube: the sorted tuple of its member ids."""

    members: tuple[int, ...]

    @staticmethod
    def of(members: Iterable[int]) -> "Tube":
        return Tube(tuple(sorted(set(int(m) for m in members))))

    @cached_property
    def as_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.members), self.members)

    def issubset(self, other: "Tube") -> bool:
        return self.as_set <= other.as_set

    def isdisjoint(self, other: "Tube") -> bool:
        return self.as_set.isdisjoint(other.as_set)

    def __contains__(self, e: int) -> bool:
        return e in self.as_set

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return "{" + ",".join(str(m) for m in self.members) + "}"


def make_tube(P: Poset, members: Iterable[int]) -> Tube:
    """Validated tube constructor."""
    tube = Tube.of(members)
    if not tube.members:
        raise NotATubeError("a tube is nonempty")
    if not set(tube.members) <= set(P.elements):
        raise NotATubeError(f"{tube} has elements outside the poset")
    if not is_convex(P, tube.members):
        raise NotATubeError(f"{tube} is not convex")
    if not is_connected(P, tube.members):
        raise NotATubeError(f"{tube} is not connected")
    return tube


def full_tube(P: Poset) -> Tube:
    return Tube(tuple(P.elements))


@lru_cache(maxsize=None)
def enumerate_tubes(P: Poset, proper_only: bool = False) -> tuple[Tube, ...]:
    """All tubes, sorted by (size, members); proper keeps 1 < |t| < |P|."""
    n = len(P.elements)
    found = []
    for mask in range(1, 1 << n):
        members = tuple(P.elements[k] for k in range(n) if mask >> k & 1)
        if proper_only and not 1 < len(members) < n:
            continue
        if is_convex(P, members) and is_connected(P, members):
            found.append(Tube(members))
    found.sort(key=Tube.key)
    return tuple(found)


def nested_or_disjoint(a: Tube, b: Tube) -> bool:
    return a.issubset(b) or b.issubset(a) or a.isdisjoint(b)


def has_arrow(P: Poset, a: Tube, b: Tube) -> bool:
    """True iff some i in a is strictly below some j in b."""
    return any(P.lt(i, j) for i in a for j in b)


def d_graph(P: Poset, tubes: Iterable[Tube]) -> dict[Tube, tuple[Tube, ...]]:
    """Dependency digraph: edges between disjoint tubes with a relation."""
    tubes = sorted(set(tubes), key=Tube.key)
    out: dict[Tube, tuple[Tube, ...]] = {}
    for a in tubes:
        targets = [b for b in tubes if a != b and a.isdisjoint(b) and has_arrow(P, a, b)]
        out[a] = tuple(targets)
    return out


def _find_cycle(adj: dict[Tube, tuple[Tube, ...]]) -> list[Tube] | None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in adj}
    stack: list[Tube] = []

    def dfs(v: Tube) -> list[Tube] | None:
        color[v] = GRAY
        stack.append(v)
        for w in adj[v]:
            if color[w] == GRAY:
                return stack[stack.index(w):]
            if color[w] == WHITE:
                cyc = dfs(w)
                if cyc is not None:
                    return cyc
        stack.pop()
        color[v] = BLACK
        return None

    for v in adj:
        if color[v] == WHITE:
            cyc = dfs(v)
            if cyc is not None:
                return cyc
            stack.clear()
    return None


class TubingCheck(NamedTuple):
    ok: bool
    crossing: tuple[Tube, Tube] | None = None
    cycle: tuple[Tube, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_tubing(P: Poset, tubes: Iterable[Tube]) -> TubingCheck:
    """Check the tubing conditions, returning a certificate on failure."""
    tubes = sorted(set(tubes), key=Tube.key)
    for a, b in itertools.combinations(tubes, 2):
        if not nested_or_disjoint(a, b):
            return TubingCheck(False, crossing=(a, b))
    cycle = _find_cycle(d_graph(P, tubes))
    if cycle is not None:
        return TubingCheck(False, cycle=tuple(cycle))
    return TubingCheck(True)


@dataclass(frozen=True)
class Tubing:
    """A validated set of tubes of a host poset."""

    host: Poset
    tubes: frozenset[Tube]

    @staticmethod
    def of(P: Poset, tubes: Iterable, validate: bool = True) -> "Tubing":
        tset = frozenset(t if isinstance(t, Tube) else make_tube(P, t) for t in tubes)
        if validate:
            for t in tset:
                make_tube(P, t.members)
            check = is_tubing(P, tset)
            if not check:
                detail = f"crossing {check.crossing}" if check.crossing else f"cycle {check.cycle}"
                raise NotATubingError(detail)
        return Tubing(P, tset)

    @cached_property
    def sorted_tubes(self) -> tuple[Tube, ...]:
        return tuple(sorted(self.tubes, key=Tube.key))

    def key(self):
        return (len(self.tubes), tuple(t.members for t in self.sorted_tubes))

    def is_proper(self) -> bool:
        n = len(self.host.elements)
        return all(1 < len(t) < n for t in self.tubes)

    def __len__(self) -> int:
        return len(self.tubes)

    def __iter__(self):
        return iter(self.sorted_tubes)

    def __contains__(self, tube: Tube) -> bool:
        return tube in self.tubes

    def __repr__(self) -> str:
        return "Tubing[" + " ".join(map(repr, self.sorted_tubes)) + "]"


@lru_cache(maxsize=None)
def enumerate_proper_tubings(P: Poset, max_only: bool = False) -> tuple[Tubing, ...]:
    """All proper tubings, by backtracking over tubes in canonical order.

    Compatibility with the chosen prefix is pairwise (nested-or-disjoint)
    plus an incremental acyclicity check: a new cycle must pass through the
    tube just added, so one DFS from it suffices.  With max_only, only
    tubings of size |P|-2 (the polytope's vertices) are returned.
    """
    tubes = enumerate_tubes(P, proper_only=True)
    n = len(tubes)
    target = len(P.elements) - 2
    compat = [[nested_or_disjoint(a, b) for b in tubes] for a in tubes]
    arrow = [[a != b and a.isdisjoint(b) and has_arrow(P, a, b) for b in tubes] for a in tubes]

    chosen: list[int] = []
    succ: dict[int, set[int]] = {}
    results: list[frozenset[Tube]] = []

    def creates_cycle(i: int) -> bool:
        seen = set()
        stack = list(succ[i])
        while stack:
            v = stack.pop()
            if v == i:
                return True
            if v not in seen:
                seen.add(v)
                stack.extend(succ[v])
        return False

    def extend(start: int) -> None:
        if not max_only or len(chosen) == target:
            results.append(frozenset(tubes[k] for k in chosen))
        if len(chosen) == target:
            return
        for i in range(start, n):
            if not all(compat[i][j] for j in chosen):
                continue
            succ[i] = {j for j in chosen if arrow[i][j]}
            for j in chosen:
                if arrow[j][i]:
                    succ[j].add(i)
            if not creates_cycle(i):
                chosen.append(i)
                extend(i + 1)
                chosen.pop()
            for j in chosen:
                succ[j].discard(i)
            del succ[i]

    extend(0)
    tubings = [Tubing(P, ts) for ts in results]
    tubings.sort(key=Tubing.key)
    return tuple(tubings)


@dataclass(frozen=True)
class TubingTree:
    """The rooted tree on a tubing plus the full poset and all singletons."""

    host: Poset
    root: Tube
    parent: dict[Tube, Tube] = field(hash=False)
    children: dict[Tube, tuple[Tube, ...]] = field(hash=False)

    def nodes(self) -> tuple[Tube, ...]:
        return tuple(sorted(self.children, key=Tube.key))

    def non_singleton_nodes(self) -> tuple[Tube, ...]:
        return tuple(t for t in self.nodes() if len(t) > 1)

    def adjacent_pairs(self) -> tuple[tuple[Tube, Tube], ...]:
        """(child, parent) pairs where the child is a non-singleton tube."""
        return tuple(
            (t, self.parent[t]) for t in self.nodes() if t != self.root and len(t) > 1
        )

    def minimal_containing(self, members: Iterable[int]) -> Tube:
        """Smallest node containing the given set (the root in the worst case)."""
        target = frozenset(members)
        best = self.root
        changed = True
        while changed:
            changed = False
            for child in self.children[best]:
                if target <= child.as_set:
                    best = child
                    changed = True
                    break
        return best


def tubing_tree(T: Tubing) -> TubingTree:
    P = T.host
    root = full_tube(P)
    nodes = {root} | set(T.tubes) | {Tube((e,)) for e in P.elements}
    ordered = sorted(nodes, key=lambda t: (-len(t), t.members))
    parent: dict[Tube, Tube] = {}
    for t in ordered:
        if t == root:
            continue
        candidates = [s for s in ordered if t != s and t.issubset(s)]
        parent[t] = min(candidates, key=lambda s: (len(s), s.members))
    children: dict[Tube, list[Tube]] = {t: [] for t in ordered}
    for t, p in parent.items():
        children[p].append(t)
    children_t = {t: tuple(sorted(c, key=Tube.key)) for t, c in children.items()}
    return TubingTree(host=P, root=root, parent=parent, children=children_t)


# -- bijections with classical face labels ------------------------------------


def chain_poset(n: int) -> Poset:
    return build_poset([(i, i + 1) for i in range(1, n)])


def claw_poset(n: int, hub: int = 0) -> Poset:
    return build_poset([(hub, i) for i in range(1, n + 1)])


def tubing_from_plane_tree(tree) -> Tubing:
    """Tubing of a chain from a plane rooted tree given as nested sequences.

    Leaves are integers and must read 1..n left to right; internal nodes are
    sequences of at least two subtrees.  Every internal node other than the
    root contributes the tube of its descendant leaves.
    """
    leaves: list[int] = []
    tube_sets: list[tuple[int, ...]] = []

    def walk(node, is_root: bool) -> tuple[int, ...]:
        if isinstance(node, int):
            leaves.append(node)
            return (node,)
        node = list(node)
        if len(node) < 2:
            raise MalformedTreeError("internal nodes need at least two children")
        below: tuple[int, ...] = ()
        for child in node:
            below += walk(child, False)
        if not is_root:
            tube_sets.append(below)
        return below

    walk(tree, True)
    n = len(leaves)
    if leaves != list(range(1, n + 1)):
        raise MalformedTreeError("leaves must be labeled 1..n left to right")
    host = chain_poset(n)
    return Tubing.of(host, [Tube.of(s) for s in tube_sets])


def tubing_from_ordered_set_partition(blocks: Sequence[Iterable[int]]) -> Tubing:
    """Tubing of a claw from an ordered set partition of its leaves.

    Block prefixes joined with the hub give the nested tubes; the last
    prefix (the whole poset) is dropped to keep the tubing proper.
    """
    blocks = [tuple(sorted(set(b))) for b in blocks]
    if not blocks or any(not b for b in blocks):
        raise NotAPartitionError("blocks must be nonempty")
    ground = sorted(itertools.chain.from_iterable(blocks))
    n = len(ground)
    if ground != list(range(1, n + 1)) or len(set(ground)) != n:
        raise NotAPartitionError("blocks must partition 1..n")
    host = claw_poset(n)
    tubes = []
    prefix: set[int] = {0}
    for b in blocks[:-1]:
        prefix |= set(b)
        tubes.append(Tube.of(prefix))
    return Tubing.of(host, tubes)
