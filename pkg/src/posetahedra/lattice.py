"""Graded face lattices: tubings for the main polytope, tubing partitions
for the order polytope, plus f/h-vectors, flagness and face factorizations.

Face keys are frozensets of tubes (or of partition blocks); the empty face
is the ``EMPTY`` sentinel so Euler checks run uniformly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import NotGradedError
from .poset import Poset, quotient_poset
from .tubes import (
    Tube,
    Tubing,
    d_graph,
    enumerate_proper_tubings,
    enumerate_tubes,
    full_tube,
    is_tubing,
    tubing_tree,
    _find_cycle,
)


class _EmptyFace:
    def __repr__(self):
        return "EMPTY"


EMPTY = _EmptyFace()

FaceKey = object  # frozenset[Tube] | _EmptyFace


def _face_sort_key(item):
    key, dim = item
    if key is EMPTY:
        return (dim, ())
    return (dim, tuple(sorted(t.members for t in key)))


@dataclass(frozen=True)
class FaceLattice:
    """A graded face poset with explicit covering edges.

    ``faces[i]`` has dimension ``dims[i]``; ``covers`` holds index pairs
    (lower, upper) with a dimension gap of exactly one.  The top face (the
    polytope itself) is included; so is the empty face at dimension -1.
    """

    kind: str
    dim: int
    faces: tuple[FaceKey, ...]
    dims: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]

    def index(self, key: FaceKey) -> int:
        return self.faces.index(key)

    def faces_of_dim(self, d: int) -> tuple[FaceKey, ...]:
        return tuple(f for f, fd in zip(self.faces, self.dims) if fd == d)

    def vertex_keys(self) -> tuple[FaceKey, ...]:
        return self.faces_of_dim(0)

    def facet_keys(self) -> tuple[FaceKey, ...]:
        return self.faces_of_dim(self.dim - 1)

    def upper_covers(self, i: int) -> tuple[int, ...]:
        return tuple(b for a, b in self.covers if a == i)

    def lower_covers(self, i: int) -> tuple[int, ...]:
        return tuple(a for a, b in self.covers if b == i)

    def check_graded(self) -> None:
        top = self.dims.index(self.dim)
        for a, b in self.covers:
            if self.dims[b] - self.dims[a] != 1:
                raise NotGradedError("cover with dimension gap != 1")
        for i, d in enumerate(self.dims):
            if d < self.dim and not self.upper_covers(i):
                raise NotGradedError(f"face {self.faces[i]} has no upper cover")
            if d > -1 and not self.lower_covers(i):
                raise NotGradedError(f"face {self.faces[i]} has no lower cover")
        if self.dims[top] != self.dim:
            raise NotGradedError("missing top face")

    def euler_sum(self) -> int:
        """Alternating sum over all faces including the empty one."""
        return sum(-1 if d % 2 else 1 for d in self.dims)


def _build(kind: str, dim: int, keyed_dims: dict, cover_pairs: Iterable) -> FaceLattice:
    items = sorted(keyed_dims.items(), key=_face_sort_key)
    faces = tuple(k for k, _ in items)
    dims = tuple(d for _, d in items)
    index = {id_key(k): i for i, k in enumerate(faces)}
    covers = tuple(sorted((index[id_key(a)], index[id_key(b)]) for a, b in cover_pairs))
    return FaceLattice(kind=kind, dim=dim, faces=faces, dims=dims, covers=covers)


def id_key(key: FaceKey):
    if key is EMPTY:
        return ("EMPTY",)
    return ("SET", frozenset(key))


@lru_cache(maxsize=None)
def associahedron_face_lattice(P: Poset) -> FaceLattice:
    """Faces are proper tubings under reverse inclusion.

    dim(face of T) = |P| - |T| - 2; removing one tube is a covering step,
    and the empty face sits below the vertices (maximal tubings).
    """
    n = len(P.elements)
    tubings = enumerate_proper_tubings(P)
    keyed = {EMPTY: -1}
    for T in tubings:
        keyed[T.tubes] = n - len(T.tubes) - 2
    covers = []
    for T in tubings:
        for t in T.tubes:
            covers.append((T.tubes, T.tubes - {t}))
        if len(T.tubes) == n - 2:
            covers.append((EMPTY, T.tubes))
    return _build("associahedron", n - 2, keyed, covers)


@lru_cache(maxsize=None)
def tubing_partitions(P: Poset, members: tuple[int, ...] | None = None,
                      strict_blocks: bool = False) -> tuple[frozenset[Tube], ...]:
    """All partitions of ``members`` into tubes with acyclic dependencies.

    strict_blocks drops the one-block partition {members}.  Blocks are found
    by always covering the smallest remaining element, so each partition is
    produced exactly once.
    """
    ground = tuple(P.elements) if members is None else members
    inside = [t for t in enumerate_tubes(P) if t.as_set <= set(ground)]
    results: list[frozenset[Tube]] = []
    chosen: list[Tube] = []

    def extend(remaining: frozenset[int]) -> None:
        if not remaining:
            blocks = frozenset(chosen)
            if strict_blocks and len(blocks) == 1:
                return
            if len(blocks) > 1 and _find_cycle(d_graph(P, blocks)) is not None:
                return
            results.append(blocks)
            return
        smallest = min(remaining)
        for t in inside:
            if smallest in t and t.as_set <= remaining:
                chosen.append(t)
                extend(remaining - t.as_set)
                chosen.pop()

    extend(frozenset(ground))
    results.sort(key=lambda bs: (len(bs), tuple(sorted(t.members for t in bs))))
    return tuple(results)


@lru_cache(maxsize=None)
def order_polytope_face_lattice(P: Poset) -> FaceLattice:
    """Faces are tubing partitions ordered by refinement.

    The one-block partition is the empty face; a face of partition T has
    dimension |T| - 2.  Face inclusion holds when every block of the finer
    partition sits inside a block of the coarser one.
    """
    parts = tubing_partitions(P)
    keyed = {}
    for T in parts:
        keyed[EMPTY if len(T) == 1 else T] = len(T) - 2
    by_dim: dict[int, list] = {}
    for key, d in keyed.items():
        by_dim.setdefault(d, []).append(key)
    covers = []
    for d in sorted(by_dim):
        if d + 1 not in by_dim:
            continue
        for lo in by_dim[d]:
            for hi in by_dim[d + 1]:
                if _partition_le(lo, hi):
                    covers.append((lo, hi))
    return _build("order_polytope", len(P.elements) - 2, keyed, covers)


def _partition_le(coarse, fine) -> bool:
    """face(coarse) inside face(fine): every fine block inside a coarse block."""
    if coarse is EMPTY:
        return True
    if fine is EMPTY:
        return False
    return all(any(f.issubset(c) for c in coarse) for f in fine)


def f_vector(L: FaceLattice) -> tuple[int, ...]:
    """(f_0, ..., f_dim): face counts by dimension, top face included."""
    L.check_graded()
    counts = [0] * (L.dim + 1)
    for d in L.dims:
        if d >= 0:
            counts[d] += 1
    return tuple(counts)


def h_vector(L: FaceLattice) -> tuple[int, ...]:
    """h-vector via the binomial transform of the dual simplicial complex.

    The dual's (i-1)-face numbers are read off the f-vector from the top:
    f*_{i-1} = f_{dim-i}.  Combinatorial only; meaningful when the lattice
    comes from a simple polytope.
    """
    f = f_vector(L)
    d = L.dim
    fstar = [f[d - i] for i in range(d + 1)]  # fstar[i] == f*_{i-1}
    h = []
    for k in range(d + 1):
        total = 0
        for i in range(k + 1):
            total += (-1) ** (k - i) * math.comb(d - i, k - i) * fstar[i]
        h.append(total)
    return tuple(h)


class FlagCheck(NamedTuple):
    ok: bool
    witness: tuple[Tube, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_flag_dual(P: Poset) -> FlagCheck:
    """Whether every pairwise-compatible set of proper tubes is a tubing.

    On failure returns a minimal non-tubing whose proper subsets are all
    tubings (found by extending tubings one tube at a time, so the first
    hit in canonical order is minimal).
    """
    tubes = enumerate_tubes(P, proper_only=True)
    n = len(tubes)
    pair_ok = [[bool(is_tubing(P, (a, b))) for b in tubes] for a in tubes]
    chosen: list[int] = []
    witness: list[FlagCheck] = []

    def subsets_are_tubings(idxs: list[int]) -> bool:
        return all(
            bool(is_tubing(P, [tubes[k] for k in idxs if k != drop])) for drop in idxs
        )

    def extend(start: int) -> bool:
        for i in range(start, n):
            if not all(pair_ok[i][j] and pair_ok[j][i] for j in chosen):
                continue
            candidate = chosen + [i]
            if bool(is_tubing(P, [tubes[k] for k in candidate])):
                chosen.append(i)
                if extend(i + 1):
                    return True
                chosen.pop()
            elif len(candidate) >= 3 and subsets_are_tubings(candidate):
                witness.append(FlagCheck(False, tuple(tubes[k] for k in candidate)))
                return True
        return False

    if extend(0):
        return witness[0]
    return FlagCheck(True)


def face_product_decomposition(P: Poset, T: Tubing) -> list[Poset]:
    """Quotient posets whose polytopes multiply to the face of T.

    For every tube of T (and the whole poset) the maximal tubes of T
    strictly inside it are contracted; ambient dimensions of the factors
    add up to |P| - |T| - 2.
    """
    tree = tubing_tree(T)
    factors = []
    for node in sorted(T.tubes | {full_tube(P)}, key=Tube.key):
        blocks = [c for c in tree.children[node] if c in T.tubes]
        loose = set(node.members) - set(itertools.chain.from_iterable(b.members for b in blocks))
        partition = [b.members for b in blocks] + [(e,) for e in sorted(loose)]
        sub = P.subposet(node.members) if len(node) > 1 else None
        if len(partition) == len(node):
            factors.append(sub)
        else:
            factors.append(quotient_poset(sub, partition))
    return factors
