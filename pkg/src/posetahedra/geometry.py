"""Certified realization pipeline.

The dual polytope is grown from the dual order polytope by stellar
subdivisions, one per proper tube in weakly decreasing size order.  At
every step the face lattice of the intermediate polytope is known exactly
(admissible tubings for the current melted set), so facet hyperplanes are
re-solved from their claimed tight vertex sets and certified, never
reconstructed by convex hull.

Admissible tubings contain the full poset; frozen tubes are leaves of the
nesting tree while each melted tube's children partition it.  The face
dimension bookkeeping is |P| + |melted in T| - |frozen in T| - 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import DegenerateError, EpsilonInfeasibleError, MismatchError, NotAFaceError
from .lattice import FaceLattice, associahedron_face_lattice, tubing_partitions
from .linalg import affine_rank, nullspace
from .polytope import (
    Chart,
    Facet,
    RationalPolytope,
    facet_through,
    polar_dual,
    polytope_from_data,
)
from .poset import Poset, ideal_filter_splits
from .rational import check_bit_budget
from .tubes import Tube, enumerate_tubes, full_tube

AdmTubing = frozenset[Tube]


# -- order polytope -----------------------------------------------------------


def _sigma_alpha_chart(P: Poset, base: dict[int, Fraction]) -> Chart:
    """Chart of the affine plane {sum x = 0, alpha_P x = 1} anchored at base."""
    ids = P.elements
    weight = {e: Fraction(0) for e in ids}
    for i, j in P.covers:
        weight[j] += 1
        weight[i] -= 1
    rows = [[Fraction(1)] * len(ids), [weight[e] for e in ids]]
    basis = tuple(tuple(v) for v in nullspace(rows, len(ids)))
    return Chart(ids=ids, base=tuple(base[e] for e in ids), basis=basis)


def order_polytope(P: Poset) -> RationalPolytope:
    """V/H representation of the order polytope, dimension |P| - 2.

    Vertices come from ideal/filter splits: the split (I, F) crossed by e
    covers gets value -|F|/(e|P|) on I and |I|/(e|P|) on F.  Facets are the
    cover inequalities x_i <= x_j expressed in the chart.
    """
    n = len(P.elements)
    splits = ideal_filter_splits(P)
    ambient_vertices = []
    for ideal, filt in splits:
        e = sum(1 for i, j in P.covers if i in set(ideal) and j in set(filt))
        a = Fraction(-len(filt), e * n)
        b = Fraction(len(ideal), e * n)
        ambient_vertices.append({x: (a if x in set(ideal) else b) for x in P.elements})
    centroid = {
        e: sum((v[e] for v in ambient_vertices), Fraction(0)) / len(ambient_vertices)
        for e in P.elements
    }
    chart = _sigma_alpha_chart(P, centroid)
    vertices = [chart.to_chart(v) for v in ambient_vertices]
    if n == 2:
        return polytope_from_data(0, vertices[:1], (), chart, vertex_labels=(splits[0],))

    facets = []
    for i, j in P.covers:
        # x_j - x_i >= 0 becomes <B^T(e_i - e_j), u> <= base_j - base_i
        normal = tuple(vec[P.elements.index(i)] - vec[P.elements.index(j)] for vec in chart.basis)
        offset = centroid[j] - centroid[i]
        facets.append(Facet(normal, offset, label=(i, j)))
    poly = polytope_from_data(n - 2, vertices, facets, chart, vertex_labels=tuple(splits))
    if affine_rank(poly.vertices) != n - 2:
        raise DegenerateError("order polytope has unexpected dimension")
    return poly


# -- admissible tubings -------------------------------------------------------


@dataclass(frozen=True)
class MeltedSet:
    """Upward-closed set of tubes containing the full poset."""

    host: Poset
    tubes: frozenset[Tube]

    @staticmethod
    def of(P: Poset, tubes) -> "MeltedSet":
        tset = frozenset(tubes) | {full_tube(P)}
        for t in tset:
            for s in enumerate_tubes(P):
                if t.issubset(s) and s not in tset and len(s) > len(t):
                    raise ValueError(f"melted set not upward closed: {t} < {s}")
        return MeltedSet(P, tset)

    def __contains__(self, tube: Tube) -> bool:
        return tube in self.tubes


@dataclass(frozen=True)
class AdmissiblePoset:
    """All admissible tubings for a melted set, with dims and comparison."""

    host: Poset
    melted: MeltedSet
    elements: tuple[AdmTubing, ...]

    def dim(self, T: AdmTubing) -> int:
        m = sum(1 for t in T if t in self.melted)
        return len(self.host.elements) + m - (len(T) - m) - 2

    def le(self, a: AdmTubing, b: AdmTubing) -> bool:
        """Face order: melted tubes persist, frozen tubes may coarsen."""
        for t in a:
            if t in self.melted:
                if t not in b:
                    return False
            elif not any(t.issubset(s) for s in b if s not in self.melted):
                return False
        return True

    @cached_property
    def by_dim(self) -> dict[int, tuple[AdmTubing, ...]]:
        out: dict[int, list[AdmTubing]] = {}
        for T in self.elements:
            out.setdefault(self.dim(T), []).append(T)
        return {d: tuple(v) for d, v in out.items()}

    def vertices(self) -> tuple[AdmTubing, ...]:
        return self.by_dim.get(0, ())

    def facets(self) -> tuple[AdmTubing, ...]:
        return self.by_dim.get(len(self.host.elements) - 3, ())

    def s_tau(self, tau: Tube) -> AdmTubing:
        outside = set(self.host.elements) - tau.as_set
        return frozenset({full_tube(self.host), tau} | {Tube((e,)) for e in sorted(outside)})

    def s_tau_prime(self, tau: Tube) -> AdmTubing:
        return frozenset(
            {full_tube(self.host), tau} | {Tube((e,)) for e in self.host.elements}
        )


def admissible_tubings(P: Poset, M: MeltedSet) -> AdmissiblePoset:
    """Enumerate admissible tubings recursively along the nesting tree.

    Every melted tube in a tubing must be partitioned by its children and
    every frozen tube is a leaf, so the candidates factor over tubing
    partitions; acyclicity then only needs checking partition by partition.
    """
    memo: dict[Tube, tuple[frozenset[Tube], ...]] = {}

    def subtrees(tube: Tube) -> tuple[frozenset[Tube], ...]:
        if tube in memo:
            return memo[tube]
        options: list[frozenset[Tube]] = []
        for blocks in tubing_partitions(P, tube.members, strict_blocks=True):
            child_choices = []
            for block in sorted(blocks, key=Tube.key):
                if block in M:
                    child_choices.append(subtrees(block))
                else:
                    child_choices.append((frozenset({block}),))
            for combo in itertools.product(*child_choices):
                options.append(frozenset({tube}).union(*combo))
        memo[tube] = tuple(options)
        return memo[tube]

    elements = tuple(sorted(subtrees(full_tube(P)),
                            key=lambda T: tuple(sorted(t.members for t in T))))
    return AdmissiblePoset(host=P, melted=M, elements=elements)


# -- stellar subdivision ------------------------------------------------------


def _pullout_point(Q: RationalPolytope, face_ids: frozenset[int]) -> tuple[Fraction, ...]:
    """(1 + eps) times the face centroid, eps = half the room to the first
    facet not containing the face.  The polytope must contain the origin."""
    pts = [Q.vertices[i] for i in sorted(face_ids)]
    x = tuple(sum(col, Fraction(0)) / len(pts) for col in zip(*pts))
    bound = None
    for facet, inc in zip(Q.facets, Q.incidence):
        if face_ids <= inc:
            continue
        nx = facet.value(x)
        if nx > 0:
            t = (facet.offset - nx) / nx
            bound = t if bound is None else min(bound, t)
    if bound is not None and bound <= 0:
        raise EpsilonInfeasibleError("no positive pull-out factor exists")
    # with no binding facet any positive factor keeps the point beneath them
    eps = Fraction(1) if bound is None else bound / 2
    new_point = tuple((1 + eps) * c for c in x)
    for facet, inc in zip(Q.facets, Q.incidence):
        beyond = facet.value(new_point) > facet.offset
        if beyond != (face_ids <= inc):
            raise EpsilonInfeasibleError("pull-out point misclassifies a facet")
    return new_point


def rebuild_from_lattice(dim, vertices, labels, adm) -> RationalPolytope:
    """Solve every facet hyperplane from the lattice and certify the result."""
    facets = []
    for Tf in adm.facets():
        tight = [i for i, lab in enumerate(labels) if adm.le(lab, Tf)]
        facets.append(facet_through(vertices, tight, label=Tf))
    poly = polytope_from_data(dim, vertices, facets, vertex_labels=tuple(labels))
    lattice_match(poly, adm)
    return poly


def lattice_match(Q: RationalPolytope, adm: AdmissiblePoset) -> None:
    """Certify that Q's faces realize the admissible-tubing lattice exactly.

    For every admissible T the vertices below it must (a) be exactly the
    intersection of the tight sets of the facets above it, and (b) affinely
    span dim(T) dimensions.
    """
    labels = Q.vertex_labels
    if labels is None or len(labels) != len(Q.vertices):
        raise MismatchError("polytope lacks vertex labels")
    vertex_set = set(adm.vertices())
    if set(labels) != vertex_set or len(labels) != len(vertex_set):
        raise MismatchError("vertex labels disagree with the lattice")
    for T in adm.elements:
        below = frozenset(i for i, lab in enumerate(labels) if adm.le(lab, T))
        cut = frozenset(range(len(Q.vertices)))
        above = [f for f in Q.facets if adm.le(T, f.label)]
        if adm.dim(T) < Q.dim and not above:
            raise MismatchError(f"face {T} lies on no facet")
        for f, inc in zip(Q.facets, Q.incidence):
            if adm.le(T, f.label):
                cut &= inc
        if cut != below:
            raise MismatchError("face vertex set disagrees with facet intersection")
        if affine_rank([Q.vertices[i] for i in sorted(below)]) != adm.dim(T):
            raise MismatchError(f"face {sorted(t.members for t in T)} has wrong dimension")


def stellar_subdivide(Q: RationalPolytope, face_vertex_ids,
                      new_lattice: AdmissiblePoset) -> RationalPolytope:
    """Stellar subdivision at the face spanned by the given vertices.

    Geometry: add (1+eps) times the face centroid, certified strictly
    beyond exactly the facets containing the face.  Combinatorics: facet
    hyperplanes are re-solved from the supplied (already updated) lattice.
    """
    face_ids = frozenset(face_vertex_ids)
    if Q.face_from_vertices(face_ids) != face_ids:
        raise NotAFaceError("vertex set does not span a face")
    new_point = _pullout_point(Q, face_ids)

    new_dim0 = set(new_lattice.vertices())
    kept = [(v, lab) for v, lab in zip(Q.vertices, Q.vertex_labels) if lab in new_dim0]
    removed = [lab for lab in Q.vertex_labels if lab not in new_dim0]
    if removed and (len(removed) > 1 or len(face_ids) != 1):
        raise MismatchError("subdivision removed an unexpected vertex")
    fresh = new_dim0 - set(Q.vertex_labels)
    if len(fresh) != 1:
        raise MismatchError("expected exactly one new vertex label")
    vertices = tuple(v for v, _ in kept) + (new_point,)
    labels = tuple(lab for _, lab in kept) + (next(iter(fresh)),)
    return rebuild_from_lattice(Q.dim, vertices, labels, new_lattice)


# -- full pipeline ------------------------------------------------------------


@dataclass(frozen=True)
class RealizationResult:
    poset: Poset
    dual: RationalPolytope
    primal: RationalPolytope
    lattice: FaceLattice
    melt_sequence: tuple[Tube, ...]
    stage_vertex_counts: tuple[int, ...]


def melt_order(tubes) -> list[Tube]:
    """Weakly decreasing size, lexicographic members within a size."""
    return sorted(tubes, key=lambda t: (-len(t), t.members))


def initial_dual(P: Poset) -> tuple[RationalPolytope, AdmissiblePoset]:
    """Dual order polytope with admissible-tubing labels, certified."""
    M = MeltedSet.of(P, ())
    adm = admissible_tubings(P, M)
    ord_poly = order_polytope(P)
    dual = polar_dual(ord_poly)
    labels = []
    for f_label in (f.label for f in ord_poly.facets):
        i, j = f_label
        labels.append(adm.s_tau(Tube.of((i, j))))
    dual = rebuild_from_lattice(dual.dim, dual.vertices, labels, adm)
    return dual, adm


def realize_poset_associahedron(P: Poset) -> RealizationResult:
    """Run the melting induction and certify the final polytope.

    Returns the subdivided dual, its polar (the simple polytope itself) and
    the combinatorial face lattice the result was checked against.
    """
    lattice = associahedron_face_lattice(P)
    if len(P.elements) == 2:
        point = RationalPolytope(0, ((),), (), (), None, (frozenset(),))
        return RealizationResult(P, point, point, lattice, (), (1,))

    dual, adm = initial_dual(P)
    counts = [dual.n_vertices]
    melted: set[Tube] = set()
    sequence = melt_order(enumerate_tubes(P, proper_only=True))
    for tau in sequence:
        face_ids = frozenset(
            i for i, lab in enumerate(dual.vertex_labels) if adm.le(lab, adm.s_tau(tau))
        )
        melted.add(tau)
        adm = admissible_tubings(P, MeltedSet.of(P, melted))
        dual = stellar_subdivide(dual, face_ids, adm)
        counts.append(dual.n_vertices)
        check_bit_budget(itertools.chain.from_iterable(dual.vertices),
                         f"realization after melting {tau}")

    _check_final_lattice(P, dual, lattice)
    primal = polar_dual(dual)
    return RealizationResult(P, dual, primal, lattice, tuple(sequence), tuple(counts))


def _check_final_lattice(P: Poset, dual: RationalPolytope, lattice: FaceLattice) -> None:
    """The final dual's faces must be exactly the proper tubings."""
    strip = lambda T: frozenset(t for t in T if 1 < len(t) < len(P.elements))
    vertex_tubes = [strip(lab) for lab in dual.vertex_labels]
    if any(len(ts) != 1 for ts in vertex_tubes):
        raise MismatchError("final dual vertices are not labeled by single tubes")
    tube_of = [next(iter(ts)) for ts in vertex_tubes]
    if set(tube_of) != set(enumerate_tubes(P, proper_only=True)):
        raise MismatchError("final dual vertices do not match proper tubes")
    facet_tubings = {strip(f.label) for f in dual.facets}
    expected = {frozenset(key) for key in lattice.faces_of_dim(0)}
    if facet_tubings != expected:
        raise MismatchError("final dual facets do not match maximal tubings")
    for f, inc in zip(dual.facets, dual.incidence):
        tubes_on = {tube_of[i] for i in inc}
        if tubes_on != set(strip(f.label)):
            raise MismatchError("final dual incidence disagrees with membership")
