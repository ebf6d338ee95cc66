"""Named posets used throughout the tests and the verification suite."""

from __future__ import annotations

from .affine import AffinePoset, build_affine_poset
from .poset import Poset, build_poset


def chain(n: int) -> Poset:
    return build_poset([(i, i + 1) for i in range(1, n)])


def claw(n: int) -> Poset:
    """Hub element 0 below leaves 1..n."""
    return build_poset([(0, i) for i in range(1, n + 1)])


def diamond() -> Poset:
    return build_poset([(1, 2), (1, 3), (2, 4), (3, 4)])


def w5() -> Poset:
    """Five-element poset: 1 under 2 and 3, both under 4, under 5."""
    return build_poset([(1, 2), (1, 3), (2, 4), (3, 4), (4, 5)])


def n4() -> Poset:
    """N-shaped poset on four elements."""
    return build_poset([(1, 3), (2, 3), (2, 4)])


def h6() -> Poset:
    """Height-one six-cycle whose dual complex is not flag."""
    return build_poset([(1, 2), (3, 4), (5, 6), (1, 4), (3, 6), (5, 2)])


def circular_chain(n: int) -> AffinePoset:
    return build_affine_poset(n, [(i, i + 1) for i in range(1, n + 1)])


def circular_claw(n: int) -> AffinePoset:
    """Hub residue n (= 0) below and above the leaf residues 1..n-1."""
    covers = [(k, n) for k in range(1, n)] + [(n, k + n) for k in range(1, n)]
    if n == 1:
        covers = []
    return build_affine_poset(n, covers)


DESK_POSETS: dict[str, Poset] = {
    "chain2": chain(2),
    "chain3": chain(3),
    "chain4": chain(4),
    "chain5": chain(5),
    "chain6": chain(6),
    "claw3": claw(3),
    "claw4": claw(4),
    "claw5": claw(5),
    "diamond4": diamond(),
    "n4": n4(),
    "w5": w5(),
    "h6": h6(),
}

DESK_AFFINE: dict[str, AffinePoset] = {
    "cchain2": circular_chain(2),
    "cchain3": circular_chain(3),
    "cchain4": circular_chain(4),
    "cclaw3": circular_claw(3),
    "cclaw4": circular_claw(4),
}
