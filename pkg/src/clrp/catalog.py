"""Named benchmark instances."""

from __future__ import annotations

from .constraints import AccessStructure, NetworkInstance
from .polymatroid import RankVector


def fano() -> NetworkInstance:
    rel = [((1, 2), (1, 2, 4)), ((2, 3), (2, 3, 5)), ((4, 5), (4, 5, 6)), ((3, 4), (3, 4, 7)),
           ((1, 6), (3, 1, 6)), ((6, 7), (2, 6, 7)), ((5, 7), (1, 5, 7))]
    return NetworkInstance.of(rel, 3, 7, "fano")


def nonfano() -> NetworkInstance:
    rel = [((1, 2, 3), (1, 2, 3, 4)), ((1, 2), (1, 2, 5)), ((1, 3), (1, 3, 6)), ((2, 3), (2, 3, 7)),
           ((4, 5), (3, 4, 5)), ((4, 6), (2, 4, 6)), ((4, 7), (1, 4, 7)),
           ((5, 6, 7), (1, 2, 3, 5, 6, 7))]
    return NetworkInstance.of(rel, 3, 7, "nonfano")


def vamos() -> NetworkInstance:
    rel = [((1, 2, 3, 4), (1, 2, 3, 4, 5)), ((1, 2, 5), (1, 2, 5, 6)), ((2, 3, 6), (2, 3, 6, 7)),
           ((3, 4, 7), (3, 4, 7, 8)), ((4, 8), (2, 4, 8)), ((2, 3, 4, 8), (1, 2, 3, 4, 8)),
           ((1, 4, 5, 8), (1, 2, 3, 4, 5, 8)), ((1, 2, 3, 7), (1, 2, 3, 4, 7)), ((1, 5, 7), (1, 3, 5, 7))]
    return NetworkInstance.of(rel, 4, 8, "vamos")


def u24() -> NetworkInstance:
    """Network whose rate-(1,1,1,1) solutions are exactly U(2,4) over the field."""
    rel = [((1, 2), (1, 2, 3)), ((1, 3), (1, 2, 3)), ((2, 3), (1, 2, 3)), ((1, 2), (1, 2, 4)),
           ((1, 4), (1, 2, 4)), ((3, 4), (1, 3, 4)), ((3, 4), (2, 3, 4)), ((2, 4), (1, 2, 4))]
    return NetworkInstance.of(rel, 2, 4, "2u24")


def hn1() -> NetworkInstance:
    rel = [((1, 2, 3), (1, 2, 3, 4)), ((1, 3, 4), (1, 3, 4, 5)), ((3, 4, 5), (3, 4, 5, 6)),
           ((4, 5), (1, 3, 4, 5)), ((4, 6), (2, 3, 4, 6)), ((5, 6), (2, 3, 5, 6))]
    return NetworkInstance.of(rel, 3, 6, "hn1")


def mdcs() -> NetworkInstance:
    rel = [((1, 2, 3), (1, 2, 3, j)) for j in range(4, 8)]
    rel += [((4,), (1, 4)), ((5,), (1, 5)), ((4, 5), (1, 2, 4, 5)), ((6, 7), (1, 2, 6, 7)),
            ((4, 6), (1, 2, 3, 4, 6)), ((5, 7), (1, 2, 3, 5, 7))]
    return NetworkInstance.of(rel, 3, 7, "mdcs")


def small_symmetric() -> NetworkInstance:
    """Two sources, five labels; constraint symmetry group of order 2."""
    rel = [((1, 2), (1, 2, 3)), ((1, 2), (1, 2, 4)), ((3, 4), (3, 4, 5)), ((1, 5), (1, 2, 5)),
           ((3, 4), (1, 3, 4))]
    return NetworkInstance.of(rel, 2, 5, "small")


def benaloh() -> AccessStructure:
    """Parties 2..5 with minimal qualified sets {2,3}, {3,4}, {4,5}."""
    return AccessStructure.of(5, [(2, 3), (3, 4), (4, 5)])


BENALOH_SIZES = (2, 2, 3, 3, 2)

LINRANK6 = (1, 1, 2, 1, 2, 2, 2, 2, 3, 3, 4, 3, 4, 4, 4, 2, 3, 3, 4, 3, 4, 4, 4, 4, 5, 5, 6, 5, 6, 6, 6,
            4, 5, 5, 6, 5, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6)

FIVE_POINT = (2, 2, 4, 2, 4, 4, 4, 1, 2, 3, 4, 3, 4, 4, 4, 1, 3, 3, 4, 3, 4, 4, 4, 2, 3, 4, 4, 3, 4, 4, 4)


def linrank6() -> RankVector:
    return RankVector(6, LINRANK6)


def five_point() -> RankVector:
    return RankVector(5, FIVE_POINT)


NETWORKS = {
    "fano": fano, "nonfano": nonfano, "vamos": vamos, "2u24": u24, "hn1": hn1, "mdcs": mdcs,
    "small": small_symmetric,
}

ACCESS_STRUCTURES = {"benaloh": benaloh}

RANK_VECTORS = {"linrank6": linrank6, "five_point": five_point}
