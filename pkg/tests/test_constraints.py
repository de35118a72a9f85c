import itertools

import pytest
from hypothesis import given, strategies as st

from clrp import catalog
from clrp.constraints import (AccessStructure, ConstraintSet, NetworkInstance, ParseError, canonical_constraint,
                              constraints_from_access_structure, constraints_from_network,
                              constraints_from_rank_vector, format_access_structure, format_network, mask_of,
                              parse_access_structure, parse_network, preserves, rate_targets, relabel_constraint,
                              restrict, symmetry_group)
from clrp.polymatroid import RankVector


def layer_counts(I):
    out = {}
    for t in I.layers:
        out[t] = out.get(t, 0) + 1
    return out


def test_fano_constraint_count():
    I = constraints_from_network(catalog.fano())
    assert len(I) == 8
    assert layer_counts(I)["L1"] == 1


def test_hn1_constraint_count():
    assert len(constraints_from_network(catalog.hn1())) == 7


def test_all_sources_single_relation():
    I = constraints_from_network(NetworkInstance.of([], 3, 3))
    assert len(I) == 1 and I.layers == ("L1",)
    # a relation whose outputs are all sources is a decoding row
    I = constraints_from_network(NetworkInstance.of([((1, 2), (1, 2, 3))], 3, 3))
    assert sorted(I.layers) == ["L1", "L3"]


def test_single_source_has_no_independence_row():
    net = NetworkInstance.of([((1,), (1, 2))], 1, 2)
    assert layer_counts(constraints_from_network(net)) == {"L2": 1}


def test_network_validation():
    with pytest.raises(ValueError):
        NetworkInstance.of([((1,), (1, 5))], 1, 3)
    with pytest.raises(ValueError):
        NetworkInstance.of([((1, 2), (1, 2))], 1, 3)
    with pytest.raises(ValueError):
        NetworkInstance.of([], 4, 3)


def test_benaloh_layers():
    I = constraints_from_access_structure(catalog.benaloh())
    assert layer_counts(I) == {"recovery": 8, "secrecy": 7}


def test_degenerate_access_structures():
    full = AccessStructure.of(4, [(2, 3, 4)])
    assert layer_counts(constraints_from_access_structure(full)) == {"recovery": 1, "secrecy": 6}
    empty = AccessStructure.of(4, [])
    assert layer_counts(constraints_from_access_structure(empty)) == {"secrecy": 7}
    everyone = AccessStructure.of(3, [(2,), (3,)])
    assert layer_counts(constraints_from_access_structure(everyone)) == {"recovery": 3}


def test_access_structure_validation():
    with pytest.raises(ValueError):
        AccessStructure.of(4, [(1, 2)])
    with pytest.raises(ValueError):
        AccessStructure.of(4, [(2, 3), (2, 3, 4)])
    with pytest.raises(ValueError):
        AccessStructure.of(3, [(2, 7)])


def test_rank_vector_constraints():
    I = constraints_from_rank_vector(catalog.linrank6())
    assert len(I) == 0 and len(I.targets) == 63
    assert len(constraints_from_rank_vector(RankVector(4, [1, 1, 2, 1, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 2])).targets) == 15
    zero = constraints_from_rank_vector(RankVector(2, [0, 0, 0]))
    assert set(zero.targets.values()) == {0}
    with pytest.raises(ValueError):
        constraints_from_rank_vector(RankVector(2, [1, 1, 3]))


def test_restrict():
    I = constraints_from_network(catalog.fano())
    assert len(restrict(I, [1, 2, 4])) == 1
    assert restrict(I, range(1, 8)) == I
    assert len(restrict(I, [])) == 0
    T = constraints_from_rank_vector(catalog.five_point())
    assert len(restrict(T, [1, 2]).targets) == 3


def test_targets_merge_and_conflict():
    I = constraints_from_network(catalog.fano()).with_targets(rate_targets([1, 1, 1]))
    assert I.targets == {1: 1, 2: 1, 4: 1}
    with pytest.raises(ValueError):
        I.with_targets({1: 2})
    with pytest.raises(ValueError):
        ConstraintSet(2, (), {4: 1})


def test_canonical_constraint_merges_terms():
    assert canonical_constraint([(3, 1), (1, -1), (3, 1)]) == canonical_constraint([(1, -1), (3, 2)])
    assert not canonical_constraint([(3, 1), (3, -1)])


def test_small_symmetry_group():
    G = symmetry_group(constraints_from_network(catalog.small_symmetric()))
    assert G.order() == 2
    swap = [g for g in G.elements() if g != tuple(range(5))]
    assert swap == [(0, 1, 3, 2, 4)]


def test_symmetry_group_edge_cases():
    assert symmetry_group(ConstraintSet(4)).order() == 24
    h = constraints_from_rank_vector(RankVector(3, [1, 2, 2, 3, 3, 3, 3]))
    assert symmetry_group(h).order() == 1
    fano = constraints_from_network(catalog.fano())
    with pytest.raises(ValueError):
        symmetry_group(fano, [(1, 0, 2, 3, 4, 5, 6)])


def test_symmetry_group_elements_preserve():
    for name in ("fano", "nonfano", "2u24", "hn1", "mdcs"):
        I = constraints_from_network(catalog.NETWORKS[name]())
        G = symmetry_group(I)
        for g in G.elements():
            assert preserves(I, g)


def test_symmetry_group_against_brute_force():
    for name in ("2u24", "small", "hn1"):
        I = constraints_from_network(catalog.NETWORKS[name]())
        brute = {p for p in itertools.permutations(range(I.N)) if preserves(I, p)}
        assert set(symmetry_group(I).elements()) == brute


@pytest.mark.parametrize("name", sorted(catalog.NETWORKS))
def test_network_text_round_trip(name):
    net = catalog.NETWORKS[name]()
    back = parse_network(format_network(net), net.name)
    assert constraints_from_network(back) == constraints_from_network(net)
    assert back.k == net.k and back.N == net.N


def test_access_structure_text_round_trip():
    acc = catalog.benaloh()
    assert parse_access_structure(format_access_structure(acc)) == acc


@pytest.mark.parametrize("text", [
    "", "network k=2\ncon {1} -> {1,2}\n", "network k=1 n=2\ncon {1} => {2}\n",
    "network k=1 n=2\ncon {1} -> {1,9}\n", "ss n=3\nauth 2,3\n",
])
def test_parser_rejects_garbage(text):
    parse = parse_access_structure if text.startswith("ss") else parse_network
    with pytest.raises(ParseError):
        parse(text)


def test_comments_and_blank_lines_are_ignored():
    net = parse_network("# relay\n\nnetwork k=1 n=2\n  con {1} -> {1,2}  \n")
    assert len(net.relations) == 1


@given(st.sampled_from(sorted(catalog.NETWORKS)), st.permutations(range(8)))
def test_relabelling_commutes_with_construction(name, p8):
    net = catalog.NETWORKS[name]()
    n = net.N
    perm = [x for x in p8 if x < n]
    I = constraints_from_network(net)
    rel = [(frozenset(perm[x - 1] + 1 for x in a), frozenset(perm[x - 1] + 1 for x in b)) for a, b in net.relations]
    moved = ConstraintSet(n, tuple(relabel_constraint(c, perm) for c in I.constraints))
    # the independence row uses sources only, so rebuild it under the same relabelling
    direct = [[(mask_of(b), 1), (mask_of(a), -1)] for a, b in rel]
    if net.k > 1:
        srcs = [perm[i] + 1 for i in range(net.k)]
        direct.append([(mask_of([s]), 1) for s in srcs] + [(mask_of(srcs), -1)])
    assert moved == ConstraintSet(n, tuple(direct))
