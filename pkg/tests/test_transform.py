import pytest

from clrp import catalog
from clrp.constraints import NetworkInstance
from clrp.transform import (TransformError, expected_node_count, parse_edge_list, transform, validate_transform)


def relay():
    return NetworkInstance.of([((1,), (1, 2)), ((2,), (1, 2))], 1, 2, "relay")


def test_fano_all_ones():
    g = transform(catalog.fano(), [1] * 7)
    assert len(g.nodes) == 17 and len(g.edges) == 21
    assert validate_transform(g) == []
    assert sorted(g.demand.values()) == [1, 2, 3]


def test_doubled_rates_double_the_edges():
    g = transform(catalog.fano(), [2] * 7)
    assert len(g.edges) == 42
    assert len(g.nodes) == 17 + 3
    assert validate_transform(g) == []


def test_relay_node_count():
    g = transform(relay(), [1, 1])
    # source, collector, coding pair and one decoder
    assert len(g.nodes) == 5 == expected_node_count(relay(), [1, 1])
    assert validate_transform(g) == []


@pytest.mark.parametrize("name", sorted(catalog.NETWORKS))
@pytest.mark.parametrize("rate", [1, 2])
def test_catalog_node_counts(name, rate):
    net = catalog.NETWORKS[name]()
    g = transform(net, [rate] * net.N)
    assert len(g.nodes) == expected_node_count(net, [rate] * net.N)
    assert validate_transform(g) == []


def test_mixed_rates_weight_edges():
    g = transform(catalog.fano(), [1, 2, 3, 1, 1, 1, 1])
    # every edge leaving the collector of a source carries one unit of it
    out_of_m3 = [e for e in g.edges if e[0] == "m3"]
    heads = {h for _, h, _ in out_of_m3}
    assert len(out_of_m3) == 3 * len(heads)
    assert sum(1 for v, m in g.sources if m == 3) == 3


def test_dropped_edge_is_reported():
    g = transform(catalog.fano(), [1] * 7)
    g.edges = [e for e in g.edges if e[1] != "t5"]
    assert validate_transform(g) == ["sink t5 has no incoming edges"]
    g = transform(catalog.fano(), [1] * 7)
    g.edges = [e for e in g.edges if e[:2] != ("x4", "m4")]
    assert validate_transform(g) == ["message 4: node m4 has in-degree 0, rate is 1"]


def test_cycle_is_reported():
    g = parse_edge_list("node a\nnode b\nedge a b 1\nedge b a 1\n")
    assert any("cycle" in v for v in validate_transform(g))


def test_unproduced_message_is_an_error():
    # message 3 is read by a decoder but never produced
    net = NetworkInstance.of([((1, 3), (1, 2, 3))], 2, 3)
    with pytest.raises(TransformError):
        transform(net, [1, 1, 1])


def test_circular_coding_relations_are_an_error():
    net = NetworkInstance.of([((1, 3), (1, 3, 2)), ((1, 2), (1, 2, 3))], 1, 3)
    with pytest.raises(TransformError):
        transform(net, [1, 1, 1])


def test_bad_rates_rejected():
    with pytest.raises(TransformError):
        transform(catalog.fano(), [1] * 6)
    with pytest.raises(TransformError):
        transform(catalog.fano(), [1, -1, 1, 1, 1, 1, 1])


def test_deterministic_output():
    a = transform(catalog.hn1(), [1, 1, 1, 2, 2, 2]).to_text()
    b = transform(catalog.hn1(), [1, 1, 1, 2, 2, 2]).to_text()
    assert a == b


def test_edge_list_round_trip():
    g = transform(catalog.mdcs(), [1, 2, 1, 1, 1, 2, 1])
    back = parse_edge_list(g.to_text())
    assert back.nodes == g.nodes and back.edges == g.edges
    assert back.sources == g.sources and back.demand == g.demand
    assert validate_transform(back) == []


def test_edge_list_parse_errors():
    with pytest.raises(TransformError):
        parse_edge_list("node a\nedge a\n")
    with pytest.raises(TransformError):
        parse_edge_list("edge a b one\n")


def test_dot_output():
    dot = transform(relay(), [1, 1]).to_dot()
    assert dot.startswith("digraph") and '"s1_1" -> "m1"' in dot
