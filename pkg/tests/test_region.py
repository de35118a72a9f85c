import itertools
import random

import pytest
from hypothesis import given, strategies as st

import oracle_suite
import oracles
from clrp.polymatroid import RankVector
from clrp.region import (MAX_DIM, conic_hull_hrep, cone_equal, cone_from_rows, double_description, free_directions,
                         project_and_augment, rate_region, read_polyhedral, write_polyhedral)


def unit(i, n):
    return tuple(1 if j == i else 0 for j in range(n))


def test_simplex_cone():
    for n in (2, 3, 4):
        c = conic_hull_hrep([unit(i, n) for i in range(n)])
        assert sorted(c.rows) == sorted(unit(i, n) for i in range(n))
        assert sorted(c.rays) == sorted(unit(i, n) for i in range(n))


def test_single_ray_in_the_plane():
    c = conic_hull_hrep([(1, 0)])
    # x >= 0 and the line y = 0 written as a pair of opposite rows
    assert set(c.rows) == {(0, -1), (0, 1), (1, 0)}
    assert c.contains((3, 0)) and not c.contains((1, 1)) and not c.contains((-1, 0))


def test_whole_space_has_no_rows():
    c = conic_hull_hrep([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert c.rows == ()


def test_double_description_of_the_orthant():
    lin, rays = double_description([unit(i, 3) for i in range(3)], 3)
    assert lin == [] and sorted(rays) == sorted(unit(i, 3) for i in range(3))


def test_cone_equality():
    a = conic_hull_hrep([(1, 0), (0, 1)])
    b = conic_hull_hrep([(1, 0), (0, 1), (1, 1), (2, 5)])
    assert cone_equal(a, b)
    assert not cone_equal(a, conic_hull_hrep([(1, 0), (1, 1)]))
    with pytest.raises(ValueError):
        cone_equal(a, conic_hull_hrep([unit(0, 3)]))


def test_free_directions():
    assert free_directions(1, 3) == [(-1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_project_and_augment():
    assert project_and_augment([], 1, 2) == [(-1, 0), (0, 1)]
    h = RankVector(2, [1, 1, 1])
    out = project_and_augment([h, h], 1, 2)
    assert out.count((1, 1)) == 1 and (-1, 0) in out and (0, 1) in out
    with pytest.raises(ValueError):
        project_and_augment([RankVector(3, [1] * 7)], 1, 2)


def test_rate_region_of_a_relay():
    c = rate_region([(1, 1)], 1, 2)
    # exactly the rates with R2 >= R1 >= 0
    assert c.contains((1, 1)) and c.contains((1, 5)) and c.contains((0, 0))
    assert not c.contains((2, 1)) and not c.contains((-1, 0))
    assert c.facets == 2


def test_empty_rate_region_is_the_free_cone_cut_to_the_orthant():
    c = rate_region([], 1, 2)
    assert c.contains((0, 4)) and not c.contains((1, 1))


def test_polyhedral_text():
    text = write_polyhedral([(1, 0), (0, 1)], 2)
    assert text.splitlines()[:3] == ["H-representation", "begin", "2 3 rational"]
    assert read_polyhedral(text) == ("H", 2, [(1, 0), (0, 1)])
    c = conic_hull_hrep([(1, 2, 0), (0, 1, 1), (1, 0, 1)])
    kind, n, rows = read_polyhedral("* comment\n" + c.to_text("V"))
    assert kind == "V" and n == 3 and sorted(rows) == sorted(c.rays)
    with pytest.raises(ValueError):
        write_polyhedral([(1,)], 1, "X")
    with pytest.raises(ValueError):
        read_polyhedral("H-representation\nbegin\n1 3 rational\n0 1\nend\n")


def test_dimension_limit():
    with pytest.raises(ValueError):
        conic_hull_hrep([unit(0, MAX_DIM + 1)])
    with pytest.raises(ValueError):
        double_description([], MAX_DIM + 1)


def test_v_to_h_to_v_round_trip():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(2, 5)
        rays = [tuple(rng.randint(-2, 3) for _ in range(n)) for _ in range(rng.randint(1, 7))]
        c = conic_hull_hrep(rays, n)
        back = cone_from_rows(c.rows, n)
        assert cone_equal(c, back)
        assert all(c.contains(r) for r in rays)


def test_against_brute_force_facets():
    assert oracle_suite.check_dd() == []


@given(st.integers(2, 4).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(0, 3)] * n), min_size=n, max_size=n + 3)))
def test_full_dimensional_facets_match_the_oracle(rays):
    n = len(rays[0])
    if not oracles.full_dimensional(rays, n):
        return
    c = conic_hull_hrep(rays, n)
    assert sorted(c.rows) == sorted(oracles.brute_facets(rays, n))
    # every row is tight on at least n - 1 independent generators
    for a in c.rows:
        tight = [r for r in rays if sum(x * y for x, y in zip(a, r)) == 0]
        assert len(tight) >= n - 1


def test_rows_are_primitive_and_sorted():
    c = conic_hull_hrep([(2, 4, 0), (0, 3, 3), (6, 0, 6)])
    from math import gcd
    from functools import reduce
    assert list(c.rows) == sorted(c.rows)
    assert all(reduce(gcd, (abs(x) for x in r)) == 1 for r in c.rows)


def test_hull_is_independent_of_generator_order():
    rays = [(1, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 2)]
    forms = {conic_hull_hrep(list(p), 3).rows for p in itertools.permutations(rays)}
    assert len(forms) == 1
