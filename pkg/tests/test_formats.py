from fractions import Fraction

import pytest
from hypothesis import given

from hypmatch.core import FractionalMatching
from hypmatch.formats import (
    FormatError,
    dump_coloring,
    dump_fractional,
    dump_hypergraph,
    dump_matching,
    dump_orientation,
    format_rational,
    parse_coloring,
    parse_fractional,
    parse_hypergraph,
    parse_matching,
    parse_orientation,
    read_hypergraph,
    write_hypergraph,
)

from conftest import weighted_hypergraphs


@given(weighted_hypergraphs())
def test_hypergraph_round_trip(Ha):
    H, a = Ha
    G, b = parse_hypergraph(dump_hypergraph(H, a))
    assert G.edges == H.edges and G.rank == H.rank and b == a


def test_file_round_trip(tmp_path):
    H, a = parse_hypergraph("# demo\nH 3 1 2\nE 4 5/2 0 2\n")
    path = tmp_path / "h.txt"
    write_hypergraph(path, H, a)
    G, b = read_hypergraph(path)
    assert G.edges == {4: (0, 2)} and b == {4: Fraction(5, 2)}


@pytest.mark.parametrize(
    "text",
    ["E 0 1 0 1\n", "H 2 2 2\nE 0 1 0 1\n", "H 2 1 2\nE 0 -1 0 1\n", "H 2 1 2\nX 0\n", "H 2 1\n"],
)
def test_malformed_inputs(text):
    with pytest.raises(FormatError):
        parse_hypergraph(text)


def test_output_records_round_trip():
    h = FractionalMatching({0: Fraction(1, 3), 1: Fraction(0), 2: Fraction(2, 3)}, 3)
    back = parse_fractional(dump_fractional(h))
    assert back.values == {0: Fraction(1, 3), 2: Fraction(2, 3)} and back.q == 3
    assert parse_matching(dump_matching([3, 1])) == frozenset({1, 3})
    assert parse_coloring(dump_coloring({0: 2, 5: 1})) == {0: 2, 5: 1}
    assert parse_orientation(dump_orientation({1: (2, 0)})) == {1: (2, 0)}
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
