"""Line-oriented text formats for hypergraphs and algorithm outputs.

Hypergraph files::

    # comment
    H <n> <m> <r>
    E <edge_id> <num>/<den> <v1> <v2> ...

A weight written as ``<num>`` alone is an integer.  Outputs use one record per
line: ``C <node> <color>``, ``F <edge_id> <num>/<den>``, ``M <edge_id>`` and
``O <edge_id> <from> <to>``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, TextIO

from .core import FractionalMatching, Hypergraph


class FormatError(ValueError):
    pass


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {text!r}") from exc


def _records(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_hypergraph(text: str) -> tuple[Hypergraph, dict[int, Fraction]]:
    header = None
    edges = []
    weights: dict[int, Fraction] = {}
    for lineno, parts in _records(text.splitlines()):
        tag = parts[0]
        if tag == "H":
            if header is not None or len(parts) != 4:
                raise FormatError(f"line {lineno}: malformed header")
            header = tuple(int(p) for p in parts[1:])
        elif tag == "E":
            if header is None:
                raise FormatError(f"line {lineno}: edge before header")
            if len(parts) < 4:
                raise FormatError(f"line {lineno}: edge needs an id, a weight and vertices")
            eid = int(parts[1])
            weights[eid] = parse_rational(parts[2])
            if weights[eid] < 0:
                raise FormatError(f"line {lineno}: negative weight")
            edges.append((eid, [int(p) for p in parts[3:]]))
        else:
            raise FormatError(f"line {lineno}: unknown record {tag!r}")
    if header is None:
        raise FormatError("missing header line")
    n, m, r = header
    if m != len(edges):
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    H = Hypergraph(n, edges, rank=r)
    return H, weights


def dump_hypergraph(H: Hypergraph, a: Mapping[int, Fraction] | None = None) -> str:
    out = [f"H {H.n} {H.m} {H.rank}"]
    for e, vs in H.edges.items():
        w = Fraction(1) if a is None else a[e]
        out.append(f"E {e} {format_rational(w)} " + " ".join(map(str, vs)))
    return "\n".join(out) + "\n"


def read_hypergraph(path) -> tuple[Hypergraph, dict[int, Fraction]]:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def write_hypergraph(path, H: Hypergraph, a=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_hypergraph(H, a))


def dump_coloring(coloring: Mapping[int, int]) -> str:
    return "".join(f"C {u} {c}\n" for u, c in sorted(coloring.items()))


def parse_coloring(text: str) -> dict[int, int]:
    out = {}
    for lineno, parts in _records(text.splitlines()):
        if parts[0] != "C" or len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'C <node> <color>'")
        out[int(parts[1])] = int(parts[2])
    return out


def dump_fractional(h: FractionalMatching) -> str:
    return "".join(
        f"F {e} {format_rational(x)}\n" for e, x in sorted(h.values.items()) if x != 0
    )


def parse_fractional(text: str) -> FractionalMatching:
    values = {}
    for lineno, parts in _records(text.splitlines()):
        if parts[0] != "F" or len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'F <edge_id> <value>'")
        values[int(parts[1])] = parse_rational(parts[2])
    return FractionalMatching(values, FractionalMatching.common_denominator(values))


def dump_matching(M: Iterable[int]) -> str:
    return "".join(f"M {e}\n" for e in sorted(M))


def parse_matching(text: str) -> frozenset[int]:
    out = set()
    for lineno, parts in _records(text.splitlines()):
        if parts[0] != "M" or len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'M <edge_id>'")
        out.add(int(parts[1]))
    return frozenset(out)


def dump_orientation(orientation: Mapping[int, tuple[int, int]]) -> str:
    return "".join(f"O {e} {u} {v}\n" for e, (u, v) in sorted(orientation.items()))


def parse_orientation(text: str) -> dict[int, tuple[int, int]]:
    out = {}
    for lineno, parts in _records(text.splitlines()):
        if parts[0] != "O" or len(parts) != 4:
            raise FormatError(f"line {lineno}: expected 'O <edge_id> <from> <to>'")
        out[int(parts[1])] = (int(parts[2]), int(parts[3]))
    return out


def write_text(path_or_stream, text: str) -> None:
    if path_or_stream is None or path_or_stream == "-":
        import sys

        sys.stdout.write(text)
    elif hasattr(path_or_stream, "write"):
        stream: TextIO = path_or_stream
        stream.write(text)
    else:
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            fh.write(text)
