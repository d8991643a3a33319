"""
Whitespace edge lists: header "n m", then m lines "i j" (0-based).
"""
from pathlib import Path
from typing import TextIO, Union

from stein_embed.exceptions import FormatError, InvalidModel
from stein_embed.graphs.models import Graph


def parse_edge_list(text: str) -> Graph:
    lines = [(no, line.split()) for no, line in enumerate(text.splitlines(), start=1)]
    lines = [(no, parts) for no, parts in lines if parts and not parts[0].startswith('#')]
    if not lines:
        raise FormatError('empty edge list')
    no, header = lines[0]
    if len(header) != 2:
        raise FormatError('header must be "n m"', no)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError('header must hold two integers', no)
    if len(lines) - 1 != m:
        raise FormatError(f'header announces {m} edges, found {len(lines) - 1}', no)
    edges = []
    for no, parts in lines[1:]:
        if len(parts) != 2:
            raise FormatError('edge line must be "i j"', no)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError('edge endpoints must be integers', no)
    if len(set(frozenset(e) for e in edges)) != len(edges):
        raise FormatError('duplicate edge')
    try:
        return Graph.from_edges(n, edges)
    except InvalidModel as e:
        raise FormatError(str(e))


def read_edge_list(source: Union[str, Path, TextIO]) -> Graph:
    if hasattr(source, 'read'):
        return parse_edge_list(source.read())
    return parse_edge_list(Path(source).read_text())


def format_edge_list(g: Graph) -> str:
    edges = list(g.edges())
    lines = [f'{g.n} {len(edges)}'] + [f'{i} {j}' for i, j in edges]
    return '\n'.join(lines) + '\n'


def write_edge_list(g: Graph, path: Union[str, Path]):
    Path(path).write_text(format_edge_list(g))
