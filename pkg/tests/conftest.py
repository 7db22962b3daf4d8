import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from monoclt.graph import Graph, bipyramid_chain, complete, cycle, gnp, pyramid, star


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


@pytest.fixture(scope="session")
def small_corpus():
    """The reference corpus used by the exactness criteria."""
    graphs = [
        ("K3", complete(3)),
        ("K4", complete(4)),
        ("K5", complete(5)),
        ("C4", cycle(4)),
        ("P5", path_graph(5)),
        ("K1_3", star(3)),
        ("pyramid2", pyramid(2)),
        ("pyramid3", pyramid(3)),
        ("pyramid4", pyramid(4)),
        ("bipyramid2", bipyramid_chain(2)),
    ]
    graphs += [(f"gnp8_seed{s}", gnp(8, 0.4, s)) for s in range(5)]
    return graphs
