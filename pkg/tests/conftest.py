import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from motifest import load_graph, parse_motif, enumerate_rooted_spanning_trees

# Reference fixture: six edges over four vertices, timestamps 10..30.
# After loading, timestamps shift down by 10 and dense ids sort by time:
#   id 0: 1->2 @ 0    id 1: 1->3 @ 2    id 2: 2->3 @ 5
#   id 3: 2->3 @ 10   id 4: 3->1 @ 15   id 5: 3->4 @ 20
# (vertex labels above are the original ones; dense = label - 1)
G0_TEXT = b"""# reference fixture
1 2 10
2 3 15
2 3 20
3 1 25
3 4 30
1 3 12
"""


@pytest.fixture(scope="session")
def g0():
    return load_graph(G0_TEXT)


@pytest.fixture(scope="session")
def two_path_motif():
    return parse_motif(b"0 1\n1 2\n", 10)


@pytest.fixture(scope="session")
def path_tree(two_path_motif):
    """The 2-path tree rooted at the later edge, child hanging before it."""
    trees = enumerate_rooted_spanning_trees(two_path_motif)
    return next(t for t in trees if t.center == 1)


@pytest.fixture(scope="session")
def triangle_motif():
    return parse_motif(b"0 1\n1 2\n2 0\n", 20)


@pytest.fixture(scope="session")
def g0_first_four():
    # the four earliest fixture edges, used by the triangle examples
    return load_graph(b"1 2 10\n2 3 15\n2 3 20\n3 1 25\n")


def edge_id(graph, src_label, dst_label, raw_t):
    """Dense edge id from original labels and the unshifted timestamp."""
    u = graph.vertex_id(src_label)
    v = graph.vertex_id(dst_label)
    t = raw_t - graph.t_shift
    for e in graph.edges():
        if (e.src, e.dst, e.t) == (u, v, t):
            return e.id
    raise KeyError((src_label, dst_label, raw_t))
