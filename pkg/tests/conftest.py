import itertools

from hypothesis import strategies as st

from smallcancel.graphs import Graph


@st.composite
def small_graphs(draw, max_vertices=8, min_edges=0):
    n = draw(st.integers(2, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_edges, len(pairs)), max_size=len(pairs)))
    flips = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    edges = tuple((v, u) if f else (u, v) for (u, v), f in zip(chosen, flips))
    return Graph(n, edges)
