from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hypmatch.core import Hypergraph

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def hypergraphs(draw, max_n=8, max_m=10, max_r=3, min_m=0):
    """Small multi-hypergraphs with declared rank and degree equal to the actual ones."""
    n = draw(st.integers(min_value=max_r, max_value=max_n))
    m = draw(st.integers(min_value=min_m, max_value=max_m))
    edges = []
    for e in range(m):
        size = draw(st.integers(min_value=1, max_value=max_r))
        verts = draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
        edges.append((e, verts))
    return Hypergraph(n, edges)


@st.composite
def weighted_hypergraphs(draw, weights="rational", **kw):
    H = draw(hypergraphs(**kw))
    if weights == "unit":
        return H, {e: Fraction(1) for e in H.edges}
    a = {
        e: Fraction(draw(st.integers(1, 30)), draw(st.integers(1, 6)))
        for e in H.edges
    }
    return H, a


@st.composite
def graphs(draw, max_n=8, max_m=10):
    n = draw(st.integers(min_value=2, max_value=max_n))
    m = draw(st.integers(min_value=0, max_value=max_m))
    edges = []
    for e in range(m):
        verts = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
        edges.append((e, verts))
    return Hypergraph(n, edges, rank=2)
