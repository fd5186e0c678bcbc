import pytest

from nestedcma.cma import make_cma
from nestedcma.data import BOT, word


def fig2_automaton(weak: bool = False):
    """The reference encoding of the fig1 net, transcribed edge by edge (letter a, epsilon = silent)."""
    Q = [f"s{i}" for i in range(8)]
    ts = [
        ("s0", "a", BOT, "s1"),
        ("s2", "a", "s1", "s4"),
        ("s2", "a", "s3", "s4"),
        ("s4", "a", BOT, "s5"),
        ("s2", "a", BOT, "s3"),
        ("s2", "a", "s5", "s6"),
        ("s6", "a", "s5", "s7"),
    ]
    silent = [("s1", "s2"), ("s5", "s2"), ("s3", "s2")]
    fl = None if weak else [q for q in Q if q not in ("s1", "s3", "s5")]
    return make_cma(Q, ["a"], "s0", ["s7"], ts, fl, silent)


FIG2_WITNESS = word(*[("a", d) for d in ["d1", "d2", "d1", "d3", "d2", "d4", "d3", "d4"]])


@pytest.fixture
def fig2():
    return fig2_automaton()


@pytest.fixture
def fig2_weak():
    return fig2_automaton(weak=True)
