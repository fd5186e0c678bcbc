import random
from pathlib import Path

import pytest

from generators import rand_cca, rand_cma, rand_homca, rand_ndcma, rand_nrhra, rand_vas, rand_word
from nestedcma.data import value_from_path
from nestedcma.dataaut import NFA, DataAutomaton, NestedDataAutomaton, Transducer
from nestedcma.formats import (
    FormatError, model_of, parse_artifact, parse_letters, parse_text, parse_word, print_artifact,
    print_word,
)
from nestedcma.homca import homca_to_homca_prime, make_homca
from nestedcma.ndcma import NDCMA, SugaredNDCMA, ndcma_accepts, sugar
from nestedcma.petrinet import make_net

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "nestedcma" / "fixtures"


def _named(M):
    """The generator numbers HOMCA states; give them printable names."""
    n = lambda q: f"q{q}"
    ts = [(n(t.source), t.letter, str(t.op), n(t.target)) for t in M.transitions]
    return make_homca(M.level, map(n, M.states), M.alphabet, M.multiset_alphabet, n(M.initial),
                      map(n, M.accepting), ts, M.variant, M.weak)


def round_trip(x):
    return parse_text(print_artifact(x))


def test_round_trip_flat_and_counting_models():
    rng = random.Random(121)
    for _ in range(30):
        for x in (rand_cma(rng, silent=True), rand_cma(rng, weak=False), rand_cca(rng),
                  rand_nrhra(rng), rand_vas(rng)):
            assert round_trip(x) == x


def test_round_trip_nested_models():
    rng = random.Random(122)
    for _ in range(30):
        A = rand_ndcma(rng, level=rng.randint(1, 3), weak=rng.random() < 0.5)
        assert round_trip(A) == A
        for variant in ("homca", "homca'"):
            M = _named(rand_homca(rng, variant))
            assert round_trip(M) == M


def test_round_trip_data_automata():
    T = Transducer({"s", "t"}, {"a", "b"}, {"x"}, "s", {"t"}, {("s", "a", "x", "t")})
    B = NFA({"0", "1"}, {"x"}, {"0"}, {"1"}, {("0", "x", "1")})
    for D in (DataAutomaton(T, B), NestedDataAutomaton(T, (B, B))):
        assert round_trip(D) == D


def test_round_trip_petri():
    net = make_net(["p", "q"], [("t", ["p"], ["q", "q"], ["p"]), ("u", [], ["p"])],
                   {"p": 1}, {"q": 2}, "reach")
    assert round_trip(net) == net
    for name in ("fig1.net", "reset.net", "reset-gadget.net"):
        net = parse_artifact(FIXTURES / name)
        assert round_trip(net) == net


def test_tuple_states_get_fresh_names():
    # translated machines have tuple states; the printout stays parseable
    M = homca_to_homca_prime(parse_artifact(FIXTURES / "fold.homca"))
    text = print_artifact(M)
    assert "# " in text
    back = parse_text(text)
    assert len(back.states) == len(M.states)
    assert len(back.transitions) == len(M.transitions)


def test_sugared_round_trip():
    A = parse_artifact(FIXTURES / "sessions.ndcma")
    S = sugar(A)
    text = print_artifact(S)
    assert "sugared: yes" in text
    back = parse_text(text)
    assert isinstance(back, SugaredNDCMA)
    assert len(back.transitions) == len(S.transitions)


def test_fixture_counts():
    fig2 = parse_artifact(FIXTURES / "fig2.cma")
    assert len(fig2.states) == 8 and not fig2.weak
    assert parse_artifact(FIXTURES / "fig2-weak.cma").weak
    sessions = parse_artifact(FIXTURES / "sessions.ndcma")
    assert isinstance(sessions, NDCMA) and sessions.level == 2
    w = parse_word((FIXTURES / "sessions.word").read_text(), 2)
    assert ndcma_accepts(sessions, w)
    assert parse_letters((FIXTURES / "fold.string").read_text()) == ("a", "b")


def test_model_of():
    assert model_of("# c\nmodel: vas\n") == "vas"
    assert model_of("states a\n") is None


def test_missing_and_unknown_model():
    with pytest.raises(FormatError):
        parse_text("states q\n")
    with pytest.raises(FormatError) as info:
        parse_text("model: turing\n")
    assert info.value.kind == "syntax" and info.value.line == 1


def test_syntax_error_carries_line():
    text = "model: cma\nstates p q\nalphabet a\ninitial p\ntrans p a bot q\n"
    with pytest.raises(FormatError) as info:
        parse_text(text)
    assert info.value.kind == "syntax" and info.value.line == 5


def test_global_not_local_names_state():
    text = ("model: cma\nstates p q\nalphabet a\ninitial p\n"
            "locally_accepting p\nglobally_accepting q\n")
    with pytest.raises(FormatError) as info:
        parse_text(text)
    assert info.value.kind == "invariant"
    assert "q" in str(info.value)


def test_guard_errors():
    head = "model: ndcma\nlevel: 2\nstates p\nalphabet a\ninitial p\n"
    with pytest.raises(FormatError):
        parse_text(head + "trans p a level 2 [bot] -> p\n")
    with pytest.raises(FormatError) as info:
        parse_text(head + "trans p a level 1 [r] -> p\n")
    assert info.value.kind == "invariant"


def test_ndcma_needs_level():
    with pytest.raises(FormatError):
        parse_text("model: ndcma\nstates p\nalphabet a\ninitial p\n")


def test_word_round_trip():
    rng = random.Random(123)
    for _ in range(50):
        w = rand_word(rng, ["a", "b"])
        assert parse_word(print_word(w)) == w
    nested = parse_word("a r1/s2\nb r1\n", 2)
    assert nested.values()[0] == value_from_path("r1/s2")
    assert nested.values()[0].parent == nested.values()[1]


def test_broken_word_paths():
    for bad in ("a r1//s2\n", "a /s2\n", "a r1/\n"):
        with pytest.raises(FormatError):
            parse_word(bad)
    with pytest.raises(FormatError) as info:
        parse_word("a d1\nb r/s/t\n", 2)
    assert info.value.line == 2
    with pytest.raises(FormatError):
        parse_word("a\n")


def test_comments_and_repeated_lists():
    text = ("model: wcma  # weak\nstates p\nstates q # more\nalphabet a\n"
            "initial p\nglobally_accepting q\ntrans p a bot -> q\n")
    A = parse_text(text)
    assert A.states == {"p", "q"} and A.weak
