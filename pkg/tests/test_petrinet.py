import random
from pathlib import Path

import pytest

from conftest import fig2_automaton
from nestedcma.cma import cma_accepts, isomorphism
from nestedcma.coverability import cma_empty_bounded, vas_coverable, wcma_empty
from nestedcma.formats import parse_artifact
from nestedcma.ndcma import ndcma_accepts, ndcma_empty_bounded
from nestedcma.petrinet import (
    NetError, bounded_search, decode_witness, encode, encode_coverability_wcma,
    encode_reachability_cma, encode_reset_coverability_weak_ndcma,
    encode_reset_reachability_ndcma, fire, make_net, net_to_vas,
    replay_firings, satisfies,
)
from nestedcma.wsts import ndcma_weak_empty

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "nestedcma" / "fixtures"


def fig1():
    return parse_artifact(FIXTURES / "fig1.net")


def rand_net(rng, resets=False, query="cover"):
    places = ["p", "r", "s"][: rng.randint(1, 3)]
    ts = []
    for i in range(rng.randint(1, 3)):
        ins = [rng.choice(places) for _ in range(rng.randint(0, 2))]
        outs = [rng.choice(places) for _ in range(rng.randint(0, 2))]
        rs = [rng.choice(places)] if resets and rng.random() < 0.4 else []
        ts.append((f"t{i}", ins, outs, rs))
    init = [rng.choice(places) for _ in range(rng.randint(0, 2))]
    target = [rng.choice(places) for _ in range(rng.randint(1, 3))]
    return make_net(places, ts, init, target, query)


# ---------------------------------------------------------------------------
# firing rule


def test_fire_examples():
    net = fig1()
    m = fire(net, net.initial_marking, "t2")
    assert m == {"p2": 1}
    with pytest.raises(NetError):
        fire(net, m, "t2")
    assert replay_firings(net, ["t1", "t2", "t2"]) == {"p2": 2}
    assert satisfies(net, {"p2": 2}) and not satisfies(net, {"p2": 2, "p1": 1})


def test_reset_arc_empties_place():
    net = make_net(["p", "q"], [("t", ["q"], [], ["p"])], {"p": 3, "q": 1}, {"p": 0})
    assert fire(net, net.initial_marking, "t") == {}
    # a reset on the output place is applied before the outputs
    net = make_net(["p"], [("t", [], ["p"], ["p"])], {"p": 2})
    assert fire(net, net.initial_marking, "t") == {"p": 1}


def test_malformed_nets():
    with pytest.raises(NetError):
        make_net(["p", "p"], [])
    with pytest.raises(NetError):
        make_net(["p"], [("t", ["q"], [])])
    with pytest.raises(NetError):
        make_net(["p"], [("t", [], []), ("t", [], [])])
    with pytest.raises(NetError):
        make_net(["p"], [], {"q": 1})
    with pytest.raises(NetError):
        make_net(["p"], [], query="bounded")


def test_bounded_search_fig1():
    assert replay_firings(fig1(), bounded_search(fig1(), 3)) == {"p2": 2}
    stuck = make_net(["p"], [("t", ["p"], ["p"])], {}, {"p": 1})
    assert bounded_search(stuck, 5) is None


def test_net_to_vas():
    V = net_to_vas(fig1())
    assert V.counters == ("p1", "p2")
    assert vas_coverable(V)
    with pytest.raises(NetError):
        net_to_vas(parse_artifact(FIXTURES / "reset.net"))


# ---------------------------------------------------------------------------
# flat encodings


def test_fig1_reachability_encoding_is_fig2():
    A = encode_reachability_cma(fig1())
    assert len(A.states) == 8
    assert isomorphism(A, fig2_automaton()) is not None


def test_fig1_coverability_encoding_is_weak_fig2():
    A = encode_coverability_wcma(fig1())
    assert A.weak
    assert isomorphism(A, fig2_automaton(weak=True)) is not None


def test_flat_encoding_refuses_resets():
    with pytest.raises(NetError):
        encode(parse_artifact(FIXTURES / "reset.net"), nested=False)


def test_flat_coverability_matches_vas():
    rng = random.Random(111)
    for _ in range(150):
        net = rand_net(rng)
        res = wcma_empty(encode_coverability_wcma(net))
        assert res.nonempty == bool(vas_coverable(net_to_vas(net)))
        if res.nonempty:
            assert satisfies(net, replay_firings(net, decode_witness(net, res.witness)))


def test_flat_reachability_sound_and_complete_on_short_runs():
    rng = random.Random(112)
    hits = 0
    for _ in range(80):
        net = rand_net(rng, query="reach")
        A = encode_reachability_cma(net)
        res = cma_empty_bounded(A, 8)
        if res.nonempty:
            hits += 1
            assert cma_accepts(A, res.witness)
            assert satisfies(net, replay_firings(net, decode_witness(net, res.witness)))
        path = bounded_search(net, 2)
        if path is not None and len(path) <= 1:
            assert res.nonempty
    assert hits


def test_decode_rejects_foreign_word(fig2):
    from nestedcma.data import word
    with pytest.raises(NetError):
        decode_witness(fig1(), word(("a", "d1")))


# ---------------------------------------------------------------------------
# nested encodings


def test_nested_encoding_shape():
    net = parse_artifact(FIXTURES / "reset.net")
    enc = encode(net)
    A = enc.automaton
    assert encode_reset_coverability_weak_ndcma(net) == A
    assert not encode_reset_reachability_ndcma(net).weak
    assert A.level == 2 and A.weak
    assert enc.invariant is not None
    assert set(enc.completes.values()) == {"t1", "t2", "t3"}


def test_nested_coverability_matches_bounded_search():
    rng = random.Random(113)
    hits = 0
    for _ in range(40):
        net = rand_net(rng, resets=True)
        enc = encode(net, weak=True, nested=True)
        res = ndcma_weak_empty(enc.automaton, invariant=enc.invariant)
        if bounded_search(net, 4) is not None:
            assert res.nonempty
        if res.nonempty:
            hits += 1
            assert ndcma_accepts(enc.automaton, res.witness)
            firings = decode_witness(net, res.witness, weak=True, nested=True)
            assert satisfies(net, replay_firings(net, firings))
    assert hits


def test_nested_without_resets_agrees_with_flat():
    rng = random.Random(114)
    for _ in range(15):
        net = rand_net(rng)
        enc = encode(net, weak=True, nested=True)
        nested = ndcma_weak_empty(enc.automaton, invariant=enc.invariant).nonempty
        assert nested == wcma_empty(encode_coverability_wcma(net)).nonempty


def test_nested_reachability_witnesses():
    rng = random.Random(115)
    hits = 0
    for _ in range(30):
        net = rand_net(rng, resets=True, query="reach")
        A = encode(net, nested=True).automaton
        res = ndcma_empty_bounded(A, 6)
        if res.nonempty:
            hits += 1
            firings = decode_witness(net, res.witness, nested=True)
            assert replay_firings(net, firings) == net.target_marking
    assert hits


def test_reset_fixture_witness_decodes():
    net = parse_artifact(FIXTURES / "reset.net")
    enc = encode(net)
    res = ndcma_weak_empty(enc.automaton, invariant=enc.invariant)
    firings = decode_witness(net, res.witness)
    assert satisfies(net, replay_firings(net, firings))
