import itertools
import random
from pathlib import Path

import pytest

from generators import rand_cma, rand_homca, rand_ndcma, strings
from nestedcma.cma import AutomatonError, cma_accepts
from nestedcma.data import BOT, EPS, word
from nestedcma.formats import parse_artifact
from nestedcma.homca import (
    Config, CutViolation, Op, apply_op, cut, hereditarily_empty, homca_accepts,
    homca_prime_to_homca, homca_prime_to_ndcma, homca_step, homca_to_homca_prime,
    initial_config, is_accepting, make_homca, ndcma_to_homca_prime, op, replay,
)
from nestedcma.ndcma import desugar, from_cma, make_ndcma, ndcma_accepts_string

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "nestedcma" / "fixtures"


def _chain_machine(ops, weak=False, level=1, letters=None):
    """Single path q0 -> q1 -> ... applying ``ops``; letters default to ε."""
    letters = letters or [EPS] * len(ops)
    ts = [(f"q{i}", letters[i], o, f"q{i + 1}") for i, o in enumerate(ops)]
    states = [f"q{i}" for i in range(len(ops) + 1)]
    return make_homca(level, states, ["a", "b"], ["x"], "q0", [states[-1]], ts, "homca", weak)


# ---------------------------------------------------------------------------
# semantics


def test_new_then_accept():
    M = make_homca(1, ["q0", "q1"], ["a"], ["x"], "q0", ["q1"], [("q0", "a", "new_1", "q1")])
    assert homca_accepts(M, "a")
    assert not homca_accepts(M, "")
    assert not homca_accepts(M, "aa")


def test_strong_needs_hereditary_emptiness():
    strong = _chain_machine(["new_1", "inc_x"], letters=["a", EPS])
    weak = _chain_machine(["new_1", "inc_x"], weak=True, letters=["a", EPS])
    assert not homca_accepts(strong, "a")
    assert homca_accepts(weak, "a")


def test_level2_shuffle_instance():
    ops = ["new_2", "new_1", "inc_x", "store_1", "new_1", "inc_x", "store_1",
           "load_1", "dec_x", "store_1", "load_1", "dec_x", "store_1"]
    M = _chain_machine(ops, level=2)
    assert homca_accepts(M, "")
    # one phase fewer leaves an x behind
    assert not homca_accepts(_chain_machine(ops[:-3], level=2), "")


def test_op_parsing():
    assert op("store_2") == Op("store", 2)
    assert op("inc_x") == Op("inc", "x")
    assert str(op("load_1")) == "load_1"
    with pytest.raises(AutomatonError):
        op("jump_1")
    with pytest.raises(AutomatonError):
        make_homca(1, ["q"], ["a"], ["x"], "q", [], [("q", "a", "store_1", "q")])


def test_load_needs_lower_slots_undefined():
    M = make_homca(2, ["q"], ["a"], ["x"], "q", [])
    assert apply_op(M, ((), (("x",),)), Op("load", 1)) == []
    assert apply_op(M, (None, (("x",), ())), Op("load", 1)) == [
        (("x",), ((),)), ((), (("x",),))]
    assert apply_op(M, (None, ()), Op("load", 1)) == []


def test_hereditary_emptiness():
    assert hereditarily_empty(None, 2)
    assert hereditarily_empty(((), ()), 2)
    assert not hereditarily_empty(((), ("x",)), 2)
    assert hereditarily_empty(("t",), 1, symbols=frozenset({"x"}))


def test_weak_accepts_whatever_strong_accepts():
    rng = random.Random(91)
    for _ in range(40):
        M = rand_homca(rng, "homca", weak=False)
        W = make_homca(M.level, M.states, M.alphabet, M.multiset_alphabet, M.initial,
                       M.accepting, M.transitions, M.variant, True)
        for s in strings(M.alphabet, 3):
            if homca_accepts(M, s):
                assert homca_accepts(W, s)


def test_prime_side_conditions():
    P = make_homca(2, ["q"], ["a"], ["x"], "q", [], variant="homca'")
    H = make_homca(2, ["q"], ["a"], ["x"], "q", [])
    # new_1 needs every higher slot defined
    assert apply_op(P, (None, None), Op("new", 1)) == []
    assert apply_op(H, (None, None), Op("new", 1)) == [((), None)]


def test_cut_invariant_on_reachable_configurations():
    rng = random.Random(92)
    for _ in range(40):
        M = rand_homca(rng, "homca'")
        layer = {initial_config(M)}
        seen = set(layer)
        for _ in range(8):
            nxt = set()
            for c in layer:
                for a in list(M.alphabet) + [EPS]:
                    nxt.update(homca_step(M, c, a))
            layer = nxt - seen
            seen |= layer
        assert all(cut(c.slots) is not None for c in seen)


def test_cut_violation_is_reported():
    # a hand-made HOMCA' configuration outside the invariant
    P = make_homca(2, ["q", "r"], ["a"], ["x"], "q", [], [("q", "a", "inc_x", "r")], "homca'")
    with pytest.raises(CutViolation):
        homca_step(P, Config("q", ((), None)), "a")


def test_replay_and_acceptance():
    M = parse_artifact(FIXTURES / "fold.homca")
    path = replay(M, M.transitions)
    assert [c.control for c in path] == ["q0", "q1", "q2", "q3", "q4", "q5", "q6"]
    assert is_accepting(M, path[-1])


def test_fold_fixture_language():
    M = parse_artifact(FIXTURES / "fold.homca")
    assert [s for s in strings(M.alphabet, 4) if homca_accepts(M, s)] == [("a", "b")]


# ---------------------------------------------------------------------------
# HOMCA' -> HOMCA


def test_prime_to_plain_agreement():
    rng = random.Random(93)
    hits = 0
    for _ in range(30):
        M = rand_homca(rng, "homca'")
        T = homca_prime_to_homca(M)
        assert T.variant == "homca" and T.weak == M.weak
        for s in strings(M.alphabet, 4):
            hits += homca_accepts(M, s)
            assert homca_accepts(M, s) == homca_accepts(T, s)
    assert hits


def test_prime_to_plain_empty_machine():
    for acc in ([], [0]):
        M = make_homca(2, [0], ["a"], ["x"], 0, acc, [], "homca'")
        assert homca_accepts(homca_prime_to_homca(M), "") == bool(acc)


def test_prime_to_plain_wrong_variant():
    with pytest.raises(AutomatonError):
        homca_prime_to_homca(rand_homca(random.Random(1), "homca"))


def test_prime_to_plain_tracks_definedness():
    M = make_homca(2, [0, 1], ["a"], ["x"], 0, [1], [(0, "a", "new_2", 1)], "homca'")
    T = homca_prime_to_homca(M)
    assert T.states == {(0, frozenset()), (1, frozenset({2}))}


# ---------------------------------------------------------------------------
# HOMCA -> HOMCA'


@pytest.mark.parametrize("level", [1, 2, 3])
def test_plain_to_prime_agreement(level):
    rng = random.Random(94 + level)
    hits = 0
    for _ in range(12):
        M = rand_homca(rng, "homca", level=level)
        P = homca_to_homca_prime(M)
        assert P.prime and P.weak == M.weak
        for s in strings(M.alphabet, 3):
            hits += homca_accepts(M, s)
            assert homca_accepts(M, s) == homca_accepts(P, s), (M, s)
    assert hits


def test_plain_to_prime_fold_fixture():
    M = parse_artifact(FIXTURES / "fold.homca")
    P = homca_to_homca_prime(M)
    for s in strings(M.alphabet, 4):
        assert homca_accepts(P, s) == (s == ("a", "b"))


def test_truncated_copy_loop_is_rejected():
    M = parse_artifact(FIXTURES / "fold.homca")
    assert not homca_accepts(homca_to_homca_prime(M, copy_loop=False), "ab")


def test_level2_without_folding_needs_no_ghost():
    # store_1 with nothing open below: the translation is op-for-op plus checks
    M = _chain_machine(["new_2", "new_1", "inc_x", "dec_x", "store_1"],
                       letters=["a", EPS, EPS, "b", EPS], level=2)
    P = homca_to_homca_prime(M)
    ghosts = [t for t in P.transitions if t.op.kind == "inc" and t.op.arg == ("ghost", 1)]
    assert ghosts == []
    for s in strings(M.alphabet, 3):
        assert homca_accepts(M, s) == homca_accepts(P, s)


def test_plain_to_prime_errors():
    with pytest.raises(AutomatonError):
        homca_to_homca_prime(make_homca(4, ["q"], ["a"], ["x"], "q", []))
    with pytest.raises(AutomatonError):
        homca_to_homca_prime(make_homca(1, ["q"], ["a"], ["x"], "q", [], variant="homca'"))


# ---------------------------------------------------------------------------
# NDCMA <-> HOMCA'


def _str_accepts_cma(A, s) -> bool:
    """Some assignment of data values (up to renaming) to ``s`` is accepted."""
    def patterns(n):
        def go(prefix, used):
            if len(prefix) == n:
                yield prefix
                return
            for i in range(used + 1):
                yield from go(prefix + [f"d{i}"], max(used, i + 1))
        yield from go([], 0)
    return any(cma_accepts(A, word(*zip(s, ds))) for ds in patterns(len(s)))


def test_level_one_ndcma_to_homca_prime():
    rng = random.Random(97)
    checked = 0
    while checked < 100:
        A = rand_cma(rng, n_states=3)
        H = ndcma_to_homca_prime(from_cma(A))
        assert H.prime and H.weak
        for s in itertools.islice(strings(A.alphabet, 4), 0, None, 3):
            assert homca_accepts(H, s) == _str_accepts_cma(A, s)
            checked += 1


def test_strong_ndcma_to_homca_prime():
    rng = random.Random(98)
    for _ in range(30):
        A = rand_ndcma(rng, level=rng.randint(1, 2), weak=False)
        H = ndcma_to_homca_prime(A)
        for s in strings(A.alphabet, 3):
            assert homca_accepts(H, s) == ndcma_accepts_string(A, s)


def test_empty_language_stays_empty():
    A = make_ndcma(2, ["p", "q"], ["a"], "p", ["q"], [("p", "a", (BOT, BOT), "p")])
    H = ndcma_to_homca_prime(A)
    assert not any(homca_accepts(H, s) for s in strings(A.alphabet, 4))


def test_round_trip_level2():
    rng = random.Random(99)
    for _ in range(15):
        A = rand_ndcma(rng, level=2, weak=rng.random() < 0.5, n_trans=(2, 5))
        D = desugar(homca_prime_to_ndcma(ndcma_to_homca_prime(A)))
        for s in strings(A.alphabet, 3):
            assert ndcma_accepts_string(A, s) == ndcma_accepts_string(D, s)


def test_homca_prime_to_ndcma_agreement():
    rng = random.Random(100)
    hits = 0
    for _ in range(20):
        M = rand_homca(rng, "homca'", level=rng.randint(1, 2))
        S = homca_prime_to_ndcma(M)
        assert S.weak == M.weak
        D = desugar(S)
        for s in strings(M.alphabet, 3):
            hits += homca_accepts(M, s)
            assert homca_accepts(M, s) == ndcma_accepts_string(D, s)
    assert hits


def test_translation_errors():
    with pytest.raises(AutomatonError):
        homca_prime_to_ndcma(make_homca(1, ["q"], ["a"], ["x"], "q", []))
    silent = make_ndcma(1, ["p", "q"], ["a"], "p", ["q"], [], silent=[("p", "q")])
    with pytest.raises(AutomatonError):
        ndcma_to_homca_prime(silent)
