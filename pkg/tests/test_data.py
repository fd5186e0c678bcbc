import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nestedcma.data import (
    BOT, ROOT_LABEL, Bag, ClassMemory, DataError, DataValue, DataWord, Universe,
    canonical_tree, fresh_value, root_tree, string_projection, tree, value_from_path, word,
)


def test_fresh_value_is_level_one_without_parent():
    U = Universe(2)
    d = fresh_value(U)
    assert d.level == 1 and d.parent is None


def test_fresh_children_are_distinct():
    U = Universe(2)
    d = fresh_value(U)
    c1, c2 = fresh_value(U, d), fresh_value(U, d)
    assert c1 != c2
    assert c1.parent == d and c2.parent == d
    assert c1.level == 2


def test_fresh_value_at_bound_rejected():
    U = Universe(2)
    d = fresh_value(U, fresh_value(U))
    with pytest.raises(DataError):
        fresh_value(U, d)


def test_fresh_values_unique_across_threads():
    U = Universe(1)
    got = []
    lock = threading.Lock()

    def grab():
        mine = [fresh_value(U) for _ in range(200)]
        with lock:
            got.extend(mine)

    threads = [threading.Thread(target=grab) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(got)) == len(got) == 1600


def test_parent_chain_length_matches_level():
    d = value_from_path("r/s/t")
    steps, node = 0, d
    while node.parent is not None:
        assert node.parent.level == node.level - 1
        node, steps = node.parent, steps + 1
    assert steps == d.level - 1 == 2


def test_value_paths():
    d = value_from_path("r1/s2")
    assert str(d) == "r1/s2"
    assert d.parent == value_from_path("r1")
    assert d.ancestors() == (value_from_path("r1"), d)
    with pytest.raises(DataError):
        value_from_path("r1//s2")
    with pytest.raises(DataError):
        DataValue("x", None, 2)


def test_word_rejects_non_values():
    with pytest.raises(DataError):
        DataWord([("a", "d1")])
    w = word(("a", "d1"), ("b", "d1/e"))
    assert w.letters() == ("a", "b")
    assert w.max_level() == 2


def test_bag_drops_zeros_and_rejects_negatives():
    d = value_from_path("d")
    assert Bag({d: 0}) == Bag()
    assert Bag().set(d, 2)[d] == 2
    with pytest.raises(DataError):
        Bag({d: -1})


def test_class_memory_absent_is_bot():
    d = value_from_path("d")
    f = ClassMemory()
    assert f.get(d) is BOT
    assert f.set(d, "q").get(d) == "q"
    assert f.set(d, "q").set(d, BOT) == f


def test_canonical_tree_examples():
    d1, d2 = value_from_path("d1"), value_from_path("d2")
    c = value_from_path("d1/c")
    assert canonical_tree({}, 2) == root_tree()
    assert canonical_tree({d1: "q", d2: "q"}, 1) == root_tree(tree("q"), tree("q"))
    assert canonical_tree({d1: "p", c: "q"}, 2) == root_tree(tree("p", tree("q")))
    assert canonical_tree({d1: "p", c: "q"}, 2).label is ROOT_LABEL


def test_canonical_tree_rejects_orphans_and_depth():
    c = value_from_path("d1/c")
    with pytest.raises(DataError):
        canonical_tree({c: "q"}, 2)
    with pytest.raises(DataError):
        canonical_tree({value_from_path("d1"): "p", c: "q"}, 1)


def _random_memory(rng, level):
    mem = {}
    for i in range(rng.randint(0, 4)):
        d = value_from_path(f"v{i}")
        mem[d] = rng.choice("pq")
        for j in range(rng.randint(0, 2) if level > 1 else 0):
            mem[value_from_path(f"v{i}/w{j}")] = rng.choice("pq")
    return mem


def _rename(mem, perm):
    out = {}
    for d, q in mem.items():
        parts = str(d).split("/")
        parts[0] = perm[parts[0]]
        out[value_from_path("/".join(parts))] = q
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_canonical_tree_invariant_under_sibling_permutation(seed):
    rng = random.Random(seed)
    mem = _random_memory(rng, 2)
    names = sorted({str(d).split("/")[0] for d in mem})
    shuffled = names[:]
    rng.shuffle(shuffled)
    perm = dict(zip(names, shuffled))
    assert canonical_tree(mem, 2) == canonical_tree(_rename(mem, perm), 2)


@given(st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from(["d1", "d2", "d1/x"]))),
       st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from(["d1", "d3"]))))
def test_projection_commutes_with_concatenation(u, v):
    wu, wv = word(*u), word(*v)
    assert string_projection(wu + wv) == string_projection(wu) + string_projection(wv)
