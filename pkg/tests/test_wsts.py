import itertools
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import rand_cma, rand_ndcma
from nestedcma.cma import AutomatonError, make_cma
from nestedcma.coverability import leq_vec, vas_coverable, vas_predecessors, wcma_to_vas
from nestedcma.data import BOT, LabelledTree, multiset_tree, root_tree, tree
from nestedcma.formats import parse_artifact
from nestedcma.ndcma import apply_guard, from_cma, make_ndcma, ndcma_accepts, tree_successors
from nestedcma.petrinet import encode
from nestedcma.wsts import (
    format_certificate, label_invariant, ndcma_weak_empty, pred_basis, root_only, tree_leq,
)

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "nestedcma" / "fixtures"


def _add_leaf(t: LabelledTree, addr: tuple, label) -> LabelledTree:
    if not addr:
        return t.with_children(t.children + (LabelledTree(label),))
    i = addr[0]
    kids = list(t.children)
    kids[i] = _add_leaf(kids[i], addr[1:], label)
    return t.with_children(kids)


def grow(t, labels, max_depth):
    """Every tree obtained from ``t`` by adding one leaf."""
    out = set()
    for addr, _ in t.nodes():
        if len(addr) + 1 < max_depth:
            for lab in labels:
                out.add(_add_leaf(t, addr, lab))
    return out


def all_trees(labels, extra_nodes, max_depth):
    layer = {root_only()}
    seen = set(layer)
    for _ in range(extra_nodes):
        layer = {n for t in layer for n in grow(t, labels, max_depth)} - seen
        seen |= layer
    return seen


def rand_tree(rng, labels, max_depth=3, max_nodes=6):
    t = root_only()
    for _ in range(rng.randint(0, max_nodes)):
        t = rng.choice(sorted(grow(t, labels, max_depth)))
    return t


def brute_leq(small, big) -> bool:
    """Exhaustive search for an injective root/parent/label-preserving map."""
    sn, bn = dict(small.nodes()), dict(big.nodes())
    s_addrs = [a for a in sn if a]
    b_addrs = [a for a in bn if a]
    for image in itertools.permutations(b_addrs, len(s_addrs)):
        f = dict(zip(s_addrs, image))
        f[()] = ()
        if all(sn[a] == bn[f[a]] and f[a][:-1] == f[a[:-1]] for a in s_addrs):
            return True
    return False


# ---------------------------------------------------------------------------
# the order


def test_root_below_everything():
    rng = random.Random(71)
    for _ in range(30):
        assert tree_leq(root_only(), rand_tree(rng, "pq"))


def test_path_does_not_embed_in_siblings():
    path = root_tree(tree("p", tree("q")))
    siblings = root_tree(tree("p"), tree("q"))
    assert not tree_leq(path, siblings)
    assert not tree_leq(siblings, path)
    assert not brute_leq(path, siblings)


def test_injectivity_required():
    two = root_tree(tree("p"), tree("p"))
    one = root_tree(tree("p", tree("q")))
    assert not tree_leq(two, one)
    assert tree_leq(root_tree(tree("p")), two)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_leq_matches_exhaustive_injection(seed):
    rng = random.Random(seed)
    small = rand_tree(rng, "pq", max_nodes=4)
    big = rand_tree(rng, "pq", max_nodes=6)
    assert tree_leq(small, big) == brute_leq(small, big)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_quasi_order(seed):
    rng = random.Random(seed)
    a = rand_tree(rng, "pqr")
    b = rand_tree(rng, "pqr")
    for _ in range(3):
        b = rng.choice(sorted(grow(b, "pqr", 3)))
    assert tree_leq(a, a)
    # a embeds into anything grown from it
    c = a
    for _ in range(rng.randint(0, 3)):
        c = rng.choice(sorted(grow(c, "pqr", 3)))
    assert tree_leq(a, c)
    if tree_leq(c, b):
        assert tree_leq(a, b)


def test_wqo_sanity():
    rng = random.Random(72)
    for _ in range(5):
        seq = [rand_tree(rng, "pqr", max_depth=3, max_nodes=8) for _ in range(200)]
        assert any(tree_leq(seq[i], seq[j]) for j in range(len(seq)) for i in range(j))


# ---------------------------------------------------------------------------
# predecessor basis


def test_no_in_transitions_no_predecessors():
    A = make_ndcma(2, ["p", "q"], ["a"], "p", ["q"], [("q", "a", (BOT,), "q")])
    assert list(pred_basis(A, ("p", root_only()))) == []


def test_hand_worked_level2_basis():
    # one transition p --a, [s, bot]--> q; element (q, root[q[q]])
    A = make_ndcma(2, ["p", "q", "s"], ["a"], "p", ["q"], [("p", "a", ("s", BOT), "q")])
    T = root_tree(tree("q", tree("q")))
    got = {u for _, (_, u) in pred_basis(A, ("q", T))}
    assert got == {
        root_tree(tree("q", tree("q")), tree("s")),  # read a disjoint fresh path
        root_tree(tree("s", tree("q"))),  # the parent existed, the child is old
        root_tree(tree("s")),  # the q-child is the fresh node
    }


def test_malformed_element():
    A = make_ndcma(1, ["q"], ["a"], "q", ["q"])
    with pytest.raises(AutomatonError):
        list(pred_basis(A, ("q", tree("q"))))
    with pytest.raises(AutomatonError):
        list(pred_basis(A, ("q", root_tree(tree("q", tree("q"))))))


def _mins(vecs):
    vecs = set(vecs)
    return {(p, v) for p, v in vecs
            if not any(q == p and u != v and leq_vec(u, v) for q, u in vecs)}


def test_level_one_matches_vas_predecessors():
    rng = random.Random(73)
    for _ in range(40):
        A = rand_cma(rng, n_states=3)
        V = wcma_to_vas(A)
        N = from_cma(A)
        for _ in range(5):
            q = rng.choice(sorted(A.states))
            labels = [rng.choice(sorted(A.states)) for _ in range(rng.randint(0, 3))]
            vec = V.vector(labels)
            from_vas = _mins(p for _, p in vas_predecessors(V, (q, vec)))
            from_tree = _mins((p, V.vector(c.label for c in u.children))
                              for _, (p, u) in pred_basis(N, (q, multiset_tree(labels))))
            assert from_tree == from_vas


def _small_instance(rng):
    A = rand_ndcma(rng, level=2, n_states=2, n_trans=(1, 4), n_letters=1)
    q = rng.choice(sorted(A.states))
    T = rand_tree(rng, sorted(A.states), max_depth=3, max_nodes=3)
    return A, q, T


def test_pred_basis_sound():
    rng = random.Random(74)
    for _ in range(100):
        A, q, T = _small_instance(rng)
        for edge, (p, U) in pred_basis(A, (q, T)):
            if edge[0] == "silent":
                continue
            _, _, g, t = edge
            assert t == q
            assert any(tree_leq(T, new) for new in apply_guard(U, g, t))


def pred_basis_complete(A, q, T, extra_nodes=4) -> bool:
    basis = list(pred_basis(A, (q, T)))
    for U in all_trees(sorted(A.states), extra_nodes, A.level + 1):
        for p in A.states:
            for _, t, new in tree_successors(A, p, U):
                if t == q and tree_leq(T, new):
                    if not any(b[0] == p and tree_leq(b[1], U) for _, b in basis):
                        return False
    return True


def test_pred_basis_complete_small():
    rng = random.Random(75)
    for _ in range(100):
        A, q, T = _small_instance(rng)
        assert pred_basis_complete(A, q, T)


def test_upward_compatibility():
    rng = random.Random(76)
    for _ in range(60):
        A = rand_ndcma(rng, level=2, n_states=2, n_letters=1)
        labels = sorted(A.states)
        U = rand_tree(rng, labels, max_nodes=3)
        V = U
        for _ in range(rng.randint(0, 2)):
            V = rng.choice(sorted(grow(V, labels, 3)))
        for p in A.states:
            big = [(t, new) for _, t, new in tree_successors(A, p, V)]
            for _, t, new in tree_successors(A, p, U):
                assert any(t2 == t and tree_leq(new, n2) for t2, n2 in big)


# ---------------------------------------------------------------------------
# emptiness


def test_initial_accepting():
    A = make_ndcma(2, ["q"], ["a"], "q", ["q"])
    res = ndcma_weak_empty(A)
    assert res.nonempty and res.certificate == [] and len(res.witness) == 0


def test_non_weak_rejected():
    A = make_ndcma(1, ["q", "r"], ["a"], "q", ["q"], [], ["q"])
    with pytest.raises(AutomatonError):
        ndcma_weak_empty(A)


def test_level_one_agrees_with_vas_route():
    rng = random.Random(77)
    for _ in range(50):
        A = rand_cma(rng)
        assert ndcma_weak_empty(from_cma(A)).empty == (not vas_coverable(wcma_to_vas(A)))


def test_level_two_witnesses_replay():
    rng = random.Random(78)
    hits = 0
    for _ in range(40):
        A = rand_ndcma(rng, level=2)
        res = ndcma_weak_empty(A)
        if res.nonempty:
            hits += 1
            assert ndcma_accepts(A, res.witness)
    assert hits


def test_pruning_does_not_change_verdict():
    rng = random.Random(79)
    for _ in range(30):
        A = rand_ndcma(rng, level=2)
        assert ndcma_weak_empty(A).empty == ndcma_weak_empty(A, prune_labels=False).empty


def test_label_invariant_holds_on_reachable_trees():
    rng = random.Random(80)
    for _ in range(20):
        A = rand_ndcma(rng, level=2)
        check = label_invariant(A)
        layer = {(A.initial, root_only())}
        for _ in range(4):
            layer = {(t, new) for q, T in layer for _, t, new in tree_successors(A, q, T)}
            assert all(check(q, T) for q, T in layer)


def test_basis_history_is_antichain():
    rng = random.Random(81)
    for _ in range(10):
        A = rand_ndcma(rng, level=2)
        res = ndcma_weak_empty(A, record_history=True)
        for snap in res.saturation.history:
            for i, (p, u) in enumerate(snap):
                for j, (q, v) in enumerate(snap):
                    assert i == j or p != q or not tree_leq(u, v)


def _fixture_verdict(name):
    enc = encode(parse_artifact(FIXTURES / name))
    A = enc.automaton
    assert A.weak and A.level == 2
    return ndcma_weak_empty(A, invariant=enc.invariant)


def test_reset_fixture_coverable():
    res = _fixture_verdict("reset.net")
    assert res.nonempty
    assert format_certificate(res.certificate).count("\n") == len(res.certificate) - 1


def test_reset_gadget_empty():
    assert _fixture_verdict("reset-gadget.net").empty


def test_certificate_format():
    A = make_cma(["p", "q"], ["a"], "p", ["q"], [("p", "a", BOT, "q")])
    res = ndcma_weak_empty(from_cma(A))
    assert format_certificate(res.certificate) == "p a level 1 [bot] -> q\tq <root>"
