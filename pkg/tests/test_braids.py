import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixbraid.braids import (BraidWord, compose, enumerate_relations, groupoid_generators,
                             is_mixed, lift_word, transposition, word_matrix, word_perm)
from mixbraid.toric import all_cosets, all_partitions, canonical_coset, crs, fin, parse_gamma


def words(k, max_len=8):
    return st.lists(st.tuples(st.integers(0, k - 1), st.sampled_from([1, -1])),
                    max_size=max_len).map(lambda ls: BraidWord(tuple(ls)))


def test_parse_and_print():
    w = BraidWord.parse("s1 s2 s1^-1", 2)
    assert w.letters == ((0, 1), (1, 1), (0, -1))
    assert str(w) == "s1 s2 s1^-1"
    assert BraidWord.parse("s2^2", 2).letters == ((1, 1), (1, 1))
    assert BraidWord.parse("s1^-2", 2).letters == ((0, -1), (0, -1))
    assert str(BraidWord.parse("", 2)) == "e" and len(BraidWord.parse("e", 2)) == 0


@pytest.mark.parametrize("text", ["s0", "t1", "s3", "s1^x"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        BraidWord.parse(text, 2)


def test_word_perm_examples():
    assert word_perm(BraidWord(), 2) == (0, 1, 2)
    a = word_perm(BraidWord.parse("s1 s2 s1"), 2)
    b = word_perm(BraidWord.parse("s2 s1 s2"), 2)
    assert a == b == (2, 1, 0)
    assert word_perm(BraidWord.parse("s1"), 2) == (1, 0, 2)


def test_mixed_examples():
    G = parse_gamma("01|2", 2)
    assert is_mixed(BraidWord.parse("s1"), G)
    assert not is_mixed(BraidWord.parse("s2"), G)
    assert is_mixed(BraidWord.parse("s2^2"), G)
    assert is_mixed(BraidWord.parse("s2 s1 s2^-1 s1"), crs(2))


@given(st.integers(1, 5).flatmap(lambda k: st.tuples(st.just(k), words(k), words(k))))
def test_perm_homomorphism(data):
    k, w, v = data
    assert word_perm(w * v, k) == compose(word_perm(w, k), word_perm(v, k))
    assert word_perm(w * w.inverse(), k) == tuple(range(k + 1))


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(
    st.sampled_from(all_partitions(k)), words(k, 6), words(k, 6))))
def test_mixed_closure(data):
    G, w, v = data
    # force membership by appending the inverse permutation's transpositions
    def mixed(u):
        perm = list(word_perm(u, G.k))
        fix = []
        for i in range(len(perm)):
            for j in range(len(perm) - 1 - i):
                if perm[j] > perm[j + 1]:
                    perm[j], perm[j + 1] = perm[j + 1], perm[j]
                    fix.append((j, 1))
        return u * BraidWord(tuple(fix))
    a, b = mixed(w), mixed(v)
    assert word_perm(a, G.k) == tuple(range(G.k + 1))
    assert is_mixed(a, G) and is_mixed(b, G) and is_mixed(a * b, G)
    if is_mixed(w, G) and is_mixed(v, G):
        assert is_mixed(w * v, G)


def test_generators_fin():
    gens = groupoid_generators(fin(2), (0, 1, 2))
    assert len(gens) == 2
    assert [g.target for g in gens] == [(1, 0, 2), (0, 2, 1)]
    assert not any(g.is_loop() for g in gens)


def test_generators_mixed_and_crs():
    gens = groupoid_generators(parse_gamma("01|2", 2), (0, 1, 2))
    assert gens[0].is_loop() and not gens[1].is_loop()
    for c in all_cosets(crs(3)):
        assert all(g.is_loop() for g in groupoid_generators(crs(3), c))


def test_lift_label_sequences():
    a = lift_word(fin(2), (0, 1, 2), BraidWord.parse("s1 s2 s1"))
    b = lift_word(fin(2), (0, 1, 2), BraidWord.parse("s2 s1 s2"))
    assert a.label_sequence() == [(0, 1), (0, 2), (1, 2)]
    assert b.label_sequence() == [(1, 2), (0, 2), (0, 1)]
    assert a.target == b.target == (2, 1, 0)
    assert lift_word(fin(2), (0, 1, 2), BraidWord()).crossings == ()


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(
    st.sampled_from(all_partitions(k)), words(k), st.permutations(list(range(k + 1))))))
def test_lift_bookkeeping(data):
    G, w, base = data
    arrow = lift_word(G, base, w)
    assert arrow.word == w
    assert arrow.target == canonical_coset(G, compose(base, word_perm(w, G.k)))
    cur = arrow.source
    for c in arrow.crossings:
        assert c.source == cur and c.labels == (cur[c.position], cur[c.position + 1])
        cur = c.target
    assert cur == arrow.target
    assert arrow.inverse().target == arrow.source


def test_relation_counts():
    assert len(enumerate_relations(fin(2))) == 6
    rels = enumerate_relations(crs(2))
    assert len(rels) == 1 and rels[0].kind == "braid"
    assert rels[0].lhs.is_loop() and rels[0].rhs.is_loop()
    kinds = {(r.kind, r.positions) for r in enumerate_relations(fin(3))}
    assert ("commute", (0, 2)) in kinds


@pytest.mark.parametrize("k", [2, 3])
def test_relation_endpoints(k):
    for G in all_partitions(k):
        for r in enumerate_relations(G):
            assert r.lhs.source == r.rhs.source and r.lhs.target == r.rhs.target
            assert word_perm(r.lhs.word, k) == word_perm(r.rhs.word, k)


def test_transposition():
    assert transposition(4, 2) == (0, 1, 3, 2)


def test_word_matrix_of_inverse_is_inverse():
    G = parse_gamma("01|2", 2)
    w = BraidWord.parse("s1 s2 s1^-1 s2", 2)
    a = lift_word(G, (0, 1, 2), w)
    M = word_matrix(a)
    N = word_matrix(a.inverse())
    assert (N @ M).is_identity()
