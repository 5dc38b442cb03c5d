from itertools import permutations

import pytest

from mixbraid.lattice import matmul
from mixbraid.quiver import (StabilityCharacter, a_index, ambient_data, ambient_fan,
                             b_index, check_ambient)
from mixbraid.toric import concavity_margins, fin, phase, simplex_volumes, standard_vartheta


def test_k1_quiver_row():
    prob = ambient_data(1)
    assert prob.labels == ["b0", "a0", "b1", "a1"]
    assert prob.Q[0] == [-1, 1, 1, -1]


def test_k2_quiver_row():
    assert ambient_data(2).Q[0] == [-1, 1, 1, -1, 0, 0]


@pytest.mark.parametrize("k", range(1, 7))
def test_ambient_invariants(k):
    prob = ambient_data(k)
    check_ambient(prob)
    assert all(sum(r[c] for r in prob.Q) == 0 for c in range(2 * (k + 1)))
    assert not any(any(x) for x in matmul(prob.Q, prob.P))
    for i in range(k + 1):
        row = prob.Q[(i - 1) % (k + 1)]
        j = (i - 1) % (k + 1)
        assert row[a_index(j)] == 1 and row[b_index(i)] == 1
        assert row[a_index(i)] == -1 and row[b_index(j)] == -1


def test_bad_k():
    with pytest.raises(ValueError):
        ambient_data(0)


def test_k1_fan():
    fan = ambient_fan(1, (0, 1))
    assert set(fan) == {frozenset({a_index(0), b_index(0), b_index(1)}),
                        frozenset({a_index(0), a_index(1), b_index(1)})}


def test_k2_fan_identity():
    fan = ambient_fan(2, (0, 1, 2))
    assert len(fan) == 3
    assert fan[0] == frozenset({a_index(0), b_index(0), b_index(1), b_index(2)})
    assert fan[2] == frozenset({a_index(0), a_index(1), a_index(2), b_index(2)})


def test_k2_flop_changes_segment_cones():
    f0, f1 = set(ambient_fan(2, (0, 1, 2))), set(ambient_fan(2, (1, 0, 2)))
    seg = {a_index(0), b_index(1)}
    assert f0 != f1
    assert all(seg <= s for s in f0 - f1)
    assert all(not seg <= s for s in f0 & f1)
    # the flopped side gains the opposite segment instead
    assert all({a_index(1), b_index(0)} <= s for s in f1 - f0)


@pytest.mark.parametrize("k", range(1, 6))
def test_every_fan_covers_and_is_unimodular(k):
    G = fin(k)
    for sigma in permutations(range(k + 1)):
        fan = ambient_fan(k, sigma)
        assert set().union(*fan) == set(range(2 * (k + 1)))
        assert simplex_volumes(G, fan) == [1] * (k + 1)


def test_fan_k6_sampled():
    import random
    rng = random.Random(6)
    G = fin(6)
    for _ in range(40):
        sigma = list(range(7))
        rng.shuffle(sigma)
        fan = ambient_fan(6, sigma)
        assert set().union(*fan) == set(range(14))
        assert simplex_volumes(G, fan) == [1] * 7


@pytest.mark.parametrize("k", range(1, 5))
def test_standard_vartheta_concave_only_on_identity(k):
    vt = standard_vartheta(tuple(range(k + 1)))
    for sigma in permutations(range(k + 1)):
        margins = concavity_margins(fin(k), ambient_fan(k, sigma), vt)
        assert all(m > 0 for m in margins) == (sigma == tuple(range(k + 1)))


def test_fin_phase_matches_ambient_fan():
    for sigma in permutations(range(3)):
        assert set(phase(fin(2), sigma).simplices) == set(ambient_fan(2, sigma))


def test_stability_chamber():
    assert StabilityCharacter.from_vartheta((2, 1, 0)).is_standard()
    assert StabilityCharacter.from_vartheta((1, 2, 0)).chamber() == (1, 0, 2)
    assert StabilityCharacter.from_vartheta((1, 1, 0)).chamber() is None
    th = StabilityCharacter.from_vartheta((5, 3, 0)).theta
    assert sum(th) == 0
