"""Weyl characters in eigen-angle coordinates."""
import numpy as np
import pytest

from grassint.characters import (character_at_identity, character_value,
                                 rotation_angles, weight_system)
from grassint.sampling import SeededSampler
from grassint.subspaces import Rotation, haar_rotations
from grassint.weights import HighestWeight, admissible_weights, weyl_dimension


def _rot(n, seed):
    return Rotation(haar_rotations(n, 1, SeededSampler(seed).next_rng())[0])


def test_trivial_character_is_one():
    for n in (3, 4, 5):
        w0 = HighestWeight(n, (0,) * (n // 2))
        for seed in range(4):
            assert abs(character_value(w0, _rot(n, seed)) - 1.0) < 1e-9


def test_identity_value_equals_dimension():
    for n in (3, 4, 5):
        for w in admissible_weights(n, 1, 4):
            assert character_at_identity(w) == weyl_dimension(w)


def test_so3_quarter_turn():
    # weight sum: sum_{k=-2..2} cos(k pi/2) = 1 + 0 + 0 - 1 - 1 = -1
    g = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    val = character_value(HighestWeight(3, (2,)), Rotation(g))
    assert abs(val - (-1.0)) < 1e-9


def test_rotation_angles_roundtrip():
    rng = SeededSampler(3).next_rng()
    for n in (3, 4, 5, 6):
        g = haar_rotations(n, 1, rng)[0]
        angles = rotation_angles(g)
        # eigenvalues of g are exp(+-i angle) (plus 1 for odd n)
        eig = np.sort(np.angle(np.linalg.eigvals(g)))
        expect = np.sort(np.concatenate([angles, -np.asarray(angles)] +
                                        ([np.zeros(1)] if n % 2 else [])))
        assert np.allclose(np.sort(eig), expect, atol=1e-9)


def test_weight_system_sizes():
    # multiplicities sum to the dimension
    for w in (HighestWeight(3, (4,)), HighestWeight(4, (2, 2)),
              HighestWeight(5, (2, 0))):
        vecs, mults = weight_system(w)
        assert len(vecs) == len(mults)
        assert int(round(mults.sum())) == weyl_dimension(w)


def test_character_orthogonality():
    rng_sampler = SeededSampler(9)
    n = 4
    ws = [HighestWeight(4, (0, 0)), HighestWeight(4, (2, 0)),
          HighestWeight(4, (2, 2)), HighestWeight(4, (2, -2))]
    gs = haar_rotations(n, 3000, rng_sampler.next_rng())
    table = np.empty((len(ws), len(gs)))
    for a, w in enumerate(ws):
        table[a] = [character_value(w, Rotation(g)) for g in gs]
    gram = table @ table.T / len(gs)
    se = 3.0 / np.sqrt(len(gs))
    for a in range(len(ws)):
        for b in range(len(ws)):
            target = 1.0 if a == b else 0.0
            assert abs(gram[a, b] - target) < 5 * se * max(
                1.0, np.sqrt(weyl_dimension(ws[a]) * weyl_dimension(ws[b])))


def test_character_orthogonality_rank_two():
    sampler = SeededSampler(10)
    ws = [HighestWeight(5, (2, 0)), HighestWeight(5, (4, 2))]
    gs = haar_rotations(5, 3000, sampler.next_rng())
    table = np.empty((len(ws), len(gs)))
    for a, w in enumerate(ws):
        table[a] = [character_value(w, Rotation(g)) for g in gs]
    gram = table @ table.T / len(gs)
    se = 3.0 / np.sqrt(len(gs))
    for a in range(len(ws)):
        for b in range(len(ws)):
            target = 1.0 if a == b else 0.0
            assert abs(gram[a, b] - target) < 5 * se * max(
                1.0, np.sqrt(weyl_dimension(ws[a]) * weyl_dimension(ws[b])))
