import numpy as np
import pytest

from smti import Instance
from smti.generator import (GRID_P1, GRID_P2, GenerationError, GenParams, derive_seed,
                            generate, grid_params, sweep_grid)


def lengths(inst):
    return [sum(len(g) for g in lst) for lst in inst.men_prefs + inst.women_prefs]


def test_params_validation():
    for bad in (dict(n=0, p1=0, p2=0), dict(n=3, p1=-0.1, p2=0), dict(n=3, p1=0, p2=1.1),
                dict(n=3, p1=0, p2=0, max_rejects=0)):
        with pytest.raises(ValueError):
            GenParams(**bad)


@pytest.mark.parametrize("seed", range(5))
def test_complete_strict_corner(seed):
    inst = generate(GenParams(4, 0.0, 0.0, seed=seed))
    for lst in inst.men_prefs + inst.women_prefs:
        assert sorted(q for g in lst for q in g) == [1, 2, 3, 4]
        assert all(len(g) == 1 for g in lst)


@pytest.mark.parametrize("seed", range(5))
def test_complete_indifference_corner(seed):
    inst = generate(GenParams(10, 0.3, 1.0, seed=seed))
    assert all(len(lst) == 1 for lst in inst.men_prefs + inst.women_prefs)


def test_mean_list_length():
    lens = [np.mean(lengths(generate(GenParams(100, 0.5, 0.0, seed=s))))
            for s in range(200)]
    assert abs(np.mean(lens) - 50) <= 2


def test_tie_boundary_frequency():
    boundaries = positions = 0
    s = 0
    while positions < 10**5:
        inst = generate(GenParams(60, 0.0, 0.5, seed=s))
        for lst in inst.men_prefs + inst.women_prefs:
            positions += sum(map(len, lst)) - 1
            boundaries += len(lst) - 1
        s += 1
    assert abs(boundaries / positions - 0.5) <= 0.03


def test_reject_cap():
    with pytest.raises(GenerationError):
        generate(GenParams(5, 0.99, 0.0, seed=0, max_rejects=100))


def test_invariants_on_1000_instances():
    count = 0
    for k in range(1000):
        p = GenParams(1 + k % 15, GRID_P1[k % 8], GRID_P2[k % 11], seed=k)
        inst = generate(p)
        assert isinstance(inst, Instance) and inst.symmetric
        assert all(len(lst) > 0 for lst in inst.men_prefs + inst.women_prefs)
        count += 1
    assert count == 1000


def test_grid_single_cell():
    out = list(sweep_grid(6, (0.3,), (0.4,), 1, base_seed=9))
    assert len(out) == 1
    params, inst = out[0]
    assert params.seed == derive_seed(9, 0.3, 0.4, 0)
    assert inst == generate(GenParams(6, 0.3, 0.4, seed=params.seed))


def test_default_grid_count():
    out = list(sweep_grid(20, GRID_P1, GRID_P2, 5))
    assert len(out) == 440
    assert len({p.seed for p, _ in out}) == 440
    assert all(inst.symmetric for _, inst in out)
    assert [(p.p1, p.p2) for p, _ in out[:6]] == [(0.1, 0.0)] * 5 + [(0.1, 0.1)]


def test_grid_determinism():
    a = [inst for _, inst in sweep_grid(8, (0.2, 0.5), (0.0, 1.0), 3, base_seed=4)]
    b = [inst for _, inst in sweep_grid(8, (0.2, 0.5), (0.0, 1.0), 3, base_seed=4)]
    c = [inst for _, inst in sweep_grid(8, (0.2, 0.5), (0.0, 1.0), 3, base_seed=5)]
    assert a == b and a != c


def test_grid_rejects_empty_lists():
    with pytest.raises(ValueError):
        list(grid_params(5, (), (0.1,), 1))


def test_derive_seed_rule():
    expected = int(np.random.SeedSequence([3, 100000, 500000, 2]).generate_state(1, np.uint64)[0])
    assert derive_seed(3, 0.1, 0.5, 2) == expected
