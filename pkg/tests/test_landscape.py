import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkteams.landscape import (
    InteractionMatrix,
    Landscape,
    Partition,
    bits_to_int,
    build_interaction_matrix,
    generate_landscape,
    int_to_bits,
    read_landscape_csv,
    write_landscape_csv,
)
from oracles import brute_force_optimum, hill_climb, lookup


def one_based(matrix, decision):
    return {j + 1 for j in matrix.depends[decision - 1]}


def test_full_interdependence():
    mat = build_interaction_matrix(12, 3, 11)
    for i in range(12):
        assert set(mat.depends[i]) == set(range(12)) - {i}


def test_block_diagonal():
    mat = build_interaction_matrix(12, 3, 3)
    assert one_based(mat, 1) == {2, 3, 4}
    assert one_based(mat, 5) == {6, 7, 8}


def test_cyclic_overlap():
    mat = build_interaction_matrix(12, 3, 5)
    assert [j + 1 for j in mat.depends[0]] == [2, 3, 4, 5, 6]
    assert [j + 1 for j in mat.depends[11]] == [9, 10, 11, 1, 2]


@pytest.mark.parametrize("k", range(12))
def test_structure_is_deterministic_and_valid(k):
    a = build_interaction_matrix(12, 3, k)
    b = build_interaction_matrix(12, 3, k)
    assert a == b
    assert a.as_array().sum() == 12 * (k + 1)


@pytest.mark.parametrize("n,m,k", [(12, 5, 3), (12, 3, 12), (12, 3, -1)])
def test_structure_rejects(n, m, k):
    with pytest.raises(ValueError):
        build_interaction_matrix(n, m, k)


def test_matrix_invariants_checked():
    part = Partition(4, 2)
    with pytest.raises(ValueError):
        InteractionMatrix(part, 1, ((0,), (0,), (1,), (2,)))  # self-dependency
    with pytest.raises(ValueError):
        InteractionMatrix(part, 2, ((1, 1), (0, 2), (1, 3), (0, 1)))  # duplicate


def test_table_shapes():
    rng = np.random.default_rng(1)
    small = generate_landscape(build_interaction_matrix(2, 1, 0), rng)
    assert small.tables.shape == (2, 2)
    big = generate_landscape(build_interaction_matrix(12, 3, 11), rng)
    assert big.tables.shape == (12, 4096)
    assert np.all((big.tables >= 0) & (big.tables < 1))


def test_same_seed_same_tables():
    mat = build_interaction_matrix(12, 3, 5)
    a = generate_landscape(mat, np.random.default_rng(9))
    b = generate_landscape(mat, np.random.default_rng(9))
    assert a.tables.tobytes() == b.tables.tobytes()


def test_stream_order_is_decision_major():
    mat = build_interaction_matrix(12, 3, 3)
    land = generate_landscape(mat, np.random.default_rng(4))
    draws = np.random.default_rng(4).random(12 * 16)
    assert np.array_equal(land.tables.ravel(), draws)


def test_bit_codec():
    assert bits_to_int((1, 0, 1, 1)) == 0b1011
    assert int_to_bits(0b1011, 4) == (1, 0, 1, 1)
    assert int_to_bits(1, 12)[-1] == 1
    with pytest.raises(ValueError):
        int_to_bits(16, 4)


def test_zero_solution_reads_first_row(make_landscape):
    land = make_landscape(k=5, seed=2)
    for i in range(12):
        assert land.contribution(i, 0) == land.tables[i, 0]


def test_k0_contribution_ignores_other_bits():
    land = generate_landscape(build_interaction_matrix(12, 3, 0), np.random.default_rng(3))
    rng = np.random.default_rng(0)
    for _ in range(50):
        d = int(rng.integers(4096))
        i = int(rng.integers(12))
        flip = int(rng.integers(12))
        if flip == i:
            continue
        assert land.contribution(i, d) == land.contribution(i, d ^ (1 << (11 - flip)))


def test_contribution_matches_lookup_oracle(make_landscape):
    land = make_landscape(k=11, seed=5)
    rng = np.random.default_rng(1)
    for _ in range(20):
        bits = list(rng.integers(0, 2, 12))
        for flip in range(12):
            bits[flip] ^= 1
            d = bits_to_int(bits)
            for i in range(12):
                assert land.contribution(i, d) == lookup(land.tables, land.matrix.depends, i, bits)
            bits[flip] ^= 1


def test_contribution_range_check(make_landscape):
    land = make_landscape()
    with pytest.raises(IndexError):
        land.contribution(12, 0)


def test_every_table_row_reachable(make_landscape):
    land = make_landscape(k=5, seed=1)
    for i in range(12):
        seen = {land.table_index(i, d) for d in range(4096)}
        assert seen == set(range(64))


def _hand_landscape(values_per_decision):
    # K = 0 on 12 decisions; tables[i] = (f(d_i = 0), f(d_i = 1))
    return Landscape(build_interaction_matrix(12, 3, 0), np.array(values_per_decision))


def test_agent_performance_is_mean():
    tables = [[v, v] for v in (0.2, 0.4, 0.6, 0.8)] + [[0.5, 0.5]] * 8
    land = _hand_landscape(tables)
    assert land.agent_performance(0, 0) == pytest.approx(0.5, abs=1e-15)


def test_constant_contributions():
    land = _hand_landscape([[0.3, 0.3]] * 12)
    for slot in range(3):
        assert land.agent_performance(1234, slot) == pytest.approx(0.3, abs=1e-15)
    ones = _hand_landscape([[1.0, 1.0]] * 12)
    assert ones.team_performance(77) == 1.0


def test_team_is_mean_of_agents():
    tables = [[0.3, 0.3]] * 4 + [[0.5, 0.5]] * 4 + [[0.7, 0.7]] * 4
    land = _hand_landscape(tables)
    assert land.team_performance(0) == pytest.approx(0.5, abs=1e-15)


def test_agent_performance_oracle(make_landscape):
    land = make_landscape(k=5, seed=8)
    for d in (0, 1, 2047, 4095, 1234):
        bits = int_to_bits(d, 12)
        for slot in range(3):
            vals = [lookup(land.tables, land.matrix.depends, i, bits) for i in range(4 * slot, 4 * slot + 4)]
            assert land.agent_performance(d, slot) == pytest.approx(sum(vals) / 4, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(k=st.sampled_from([0, 3, 5, 11]), seed=st.integers(0, 2**32), d=st.integers(0, 4095))
def test_team_identity(k, seed, d):
    land = generate_landscape(build_interaction_matrix(12, 3, k), np.random.default_rng(seed))
    via_agents = sum(land.agent_performance(d, m) for m in range(3)) / 3
    assert abs(via_agents - land.team_performance(d)) <= 1e-15


def test_vectorised_tables_match_scalar(make_landscape):
    land = make_landscape(k=5, seed=3)
    phi = land.slot_performance_all()
    perf = land.team_performance_all()
    for d in range(0, 4096, 37):
        assert perf[d] == land.team_performance(d)
        for slot in range(3):
            assert phi[slot, d] == land.agent_performance(d, slot)


@pytest.mark.parametrize("k", [0, 3, 5, 11])
def test_global_optimum_matches_brute_force(k):
    land = generate_landscape(build_interaction_matrix(12, 3, k), np.random.default_rng(100 + k))
    best, value = land.global_optimum()
    bits, expected = brute_force_optimum(land.tables, land.matrix.depends, 12)
    assert best == bits_to_int(bits)
    assert value == pytest.approx(expected, abs=1e-15)


def test_global_optimum_separable():
    land = generate_landscape(build_interaction_matrix(12, 3, 0), np.random.default_rng(6))
    best, _ = land.global_optimum()
    expected = tuple(int(land.tables[i, 1] > land.tables[i, 0]) for i in range(12))
    assert int_to_bits(best, 12) == expected


def test_global_optimum_constant_ties_to_zero():
    land = Landscape(build_interaction_matrix(12, 3, 3), np.full((12, 16), 0.4))
    best, value = land.global_optimum()
    assert best == 0
    assert value == pytest.approx(0.4)


def test_global_optimum_cap(make_landscape):
    with pytest.raises(ValueError):
        make_landscape().global_optimum(cap=10)


def test_chunked_optimum_agrees():
    land = generate_landscape(build_interaction_matrix(18, 3, 5), np.random.default_rng(0))
    best, value = land.global_optimum()
    perf = land.team_performance_all()
    assert best == int(np.argmax(perf))
    assert value == perf[best]


@pytest.mark.parametrize("seed", range(5))
def test_optimum_dominates_random_solutions(make_landscape, seed):
    land = make_landscape(k=5, seed=seed)
    _, value = land.global_optimum()
    rng = np.random.default_rng(seed)
    for d in rng.integers(0, 4096, 100):
        assert land.team_performance(int(d)) <= value


@pytest.mark.parametrize("seed", range(3))
def test_k0_hill_climbing_reaches_optimum(seed):
    land = generate_landscape(build_interaction_matrix(12, 3, 0), np.random.default_rng(seed))
    _, best = land.global_optimum()
    rng = np.random.default_rng(seed)
    for _ in range(10):
        start = tuple(rng.integers(0, 2, 12))
        _, value = hill_climb(lambda b: land.team_performance(bits_to_int(b)), start)
        assert value == best


def test_landscape_csv_roundtrip(tmp_path, make_landscape):
    land = make_landscape(k=5, seed=11)
    path = tmp_path / "land.csv"
    write_landscape_csv(land, path)
    back = read_landscape_csv(path, m=3)
    assert back.matrix == land.matrix
    assert back.tables.tobytes() == land.tables.tobytes()


def test_partition_join_extract():
    part = Partition(12, 3)
    full = part.join([0b1010, 0b0001, 0b1111])
    assert full == 0b101000011111
    assert [part.extract(full, s) for s in range(3)] == [0b1010, 0b0001, 0b1111]
    assert part.insert(full, 1, 0b0110) == 0b101001101111
    for subs in itertools.product(range(16), repeat=2):
        f = part.join([subs[0], 5, subs[1]])
        assert part.extract(f, 0) == subs[0] and part.extract(f, 2) == subs[1]
