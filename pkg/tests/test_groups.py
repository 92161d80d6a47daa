"""Canonical abelian groups and the Q/Z-complex homology, with the closed
form validated against the brute-force enumeration oracle."""

import random

import pytest

from zerocycle.errors import ComplexConditionViolated, StateSpaceTooLarge, ZeroAugmentation
from zerocycle.groups import (
    FiniteAbelianGroup,
    TRIVIAL_GROUP,
    brute_force_qz_homology,
    canonical_group,
    ell_primary,
    qz_complex_homology,
    stabilized_brute_force,
)
from zerocycle.linalg import IntegerMatrix


# --- canonical form -------------------------------------------------------


def test_chinese_remainder():
    assert canonical_group([2, 3]).divisor_chain == (6,)


def test_canonical_from_diagonal_oracle():
    # oracle: Smith form of diag(4, 6) has divisors (2, 12)
    assert canonical_group([4, 6]).divisor_chain == (2, 12)


def test_trivial_group():
    assert canonical_group([]) is not None
    assert canonical_group([]).divisor_chain == ()
    assert canonical_group([1, 1]).divisor_chain == ()
    assert TRIVIAL_GROUP.is_trivial


def test_rejects_nonpositive_orders():
    with pytest.raises(ValueError):
        canonical_group([0])
    with pytest.raises(ValueError):
        canonical_group([2, -3])


def test_canonical_is_idempotent_and_order_preserving():
    rng = random.Random(7)
    for _ in range(60):
        orders = [rng.randint(1, 60) for _ in range(rng.randint(0, 5))]
        group = canonical_group(orders)
        assert canonical_group(group.divisor_chain) == group
        expected_order = 1
        for n in orders:
            expected_order *= n
        assert group.order == expected_order


def test_chain_validation():
    with pytest.raises(ValueError):
        FiniteAbelianGroup((2, 3))  # 2 does not divide 3
    with pytest.raises(ValueError):
        FiniteAbelianGroup((1, 2))


def test_str():
    assert str(FiniteAbelianGroup((2, 12))) == "Z/2 x Z/12"
    assert str(TRIVIAL_GROUP) == "trivial"


# --- l-primary parts ------------------------------------------------------


def test_ell_primary_parts():
    group = FiniteAbelianGroup((2, 12))
    assert ell_primary(group, 2).divisor_chain == (2, 4)
    assert ell_primary(group, 3).divisor_chain == (3,)
    assert ell_primary(group, 5).divisor_chain == ()
    assert ell_primary(TRIVIAL_GROUP, 2).divisor_chain == ()


def test_ell_primary_rejects_composite():
    with pytest.raises(ValueError):
        ell_primary(TRIVIAL_GROUP, 4)
    with pytest.raises(ValueError):
        ell_primary(TRIVIAL_GROUP, 1)


def test_primes():
    assert FiniteAbelianGroup((2, 12)).primes() == (2, 3)
    assert TRIVIAL_GROUP.primes() == ()


# --- complex homology -----------------------------------------------------


def test_good_reduction_homology():
    h = qz_complex_homology((1,), IntegerMatrix.zeros(1, 1))
    assert h.divisible_rank == 0
    assert h.finite_part.is_trivial


def test_two_component_homology():
    m = IntegerMatrix.from_rows([(2, -2), (6, -6), (-2, 2), (-6, 6)])
    h = qz_complex_homology((1, 1), m)
    assert h.divisible_rank == 0
    assert h.finite_part.divisor_chain == (2,)


def test_three_torsion_homology():
    m = IntegerMatrix.from_rows([(3, -3)])
    h = qz_complex_homology((1, 1), m)
    assert h.divisible_rank == 0
    assert h.finite_part.divisor_chain == (3,)


def test_homology_preconditions():
    m = IntegerMatrix.from_rows([(1, 0)])
    with pytest.raises(ComplexConditionViolated):
        qz_complex_homology((1, 1), m)
    with pytest.raises(ZeroAugmentation):
        qz_complex_homology((0, 0), IntegerMatrix.zeros(1, 2))
    with pytest.raises(ValueError):
        qz_complex_homology((1, 1, 1), m)


def test_divisible_rank_surfaces():
    # no constraints at all: the kernel has corank 0, quotient keeps rank 1
    h = qz_complex_homology((1, 1), IntegerMatrix.zeros(0, 2))
    assert h.divisible_rank == 1
    assert h.finite_part.is_trivial


# --- brute-force oracle ---------------------------------------------------


def test_brute_force_good_reduction():
    ans = brute_force_qz_homology((1,), IntegerMatrix.zeros(1, 1), 2, 2)
    assert ans.order == 1
    assert ans.divisor_chain == ()


def test_brute_force_two_component():
    m = IntegerMatrix.from_rows([(2, -2), (6, -6), (-2, 2), (-6, 6)])
    ans = brute_force_qz_homology((1, 1), m, 2, 2)
    assert ans.order == 2
    assert ans.divisor_chain == (2,)
    ans3 = brute_force_qz_homology((1, 1), m, 3, 2)
    assert ans3.order == 1


def test_brute_force_three_torsion():
    m = IntegerMatrix.from_rows([(3, -3)])
    ans = brute_force_qz_homology((1, 1), m, 3, 2)
    assert ans.order == 3
    assert ans.divisor_chain == (3,)


def test_brute_force_higher_power_structure():
    # chain (2, 4): two cyclic factors, distinguishable only by element orders
    m = IntegerMatrix.from_rows([(4, 0, 0), (0, 2, -2), (0, -2, 2), (0, 0, 0)])
    v = (0, 1, 1)
    h = qz_complex_homology(v, m)
    assert h.finite_part.divisor_chain == (2, 4)
    low, high, stabilized = stabilized_brute_force(v, m, 2, level=2)
    assert stabilized
    assert low.order == 8
    assert low.divisor_chain == (2, 4)


def test_brute_force_guard():
    with pytest.raises(StateSpaceTooLarge):
        brute_force_qz_homology((1,) * 9, IntegerMatrix.zeros(0, 9), 7, 3)


def test_brute_force_validates_input():
    with pytest.raises(ValueError):
        brute_force_qz_homology((1,), IntegerMatrix.zeros(1, 1), 4, 2)
    with pytest.raises(ComplexConditionViolated):
        brute_force_qz_homology((1, 1), IntegerMatrix.from_rows([(1, 0)]), 2, 2)


def test_oracle_agrees_on_random_instances():
    """Closed form == enumeration on random complexes M v = 0."""
    rng = random.Random(991)
    for _ in range(40):
        a = rng.randint(1, 3)
        v = tuple(rng.randint(0, 3) for _ in range(a))
        if not any(v):
            v = (1,) + v[1:]
        # rows orthogonal to v: random combinations of differences v_j e_i - v_i e_j
        rows = []
        for _ in range(rng.randint(0, 4)):
            row = [0] * a
            i, j = rng.randrange(a), rng.randrange(a)
            if i == j:
                continue
            c = rng.randint(-4, 4)
            row[i] += c * v[j]
            row[j] -= c * v[i]
            rows.append(row)
        m = IntegerMatrix.from_rows(rows, cols=a)
        h = qz_complex_homology(v, m)
        for ell in (2, 3):
            part = ell_primary(h.finite_part, ell)
            for level in (2, 3, 4, 5):
                low, high, _ = stabilized_brute_force(v, m, ell, level=level)
                # once the finite part saturates, orders grow by exactly
                # ell^(divisible rank) per level
                if high.order == low.order * ell**h.divisible_rank:
                    if h.divisible_rank == 0:
                        assert low.order == part.order
                        assert low.divisor_chain == part.divisor_chain
                    break
            else:
                pytest.fail(f"oracle never stabilized for {m.to_rows()} at ell={ell}")


# --- invariance properties ------------------------------------------------


def test_invariance_under_unimodular_rows_and_permutation():
    from helpers import random_unimodular

    rng = random.Random(1234)
    base = IntegerMatrix.from_rows([(2, -2), (6, -6), (0, 0)])
    v = (1, 1)
    h = qz_complex_homology(v, base)
    for _ in range(25):
        t, _ = random_unimodular(rng, base.rows)
        transformed = t.matmul(base)
        assert qz_complex_homology(v, transformed) == h
        perm = list(range(base.rows))
        rng.shuffle(perm)
        permuted = IntegerMatrix.from_rows([base.row(i) for i in perm], cols=base.cols)
        assert qz_complex_homology(v, permuted) == h


def test_adding_rows_shrinks_homology():
    rng = random.Random(555)
    base = IntegerMatrix.from_rows([(2, -2), (6, -6)])
    v = (1, 1)
    h = qz_complex_homology(v, base)
    for _ in range(30):
        c = rng.randint(-5, 5)
        new_row = (c * v[1], -c * v[0])  # stays orthogonal to v
        extended = IntegerMatrix.vstack(
            [base, IntegerMatrix.from_rows([new_row], cols=2)]
        )
        h2 = qz_complex_homology(v, extended)
        assert h2.divisible_rank <= h.divisible_rank
        assert h.finite_part.order % h2.finite_part.order == 0
