import math
import random

import numpy as np
import pytest

from fermatq.arith import BudgetError, primes_up_to
from fermatq.subgroups import (
    ContainmentCheck,
    SubgroupModM,
    collision_vs_ratio_check,
    count_ratios,
    count_ratios_upto,
    lemma7_rhs,
    pth_power_residues,
)


def brute_count(m, elements, z):
    # full triple enumeration, signs included
    count = 0
    for w in elements:
        for x in range(-z, z + 1):
            if x == 0:
                continue
            for y in range(-z, z + 1):
                if y == 0:
                    continue
                if (w * x - y) % m == 0:
                    count += 1
    return count


def test_subgroup_axioms_enforced():
    SubgroupModM(25, (1, 24))
    with pytest.raises(ValueError):
        SubgroupModM(25, (1, 5))  # not a unit
    with pytest.raises(ValueError):
        SubgroupModM(25, (1, 7))  # 7*7 = 24 escapes {1, 7}
    with pytest.raises(ValueError):
        SubgroupModM(25, (7, 18))  # misses identity
    with pytest.raises(ValueError):
        SubgroupModM(1, (1,))


def test_subgroup_generated():
    g = SubgroupModM.generated(25, 7)
    assert g.elements == (1, 7, 18, 24)
    assert 18 in g and 5 not in g and g.t == 4


def test_pth_power_residues_examples():
    assert pth_power_residues(5).elements == (1, 7, 18, 24)
    assert pth_power_residues(3).elements == (1, 8)
    for p in (3, 5, 7, 11, 13):
        grp = pth_power_residues(p)
        assert grp.t == p - 1
        assert grp.m == p * p
        for w in grp.elements:
            assert pow(w, p - 1, p * p) == 1


def test_count_ratios_examples():
    assert count_ratios(25, SubgroupModM(25, (1, 24)), 2) == 8
    assert count_ratios(25, SubgroupModM(25, (1,)), 1) == 2
    assert count_ratios(9, SubgroupModM(9, (1,)), 1) == 2


def test_count_ratios_at_least_trivial():
    # w = 1 pairs x with y = x, both signs: count >= 2Z
    for p in (3, 5, 7):
        grp = pth_power_residues(p)
        for z in (1, 2, (p * p - 1) // 2):
            assert count_ratios(p * p, grp, z) >= 2 * z


def test_count_ratios_validation():
    grp = SubgroupModM(25, (1, 24))
    with pytest.raises(ValueError):
        count_ratios(24, grp, 2)
    with pytest.raises(ValueError):
        count_ratios(25, grp, 0)
    with pytest.raises(ValueError):
        count_ratios(25, grp, 13)  # 13 >= 25/2
    with pytest.raises(BudgetError):
        count_ratios(25, grp, 12, budget_ops=10)


def test_count_ratios_against_bruteforce_random():
    rng = random.Random(20260817)
    for _ in range(60):
        m = rng.randrange(5, 200)
        units = [x for x in range(1, m) if math.gcd(x, m) == 1]
        grp = SubgroupModM.generated(m, rng.choice(units))
        z = rng.randrange(1, max(2, (m - 1) // 2))
        if z >= m / 2:
            continue
        assert count_ratios(m, grp, z) == brute_count(m, grp.elements, z), (m, grp.elements, z)


def test_count_ratios_upto_matches_single_counts():
    for p in (3, 5, 7):
        grp = pth_power_residues(p)
        z_max = (p * p - 1) // 2
        prefix = count_ratios_upto(p * p, grp, z_max)
        assert len(prefix) == z_max
        for z in range(1, z_max + 1):
            assert prefix[z - 1] == count_ratios(p * p, grp, z)


def test_count_ratios_monotone_in_z():
    grp = pth_power_residues(7)
    prefix = count_ratios_upto(49, grp, 24)
    assert all(int(b) >= int(a) for a, b in zip(prefix, prefix[1:]))


def test_lemma7_rhs_values():
    # nu = 1: Z t^(3/4) m^(-1/4) + Z^2 t m^(-1)
    assert lemma7_rhs(16, 16, 2, 1) == pytest.approx(2 * 16**0.75 * 16**-0.25 + 4 * 16 / 16)
    assert lemma7_rhs(81, 9, 3, 2) == pytest.approx(
        3 * 9 ** (5 / 12) * 81 ** (-1 / 6) + 9 * 9**0.5 / 81**0.5
    )
    with pytest.raises(ValueError):
        lemma7_rhs(16, 16, 0, 1)


def test_collision_vs_ratio_examples():
    chk = collision_vs_ratio_check(5, 4)
    assert isinstance(chk, ContainmentCheck)
    assert chk.collisions == 6
    assert chk.ratio_count >= 6 and chk.ok
    chk7 = collision_vs_ratio_check(7, 6)
    assert chk7.collisions == 8
    assert chk7.ratio_count >= 8 and chk7.ok


def test_collision_vs_ratio_bounds():
    with pytest.raises(ValueError):
        collision_vs_ratio_check(5, 13)  # 13 >= 25/2
    with pytest.raises(ValueError):
        collision_vs_ratio_check(5, 0)


def test_collision_vs_ratio_sweep_small_primes():
    for p in primes_up_to(31)[1:]:
        n = min(60, (p * p - 2) // 2)
        assert collision_vs_ratio_check(p, n).ok, p
