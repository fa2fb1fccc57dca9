import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermatq.arith import (
    Factorization,
    OddPrime,
    arithmetic_functions,
    divisors,
    factorize,
    is_prime,
    is_primitive_root,
    mod_pow,
    multiplicative_order,
    odd_prime,
    primes_up_to,
    smallest_prime_factors,
)


def trial_division_is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def trial_division_factors(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def test_primes_up_to_100_oracle():
    expected = [n for n in range(101) if trial_division_is_prime(n)]
    assert primes_up_to(100) == expected
    assert len(expected) == 25


def test_primes_up_to_small_edges():
    assert primes_up_to(1) == []
    assert primes_up_to(2) == [2]
    assert primes_up_to(3) == [2, 3]


def test_primes_up_to_matches_trial_division_to_2000():
    assert primes_up_to(2000) == [n for n in range(2001) if trial_division_is_prime(n)]


def test_is_prime_against_trial_division():
    for n in range(2000):
        assert is_prime(n) == trial_division_is_prime(n), n


def test_is_prime_large_known():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**62 - 1)
    assert is_prime(1093) and is_prime(3511)


def test_smallest_prime_factors():
    spf = smallest_prime_factors(1000)
    assert spf[0] == 0 and spf[1] == 0
    for n in range(2, 1001):
        assert spf[n] == min(trial_division_factors(n)), n


def test_factorize_1092():
    assert factorize(1092).pairs == ((2, 2), (3, 1), (7, 1), (13, 1))


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_large_semiprime():
    # forces the rho path: both factors exceed the trial-division cutoff
    p, q = 10000019, 10000079
    assert factorize(p * q).pairs == ((p, 1), (q, 1))


@given(st.integers(min_value=1, max_value=100000))
@settings(max_examples=300)
def test_factorize_matches_trial_division(n):
    assert dict(factorize(n).pairs) == trial_division_factors(n)


def test_arithmetic_functions_30():
    assert arithmetic_functions(30) == (8, -1, 8)


def test_arithmetic_functions_oracle():
    for n in range(1, 500):
        phi = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
        facs = trial_division_factors(n)
        mu = 0 if any(e > 1 for e in facs.values()) else (-1) ** len(facs)
        tau = sum(1 for d in range(1, n + 1) if n % d == 0)
        assert arithmetic_functions(n) == (phi, mu, tau), n


def test_divisor_sum_identities():
    # sum_{d|n} phi(d) = n and sum_{d|n} mu(d) = [n == 1]
    for n in range(1, 10001):
        ds = divisors(n)
        assert sum(arithmetic_functions(d)[0] for d in ds) == n
        assert sum(arithmetic_functions(d)[1] for d in ds) == (1 if n == 1 else 0)


def test_mod_pow_wieferich():
    assert mod_pow(2, 1092, 1093**2) == 1
    assert mod_pow(2, 3510, 3511**2) == 1


def test_mod_pow_range_checks():
    with pytest.raises(ValueError):
        mod_pow(2, 10, 1 << 63)
    with pytest.raises(ValueError):
        mod_pow(2, -1, 7)
    with pytest.raises(ValueError):
        mod_pow(2, 10, 0)


@given(
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=0, max_value=512),
    st.integers(min_value=1, max_value=10**6),
)
@settings(max_examples=200)
def test_mod_pow_matches_bigint(base, exp, mod):
    assert mod_pow(base, exp, mod) == base**exp % mod


def test_fermat_little_theorem_sample():
    for p in primes_up_to(200):
        for a in (2, 3, 5, p - 1):
            if a % p:
                assert mod_pow(a, p - 1, p) == 1


def test_multiplicative_order_examples():
    assert multiplicative_order(3, 7) == 6
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(1, 7) == 1


def test_multiplicative_order_rejects_shared_factor():
    with pytest.raises(ValueError):
        multiplicative_order(6, 9)


def test_multiplicative_order_oracle():
    for m in (7, 9, 15, 101, 128):
        for a in range(1, m):
            if math.gcd(a, m) != 1:
                continue
            k, x = 1, a % m
            while x != 1:
                x = x * a % m
                k += 1
            assert multiplicative_order(a, m) == k, (a, m)


def test_primitive_roots_mod_7():
    assert {a for a in range(7) if is_primitive_root(a, 7)} == {3, 5}


def test_primitive_root_counts():
    # phi(p-1) primitive roots for every odd prime p <= 101
    for p in primes_up_to(101)[1:]:
        count = sum(1 for a in range(1, p) if is_primitive_root(a, p))
        assert count == arithmetic_functions(p - 1)[0], p


def test_odd_prime_validation():
    assert OddPrime(5).p2 == 25
    assert int(odd_prime(7)) == 7
    assert odd_prime(OddPrime(11)).p == 11
    for bad in (2, 4, 9, 1, -7, 2**31 + 11):
        with pytest.raises(ValueError):
            OddPrime(bad)


def test_factorization_primes_ascending():
    fac = factorize(75600)
    assert isinstance(fac, Factorization)
    assert fac.primes() == sorted(fac.primes())
