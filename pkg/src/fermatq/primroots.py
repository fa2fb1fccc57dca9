"""Primitive-root indicators and searches over Fermat quotient values.

The character-sum indicator for primitive roots mod p evaluates
(phi(p-1)/(p-1)) * sum over d | p-1 of (mu(d)/phi(d)) * sum over the
characters eta of exact order d of eta(a), which is 1 on primitive
roots and 0 elsewhere.  Searches walk quotient tables in chunks that
double in size, so the typical hit a handful of steps in costs only a
few modular powers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import (
    OddPrime,
    arithmetic_functions,
    divisors,
    is_primitive_root,
    odd_prime,
    primes_up_to,
)
from .charsums import CharacterModP, discrete_log_table
from .quotients import UNDEFINED, fermat_quotient, quotient_table

_INDICATOR_TOL = 1e-6


@dataclass(frozen=True)
class IndicatorReport:
    p: int
    a: int
    indicator: int
    terms: int  # characters actually summed: phi(d) over squarefree d | p-1


def primroot_indicator(p: int | OddPrime, a: int) -> IndicatorReport:
    """Exact 0/1 primitive-root indicator via the order-d character sums."""
    prime = odd_prime(p)
    a %= prime.p
    total = 0j
    terms = 0
    for d in divisors(prime.p - 1):
        phi_d, mu_d, _ = arithmetic_functions(d)
        if mu_d == 0:
            continue
        block = 0j
        for eta in CharacterModP.all_of_order(prime, d):
            block += eta(a)
            terms += 1
        total += (mu_d / phi_d) * block
    phi_top = arithmetic_functions(prime.p - 1)[0]
    value = (phi_top / (prime.p - 1)) * total
    rounded = int(round(value.real))
    if abs(value.imag) > _INDICATOR_TOL or abs(value.real - rounded) > _INDICATOR_TOL or rounded not in (0, 1):
        raise AssertionError(f"indicator failed to settle at p={prime.p}, a={a}: {value}")
    return IndicatorReport(prime.p, a, rounded, terms)


def _chunk_caps(cap: int) -> list[int]:
    caps = []
    c = 64
    while c < cap:
        caps.append(c)
        c *= 8
    caps.append(cap)
    return caps


def smallest_primroot_quotient(p: int | OddPrime, cap: int) -> int | None:
    """Least n <= cap with gcd(n, p) = 1 and q_p(n) a primitive root mod p.

    Quotient value 0 is never a primitive root, so those n are skipped
    without an order test.
    """
    prime = odd_prime(p)
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    verdict: dict[int, bool] = {}
    start = 2
    for chunk in _chunk_caps(cap):
        table = quotient_table(prime, chunk)
        body = table.values
        for n in range(start, chunk + 1):
            q = int(body[n])
            if q <= 0:  # undefined or quotient 0
                continue
            hit = verdict.get(q)
            if hit is None:
                hit = verdict[q] = is_primitive_root(q, prime)
            if hit:
                return n
        start = chunk + 1
    return None


def smallest_dth_nonresidue_quotient(p: int | OddPrime, d: int, cap: int) -> int | None:
    """Least n <= cap with q_p(n) a d-th power nonresidue mod p.

    Uses the index table: a unit a is a d-th power residue exactly when
    d divides ind_g(a).  Quotient 0 is not a unit, hence never counts.
    """
    prime = odd_prime(p)
    if d < 2:
        raise ValueError(f"power d must be >= 2, got {d}")
    if (prime.p - 1) % d != 0:
        raise ValueError(f"{d} does not divide p - 1 = {prime.p - 1}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    _, ind = discrete_log_table(prime.p)
    start = 2
    for chunk in _chunk_caps(cap):
        table = quotient_table(prime, chunk)
        body = table.values
        for n in range(start, chunk + 1):
            q = int(body[n])
            if q <= 0:
                continue
            if int(ind[q]) % d != 0:
                return n
        start = chunk + 1
    return None


def lemma3_envelope(card_a: int, card_b: int, p: int | OddPrime, nu: int) -> float:
    """(#A)^(1 - 1/(2 nu)) #B p^(1/(4 nu)) + (#A)^(1 - 1/(2 nu)) (#B)^(1/2) p^(1/(2 nu))."""
    prime = odd_prime(p)
    if min(card_a, card_b) < 1 or nu < 1:
        raise ValueError("cardinalities and nu must be >= 1")
    a, b, pf = float(card_a), float(card_b), float(prime.p)
    lead = a ** (1 - 1 / (2 * nu))
    return lead * b * pf ** (1 / (4 * nu)) + lead * b**0.5 * pf ** (1 / (2 * nu))


def lemma3_envelope_min(card_a: int, card_b: int, p: int | OddPrime, nus=(1, 2, 3)) -> float:
    return min(lemma3_envelope(card_a, card_b, p, nu) for nu in nus)


def double_char_sum(p: int | OddPrime, eta: CharacterModP, a_set, b_set) -> complex:
    """sum over (a, b) in A x B of eta(a + b); eta vanishes at 0 mod p."""
    prime = odd_prime(p)
    if eta.modulus != prime.p:
        raise ValueError(f"character modulus {eta.modulus} != {prime.p}")
    if eta.is_trivial:
        raise ValueError("trivial character degenerates to counting nonzero sums")
    a_arr = np.unique(np.asarray(sorted(a_set), dtype=np.int64) % prime.p)
    b_arr = np.unique(np.asarray(sorted(b_set), dtype=np.int64) % prime.p)
    if len(a_arr) == 0 or len(b_arr) == 0:
        raise ValueError("both summation sets must be nonempty")
    grid = np.add.outer(a_arr, b_arr) % prime.p
    return complex(eta.value_array()[grid].sum())


def first_occurrence_set(p: int | OddPrime, cap: int) -> list[int]:
    """One representative n per distinct quotient value over 1..cap,
    each the least n attaining its value; undefined entries skipped."""
    prime = odd_prime(p)
    table = quotient_table(prime, cap)
    seen: set[int] = set()
    reps = []
    body = table.values
    for n in range(1, cap + 1):
        q = int(body[n])
        if q == UNDEFINED or q in seen:
            continue
        seen.add(q)
        reps.append(n)
    return reps


@dataclass(frozen=True)
class SumsetReport:
    p: int
    eta_order: int
    card_u: int
    card_v: int
    abs_sum: float
    envelope: float

    @property
    def ratio(self) -> float:
        return self.abs_sum / self.envelope


def quotient_sumset_experiment(p: int | OddPrime, u_cap: int, v_cap: int, eta: CharacterModP) -> SumsetReport:
    """Double character sum over quotient values realized below the caps."""
    prime = odd_prime(p)
    u_reps = first_occurrence_set(prime, u_cap)
    v_reps = first_occurrence_set(prime, v_cap)
    table = quotient_table(prime, max(u_cap, v_cap))
    u_vals = [int(table.values[n]) for n in u_reps]
    v_vals = [int(table.values[n]) for n in v_reps]
    s = double_char_sum(prime, eta, u_vals, v_vals)
    return SumsetReport(
        prime.p,
        eta.order,
        len(u_vals),
        len(v_vals),
        abs(s),
        lemma3_envelope_min(len(u_vals), len(v_vals), prime),
    )


def primroot_pair_count(p: int | OddPrime, u_cap: int, v_cap: int) -> int:
    """#{(u, v) : q_p(u) + q_p(v) mod p is a primitive root}, over the
    first-occurrence representative sets below the caps.  Desk scale."""
    prime = odd_prime(p)
    table = quotient_table(prime, max(u_cap, v_cap))
    u_vals = [int(table.values[n]) for n in first_occurrence_set(prime, u_cap)]
    v_vals = [int(table.values[n]) for n in first_occurrence_set(prime, v_cap)]
    roots = {a for a in range(1, prime.p) if is_primitive_root(a, prime)}
    return sum(1 for u in u_vals for v in v_vals if (u + v) % prime.p in roots)


@dataclass(frozen=True)
class ScanRow:
    p: int
    n_min: int | None
    exponent: float | None
    verified: bool


def _scan_task(p: int) -> ScanRow:
    prime = odd_prime(p)
    n = smallest_primroot_quotient(prime, prime.p2)
    if n is None:
        return ScanRow(prime.p, None, None, False)
    verified = is_primitive_root(fermat_quotient(prime, n), prime)
    return ScanRow(prime.p, n, math.log(n) / math.log(prime.p), verified)


def theorem4_exponent_scan(p_min: int, p_max: int, *, threads: int = 1) -> list[ScanRow]:
    """Least primitive-root quotient argument for every prime in the range,
    searched up to p**2, with each hit reverified independently."""
    if p_min > p_max:
        raise ValueError(f"empty range [{p_min}, {p_max}]")
    primes = [p for p in primes_up_to(p_max) if p >= max(3, p_min)]
    if threads > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_scan_task, primes, chunksize=32))
    return [_scan_task(p) for p in primes]
