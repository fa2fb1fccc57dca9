"""Characters mod p and p**2, Gauss sums, and quotient exponential sums.

Roots of unity are always taken at reduced integer arguments,
exp(2*pi*i*(k mod r)/r), so equal phases are bit-identical and sums
are reproducible.  The multiplicative character mod p**2 built from
a Fermat quotient has order p and is primitive; its partial sums are
the quotient exponential sums studied by the rest of the package.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import OddPrime, factorize, is_primitive_root, odd_prime
from .quotients import (
    DEFAULT_TABLE_CAP,
    UNDEFINED,
    QuotientTable,
    ResidueHistogram,
    quotient_table,
    value_histogram,
)

TWO_PI = 2.0 * math.pi


def unit_root(r: int, k: int) -> complex:
    """exp(2*pi*i*k/r) evaluated at the reduced argument k mod r."""
    if r < 1:
        raise ValueError(f"root order must be >= 1, got {r}")
    return complex(np.exp(2j * np.pi * ((k % r) / r)))


def unit_roots(r: int, ks: np.ndarray) -> np.ndarray:
    """Vector of exp(2*pi*i*k/r) over integer arguments, reduced mod r."""
    if r < 1:
        raise ValueError(f"root order must be >= 1, got {r}")
    ks = np.asarray(ks, dtype=np.int64)
    return np.exp(2j * np.pi * (np.mod(ks, r) / r))


@functools.lru_cache(maxsize=256)
def discrete_log_table(p: int) -> tuple[int, np.ndarray]:
    """(least primitive root g, index table ind with g**ind[x] = x mod p)."""
    prime = odd_prime(p)
    g = 2
    while not is_primitive_root(g, prime):
        g += 1
    ind = np.zeros(prime.p, dtype=np.int64)
    x = 1
    for j in range(prime.p - 1):
        ind[x] = j
        x = x * g % prime.p
    ind.setflags(write=False)
    return g, ind


class CharacterModP:
    """Multiplicative character mod an odd prime, eta(g**j) = e((k*j)/(p-1)).

    The exponent k in 0..p-2 determines the order d = (p-1)/gcd(k, p-1).
    Values at 0 (and multiples of p) are 0.
    """

    def __init__(self, p: int | OddPrime, k: int):
        self.p = odd_prime(p)
        self.k = k % (self.p.p - 1)
        self.order = (self.p.p - 1) // math.gcd(self.k, self.p.p - 1)
        self.g, self._ind = discrete_log_table(self.p.p)
        values = np.zeros(self.p.p, dtype=np.complex128)
        idx = np.arange(1, self.p.p)
        values[1:] = unit_roots(self.p.p - 1, self.k * self._ind[idx])
        values.setflags(write=False)
        self._values = values

    @classmethod
    def principal(cls, p: int | OddPrime) -> "CharacterModP":
        return cls(p, 0)

    @classmethod
    def quadratic(cls, p: int | OddPrime) -> "CharacterModP":
        prime = odd_prime(p)
        return cls(prime, (prime.p - 1) // 2)

    @classmethod
    def all_of_order(cls, p: int | OddPrime, d: int) -> list["CharacterModP"]:
        """The phi(d) characters of exact order d; requires d | p-1."""
        prime = odd_prime(p)
        if d < 1 or (prime.p - 1) % d != 0:
            raise ValueError(f"order {d} does not divide {prime.p - 1}")
        step = (prime.p - 1) // d
        return [cls(prime, step * j) for j in range(1, d + 1) if math.gcd(j, d) == 1]

    @property
    def modulus(self) -> int:
        return self.p.p

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def __call__(self, x: int) -> complex:
        return complex(self._values[x % self.p.p])

    def value_array(self) -> np.ndarray:
        """chi(v) for v = 0..p-1; index 0 holds 0."""
        return self._values

    def conjugate_array(self) -> np.ndarray:
        return np.conj(self._values)


class CharacterModPSquared:
    """The order-p character mod p**2 attached to Fermat quotients.

    chi(n) = e(a*q_p(n)/p) for gcd(n, p) = 1 and 0 otherwise.  It is
    multiplicative because the quotient is additive, has period p**2,
    and is primitive: chi(1 + p) = e(a*(p-1)/p) != 1.
    """

    def __init__(self, p: int | OddPrime, a: int, *, max_entries: int = DEFAULT_TABLE_CAP):
        prime = odd_prime(p)
        if a % prime.p == 0:
            raise ValueError(f"twist {a} is divisible by {prime.p}; character would be trivial")
        self.p = prime
        self.a = a % prime.p
        self._table = quotient_table(prime, prime.p2, max_entries=max_entries)
        q = self._table.values  # length p^2 + 1, sentinel at multiples of p
        phases = np.zeros(prime.p2, dtype=np.complex128)
        body = q[1:]  # quotients of 1..p^2; residue 0 stays 0
        defined = body != UNDEFINED
        phases[1:][defined[:-1]] = unit_roots(prime.p, self.a * body[:-1][defined[:-1]])
        phases.setflags(write=False)
        self._values = phases
        # primitivity: nontrivial on the 1 + p*Z subgroup
        if self.a * (prime.p - 1) % prime.p == 0:
            raise AssertionError(f"character mod {prime.p}^2 degenerated to the principal one")
        self.order = prime.p

    @property
    def modulus(self) -> int:
        return self.p.p2

    def __call__(self, n: int) -> complex:
        return complex(self._values[n % self.p.p2])

    def value_array(self) -> np.ndarray:
        """chi(v) for v = 0..p**2-1."""
        return self._values

    def conjugate_array(self) -> np.ndarray:
        return np.conj(self._values)


def hb_character(p: int | OddPrime, a: int, *, max_entries: int = DEFAULT_TABLE_CAP) -> CharacterModPSquared:
    """The primitive character mod p**2 whose partial sums are S_p(a; N)."""
    return CharacterModPSquared(p, a, max_entries=max_entries)


def gauss_sum(r: int, chi) -> complex:
    """tau_r(chi) = sum over v of chi(v) e(v/r); r must be chi's modulus."""
    if r != chi.modulus:
        raise ValueError(f"modulus mismatch: r={r}, character lives mod {chi.modulus}")
    values = chi.value_array()
    return complex(np.dot(values, unit_roots(r, np.arange(r))))


def gauss_identity_residual(r: int, chi, b: int) -> float:
    """| chi(b) tau_r(conj chi) - sum_v conj(chi(v)) e(bv/r) |, gcd(b, r) = 1."""
    if r != chi.modulus:
        raise ValueError(f"modulus mismatch: r={r}, character lives mod {chi.modulus}")
    if math.gcd(b, r) != 1:
        raise ValueError(f"gcd({b}, {r}) != 1")
    conj = chi.conjugate_array()
    tau_bar = complex(np.dot(conj, unit_roots(r, np.arange(r))))
    # b*v stays within int64 for r < 2^31.5; moduli here are p or p^2
    twisted = complex(np.dot(conj, unit_roots(r, (b % r) * np.arange(r))))
    return abs(chi(b) * tau_bar - twisted)


def exp_sum_direct(p: int | OddPrime, a: int, n: int, *, table: QuotientTable | None = None) -> complex:
    """S_p(a; n) = sum over m <= n, gcd(m, p) = 1 of e(a*q_p(m)/p)."""
    prime = odd_prime(p)
    if n < 1:
        raise ValueError(f"range must be >= 1, got {n}")
    if table is None or table.n < n or table.p.p != prime.p:
        table = quotient_table(prime, n)
    body = table.values[1 : n + 1]
    defined = body != UNDEFINED
    return complex(unit_roots(prime.p, (a % prime.p) * body[defined]).sum())


def exp_sum_from_histogram(hist: ResidueHistogram, a: int) -> complex:
    """S_p(a; n) recovered from a value histogram: sum of counts[q] e(aq/p)."""
    p = hist.p.p
    return complex(np.dot(hist.counts, unit_roots(p, (a % p) * np.arange(p))))


def spectrum_from_histogram(hist: ResidueHistogram) -> np.ndarray:
    """|S_p(a; n)| for every a = 0..p-1 in one length-p transform."""
    # fft computes sum counts[q] e(-aq/p); counts are real so magnitudes agree
    return np.abs(np.fft.fft(hist.counts.astype(np.float64)))


def max_exp_sum(
    p: int | OddPrime,
    n: int,
    *,
    table: QuotientTable | None = None,
    hist: ResidueHistogram | None = None,
) -> tuple[int, float]:
    """(a, |S_p(a; n)|) maximizing over a = 1..p-1; ties go to the least a."""
    prime = odd_prime(p)
    if hist is None:
        if table is None or table.n < n or table.p.p != prime.p:
            table = quotient_table(prime, n)
        if table.n != n:
            table = QuotientTable(prime, n, table.values[: n + 1])
        hist = value_histogram(table)
    mags = spectrum_from_histogram(hist)
    a_star = 1 + int(np.argmax(mags[1:]))
    return a_star, float(mags[a_star])


def eta_quotient_sum(p: int | OddPrime, eta: CharacterModP, n: int, *, table: QuotientTable | None = None) -> complex:
    """Sum over m <= n, gcd(m, p) = 1 of eta(q_p(m)) for a nontrivial eta mod p."""
    prime = odd_prime(p)
    if eta.modulus != prime.p:
        raise ValueError(f"character modulus {eta.modulus} != {prime.p}")
    if eta.is_trivial:
        raise ValueError("trivial character makes the sum a plain count")
    if n < 1:
        raise ValueError(f"range must be >= 1, got {n}")
    if table is None or table.n < n or table.p.p != prime.p:
        table = quotient_table(prime, n)
    body = table.values[1 : n + 1]
    defined = body != UNDEFINED
    return complex(eta.value_array()[body[defined]].sum())


def hb_bound_rhs(p: int | OddPrime, n: int, nu: int) -> float:
    """Envelope n**(1 - 1/nu) * p**((nu + 1)/(2*nu**2)) for |S_p(a; n)|."""
    prime = odd_prime(p)
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    if n < 1:
        raise ValueError(f"range must be >= 1, got {n}")
    return n ** (1.0 - 1.0 / nu) * prime.p ** ((nu + 1.0) / (2.0 * nu * nu))
