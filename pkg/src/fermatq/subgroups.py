"""Multiplicative subgroups mod m and small-ratio counting.

count_ratios(m, G, Z) counts triples (w, x, y) with w in G,
0 < |x|, |y| <= Z and w*x = y mod m.  Since (w, -x, -y) pairs off with
(w, x, y), the count is twice the x > 0 half, and for fixed (w, x) the
residue w*x mod m admits at most one admissible y because Z < m/2.
The collision set of a quotient table embeds into these triples for
the group of (p-1)-th roots of unity mod p**2, which is what the
containment check exercises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import BudgetError, OddPrime, odd_prime
from .quotients import collision_count, quotient_table

DEFAULT_RATIO_BUDGET = 1_000_000_000


@dataclass(frozen=True)
class SubgroupModM:
    """A multiplicative subgroup of the units mod m, elements sorted."""

    m: int
    elements: tuple[int, ...]

    def __post_init__(self):
        m = self.m
        if m < 2:
            raise ValueError(f"modulus must be >= 2, got {m}")
        elems = tuple(sorted(set(e % m for e in self.elements)))
        object.__setattr__(self, "elements", elems)
        members = frozenset(elems)
        if 1 not in members:
            raise ValueError("subgroup must contain 1")
        for e in elems:
            if math.gcd(e, m) != 1:
                raise ValueError(f"element {e} is not a unit mod {m}")
            if pow(e, -1, m) not in members:
                raise ValueError(f"inverse of {e} missing")
        for a in elems:
            for b in elems:
                if a * b % m not in members:
                    raise ValueError(f"product {a}*{b} escapes the subgroup")
        object.__setattr__(self, "_members", members)

    @property
    def t(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x % self.m in self._members

    @classmethod
    def generated(cls, m: int, g: int) -> "SubgroupModM":
        """Cyclic subgroup generated by a unit g."""
        if math.gcd(g, m) != 1:
            raise ValueError(f"generator {g} is not a unit mod {m}")
        elems = []
        x = 1
        while True:
            elems.append(x)
            x = x * g % m
            if x == 1:
                break
        return cls(m, tuple(elems))


def pth_power_residues(p: int | OddPrime) -> SubgroupModM:
    """The p-th powers mod p**2: the p-1 solutions of w**(p-1) = 1 mod p**2."""
    prime = odd_prime(p)
    elems = tuple(pow(n, prime.p, prime.p2) for n in range(1, prime.p))
    return SubgroupModM(prime.p2, elems)


def count_ratios(
    m: int,
    group: SubgroupModM,
    z: int,
    *,
    budget_ops: int = DEFAULT_RATIO_BUDGET,
) -> int:
    """#{(w, x, y) : w in G, 0 < |x|, |y| <= Z, w*x = y mod m}."""
    if group.m != m:
        raise ValueError(f"group lives mod {group.m}, not {m}")
    if not 1 <= z < m / 2:
        raise ValueError(f"Z must satisfy 1 <= Z < m/2, got Z={z}, m={m}")
    if group.t * z > budget_ops:
        raise BudgetError(f"{group.t} * {z} products exceed budget {budget_ops}")
    xs = np.arange(1, z + 1, dtype=np.int64)
    count = 0
    for w in group.elements:
        r = w * xs % m  # never 0: w is a unit and 0 < x < m
        count += int(np.count_nonzero((r <= z) | (r >= m - z)))
    return 2 * count


def count_ratios_upto(
    m: int,
    group: SubgroupModM,
    z_max: int,
    *,
    budget_ops: int = DEFAULT_RATIO_BUDGET,
) -> np.ndarray:
    """count_ratios for every Z = 1..z_max in one pass.

    A pair (w, x) first becomes admissible at Z = max(x, min(r, m - r))
    with r = w*x mod m, so a histogram of those thresholds integrates
    to the counts.
    """
    if group.m != m:
        raise ValueError(f"group lives mod {group.m}, not {m}")
    if not 1 <= z_max < m / 2:
        raise ValueError(f"Z must satisfy 1 <= Z < m/2, got Z={z_max}, m={m}")
    if group.t * z_max > budget_ops:
        raise BudgetError(f"{group.t} * {z_max} products exceed budget {budget_ops}")
    xs = np.arange(1, z_max + 1, dtype=np.int64)
    thresholds = np.zeros(z_max + 1, dtype=np.int64)
    for w in group.elements:
        r = w * xs % m
        first = np.maximum(xs, np.minimum(r, m - r))
        inside = first <= z_max
        np.add.at(thresholds, first[inside], 1)
    return 2 * np.cumsum(thresholds)[1:]


def lemma7_rhs(m: int, t: int, z: int, nu: int) -> float:
    """Envelope Z t^((2nu+1)/(2nu(nu+1))) m^(-1/(2(nu+1))) + Z^2 t^(1/nu) m^(-1/nu)."""
    if min(m, t, z) < 1 or nu < 1:
        raise ValueError("m, t, Z, nu must all be >= 1")
    mf, tf, zf = float(m), float(t), float(z)
    first = zf * tf ** ((2 * nu + 1) / (2 * nu * (nu + 1))) * mf ** (-1 / (2 * (nu + 1)))
    second = zf * zf * tf ** (1 / nu) * mf ** (-1 / nu)
    return first + second


@dataclass(frozen=True)
class ContainmentCheck:
    p: int
    n: int
    collisions: int
    ratio_count: int

    @property
    def ok(self) -> bool:
        return self.collisions <= self.ratio_count


def collision_vs_ratio_check(p: int | OddPrime, n: int) -> ContainmentCheck:
    """Quotient collisions over 1..n embed into ratio triples of the
    (p-1)-element group mod p**2; requires n < p**2 / 2."""
    prime = odd_prime(p)
    if not 1 <= n < prime.p2 / 2:
        raise ValueError(f"need 1 <= n < p^2/2, got n={n}, p={prime.p}")
    collisions = collision_count(quotient_table(prime, n))
    ratios = count_ratios(prime.p2, pth_power_residues(prime), n)
    return ContainmentCheck(prime.p, n, collisions, ratios)
