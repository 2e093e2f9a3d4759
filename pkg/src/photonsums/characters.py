"""Integer partitions and symmetric-group character tables.

Characters are computed with the Murnaghan-Nakayama rule, removing rim
hooks on the beta-set (abacus) representation of a partition.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator

MAX_CHARACTER_DEGREE = 8


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, *parts):
        if len(parts) == 1 and not isinstance(parts[0], int):
            parts = tuple(parts[0])
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(
            *(sum(1 for p in self.parts if p > i) for i in range(self.parts[0]))
        )

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""

    def gen(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return [Partition(*p) for p in gen(n, n)]


def cycle_type(perm) -> Partition:
    """Cycle type of a permutation given as a sequence of images (0-based)."""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        lengths.append(length)
    return Partition(*sorted(lengths, reverse=True))


def class_size(mu: Partition) -> int:
    """Number of permutations with cycle type ``mu``."""
    denom = 1
    for length in set(mu.parts):
        m = mu.parts.count(length)
        denom *= length**m * factorial(m)
    return factorial(mu.n) // denom


def _beta_set(lam: tuple[int, ...], length: int) -> frozenset[int]:
    padded = lam + (0,) * (length - len(lam))
    return frozenset(p + length - 1 - i for i, p in enumerate(padded))


def _from_beta(beta: frozenset[int]) -> tuple[int, ...]:
    ordered = sorted(beta, reverse=True)
    k = len(ordered)
    parts = tuple(b - (k - 1 - i) for i, b in enumerate(ordered))
    return tuple(p for p in parts if p > 0)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1 if not lam else 0
    k, rest = mu[0], mu[1:]
    beta = _beta_set(lam, len(lam) + k)
    total = 0
    for b in beta:
        if b - k < 0 or (b - k) in beta:
            continue
        # leg length = beads strictly between the old and new position
        height = sum(1 for c in beta if b - k < c < b)
        total += (-1) ** height * _mn(_from_beta((beta - {b}) | {b - k}), rest)
    return total


def character(lam: Partition, mu: Partition) -> int:
    """chi^lam evaluated on the class of cycle type ``mu``."""
    if lam.n != mu.n:
        raise ValueError(f"degree mismatch: {lam} vs {mu}")
    # removing the longest hooks first keeps the recursion shallow
    return _mn(lam.parts, tuple(sorted(mu.parts, reverse=True)))


@dataclass(frozen=True)
class CharacterTable:
    n: int
    irreps: tuple[Partition, ...]
    classes: tuple[Partition, ...]
    values: dict

    def __call__(self, lam: Partition, mu: Partition) -> int:
        return self.values[(lam, mu)]

    def row(self, lam: Partition) -> list[int]:
        return [self.values[(lam, mu)] for mu in self.classes]

    def dimension(self, lam: Partition) -> int:
        return self.values[(lam, Partition(*([1] * self.n)))]

    def inner(self, lam: Partition, nu: Partition) -> int:
        """Sum over classes of ``|class| chi^lam chi^nu``; equals ``n! delta``."""
        return sum(
            class_size(mu) * self.values[(lam, mu)] * self.values[(nu, mu)]
            for mu in self.classes
        )


@lru_cache(maxsize=None)
def characters(n: int) -> CharacterTable:
    """Full character table of S_n for ``1 <= n <= 8``."""
    if not 1 <= n <= MAX_CHARACTER_DEGREE:
        raise ValueError(f"n must be in 1..{MAX_CHARACTER_DEGREE}, got {n}")
    parts = tuple(partitions(n))
    values = {(lam, mu): character(lam, mu) for lam in parts for mu in parts}
    return CharacterTable(n, parts, parts, values)


def standard_tableaux_count(lam: Partition) -> int:
    """Hook-length formula, used to cross-check character degrees."""
    conj = lam.conjugate().parts
    prod = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(lam.n) // prod
