"""Monotone maps between finite ordinals [p] = {0, ..., p}.

Internally a monotone map is a plain tuple of its values; ``MonotoneMap``
wraps that tuple for the public API.  All structure maps in the package
(faces, degeneracies, principal edges) are stored this way, so composition
is function composition and normal forms come from epi-mono factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterator, Tuple

Values = Tuple[int, ...]


def identity(p: int) -> Values:
    return tuple(range(p + 1))


def constant(p: int, value: int = 0) -> Values:
    return (value,) * (p + 1)


def compose(f: Values, g: Values) -> Values:
    """Return f o g (apply g first)."""
    return tuple(f[i] for i in g)


@lru_cache(maxsize=None)
def factor(f: Values) -> Tuple[Values, Values]:
    """Epi-mono factorization ``f = inj o surj``; returns ``(inj, surj)``."""
    image = tuple(sorted(set(f)))
    index = {v: i for i, v in enumerate(image)}
    return image, tuple(index[v] for v in f)


def is_monotone(f: Values) -> bool:
    return all(f[i] <= f[i + 1] for i in range(len(f) - 1))


def is_surjection(f: Values) -> bool:
    return len(f) > 0 and f[0] == 0 and all(f[i + 1] - f[i] in (0, 1) for i in range(len(f) - 1))


def is_injection(f: Values) -> bool:
    return all(f[i] < f[i + 1] for i in range(len(f) - 1))


def is_identity(f: Values) -> bool:
    return all(v == i for i, v in enumerate(f))


def target_dim(f: Values) -> int:
    """Dimension of the target for a surjection (its last value)."""
    return f[-1] if f else -1


@lru_cache(maxsize=None)
def coface(p: int, i: int) -> Values:
    """The injection [p-1] -> [p] skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(p))


@lru_cache(maxsize=None)
def codegeneracy(p: int, i: int) -> Values:
    """The surjection [p+1] -> [p] hitting ``i`` twice."""
    return tuple(j if j <= i else j - 1 for j in range(p + 2))


@lru_cache(maxsize=None)
def surjections(n: int, k: int) -> Tuple[Values, ...]:
    """All surjections [n] -> [k], in lexicographic order."""
    if k > n or k < 0:
        return ()
    out = []
    # choose which k of the n steps go up by one
    for ups in combinations(range(n), k):
        vals, cur = [0], 0
        upset = set(ups)
        for step in range(n):
            if step in upset:
                cur += 1
            vals.append(cur)
        out.append(tuple(vals))
    return tuple(out)


@lru_cache(maxsize=None)
def injections(k: int, n: int) -> Tuple[Values, ...]:
    """All injections [k] -> [n], in lexicographic order."""
    return tuple(combinations(range(n + 1), k + 1))


def monotone_maps(p: int, m: int) -> Iterator[Values]:
    """All monotone maps [p] -> [m], lexicographically."""
    return combinations_with_replacement(range(m + 1), p + 1)


def flat_steps(s: Values) -> frozenset:
    """Indices j with s(j) == s(j+1), i.e. the degeneracy directions of s."""
    return frozenset(j for j in range(len(s) - 1) if s[j] == s[j + 1])


def common_flattening(maps) -> Values:
    """Largest surjection through which every map in ``maps`` factors.

    The maps share a domain [n]; the result collapses exactly the steps that
    are flat in all of them.
    """
    n = len(maps[0]) - 1
    vals, cur = [0], 0
    for j in range(n):
        if any(s[j] != s[j + 1] for s in maps):
            cur += 1
        vals.append(cur)
    return tuple(vals)


def section(s: Values) -> Values:
    """Least right inverse of a surjection ``s`` (first preimage of each value)."""
    first = {}
    for i, v in enumerate(s):
        first.setdefault(v, i)
    return tuple(first[v] for v in range(len(first)))


def divide(s: Values, sigma: Values) -> Values:
    """Given ``s = t o sigma`` with ``sigma`` surjective, return ``t``."""
    return compose(s, section(sigma))


@dataclass(frozen=True, order=True)
class MonotoneMap:
    """A weakly increasing map [source_dim] -> [target_dim]."""

    values: Values
    target_dim: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise ValueError("a monotone map needs at least one value")
        if not is_monotone(self.values):
            raise ValueError(f"values {self.values} are not weakly increasing")
        if self.values[0] < 0 or self.values[-1] > self.target_dim:
            raise ValueError(f"values {self.values} do not fit in [{self.target_dim}]")

    @classmethod
    def identity(cls, p: int) -> "MonotoneMap":
        return cls(identity(p), p)

    @property
    def source_dim(self) -> int:
        return len(self.values) - 1

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __matmul__(self, other: "MonotoneMap") -> "MonotoneMap":
        if other.target_dim != self.source_dim:
            raise ValueError("composition of incompatible monotone maps")
        return MonotoneMap(compose(self.values, other.values), self.target_dim)

    def is_injective(self) -> bool:
        return is_injection(self.values)

    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target_dim + 1))

    def factor(self) -> Tuple["MonotoneMap", "MonotoneMap"]:
        """Return ``(injection, surjection)`` with ``self = injection @ surjection``."""
        inj, surj = factor(self.values)
        k = len(inj) - 1
        return MonotoneMap(inj, self.target_dim), MonotoneMap(surj, k)
