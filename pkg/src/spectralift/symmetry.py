"""Permutation-group combinatorics: value partitions, stabilizers, orbit and
stabilizer dimensions, symmetrized membership and local-symmetry probes.

Permutations act by (sigma x)_i = signs_i * x[image[i]]; plain permutations
have signs None.  Indices are 0-based in code and 1-based in JSON.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import EnumerationCapError, InputError
from .reports import ProbeReport

#: Largest group order that element enumeration will unroll.
ENUMERATION_CAP = math.factorial(10)


@dataclass(frozen=True)
class Partition:
    """Ordered blocks partitioning {0..n-1}."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(len(seen))):
            raise InputError(f"blocks do not partition an index range: {self.blocks}")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def to_json(self) -> list[list[int]]:
        return [[i + 1 for i in b] for b in self.blocks]

    @classmethod
    def from_json(cls, data) -> "Partition":
        return cls(tuple(tuple(i - 1 for i in b) for b in data))


@dataclass(frozen=True)
class PermutationElement:
    image: tuple[int, ...]
    signs: tuple[int, ...] | None = None

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise InputError(f"not a bijection: {self.image}")
        if self.signs is not None:
            if len(self.signs) != len(self.image):
                raise InputError("signs length mismatch")
            if any(s not in (-1, 1) for s in self.signs):
                raise InputError("signs must be +-1")

    @classmethod
    def identity(cls, n: int) -> "PermutationElement":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.image)

    def is_identity(self) -> bool:
        return self.image == tuple(range(self.n)) and (
            self.signs is None or all(s == 1 for s in self.signs))

    def apply(self, x: Sequence) -> tuple:
        if len(x) != self.n:
            raise InputError("dimension mismatch")
        if self.signs is None:
            return tuple(x[j] for j in self.image)
        return tuple(s * x[j] for s, j in zip(self.signs, self.image))

    def apply_array(self, x: np.ndarray) -> np.ndarray:
        out = np.asarray(x)[list(self.image)]
        if self.signs is not None:
            out = out * np.asarray(self.signs)
        return out

    def inverse(self) -> "PermutationElement":
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        if self.signs is None:
            return PermutationElement(tuple(inv))
        signs = [0] * self.n
        for i, j in enumerate(self.image):
            signs[j] = self.signs[i]
        return PermutationElement(tuple(inv), tuple(signs))

    def compose(self, other: "PermutationElement") -> "PermutationElement":
        """self after other: (self.compose(other)).apply(x) == self.apply(other.apply(x))."""
        image = tuple(other.image[j] for j in self.image)
        if self.signs is None and other.signs is None:
            return PermutationElement(image)
        s1 = self.signs or (1,) * self.n
        s2 = other.signs or (1,) * self.n
        signs = tuple(s1[i] * s2[self.image[i]] for i in range(self.n))
        return PermutationElement(image, signs)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        for i, j in enumerate(self.image):
            m[i, j] = 1.0 if self.signs is None else float(self.signs[i])
        return m

    def to_json(self) -> dict:
        out = {"image": [j + 1 for j in self.image]}
        if self.signs is not None:
            out["signs"] = list(self.signs)
        return out


@dataclass(frozen=True)
class StabilizerDescriptor:
    """fix(x) as a product of symmetric groups on the tie-blocks, optionally
    with sign flips on the zero block (absolutely invariant case)."""

    partition: Partition
    absolute: bool = False
    zero_block: int | None = None  # index into partition.blocks, if any

    def order(self) -> int:
        o = 1
        for b in self.partition.blocks:
            o *= math.factorial(len(b))
        if self.absolute and self.zero_block is not None:
            o *= 2 ** len(self.partition.blocks[self.zero_block])
        return o

    def elements(self, cap: int = ENUMERATION_CAP) -> Iterator[PermutationElement]:
        if self.order() > cap:
            raise EnumerationCapError(
                f"group order {self.order()} exceeds cap {cap}")
        n = self.partition.n
        blocks = self.partition.blocks
        per_block = [list(itertools.permutations(b)) for b in blocks]
        zero = set(blocks[self.zero_block]) if (
            self.absolute and self.zero_block is not None) else set()
        sign_choices = (
            list(itertools.product((1, -1), repeat=len(zero))) if zero else [()])
        zero_sorted = sorted(zero)
        for combo in itertools.product(*per_block):
            image = [0] * n
            for b, perm in zip(blocks, combo):
                for pos, src in zip(b, perm):
                    image[pos] = src
            for signs in sign_choices:
                if zero:
                    s = [1] * n
                    for z, sg in zip(zero_sorted, signs):
                        s[z] = sg
                    yield PermutationElement(tuple(image), tuple(s))
                else:
                    yield PermutationElement(tuple(image))


def partition_of(x: Sequence, grouping_tol: float = 0.0) -> Partition:
    """Value partition of x: i,j tie iff within grouping_tol, chained
    transitively after sorting.  Blocks hold original indices and are ordered
    by decreasing value."""
    if grouping_tol < 0:
        raise InputError("grouping_tol must be >= 0")
    n = len(x)
    idx = sorted(range(n), key=lambda i: (-float(x[i]), i))
    blocks: list[list[int]] = []
    for k, i in enumerate(idx):
        if k > 0 and abs(float(x[idx[k - 1]]) - float(x[i])) <= grouping_tol:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return Partition(tuple(tuple(sorted(b)) for b in blocks))


def fix_group(x: Sequence, grouping_tol: float = 0.0,
              absolute: bool = False) -> StabilizerDescriptor:
    """Stabilizer of x under (signed) permutations, described by its blocks.

    With absolute=True the descriptor adds sign flips on the zero block;
    this matches singular-value vectors (nonnegative), which is where the
    absolutely invariant case is used.
    """
    p = partition_of(x, grouping_tol)
    zero_block = None
    if absolute:
        for bi, b in enumerate(p.blocks):
            if all(abs(float(x[i])) <= grouping_tol for i in b):
                zero_block = bi
                break
    return StabilizerDescriptor(p, absolute, zero_block)


def sort_desc(x: Sequence) -> tuple[tuple, PermutationElement]:
    """Sorted nonincreasing copy plus the permutation realizing it
    (stable: ties keep original index order)."""
    n = len(x)
    image = tuple(sorted(range(n), key=lambda i: (-float(x[i]), i)))
    sigma = PermutationElement(image)
    return sigma.apply(x), sigma


def orbit_dim(p: Partition) -> int:
    sizes = p.block_sizes()
    return sum(sizes[i] * sizes[j]
               for i in range(len(sizes)) for j in range(i + 1, len(sizes)))


def stabilizer_dim(p: Partition) -> int:
    return sum(k * (k - 1) // 2 for k in p.block_sizes())


def enumerate_permutations(n: int, cap: int = ENUMERATION_CAP
                           ) -> Iterator[PermutationElement]:
    if math.factorial(n) > cap:
        raise EnumerationCapError(f"{n}! exceeds enumeration cap {cap}")
    for image in itertools.permutations(range(n)):
        yield PermutationElement(image)


def enumerate_signed_permutations(n: int, cap: int = ENUMERATION_CAP
                                  ) -> Iterator[PermutationElement]:
    if math.factorial(n) * 2**n > cap:
        raise EnumerationCapError(f"signed group order exceeds cap {cap}")
    for image in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield PermutationElement(image, signs)


def sym_membership(predicate: Callable[[tuple], bool], x: Sequence,
                   mode: str = "full", xbar: Sequence | None = None,
                   grouping_tol: float = 0.0, signed: bool = False,
                   cap: int = ENUMERATION_CAP
                   ) -> tuple[bool, PermutationElement | None]:
    """Is sigma(x) in M for some sigma in Sigma^n (mode="full") or in
    fix(xbar) (mode="fix")?  Returns the witness on success."""
    if mode == "full":
        gens = (enumerate_signed_permutations(len(x), cap) if signed
                else enumerate_permutations(len(x), cap))
    elif mode == "fix":
        if xbar is None:
            raise InputError("mode='fix' needs xbar")
        gens = fix_group(xbar, grouping_tol, absolute=signed).elements(cap)
    else:
        raise InputError(f"unknown mode {mode!r}")
    for sigma in gens:
        if predicate(sigma.apply(x)):
            return True, sigma
    return False, None


def local_symmetry_probe(f: Callable[[np.ndarray], float], xbar: Sequence,
                         radius: float, trials: int, seed: int,
                         grouping_tol: float = 1e-9) -> ProbeReport:
    """Sample the ball around xbar and compare f(x) with f(sigma x) over all
    sigma in fix(xbar).  Passes iff the worst deviation stays below
    1e-10 * (1 + |f(x)|)."""
    if radius <= 0:
        raise InputError("radius must be positive")
    rng = np.random.default_rng(seed)
    xb = np.asarray(xbar, dtype=float)
    group = list(fix_group(xbar, grouping_tol).elements())
    worst = {"deviation": 0.0, "x": None, "sigma": None, "threshold": 0.0}
    passed = True
    for _ in range(trials):
        x = xb + radius * rng.uniform(-1.0, 1.0, size=len(xb))
        fx = float(f(x))
        threshold = 1e-10 * (1.0 + abs(fx))
        for sigma in group:
            dev = abs(fx - float(f(sigma.apply_array(x))))
            if dev > worst["deviation"]:
                worst = {"deviation": dev, "x": x.tolist(),
                         "sigma": sigma.to_json(), "threshold": threshold}
            if dev > threshold:
                passed = False
    return ProbeReport("local_symmetry", passed, worst, trials, seed,
                       details={"radius": radius, "group_order": len(group)})
