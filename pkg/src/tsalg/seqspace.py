"""Finite sequence spaces and coordinate permutations.

The raw material for everything else in this package: length-n tuples over
a base {0..u-1}, ranked lexicographically with coordinate 0 most
significant, and permutations of the n coordinates acting on sequences by
precomposition, (s . f)(i) = s(f(i)).

Sequences are plain tuples of ints; permutations are stored in one-line
(image list) form and validated on construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

Seq = tuple[int, ...]

#: Position of a sequence in the lexicographic enumeration of its space.
SpaceRank = int


class DimensionMismatch(ValueError):
    """Operands disagree on the number of coordinates."""


class NotAPermutation(ValueError):
    """An image list is not a bijection on {0..n-1}."""


@dataclass(frozen=True)
class Perm:
    """A permutation of the coordinates {0..n-1}: images[i] = f(i).

    >>> Perm((1, 2, 0))(0)
    1
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        seen = [False] * n
        for v in self.images:
            if not isinstance(v, int) or not 0 <= v < n or seen[v]:
                raise NotAPermutation(
                    f"not a permutation of {n} coordinates: {list(self.images)!r}"
                )
            seen[v] = True

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def fmt(self) -> str:
        """Image-list syntax as used by the term language, e.g. '{1,2,0}'."""
        return "{" + ",".join(map(str, self.images)) + "}"


def perm_from_images(images: Iterable[int]) -> Perm:
    """Validate an image list and wrap it as a Perm.

    The empty list gives the unique permutation of dimension 0.
    """
    return Perm(tuple(images))


def identity_perm(n: int) -> Perm:
    return Perm(tuple(range(n)))


def transposition(n: int, i: int, j: int) -> Perm:
    """The permutation of n coordinates swapping i and j.

    >>> transposition(3, 0, 2).images
    (2, 1, 0)
    """
    if i == j:
        raise ValueError(f"transposition needs two distinct coordinates, got i = j = {i}")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"transposition coordinates out of range for dimension {n}: {i}, {j}")
    images = list(range(n))
    images[i], images[j] = j, i
    return Perm(tuple(images))


def perm_compose(f: Perm, g: Perm) -> Perm:
    """Function composition: (f.g)(i) = f(g(i))."""
    if f.n != g.n:
        raise DimensionMismatch(f"cannot compose permutations of dimensions {f.n} and {g.n}")
    return Perm(tuple(f.images[v] for v in g.images))


def perm_inverse(f: Perm) -> Perm:
    inv = [0] * f.n
    for i, v in enumerate(f.images):
        inv[v] = i
    return Perm(tuple(inv))


def all_perms(n: int) -> Iterator[Perm]:
    """Every permutation of n coordinates, in lexicographic image order."""
    for images in itertools.permutations(range(n)):
        yield Perm(images)


def rank(s: Seq, u: int) -> SpaceRank:
    """Position of s in the lexicographic enumeration of all len(s)-tuples
    over {0..u-1}; coordinate 0 is the most significant digit.

    >>> rank((1, 0), 2)
    2
    """
    value = 0
    for e in s:
        if not 0 <= e < u:
            raise ValueError(f"entry {e!r} out of base range 0..{u - 1}")
        value = value * u + e
    return value


def unrank(r: SpaceRank, n: int, u: int) -> Seq:
    """Inverse of rank: the n-tuple over {0..u-1} sitting at position r."""
    if not 0 <= r < u**n:
        raise ValueError(f"rank {r} out of range for {n} coordinates over base {u}")
    out = [0] * n
    for i in range(n - 1, -1, -1):
        r, out[i] = divmod(r, u)
    return tuple(out)


def compose_right(s: Seq, f: Perm) -> Seq:
    """Precompose a sequence with a permutation: (s . f)(i) = s(f(i)).

    This is the action every substitution operator reads through.

    >>> compose_right((0, 1, 0), Perm((1, 2, 0)))
    (1, 0, 0)
    """
    if len(s) != f.n:
        raise DimensionMismatch(f"sequence of length {len(s)} under permutation of dimension {f.n}")
    return tuple(s[v] for v in f.images)


def unit_seq(n: int, i: int) -> Seq:
    """The 0/1-valued sequence of length n that is 1 exactly at coordinate i."""
    if not 0 <= i < n:
        raise ValueError(f"unit coordinate {i} out of range for dimension {n}")
    return tuple(1 if j == i else 0 for j in range(n))


def all_seqs(n: int, u: int) -> Iterator[Seq]:
    """Lexicographic enumeration of the whole space; stream position equals rank."""
    return itertools.product(range(u), repeat=n)


def is_constant(s: Seq) -> bool:
    """True when every entry equals the first (vacuously for the empty tuple)."""
    return all(e == s[0] for e in s)


def fmt_seq(s: Seq) -> str:
    """Compact display form, e.g. '(0,1,0)'."""
    return "(" + ",".join(map(str, s)) + ")"
