"""Carriers, powerset elements as bit vectors, and substitution operators.

A carrier is a subset D of the sequence space ^n u.  The algebra lives on
the powerset of D: elements are subsets stored as bit vectors indexed by
*position in D* (not by rank in the ambient space), so relativized
carriers stay dense.  The substitution operator for a permutation f sends
X to {q in D : q . f in X}; per (carrier, permutation) this is compiled
once into bit masks and then applied to any element by OR-ing masks over
the set bits.

A carrier is *permutable* when it is closed under swapping any two
coordinates of its members (hence under every coordinate permutation).
On permutable carriers the substitution operators are Boolean
endomorphisms and compose functorially; on arbitrary carriers only the
literal definition is promised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .seqspace import (
    DimensionMismatch,
    Perm,
    Seq,
    SpaceRank,
    fmt_seq,
    rank,
    transposition,
    unrank,
)

#: Hard ceiling on carrier enumeration (members of D).
MAX_CARRIER_MEMBERS = 1 << 20

#: Hard ceiling on generated subalgebra size (elements of the closure).
MAX_SUBALGEBRA_ELEMS = 1 << 16


class CarrierMismatch(ValueError):
    """An element is used with a carrier it does not belong to."""


class SizeCapExceeded(RuntimeError):
    """A construction would exceed its configured size cap."""


def _rank_unchecked(s: Seq, u: int) -> SpaceRank:
    r = 0
    for e in s:
        r = r * u + e
    return r


class Carrier:
    """An ordered subset of ^n u with a membership index.

    members holds ranks in strictly increasing order, so position in the
    carrier is itself a canonical order.  Structurally equal carriers
    (same n, u, members) are interchangeable; the permutability flag and
    the compiled substitution masks are write-once caches.
    """

    __slots__ = ("n", "u", "members", "member_index", "_seqs", "_permutable", "_subst_masks")

    def __init__(self, n: int, u: int, members: Iterable[SpaceRank]):
        if n < 0 or u < 0:
            raise ValueError("dimension and base size must be non-negative")
        self.n = n
        self.u = u
        self.members: tuple[SpaceRank, ...] = tuple(members)
        total = u**n
        prev = -1
        for r in self.members:
            if r <= prev:
                raise ValueError("carrier members must be strictly increasing ranks")
            if not 0 <= r < total:
                raise ValueError(f"rank {r} out of range for dimension {n} over base {u}")
            prev = r
        self.member_index: dict[SpaceRank, int] = {r: p for p, r in enumerate(self.members)}
        self._seqs: tuple[Seq, ...] | None = None
        self._permutable: bool | None = None
        self._subst_masks: dict[tuple[int, ...], list[int]] = {}

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def seqs(self) -> tuple[Seq, ...]:
        """Member sequences in carrier (= rank) order."""
        if self._seqs is None:
            self._seqs = tuple(unrank(r, self.n, self.u) for r in self.members)
        return self._seqs

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Carrier):
            return NotImplemented
        return (self.n, self.u, self.members) == (other.n, other.u, other.members)

    def __hash__(self) -> int:
        return hash((self.n, self.u, self.members))

    def __repr__(self) -> str:
        if self.size <= 8:
            body = "{" + ", ".join(fmt_seq(s) for s in self.seqs) + "}"
        else:
            body = f"{self.size} sequences"
        return f"Carrier(n={self.n}, u={self.u}, {body})"

    def _masks_for(self, f: Perm) -> list[int]:
        """Compiled substitution masks for f: masks[src] is the bit set of
        positions p whose member composes into member src."""
        key = f.images
        masks = self._subst_masks.get(key)
        if masks is None:
            if f.n != self.n:
                raise DimensionMismatch(
                    f"permutation of dimension {f.n} on a carrier of dimension {self.n}"
                )
            masks = [0] * self.size
            idx = self.member_index
            u = self.u
            for p, s in enumerate(self.seqs):
                r = _rank_unchecked(tuple(s[v] for v in key), u)
                tp = idx.get(r)
                if tp is not None:
                    masks[tp] |= 1 << p
            self._subst_masks[key] = masks
        return masks


def full_carrier(n: int, u: int, *, max_members: int | None = None) -> Carrier:
    """The whole space ^n u as a carrier (always permutable)."""
    cap = MAX_CARRIER_MEMBERS if max_members is None else max_members
    count = u**n
    if count > cap:
        raise SizeCapExceeded(f"full carrier would have {count} members, cap is {cap}")
    c = Carrier(n, u, range(count))
    c._permutable = True
    return c


def carrier_from_seqs(n: int, u: int, seqs: Iterable[Seq], *, max_members: int | None = None) -> Carrier:
    """Carrier from explicit member sequences (deduplicated, rank-sorted)."""
    cap = MAX_CARRIER_MEMBERS if max_members is None else max_members
    ranks: set[SpaceRank] = set()
    for s in seqs:
        t = tuple(s)
        if len(t) != n:
            raise DimensionMismatch(f"sequence {t!r} does not have {n} coordinates")
        ranks.add(rank(t, u))
        if len(ranks) > cap:
            raise SizeCapExceeded(f"carrier exceeds cap of {cap} members")
    return Carrier(n, u, sorted(ranks))


def is_permutable(D: Carrier) -> bool:
    """Whether D is closed under swapping any two coordinates of its members.

    Computed once per carrier and cached.
    """
    if D._permutable is None:
        D._permutable = _compute_permutable(D)
    return D._permutable


def _compute_permutable(D: Carrier) -> bool:
    idx = D.member_index
    u = D.u
    for i in range(D.n):
        for j in range(i + 1, D.n):
            for s in D.seqs:
                if s[i] == s[j]:
                    continue
                t = list(s)
                t[i], t[j] = t[j], t[i]
                if _rank_unchecked(t, u) not in idx:
                    return False
    return True


def permutable_closure(D: Carrier, *, max_members: int | None = None) -> Carrier:
    """Smallest permutable carrier containing D (the orbit closure of its
    members under all coordinate swaps)."""
    cap = MAX_CARRIER_MEMBERS if max_members is None else max_members
    seen: dict[SpaceRank, Seq] = {r: s for r, s in zip(D.members, D.seqs)}
    swaps = [(i, j) for i in range(D.n) for j in range(i + 1, D.n)]
    frontier = list(D.seqs)
    u = D.u
    while frontier:
        nxt = []
        for s in frontier:
            for i, j in swaps:
                if s[i] == s[j]:
                    continue
                t = list(s)
                t[i], t[j] = t[j], t[i]
                r = _rank_unchecked(t, u)
                if r not in seen:
                    if len(seen) >= cap:
                        raise SizeCapExceeded(f"closure exceeds cap of {cap} members")
                    tt = tuple(t)
                    seen[r] = tt
                    nxt.append(tt)
        frontier = nxt
    c = Carrier(D.n, D.u, sorted(seen))
    c._permutable = True
    return c


def permutable_subsets(n: int, u: int, *, max_subsets: int = 1 << 16) -> list[Carrier]:
    """All permutable subsets of ^n u, i.e. all unions of coordinate-swap
    orbits.  Exponential in the orbit count, so guarded by a cap."""
    count = u**n
    if count > MAX_CARRIER_MEMBERS:
        raise SizeCapExceeded(f"space has {count} sequences, cap is {MAX_CARRIER_MEMBERS}")
    orbits: list[tuple[SpaceRank, ...]] = []
    claimed: set[SpaceRank] = set()
    for r in range(count):
        if r in claimed:
            continue
        orbit = permutable_closure(Carrier(n, u, [r])).members
        claimed.update(orbit)
        orbits.append(orbit)
    if 1 << len(orbits) > max_subsets:
        raise SizeCapExceeded(f"{1 << len(orbits)} orbit unions exceed cap of {max_subsets}")
    out = []
    for pick in range(1 << len(orbits)):
        members = sorted(
            itertools.chain.from_iterable(orb for k, orb in enumerate(orbits) if pick >> k & 1)
        )
        c = Carrier(n, u, members)
        c._permutable = True
        out.append(c)
    return out


def _bit_positions(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True, repr=False)
class Elem:
    """A subset of a carrier, stored as a bit vector over member positions."""

    carrier: Carrier
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.carrier.size:
            raise ValueError("bit vector does not fit the carrier")

    def seqs(self) -> list[Seq]:
        cs = self.carrier.seqs
        return [cs[p] for p in _bit_positions(self.bits)]

    def fmt(self) -> str:
        return "{" + ", ".join(fmt_seq(s) for s in self.seqs()) + "}"

    def __repr__(self) -> str:
        if self.carrier.size <= 64:
            return f"Elem({self.fmt()})"
        return f"Elem(<{self.bits.bit_count()} of {self.carrier.size} members>)"


def _same_carrier(x: Elem, y: Elem) -> Carrier:
    if x.carrier is not y.carrier and x.carrier != y.carrier:
        raise CarrierMismatch("elements belong to different carriers")
    return x.carrier


def _owned(D: Carrier, x: Elem) -> None:
    if x.carrier is not D and x.carrier != D:
        raise CarrierMismatch("element does not belong to the given carrier")


def zero(D: Carrier) -> Elem:
    return Elem(D, 0)


def one(D: Carrier) -> Elem:
    return Elem(D, (1 << D.size) - 1)


def meet(x: Elem, y: Elem) -> Elem:
    return Elem(_same_carrier(x, y), x.bits & y.bits)


def join(x: Elem, y: Elem) -> Elem:
    return Elem(_same_carrier(x, y), x.bits | y.bits)


def complement(x: Elem) -> Elem:
    return Elem(x.carrier, x.bits ^ ((1 << x.carrier.size) - 1))


def is_zero(x: Elem) -> bool:
    return x.bits == 0


def leq(x: Elem, y: Elem) -> bool:
    _same_carrier(x, y)
    return x.bits & ~y.bits == 0


def atom(D: Carrier, s: Seq) -> Elem:
    """The singleton {s} as an element of the algebra over D."""
    t = tuple(s)
    if len(t) != D.n:
        raise DimensionMismatch(f"sequence {t!r} does not have {D.n} coordinates")
    p = D.member_index.get(rank(t, D.u))
    if p is None:
        raise ValueError(f"sequence {fmt_seq(t)} is not a member of the carrier")
    return Elem(D, 1 << p)


def elem_from_seqs(D: Carrier, seqs: Iterable[Seq]) -> Elem:
    bits = 0
    for s in seqs:
        bits |= atom(D, s).bits
    return Elem(D, bits)


def _apply_masks(masks: list[int], bits: int) -> int:
    out = 0
    while bits:
        low = bits & -bits
        out |= masks[low.bit_length() - 1]
        bits ^= low
    return out


def subst(D: Carrier, f: Perm, x: Elem) -> Elem:
    """The substitution operator: subst(D, f, X) = {q in D : q . f in X}.

    Total for every carrier; members whose composite leaves D simply never
    enter the result.
    """
    _owned(D, x)
    return Elem(D, _apply_masks(D._masks_for(f), x.bits))


def generate_subalgebra(D: Carrier, generators: Iterable[Elem], *, max_elems: int | None = None) -> list[Elem]:
    """Least set of elements containing the generators and 0/1, closed
    under meet, complement, and substitution by every transposition.

    Returns the closure in increasing bit-vector order.  On the empty
    carrier the result is the single element 0 (= 1).
    """
    cap = MAX_SUBALGEBRA_ELEMS if max_elems is None else max_elems
    full = (1 << D.size) - 1
    tmasks = [
        D._masks_for(transposition(D.n, i, j))
        for i in range(D.n)
        for j in range(i + 1, D.n)
    ]
    elems: set[int] = set()
    pending: list[int] = []

    def add(b: int) -> None:
        if b not in elems:
            if len(elems) >= cap:
                raise SizeCapExceeded(f"generated subalgebra exceeds cap of {cap} elements")
            elems.add(b)
            pending.append(b)

    add(0)
    add(full)
    for g in generators:
        _owned(D, g)
        add(g.bits)
    while pending:
        b = pending.pop()
        add(full ^ b)
        for m in tmasks:
            add(_apply_masks(m, b))
        for c in list(elems):
            add(b & c)
    return [Elem(D, b) for b in sorted(elems)]


def relativize(x: Elem, G: Carrier) -> Elem:
    """Intersect x with the sub-carrier G, re-indexed to G's positions.

    This is the map underlying every relativization homomorphism; it is
    defined for any sub-carrier, but is only a homomorphism onto the
    algebra over G when G is permutable.
    """
    E = x.carrier
    if E is G or E == G:
        return Elem(G, x.bits)
    if (E.n, E.u) != (G.n, G.u):
        raise ValueError("carriers live in different sequence spaces")
    eidx = E.member_index
    xb = x.bits
    out = 0
    for p, r in enumerate(G.members):
        ep = eidx.get(r)
        if ep is None:
            raise ValueError("not a sub-carrier of the element's carrier")
        if xb >> ep & 1:
            out |= 1 << p
    return Elem(G, out)


def canonicalize_base(D: Carrier) -> tuple[Carrier, dict[int, int]]:
    """Relabel the base values actually used by D onto {0..m-1}, order
    preserved.  Returns the relabeled carrier and the renaming map.

    Member order is unchanged (an increasing relabeling preserves
    lexicographic order), so positions — and hence bit vectors — carry
    over unchanged.
    """
    used = sorted({e for s in D.seqs for e in s})
    renaming = {v: i for i, v in enumerate(used)}
    m = len(used)
    members = [_rank_unchecked(tuple(renaming[e] for e in s), m) for s in D.seqs]
    out = Carrier(D.n, m, members)
    out._permutable = D._permutable
    return out, renaming


class SmallAlgebra:
    """The full algebra over ^n k for a base no larger than the dimension.

    Thin wrapper tying the carrier to its (n, k) signature, with the usual
    operations as conveniences.
    """

    def __init__(self, n: int, k: int):
        if not 0 <= k <= n:
            raise ValueError(f"small algebras need 0 <= k <= n, got n={n}, k={k}")
        self.n = n
        self.k = k
        self.carrier = full_carrier(n, k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SmallAlgebra):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k)

    def __hash__(self) -> int:
        return hash((SmallAlgebra, self.n, self.k))

    def __repr__(self) -> str:
        return f"SmallAlgebra(n={self.n}, k={self.k})"

    def zero(self) -> Elem:
        return zero(self.carrier)

    def one(self) -> Elem:
        return one(self.carrier)

    def atom(self, s: Seq) -> Elem:
        return atom(self.carrier, s)

    def subst(self, f: Perm, x: Elem) -> Elem:
        return subst(self.carrier, f, x)


@dataclass(frozen=True, repr=False)
class ProductElem:
    """An element of a direct product: one component per factor."""

    components: tuple[Elem, ...]

    def __repr__(self) -> str:
        return "ProductElem(" + ", ".join(repr(c) for c in self.components) + ")"


class ProductAlgebra:
    """Direct product of the powerset algebras over the given carriers.

    All operations act componentwise; the factors must share a dimension
    so substitution makes sense across the board.
    """

    def __init__(self, factors: Iterable[Carrier]):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        n = self.factors[0].n
        for c in self.factors[1:]:
            if c.n != n:
                raise DimensionMismatch("product factors must share their dimension")
        self.n = n

    def element(self, components: Iterable[Elem]) -> ProductElem:
        comps = tuple(components)
        if len(comps) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components, got {len(comps)}")
        for e, c in zip(comps, self.factors):
            _owned(c, e)
        return ProductElem(comps)

    def _components(self, a: ProductElem) -> tuple[Elem, ...]:
        if len(a.components) != len(self.factors):
            raise CarrierMismatch("product element has the wrong number of components")
        for e, c in zip(a.components, self.factors):
            _owned(c, e)
        return a.components

    def zero(self) -> ProductElem:
        return ProductElem(tuple(zero(c) for c in self.factors))

    def one(self) -> ProductElem:
        return ProductElem(tuple(one(c) for c in self.factors))

    def meet(self, a: ProductElem, b: ProductElem) -> ProductElem:
        return ProductElem(tuple(meet(x, y) for x, y in zip(self._components(a), self._components(b))))

    def join(self, a: ProductElem, b: ProductElem) -> ProductElem:
        return ProductElem(tuple(join(x, y) for x, y in zip(self._components(a), self._components(b))))

    def complement(self, a: ProductElem) -> ProductElem:
        return ProductElem(tuple(complement(x) for x in self._components(a)))

    def subst(self, f: Perm, a: ProductElem) -> ProductElem:
        return ProductElem(tuple(subst(c, f, x) for c, x in zip(self.factors, self._components(a))))

    def is_zero(self, a: ProductElem) -> bool:
        return all(is_zero(x) for x in self._components(a))


def make_product(factors: Iterable[Carrier]) -> ProductAlgebra:
    return ProductAlgebra(factors)
