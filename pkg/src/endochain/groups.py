"""Finite permutation groups, subgroups, and p-subgroup tables.

Elements are permutations of {0..degree-1} stored as image tuples.  Every
enumeration walks elements in sorted tuple order, so representative choices
(class reps, coset reps, witnesses) are deterministic functions of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import GroupMismatch, InvalidGroup, NotNormal, NotPSubgroup

Perm = tuple[int, ...]


def pident(degree: int) -> Perm:
    return tuple(range(degree))


def pcompose(a: Perm, b: Perm) -> Perm:
    """a after b: (a*b)(x) = a(b(x))."""
    return tuple(a[b[i]] for i in range(len(a)))


def pinv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def ppow(a: Perm, k: int) -> Perm:
    n = len(a)
    if k < 0:
        return ppow(pinv(a), -k)
    r = pident(n)
    b = a
    while k:
        if k & 1:
            r = pcompose(b, r)
        b = pcompose(b, b)
        k >>= 1
    return r


def porder(a: Perm) -> int:
    n = 1
    b = a
    ident = pident(len(a))
    while b != ident:
        b = pcompose(a, b)
        n += 1
    return n


def pconj(g: Perm, x: Perm) -> Perm:
    """g x g^-1."""
    return pcompose(pcompose(g, x), pinv(g))


def psign(a: Perm) -> int:
    """+1 or -1, the sign of the permutation."""
    seen = [False] * len(a)
    sign = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _validate_perm(t: Iterable[int], degree: int) -> Perm:
    t = tuple(int(x) for x in t)
    if len(t) != degree or sorted(t) != list(range(degree)):
        raise InvalidGroup(f"not a permutation of 0..{degree - 1}: {t}")
    return t


def cycles_to_perm(cycles: list[list[int]], degree: int) -> Perm:
    """Disjoint-cycle notation to an image tuple."""
    out = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if not (0 <= a < degree):
                raise InvalidGroup(f"cycle point {a} outside degree {degree}")
            out[a] = b
    return _validate_perm(out, degree)


def perm_to_cycles(a: Perm) -> list[list[int]]:
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i] or a[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = a[j]
        out.append(cyc)
    return out


def closure(generators: Iterable[Perm], degree: int, cap: int = DEFAULT_CONFIG.group_order_cap) -> tuple[Perm, ...]:
    """All products of the generators, by breadth-first left multiplication.

    Raises InvalidGroup when the closure exceeds cap elements.
    """
    gens = [_validate_perm(g, degree) for g in generators]
    ident = pident(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = pcompose(g, x)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
                    if len(seen) > cap:
                        raise InvalidGroup(f"group order exceeds cap {cap}")
        frontier = new
    return tuple(sorted(seen))


class PermGroup:
    """Ambient permutation world: the full group generated on {0..degree-1}."""

    def __init__(self, generators: Iterable[Perm], degree: int, name: str = "G",
                 cap: int = DEFAULT_CONFIG.group_order_cap):
        self.degree = degree
        self.generators = tuple(
            _validate_perm(g, degree) for g in generators if tuple(g) != pident(degree)
        )
        self.name = name
        self.elements = closure(self.generators, degree, cap)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._top: Optional[SubgroupRef] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return pident(self.degree)

    @property
    def top(self) -> "SubgroupRef":
        if self._top is None:
            self._top = SubgroupRef(self, self.generators, self.elements, name=self.name)
        return self._top

    def __repr__(self):
        return f"PermGroup({self.name}, order {self.order}, degree {self.degree})"


class SubgroupRef:
    """A subgroup of an ambient PermGroup, stored with its full element set."""

    def __init__(self, parent: PermGroup, generators: tuple[Perm, ...],
                 elements: tuple[Perm, ...], name: str = ""):
        self.parent = parent
        self.generators = tuple(g for g in generators if g != pident(parent.degree))
        self.elements = tuple(sorted(elements))
        self.name = name or f"<order {len(self.elements)}>"
        self._set = frozenset(self.elements)
        self._bfs: Optional[dict[Perm, Optional[tuple[Perm, int]]]] = None
        self._bfs_order: Optional[list[Perm]] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return pident(self.parent.degree)

    def __contains__(self, x: Perm) -> bool:
        return x in self._set

    def __eq__(self, other):
        """Same subgroup of the same ambient group, regardless of how the
        generating set was chosen."""
        if not isinstance(other, SubgroupRef):
            return NotImplemented
        return (self.parent.degree == other.parent.degree
                and self.parent.elements == other.parent.elements
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.parent.degree, self.elements))

    def __repr__(self):
        return f"SubgroupRef({self.name}, order {self.order})"

    def key(self) -> tuple:
        """Cache identity: generators are part of it because module action
        matrices are aligned with the stored generator order."""
        return (self.parent.degree, self.parent.elements, self.elements, self.generators)

    def _same_ambient(self, other: "SubgroupRef") -> bool:
        return (self.parent is other.parent
                or (self.parent.degree == other.parent.degree
                    and self.parent.elements == other.parent.elements))

    def is_subgroup_of(self, other: "SubgroupRef") -> bool:
        return self._same_ambient(other) and self._set <= other._set

    def conjugate(self, g: Perm) -> "SubgroupRef":
        els = tuple(sorted(pconj(g, x) for x in self.elements))
        gens = tuple(pconj(g, x) for x in self.generators)
        return SubgroupRef(self.parent, gens, els, name=f"^g{self.name}")

    def bfs_tree(self) -> dict[Perm, Optional[tuple[Perm, int]]]:
        """element -> (parent element, generator index) with g = gen * parent.

        Spans the subgroup from the identity; used to extend generator data
        (matrices, scalars) multiplicatively with one product per element.
        """
        if self._bfs is None:
            tree: dict[Perm, Optional[tuple[Perm, int]]] = {self.identity: None}
            order = [self.identity]
            frontier = [self.identity]
            while frontier:
                new = []
                for x in frontier:
                    for i, g in enumerate(self.generators):
                        y = pcompose(g, x)
                        if y not in tree:
                            tree[y] = (x, i)
                            order.append(y)
                            new.append(y)
                frontier = new
            if len(tree) != self.order:
                raise InvalidGroup("stored generators do not generate the subgroup")
            self._bfs = tree
            self._bfs_order = order
        return self._bfs

    def bfs_order(self) -> list[Perm]:
        self.bfs_tree()
        assert self._bfs_order is not None
        return self._bfs_order

    def normalizer_in(self, big: "SubgroupRef") -> "SubgroupRef":
        if self.parent is not big.parent:
            raise GroupMismatch("normalizer across different ambient groups")
        els = tuple(x for x in big.elements
                    if all(pconj(x, h) in self._set for h in self.generators))
        return subgroup_from_elements(self.parent, els, name=f"N({self.name})")

    def left_transversal(self, sub: "SubgroupRef") -> list[Perm]:
        """Deterministic reps g of the cosets g*sub, minimal element first."""
        if not sub.is_subgroup_of(self):
            raise GroupMismatch("transversal of a non-subgroup")
        seen: set[Perm] = set()
        reps = []
        for g in self.elements:
            if g not in seen:
                reps.append(g)
                for h in sub.elements:
                    seen.add(pcompose(g, h))
        return reps


def subgroup_from_elements(parent: PermGroup, elements: Iterable[Perm],
                           name: str = "") -> SubgroupRef:
    """Build a SubgroupRef, greedily choosing a small generating set."""
    els = tuple(sorted(set(elements)))
    ident = pident(parent.degree)
    if ident not in els:
        raise InvalidGroup("subgroup must contain the identity")
    gens: list[Perm] = []
    have = {ident}
    for x in els:
        if x not in have:
            gens.append(x)
            have = set(closure(gens, parent.degree, cap=len(els)))
    if len(have) != len(els):
        raise InvalidGroup("element set is not closed under composition")
    return SubgroupRef(parent, tuple(gens), els, name=name)


def subgroup_from_generators(parent: PermGroup, generators: Iterable[Perm],
                             name: str = "") -> SubgroupRef:
    gens = tuple(_validate_perm(g, parent.degree) for g in generators)
    els = closure(gens, parent.degree, cap=parent.order)
    for x in els:
        if x not in parent.index:
            raise GroupMismatch("generators leave the ambient group")
    return SubgroupRef(parent, gens, els, name=name)


def trivial_subgroup(parent: PermGroup) -> SubgroupRef:
    return SubgroupRef(parent, (), (pident(parent.degree),), name="1")


def conjugate_test(group: SubgroupRef, h: SubgroupRef, k: SubgroupRef) -> Optional[Perm]:
    """First g in group with g h g^-1 = k, else None."""
    if h.parent is not k.parent or h.parent is not group.parent:
        raise GroupMismatch("conjugate_test across different ambient groups")
    if h.order != k.order:
        return None
    kset = k._set
    for g in group.elements:
        if all(pconj(g, x) in kset for x in h.generators):
            return g
    return None


def double_cosets(group: SubgroupRef, a: SubgroupRef, b: SubgroupRef) -> list[tuple[Perm, int]]:
    """Representatives and sizes of the double cosets of (a, b) in group.

    Reps are the minimal elements of their double coset, in element order.
    """
    covered: set[Perm] = set()
    out = []
    for g in group.elements:
        if g in covered:
            continue
        coset = set()
        for x in a.elements:
            xg = pcompose(x, g)
            for y in b.elements:
                coset.add(pcompose(xg, y))
        covered |= coset
        out.append((g, len(coset)))
    return out


def is_p_subgroup(h: SubgroupRef, p: int) -> bool:
    n = h.order
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def all_p_subgroups(group: SubgroupRef, p: int) -> dict[tuple[Perm, ...], SubgroupRef]:
    """Every p-subgroup of group, keyed by element tuple.

    Bottom-up: each p-subgroup of order p^(k+1) arises from an index-p
    subgroup it normalizes, so extension inside normalizers reaches all.
    """
    triv = subgroup_from_elements(group.parent, [group.identity], name="1")
    found: dict[tuple[Perm, ...], SubgroupRef] = {triv.elements: triv}
    frontier = [triv]
    while frontier:
        new: list[SubgroupRef] = []
        for h in frontier:
            norm = h.normalizer_in(group)
            for x in norm.elements:
                if x in h:
                    continue
                if ppow(x, p) not in h:
                    continue
                els: set[Perm] = set()
                xp = h.identity
                for _ in range(p):
                    for y in h.elements:
                        els.add(pcompose(xp, y))
                    xp = pcompose(x, xp)
                key = tuple(sorted(els))
                if key in found:
                    continue
                sub = SubgroupRef(group.parent, h.generators + (x,), key,
                                  name=f"<order {len(key)}>")
                found[key] = sub
                new.append(sub)
        frontier = new
    return found


def maximal_subgroups(p_group: SubgroupRef, p: int) -> list[SubgroupRef]:
    """Index-p subgroups of a p-group, in canonical order."""
    if not is_p_subgroup(p_group, p):
        raise NotPSubgroup(f"order {p_group.order} is no power of {p}")
    subs = all_p_subgroups(p_group, p)
    want = p_group.order // p
    return [s for key, s in sorted(subs.items()) if s.order == want]


@dataclass
class PSubgroupTable:
    """Conjugacy data for the p-subgroups of a fixed group.

    class_reps are sorted by (order, element tuple); leq[i, j] says whether
    some conjugate of rep i lies inside rep j.
    """

    group: SubgroupRef
    p: int
    class_reps: list[SubgroupRef]
    normalizers: list[SubgroupRef]
    sylow_index: int
    leq: np.ndarray
    witness: dict[tuple[Perm, ...], tuple[int, Perm]] = field(repr=False, default_factory=dict)
    all_subgroups: dict[tuple[Perm, ...], SubgroupRef] = field(repr=False, default_factory=dict)

    def rep_of(self, h: SubgroupRef) -> tuple[int, Perm]:
        """(class index, g) with g h g^-1 = class rep."""
        try:
            return self.witness[h.elements]
        except KeyError:
            raise NotPSubgroup(f"{h} is not a p-subgroup of {self.group}") from None

    def rep_id(self, i: int) -> str:
        return f"P{i}"

    @property
    def trivial_index(self) -> int:
        return 0

    @property
    def sylow(self) -> SubgroupRef:
        return self.class_reps[self.sylow_index]

    def __len__(self):
        return len(self.class_reps)


def p_subgroup_table(group: SubgroupRef, p: int,
                     config: EngineConfig = DEFAULT_CONFIG) -> PSubgroupTable:
    if group.order > config.group_order_cap:
        raise InvalidGroup(f"group order {group.order} exceeds cap")
    subs = all_p_subgroups(group, p)
    keys = sorted(subs.keys(), key=lambda k: (len(k), k))
    reps: list[SubgroupRef] = []
    witness: dict[tuple[Perm, ...], tuple[int, Perm]] = {}
    for key in keys:
        if key in witness:
            continue
        h = subs[key]
        idx = len(reps)
        reps.append(h)
        ident = group.identity
        for g in group.elements:
            ck = tuple(sorted(pconj(g, x) for x in h.elements))
            if ck not in witness:
                witness[ck] = (idx, pinv(g))
    normalizers = [r.normalizer_in(group) for r in reps]
    syl_order = p_part(group.order, p)
    syl = [i for i, r in enumerate(reps) if r.order == syl_order]
    if len(syl) != 1:
        raise InvalidGroup("expected exactly one Sylow class")
    n = len(reps)
    leq = np.zeros((n, n), dtype=bool)
    rep_sets = [r._set for r in reps]
    for i in range(n):
        for j in range(n):
            if reps[i].order > reps[j].order:
                continue
            leq[i, j] = any(
                all(pconj(g, x) in rep_sets[j] for x in reps[i].generators)
                for g in group.elements
            )
    return PSubgroupTable(
        group=group, p=p, class_reps=reps, normalizers=normalizers,
        sylow_index=syl[0], leq=leq, witness=witness, all_subgroups=subs,
    )


def quotient_realization(group: SubgroupRef, normal: SubgroupRef,
                         name: str = "Q") -> tuple[PermGroup, dict[Perm, Perm]]:
    """The quotient group/normal as a PermGroup on the coset space, plus the
    quotient map element -> coset permutation."""
    if not normal.is_subgroup_of(group):
        raise GroupMismatch("normal subgroup outside the group")
    for g in group.generators:
        for x in normal.generators:
            if pconj(g, x) not in normal:
                raise NotNormal(f"{normal.name} is not normal in {group.name}")
    cosets: list[frozenset] = []
    coset_of: dict[Perm, int] = {}
    for g in group.elements:
        if g in coset_of:
            continue
        cs = frozenset(pcompose(g, h) for h in normal.elements)
        idx = len(cosets)
        cosets.append(cs)
        for x in cs:
            coset_of[x] = idx
    deg = len(cosets)
    qmap: dict[Perm, Perm] = {}
    for g in group.elements:
        images = [0] * deg
        for i, cs in enumerate(cosets):
            rep = min(cs)
            images[i] = coset_of[pcompose(g, rep)]
        qmap[g] = tuple(images)
    quot = PermGroup([qmap[g] for g in group.generators], deg, name=name)
    return quot, qmap


@lru_cache(maxsize=None)
def named_group(name: str) -> PermGroup:
    """Catalog of standard groups by short name (c4, c2xc2, s3, d8, q8, sd16, a4)."""
    key = name.strip().lower()
    if "x" in key and all(part.startswith("c") for part in key.split("x")):
        parts = [int(part[1:]) for part in key.split("x")]
        gens = []
        offset = 0
        degree = sum(parts)
        for n in parts:
            cyc = list(range(offset, offset + n))
            gens.append(cycles_to_perm([cyc], degree))
            offset += n
        return PermGroup(gens, degree, name=key)
    if key.startswith("c") and key[1:].isdigit():
        n = int(key[1:])
        if n < 1:
            raise InvalidGroup(f"bad cyclic order in {name}")
        if n == 1:
            return PermGroup([], 1, name=key)
        return PermGroup([cycles_to_perm([list(range(n))], n)], n, name=key)
    if key.startswith("s") and key[1:].isdigit():
        n = int(key[1:])
        if n < 2:
            raise InvalidGroup(f"bad symmetric degree in {name}")
        return PermGroup(
            [cycles_to_perm([[0, 1]], n), cycles_to_perm([list(range(n))], n)],
            n, name=key)
    if key.startswith("d") and key[1:].isdigit():
        order = int(key[1:])
        if order % 2 or order < 4:
            raise InvalidGroup(f"dihedral name wants an even order: {name}")
        m = order // 2
        if m == 2:
            # the m-point reflection degenerates; use disjoint transpositions
            return PermGroup([(1, 0, 2, 3), (0, 1, 3, 2)], 4, name=key)
        r = cycles_to_perm([list(range(m))], m)
        s = tuple((m - i) % m for i in range(m))
        return PermGroup([r, s], m, name=key)
    if key == "q8":
        # regular action on 1, -1, i, -i, j, -j, k, -k
        left_i = (2, 3, 1, 0, 6, 7, 5, 4)
        left_j = (4, 5, 7, 6, 1, 0, 2, 3)
        return PermGroup([left_i, left_j], 8, name=key)
    if key == "sd16":
        r = cycles_to_perm([list(range(8))], 8)
        s = tuple((3 * i) % 8 for i in range(8))
        return PermGroup([r, s], 8, name=key)
    if key == "a4":
        return PermGroup(
            [cycles_to_perm([[0, 1], [2, 3]], 4), cycles_to_perm([[0, 1, 2]], 4)],
            4, name=key)
    raise InvalidGroup(f"unknown group name: {name}")
