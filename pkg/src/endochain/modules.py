"""Finitely generated kG-modules over GF(p) with explicit matrix actions.

A module stores one matrix per stored generator of its group; matrices for
arbitrary elements are produced on demand along the group's breadth-first
spanning tree (one multiplication per element, cached).  Functor constructors
(dual, tensor, restriction, induction, conjugation, inflation, Brauer) build
valid representations by construction and skip the homomorphism re-check.

Basis conventions are frozen: tensor bases are ordered left-factor-major
(matching np.kron), induced bases coset-major with the deterministic minimal
transversal, and all subquotients carry explicit section/projection data so
that homs transport functorially.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import (
    CapExceeded,
    FieldMismatch,
    GroupMismatch,
    Indeterminate,
    InvalidCharacter,
    InvalidRepresentation,
    NotOneDimensional,
    NotPSubgroup,
    ShapeMismatch,
)
from .groups import (
    Perm,
    SubgroupRef,
    is_p_subgroup,
    maximal_subgroups,
    pcompose,
    pident,
    pinv,
    psign,
)
from .linalg import (
    FpMatrix,
    eye,
    kernel_of_stack,
    mulmod,
    rref_pack,
    solve,
    zeros,
)

_HOMSPACE_CACHE: dict = {}


class KGModule:
    """A kG-module given by matrices for the generators of its group."""

    def __init__(self, group: SubgroupRef, p: int, gen_mats: Sequence[FpMatrix],
                 dim: Optional[int] = None, label: str = "M",
                 validate: bool = True,
                 parts: Optional[tuple] = None,
                 trivial_source_hint: Optional[bool] = None):
        self.group = group
        self.p = p
        self.gen_mats = tuple(gen_mats)
        # True only when the construction guarantees trivial source (coset
        # modules and their closure under tensor, sum, dual, restriction,
        # induction, inflation, Brauer quotients); never computed here
        self.trivial_source_hint = trivial_source_hint
        if len(self.gen_mats) != len(group.generators):
            raise InvalidRepresentation(
                f"{len(self.gen_mats)} matrices for {len(group.generators)} generators")
        if dim is None:
            if not self.gen_mats:
                raise InvalidRepresentation("dimension required for a group with no generators")
            dim = self.gen_mats[0].rows
        self.dim = dim
        self.label = label
        # summand provenance: tuple of (module, embedding, projection)
        self.parts = parts
        for m in self.gen_mats:
            if m.p != p:
                raise FieldMismatch(f"matrix over GF({m.p}) in a GF({p}) module")
            if m.shape != (dim, dim):
                raise ShapeMismatch(f"action matrix {m.shape} for dimension {dim}")
        self._elmat: dict[Perm, FpMatrix] = {group.identity: eye(dim, p)}
        self._struct_key = None
        if validate:
            self._validate()

    def _validate(self) -> None:
        """Check the generator matrices extend to a group homomorphism.

        A(s g) = A(s) A(g) for every element g and stored generator s is
        equivalent to the full multiplication-table identity by induction
        along words.
        """
        for g in self.group.elements:
            ag = self.matrix_of(g)
            for i, s in enumerate(self.group.generators):
                sg = pcompose(s, g)
                if self.matrix_of(sg) != self.gen_mats[i] @ ag:
                    raise InvalidRepresentation(
                        f"generator matrices are inconsistent at {s} * {g}")

    def matrix_of(self, g: Perm) -> FpMatrix:
        cache = self._elmat
        hit = cache.get(g)
        if hit is not None:
            return hit
        tree = self.group.bfs_tree()
        if g not in tree:
            raise GroupMismatch(f"element outside {self.group.name}")
        path = []
        cur = g
        while cur not in cache:
            link = tree[cur]
            assert link is not None
            path.append((cur, link))
            cur = link[0]
        for elem, (par, gi) in reversed(path):
            cache[elem] = self.gen_mats[gi] @ cache[par]
        return cache[g]

    def struct_key(self) -> tuple:
        if self._struct_key is None:
            self._struct_key = (
                self.group.key(), self.p, self.dim,
                tuple(m.a.tobytes() for m in self.gen_mats),
            )
        return self._struct_key

    def relabel(self, label: str) -> "KGModule":
        out = KGModule.__new__(KGModule)
        out.__dict__.update(self.__dict__)
        out.label = label
        return out

    def __repr__(self):
        return f"KGModule({self.label}, dim {self.dim}, GF({self.p}), {self.group.name})"


@dataclass(frozen=True)
class ModuleHom:
    """kG-linear map; the matrix sends source coordinates to target ones."""

    source: KGModule
    target: KGModule
    mat: FpMatrix

    def __post_init__(self):
        if self.source.group != self.target.group:
            raise GroupMismatch("hom between modules of different groups")
        if self.source.p != self.target.p:
            raise FieldMismatch("hom between modules over different fields")
        if self.mat.shape != (self.target.dim, self.source.dim):
            raise ShapeMismatch(
                f"hom matrix {self.mat.shape} for {self.source.dim} -> {self.target.dim}")
        for s in self.source.group.generators:
            if self.mat @ self.source.matrix_of(s) != self.target.matrix_of(s) @ self.mat:
                raise InvalidRepresentation("matrix is not equivariant")

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        if other.target is not self.source and other.target.struct_key() != self.source.struct_key():
            raise ShapeMismatch("composition of non-composable homs")
        return ModuleHom(other.source, self.target, self.mat @ other.mat)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.mat + other.mat)

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.mat - other.mat)

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.mat.rank() == self.source.dim


def zero_hom(source: KGModule, target: KGModule) -> ModuleHom:
    return ModuleHom(source, target, zeros(target.dim, source.dim, source.p))


def identity_hom(m: KGModule) -> ModuleHom:
    return ModuleHom(m, m, eye(m.dim, m.p))


# ---------------------------------------------------------------------------
# constructors


def trivial_module(group: SubgroupRef, p: int) -> KGModule:
    mats = [eye(1, p) for _ in group.generators]
    return KGModule(group, p, mats, dim=1, label="k", validate=False,
                    trivial_source_hint=True)


def zero_module(group: SubgroupRef, p: int) -> KGModule:
    mats = [zeros(0, 0, p) for _ in group.generators]
    return KGModule(group, p, mats, dim=0, label="0", validate=False,
                    trivial_source_hint=True)


def regular_module(group: SubgroupRef, p: int) -> KGModule:
    """k[group] on the basis of group elements in canonical order."""
    els = group.elements
    idx = {g: i for i, g in enumerate(els)}
    mats = []
    for s in group.generators:
        m = np.zeros((len(els), len(els)), dtype=np.int64)
        for j, h in enumerate(els):
            m[idx[pcompose(s, h)], j] = 1
        mats.append(FpMatrix(p, m))
    return KGModule(group, p, mats, dim=len(els), label=f"k[{group.name}]",
                    validate=False, trivial_source_hint=True)


def perm_module_on_cosets(group: SubgroupRef, sub: SubgroupRef, p: int) -> KGModule:
    """k[group/sub] on the canonical left transversal."""
    reps = group.left_transversal(sub)
    coset_of: dict[Perm, int] = {}
    for i, t in enumerate(reps):
        for h in sub.elements:
            coset_of[pcompose(t, h)] = i
    n = len(reps)
    mats = []
    for s in group.generators:
        m = np.zeros((n, n), dtype=np.int64)
        for j, t in enumerate(reps):
            m[coset_of[pcompose(s, t)], j] = 1
        mats.append(FpMatrix(p, m))
    return KGModule(group, p, mats, dim=n,
                    label=f"k[{group.name}/{sub.name}]", validate=False,
                    trivial_source_hint=True)


def from_matrices(group: SubgroupRef, p: int, mats: Sequence[FpMatrix],
                  dim: Optional[int] = None, label: str = "M") -> KGModule:
    return KGModule(group, p, mats, dim=dim, label=label, validate=True)


@dataclass(frozen=True)
class Character:
    """A 1-dimensional character: one unit scalar per stored generator."""

    group: SubgroupRef
    p: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.group.generators):
            raise InvalidCharacter("one value per generator required")
        for v in self.values:
            if v % self.p == 0:
                raise InvalidCharacter("character values must be units")
        table = self.value_table()
        for g, vg in table.items():
            for i, s in enumerate(self.group.generators):
                if table[pcompose(s, g)] != (self.values[i] * vg) % self.p:
                    raise InvalidCharacter("values do not extend multiplicatively")

    def value_table(self) -> dict[Perm, int]:
        tree = self.group.bfs_tree()
        table: dict[Perm, int] = {self.group.identity: 1}
        for g in self.group.bfs_order():
            if g in table:
                continue
            par, gi = tree[g]
            table[g] = (self.values[gi] * table[par]) % self.p
        return table

    def value(self, g: Perm) -> int:
        return self.value_table()[g]

    def is_trivial(self) -> bool:
        return all(v % self.p == 1 for v in self.values)

    def mul(self, other: "Character") -> "Character":
        if self.group != other.group:
            raise GroupMismatch("characters of different groups")
        return Character(self.group, self.p,
                         tuple((a * b) % self.p for a, b in zip(self.values, other.values)))

    def module(self) -> KGModule:
        mats = [FpMatrix(self.p, np.array([[v]])) for v in self.values]
        tag = "k" if self.is_trivial() else f"k_chi{list(self.values)}"
        return KGModule(self.group, self.p, mats, dim=1, label=tag, validate=False)


def trivial_character(group: SubgroupRef, p: int) -> Character:
    return Character(group, p, tuple(1 for _ in group.generators))


def sign_character(group: SubgroupRef, p: int) -> Character:
    if p == 2:
        return trivial_character(group, p)
    return Character(group, p, tuple(psign(g) % p for g in group.generators))


def enumerate_characters(group: SubgroupRef, p: int) -> list[Character]:
    """All homomorphisms group -> GF(p)^x, brute force over generator values."""
    units = [u for u in range(1, p)]
    out = []
    for combo in itertools.product(units, repeat=len(group.generators)):
        try:
            out.append(Character(group, p, combo))
        except InvalidCharacter:
            continue
    return out


def character1d(m: KGModule) -> Character:
    if m.dim != 1:
        raise NotOneDimensional(f"dimension {m.dim}")
    return Character(m.group, m.p, tuple(int(mat.a[0, 0]) for mat in m.gen_mats))


# ---------------------------------------------------------------------------
# functors


def dual_module(m: KGModule) -> KGModule:
    mats = [m.matrix_of(pinv(s)).T for s in m.group.generators]
    return KGModule(m.group, m.p, mats, dim=m.dim,
                    label=f"dual({m.label})", validate=False,
                    trivial_source_hint=m.trivial_source_hint)


def tensor_module(a: KGModule, b: KGModule) -> KGModule:
    if a.group != b.group:
        raise GroupMismatch("tensor of modules over different groups")
    if a.p != b.p:
        raise FieldMismatch("tensor over different fields")
    mats = [a.matrix_of(s).kron(b.matrix_of(s)) for s in a.group.generators]
    hint = True if (a.trivial_source_hint and b.trivial_source_hint) else None
    return KGModule(a.group, a.p, mats, dim=a.dim * b.dim,
                    label=f"tensor({a.label},{b.label})", validate=False,
                    trivial_source_hint=hint)


def hom_module(a: KGModule, b: KGModule) -> KGModule:
    return tensor_module(dual_module(a), b).relabel(f"hom({a.label},{b.label})")


def dsum_modules(mods: Sequence[KGModule], label: Optional[str] = None) -> KGModule:
    if not mods:
        raise ShapeMismatch("empty direct sum needs an explicit group; use zero_module")
    group, p = mods[0].group, mods[0].p
    for m in mods:
        if m.group != group:
            raise GroupMismatch("direct sum across groups")
        if m.p != p:
            raise FieldMismatch("direct sum across fields")
    total = sum(m.dim for m in mods)
    gen_mats = []
    for s in group.generators:
        big = np.zeros((total, total), dtype=np.int64)
        off = 0
        for m in mods:
            big[off:off + m.dim, off:off + m.dim] = m.matrix_of(s).a
            off += m.dim
        gen_mats.append(FpMatrix(p, big))
    hint = True if all(m.trivial_source_hint for m in mods) else None
    out = KGModule(group, p, gen_mats, dim=total,
                   label=label or ("dsum(" + ",".join(m.label for m in mods) + ")"),
                   validate=False, trivial_source_hint=hint)
    parts = []
    off = 0
    for m in mods:
        emb = np.zeros((total, m.dim), dtype=np.int64)
        emb[off:off + m.dim] = np.eye(m.dim, dtype=np.int64)
        proj = emb.T.copy()
        parts.append((m, FpMatrix(p, emb), FpMatrix(p, proj)))
        off += m.dim
    out.parts = tuple(parts)
    return out


def restrict_module(m: KGModule, sub: SubgroupRef) -> KGModule:
    if not sub.is_subgroup_of(m.group):
        raise GroupMismatch(f"{sub.name} is not inside {m.group.name}")
    mats = [m.matrix_of(s) for s in sub.generators]
    return KGModule(sub, m.p, mats, dim=m.dim,
                    label=f"res[{sub.name}]({m.label})", validate=False,
                    trivial_source_hint=m.trivial_source_hint)


def conjugate_module(m: KGModule, g: Perm) -> KGModule:
    """The g-conjugate module over g (m.group) g^-1; action of g h g^-1 is
    the action of h."""
    newgroup = m.group.conjugate(g)
    return KGModule(newgroup, m.p, m.gen_mats, dim=m.dim,
                    label=f"conj({m.label})", validate=False,
                    trivial_source_hint=m.trivial_source_hint)


def induce_module(m: KGModule, big: SubgroupRef) -> KGModule:
    """Ind from m.group up to big, basis coset-major over the canonical
    transversal."""
    small = m.group
    if not small.is_subgroup_of(big):
        raise GroupMismatch(f"{small.name} is not inside {big.name}")
    reps = big.left_transversal(small)
    coset_of: dict[Perm, int] = {}
    for i, t in enumerate(reps):
        for h in small.elements:
            coset_of[pcompose(t, h)] = i
    n = len(reps)
    d = m.dim
    mats = []
    for s in big.generators:
        bigmat = np.zeros((n * d, n * d), dtype=np.int64)
        for a, t in enumerate(reps):
            x = pcompose(s, t)
            b = coset_of[x]
            h = pcompose(pinv(reps[b]), x)
            bigmat[b * d:(b + 1) * d, a * d:(a + 1) * d] = m.matrix_of(h).a
        mats.append(FpMatrix(m.p, bigmat))
    return KGModule(big, m.p, mats, dim=n * d,
                    label=f"ind[{big.name}]({m.label})", validate=False,
                    trivial_source_hint=m.trivial_source_hint)


def induce_hom(f: ModuleHom, big: SubgroupRef) -> ModuleHom:
    """Ind is blockwise on homs over the shared transversal."""
    src = induce_module(f.source, big)
    tgt = induce_module(f.target, big)
    n = src.dim // f.source.dim
    mat = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    ds, dt = f.source.dim, f.target.dim
    for a in range(n):
        mat[a * dt:(a + 1) * dt, a * ds:(a + 1) * ds] = f.mat.a
    return ModuleHom(src, tgt, FpMatrix(f.source.p, mat))


def inflate_module(m: KGModule, group: SubgroupRef,
                   qmap: dict[Perm, Perm]) -> KGModule:
    """Inflate along a quotient map; m lives over the quotient realized as a
    PermGroup (m.group must be its top)."""
    mats = [m.matrix_of(qmap[s]) for s in group.generators]
    return KGModule(group, m.p, mats, dim=m.dim,
                    label=f"inf({m.label})", validate=False,
                    trivial_source_hint=m.trivial_source_hint)


# ---------------------------------------------------------------------------
# submodules, quotients, subquotients


def sub_module(m: KGModule, basis: FpMatrix, label: str = "sub") -> tuple[KGModule, ModuleHom]:
    """The submodule spanned by the (independent) columns of basis, with its
    inclusion.  The span must be stable under the group action."""
    mats = []
    for i in range(len(m.group.generators)):
        moved = m.gen_mats[i] @ basis
        sol = solve(basis, moved)
        if sol is None or sol[1] != 0:
            raise InvalidRepresentation("span is not stable (or basis is dependent)")
        mats.append(sol[0])
    sub = KGModule(m.group, m.p, mats, dim=basis.cols, label=label, validate=False)
    return sub, ModuleHom(sub, m, basis)


@dataclass
class Subquotient:
    """U/W inside an ambient module, with coordinates.

    module is the subquotient as its own KGModule; u_basis embeds U in the
    ambient module; pi and iota map U-coordinates onto quotient coordinates
    and back (pi @ iota = identity).
    """

    module: KGModule
    ambient: KGModule
    u_basis: FpMatrix
    pi: FpMatrix
    iota: FpMatrix

    def represent(self) -> FpMatrix:
        """Ambient vectors (columns) representing the subquotient basis."""
        return self.u_basis @ self.iota

    def transport(self, f: ModuleHom, other: "Subquotient") -> FpMatrix:
        """Matrix of the induced map self.module -> other.module for an f on
        the ambient modules that preserves the U's and W's."""
        sol = solve(other.u_basis, f.mat @ self.u_basis)
        if sol is None:
            raise InvalidRepresentation("map does not preserve the subspace")
        return other.pi @ sol[0] @ self.iota


def subquotient(m: KGModule, u_basis: FpMatrix, w_basis: FpMatrix,
                acting: Optional[SubgroupRef] = None,
                label: str = "subq") -> Subquotient:
    """U/W as a module over `acting` (default: the full group of m).

    u_basis columns span U (independent), w_basis columns span a subspace W
    of U; both must be stable under the acting subgroup.
    """
    p = m.p
    acting = acting or m.group
    if not acting.is_subgroup_of(m.group):
        raise GroupMismatch("acting subgroup outside the module's group")
    u = u_basis.cols
    sol = solve(u_basis, w_basis)
    if sol is None:
        raise InvalidRepresentation("W is not inside U")
    y = sol[0]
    rr = rref_pack(y)
    r = rr.rank
    s_basis = rr.image  # u x r, independent columns spanning W in U-coords
    ext = rref_pack(FpMatrix(p, np.hstack([s_basis.a, np.eye(u, dtype=np.int64)])))
    pivots = list(ext.pivot_cols)
    assert pivots[:r] == list(range(r)), "image basis columns must lead"
    extra = [c - r for c in pivots[r:]]
    b = np.hstack([s_basis.a, np.eye(u, dtype=np.int64)[:, extra]])
    bmat = FpMatrix(p, b)
    binv = bmat.inv()
    q = u - r
    pi = FpMatrix(p, binv.a[r:, :])
    iota = FpMatrix(p, bmat.a[:, r:])
    gen_mats = []
    for g in acting.generators:
        moved = m.matrix_of(g) @ u_basis
        xs = solve(u_basis, moved)
        if xs is None:
            raise InvalidRepresentation("U is not stable under the acting subgroup")
        x = xs[0]
        if r and not (pi @ x @ s_basis).is_zero():
            raise InvalidRepresentation("W is not stable under the acting subgroup")
        gen_mats.append(pi @ x @ iota)
    mod = KGModule(acting, p, gen_mats, dim=q, label=label, validate=False)
    return Subquotient(module=mod, ambient=m, u_basis=u_basis, pi=pi, iota=iota)


def kernel_module(f: ModuleHom, label: Optional[str] = None) -> tuple[KGModule, ModuleHom]:
    ker = rref_pack(f.mat).kernel
    return sub_module(f.source, ker, label=label or f"ker({f.source.label})")


def image_module(f: ModuleHom, label: Optional[str] = None) -> tuple[KGModule, ModuleHom]:
    img = rref_pack(f.mat).image
    return sub_module(f.target, img, label=label or f"im({f.source.label})")


def cokernel(f: ModuleHom, label: Optional[str] = None) -> Subquotient:
    img = rref_pack(f.mat).image
    full = eye(f.target.dim, f.target.p)
    return subquotient(f.target, full, img, label=label or f"coker({f.target.label})")


# ---------------------------------------------------------------------------
# Brauer construction


@dataclass
class BrauerData:
    """M(P) = M^P / sum of relative traces from maximal subgroups of P,
    as a module over the normalizer of P inside M's group."""

    module: KGModule
    source: KGModule
    psub: SubgroupRef
    normalizer: SubgroupRef
    subq: Subquotient

    def transport(self, f: ModuleHom, other: "BrauerData") -> FpMatrix:
        """Induced matrix M(P) -> M'(P) of an equivariant f: M -> M'."""
        return self.subq.transport(f, other.subq)


def fixed_point_basis(m: KGModule, sub: SubgroupRef) -> FpMatrix:
    if not sub.is_subgroup_of(m.group):
        raise GroupMismatch("fixed points of an outside subgroup")
    if not sub.generators:
        return eye(m.dim, m.p)
    mats = [m.matrix_of(s) - eye(m.dim, m.p) for s in sub.generators]
    return kernel_of_stack(mats)


def relative_trace_matrix(m: KGModule, big: SubgroupRef, small: SubgroupRef) -> FpMatrix:
    """Sum of the action of a left transversal of big/small."""
    total = np.zeros((m.dim, m.dim), dtype=np.int64)
    for t in big.left_transversal(small):
        total = (total + m.matrix_of(t).a) % m.p
    return FpMatrix(m.p, total)


def brauer(m: KGModule, psub: SubgroupRef, p: Optional[int] = None) -> BrauerData:
    prime = p or m.p
    if not is_p_subgroup(psub, prime):
        raise NotPSubgroup(f"order {psub.order} is no power of {prime}")
    if not psub.is_subgroup_of(m.group):
        raise GroupMismatch(f"{psub.name} is not inside {m.group.name}")
    norm = psub.normalizer_in(m.group)
    fixed = fixed_point_basis(m, psub)
    traces = []
    for q in maximal_subgroups(psub, prime):
        tr = relative_trace_matrix(m, psub, q)
        fq = fixed_point_basis(m, q)
        traces.append((tr @ fq).a)
    if traces:
        stacked = FpMatrix(m.p, np.hstack(traces))
        w_basis = rref_pack(stacked).image
    else:
        w_basis = zeros(m.dim, 0, m.p)
    sq = subquotient(m, fixed, w_basis, acting=norm,
                     label=f"br({m.label},{psub.name})")
    for g in psub.generators:
        # P must act trivially on the quotient
        moved = m.matrix_of(g) @ fixed
        x = solve(fixed, moved)
        assert x is not None
        if not (sq.pi @ x[0] @ sq.iota).is_identity():
            raise InvalidRepresentation("P does not act trivially on the Brauer quotient")
    if m.trivial_source_hint:
        sq.module.trivial_source_hint = True
    return BrauerData(module=sq.module, source=m, psub=psub, normalizer=norm, subq=sq)


# ---------------------------------------------------------------------------
# Hom spaces and isomorphism testing


def hom_space(src: KGModule, tgt: KGModule,
              config: EngineConfig = DEFAULT_CONFIG) -> list[FpMatrix]:
    """Basis of the space of equivariant maps src -> tgt.

    Solved generator by generator: the first intertwining constraint is
    eliminated directly, later ones are imposed on the surviving basis, which
    keeps the big elimination to a single D x D pass (D = dim * dim).
    """
    if src.group != tgt.group:
        raise GroupMismatch("hom space across groups")
    if src.p != tgt.p:
        raise FieldMismatch("hom space across fields")
    p = src.p
    ns, nt = src.dim, tgt.dim
    bigd = ns * nt
    # cap before cache: the chosen route must not depend on what was
    # computed earlier in the process
    if bigd > config.end_ring_unknown_cap:
        raise CapExceeded(f"hom space with {bigd} unknowns exceeds cap")
    key = ("hom", src.struct_key(), tgt.struct_key())
    hit = _HOMSPACE_CACHE.get(key)
    if hit is not None:
        return hit
    if bigd == 0:
        _HOMSPACE_CACHE[key] = []
        return []
    basis: Optional[np.ndarray] = None  # (bigd, d) columns
    for s in src.group.generators:
        a = src.matrix_of(s).a
        b = tgt.matrix_of(s).a
        if basis is None:
            cons = np.kron(np.eye(nt, dtype=np.int64), a.T) - np.kron(b, np.eye(ns, dtype=np.int64))
            basis = rref_pack(FpMatrix(p, cons)).kernel.a
        else:
            d = basis.shape[1]
            if d == 0:
                break
            stack = basis.T.reshape(d, nt, ns)
            resid = (np.matmul(stack, a) - np.matmul(b, stack)) % p
            rmat = FpMatrix(p, resid.reshape(d, bigd).T)
            coeffs = rref_pack(rmat).kernel
            basis = mulmod(basis, coeffs.a, p)
    if basis is None:
        basis = np.eye(bigd, dtype=np.int64)
    out = [FpMatrix(p, basis[:, j].reshape(nt, ns)) for j in range(basis.shape[1])]
    _HOMSPACE_CACHE[key] = out
    return out


def _quick_nziso_filter(a: KGModule, b: KGModule) -> bool:
    """Cheap necessary conditions for isomorphism."""
    if a.dim != b.dim:
        return False
    ide = eye(a.dim, a.p)
    for s in a.group.generators:
        if (a.matrix_of(s) - ide).rank() != (b.matrix_of(s) - ide).rank():
            return False
    return True


def _search_invertible(homs: list[FpMatrix], p: int, n: int,
                       config: EngineConfig) -> Optional[FpMatrix]:
    """Invertible combination of the given matrices, or None when the search
    is exhaustive and finds nothing; raises Indeterminate when sampling runs
    out without exhausting."""
    from .linalg import batch_invertible

    d = len(homs)
    stack = np.stack([h.a for h in homs])
    for h in homs:
        if h.rank() == n:
            return h
    rng = np.random.default_rng(config.seed + 0x15A)
    budget = config.iso_sample_budget
    chunk = 128
    tried = 0
    while tried < budget:
        take = min(chunk, budget - tried)
        coeffs = rng.integers(0, p, size=(take, d), dtype=np.int64)
        mats = np.tensordot(coeffs, stack, axes=(1, 0)) % p
        flags = batch_invertible(mats, p)
        idx = np.nonzero(flags)[0]
        if idx.size:
            return FpMatrix(p, mats[idx[0]])
        tried += take
    if p ** d <= config.iso_exhaust_cap:
        total = p ** d
        gen = itertools.product(range(p), repeat=d)
        done = 0
        while done < total:
            block = list(itertools.islice(gen, 4096))
            if not block:
                break
            coeffs = np.array(block, dtype=np.int64)
            done += len(block)
            mats = np.tensordot(coeffs, stack, axes=(1, 0)) % p
            flags = batch_invertible(mats, p)
            idx = np.nonzero(flags)[0]
            if idx.size:
                return FpMatrix(p, mats[idx[0]])
        return None
    raise Indeterminate(
        f"no invertible hom found in {budget} samples; space of GF({p})-dim {d} too large to exhaust")


def iso_test(a: KGModule, b: KGModule,
             config: EngineConfig = DEFAULT_CONFIG) -> Optional[FpMatrix]:
    """An isomorphism a -> b as a matrix, or None when provably none exists.

    Raises Indeterminate when sampling fails but the Hom space is too large
    to exhaust; never claims non-isomorphism from failed sampling.
    """
    if a.group != b.group:
        raise GroupMismatch("iso test across groups")
    if a.p != b.p:
        raise FieldMismatch("iso test across fields")
    if a.dim != b.dim:
        return None
    if a.dim == 0:
        return zeros(0, 0, a.p)
    if not _quick_nziso_filter(a, b):
        return None
    homs = hom_space(a, b, config)
    if not homs:
        return None
    return _search_invertible(homs, a.p, a.dim, config)
