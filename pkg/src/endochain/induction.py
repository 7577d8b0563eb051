"""Induction, Mackey-Brauer assembly, stability under fusion, and the
Green correspondence for complexes.

The Brauer quotient of an induced trivial-source module assembles from
double cosets: only those x with the p-subgroup inside the conjugated
inducing subgroup contribute, each through the Brauer quotient of the
conjugate module, induced up to the normalizer.  verify_mackey_brauer
computes both sides independently and demands an isomorphism witness.

A complex over a subgroup is stable under the ambient group when its
local homology data cannot tell apart classes that fuse: whenever two
p-subgroup classes of the small group become conjugate in the big one,
their Brauer chain homology profiles must match.

The Green correspondence sends an indecomposable complex with Sylow
vertex to the unique summand with the same vertex on the other side of
restriction or induction, provided the intermediate subgroup contains the
normalizer of the vertex."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .complexes import (
    ChainComplex,
    brauer_chain,
    chain_decompose,
    homology,
    homology_dims,
    restrict_complex,
)
from .config import DEFAULT_CONFIG, EngineConfig
from .endotrivial import EndoVerdict, _term_is_trivial_source
from .errors import (
    EngineError,
    GroupMismatch,
    Indeterminate,
    NotIndecomposable,
    NotPPermutation,
    VertexNotSylow,
)
from .groups import (
    Perm,
    PSubgroupTable,
    SubgroupRef,
    double_cosets,
    p_subgroup_table,
    pconj,
    pinv,
)
from .modules import (
    KGModule,
    ModuleHom,
    brauer,
    character1d,
    conjugate_module,
    dsum_modules,
    induce_hom,
    induce_module,
    iso_test,
    zero_module,
)
from .relproj import chain_vertex


@dataclass
class MackeyBrauerDecomposition:
    """Right-hand side of the Mackey-Brauer formula: one term per double
    coset whose representative conjugates the inducing subgroup over the
    p-subgroup; terms live over the normalizer of the p-subgroup."""

    psub: SubgroupRef
    subgroup: SubgroupRef
    module: KGModule
    terms: tuple[tuple[Perm, KGModule], ...]
    assembled: KGModule


def mackey_brauer_rhs(m: KGModule, big: SubgroupRef, psub: SubgroupRef,
                      config: EngineConfig = DEFAULT_CONFIG) -> MackeyBrauerDecomposition:
    """Assemble the double coset decomposition of the Brauer quotient of
    the induced module, without ever inducing first."""
    small = m.group
    if not small.is_subgroup_of(big):
        raise GroupMismatch(f"{small.name} is not inside {big.name}")
    if not psub.is_subgroup_of(big):
        raise GroupMismatch(f"{psub.name} is not inside {big.name}")
    table = p_subgroup_table(small, m.p, config)
    if not _term_is_trivial_source(m, table, config):
        raise NotPPermutation(
            "the Mackey-Brauer formula needs a trivial-source module")
    norm = psub.normalizer_in(big)

    def contributes(x: Perm) -> bool:
        xi = pinv(x)
        return all(pconj(xi, s) in small for s in psub.generators)

    terms = []
    for x, _size in double_cosets(big, norm, small):
        if not contributes(x):
            continue
        mx = conjugate_module(m, x)
        local = brauer(mx, psub).module
        terms.append((x, induce_module(local, norm)))
    if terms:
        assembled = dsum_modules([t[1] for t in terms])
    else:
        assembled = zero_module(norm, m.p)
    return MackeyBrauerDecomposition(psub, small, m, tuple(terms), assembled)


def verify_mackey_brauer(m: KGModule, big: SubgroupRef, psub: SubgroupRef,
                         config: EngineConfig = DEFAULT_CONFIG) -> EndoVerdict:
    """Both sides of the formula with an isomorphism witness between them."""
    rhs = mackey_brauer_rhs(m, big, psub, config)
    lhs = brauer(induce_module(m, big), psub).module
    if lhs.dim == rhs.assembled.dim == 0:
        ok = True
    else:
        ok = iso_test(lhs, rhs.assembled, config) is not None
    cert = {
        "group": big.name,
        "subgroup": rhs.subgroup.name,
        "module_dim": m.dim,
        "lhs_dim": lhs.dim,
        "rhs_dim": rhs.assembled.dim,
        "double_cosets": len(rhs.terms),
        "iso": ok,
    }
    return EndoVerdict("mackey_brauer", ok, cert)


def g_stable(c: ChainComplex, big: SubgroupRef,
             config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """Whether the local homology of c is constant on classes of its group
    that fuse in the ambient group.

    Profiles (degree to dimension) are compared outright.  When a needed
    comparison involves one-dimensional homology with a nontrivial
    normalizer character the verdict would depend on transporting that
    character along the fusing element, which is not implemented; that
    case raises instead of guessing.  It cannot arise at p = 2, where the
    unit group is trivial."""
    small = c.group
    if not small.is_subgroup_of(big):
        raise GroupMismatch(f"{small.name} is not inside {big.name}")
    table = p_subgroup_table(small, c.p, config)
    big_table = p_subgroup_table(big, c.p, config)
    buckets: dict[int, list[tuple[int, dict[int, int], ChainComplex]]] = {}
    for i, rep in enumerate(table.class_reps):
        chain = brauer_chain(c, rep).complex
        gi = big_table.rep_of(rep)[0]
        buckets.setdefault(gi, []).append((i, homology_dims(chain), chain))
    for members in buckets.values():
        if len(members) < 2:
            continue
        base = members[0][1]
        for _, prof, _ in members[1:]:
            if prof != base:
                return False
        if c.p > 2:
            for _, prof, chain in members:
                for deg, dim in prof.items():
                    if dim == 1 and not character1d(
                            homology(chain, deg).module).is_trivial():
                        raise Indeterminate(
                            "fused classes carry a nontrivial local "
                            "character; transport is not implemented")
    return True


def induce_chain(c: ChainComplex, big: SubgroupRef) -> ChainComplex:
    """Degreewise induction; differentials are induced blockwise over the
    shared transversal."""
    terms = {n: induce_module(c.term(n), big) for n in c.support()}
    diffs: dict[int, ModuleHom] = {}
    for n, d in c.diffs.items():
        diffs[n] = induce_hom(d, big)
    return ChainComplex(big, c.p, terms, diffs,
                        label=f"ind[{big.name}]({c.label})")


def _vertex_checked(c: ChainComplex, table: PSubgroupTable,
                    config: EngineConfig) -> int:
    pieces = chain_decompose(c, config)
    if len(pieces) != 1:
        raise NotIndecomposable(
            f"{c.label} splits into {len(pieces)} chain summands")
    vi = chain_vertex(c, table, config)
    if vi != table.sylow_index:
        raise VertexNotSylow(
            f"vertex class {table.rep_id(vi)} of {c.label} is not the "
            "Sylow class")
    return vi


def green(c: ChainComplex, direction: str, other: SubgroupRef,
          config: EngineConfig = DEFAULT_CONFIG) -> ChainComplex:
    """Green correspondent of an indecomposable Sylow-vertex complex.

    direction "down" restricts from its group to the subgroup `other`,
    "up" induces from its group to the overgroup `other`; either way the
    intermediate subgroup must contain the normalizer of the vertex, and
    the unique summand with the same vertex on the far side is returned."""
    if direction == "down":
        big_group, small_group = c.group, other
        if not small_group.is_subgroup_of(big_group):
            raise GroupMismatch("restriction target is not a subgroup")
        table = p_subgroup_table(big_group, c.p, config)
        vi = _vertex_checked(c, table, config)
        vertex = table.class_reps[vi]
        if not table.normalizers[vi].is_subgroup_of(small_group):
            raise EngineError(
                "the subgroup must contain the normalizer of the vertex")
        moved = restrict_complex(c, small_group)
        far_table = p_subgroup_table(small_group, c.p, config)
    elif direction == "up":
        small_group, big_group = c.group, other
        if not small_group.is_subgroup_of(big_group):
            raise GroupMismatch("induction target is not an overgroup")
        table = p_subgroup_table(small_group, c.p, config)
        vi = _vertex_checked(c, table, config)
        vertex = table.class_reps[vi]
        if not vertex.normalizer_in(big_group).is_subgroup_of(small_group):
            raise EngineError(
                "the subgroup must contain the normalizer of the vertex")
        moved = induce_chain(c, big_group)
        far_table = p_subgroup_table(big_group, c.p, config)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    target = far_table.rep_of(vertex)[0]
    hits = [piece for piece in chain_decompose(moved, config)
            if chain_vertex(piece, far_table, config) == target]
    if len(hits) != 1:
        raise EngineError(
            f"{len(hits)} summands carry the vertex; the correspondent "
            "must be unique")
    return hits[0]
