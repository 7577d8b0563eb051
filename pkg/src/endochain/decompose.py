"""Direct-sum decomposition of modules, vertices, and source data.

Decomposition is recursive Fitting splitting: a nontrivial idempotent of the
endomorphism ring cuts the module in two, and leaves are certified
indecomposable through the locality certificate of their endomorphism rings.
Direct-sum provenance (modules built by dsum_modules) is recursed blockwise
first, which keeps endomorphism solves at the size of single blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import find_splitting_idempotent, in_span
from .config import DEFAULT_CONFIG, EngineConfig
from .errors import DecompositionError, NotPSubgroup
from .groups import PSubgroupTable, SubgroupRef, p_subgroup_table, pinv, trivial_subgroup
from .linalg import FpMatrix, col_stack, eye, rref_pack, zeros
from .modules import (
    KGModule,
    ModuleHom,
    hom_space,
    identity_hom,
    iso_test,
    perm_module_on_cosets,
    restrict_module,
)


@dataclass
class Summand:
    module: KGModule
    include: ModuleHom
    project: ModuleHom


@dataclass
class DecompositionReport:
    original: KGModule
    summands: tuple[Summand, ...]
    classes: tuple[tuple[int, ...], ...]

    def multiplicities(self) -> list[tuple[KGModule, int]]:
        return [(self.summands[c[0]].module, len(c)) for c in self.classes]

    def check_resolution_of_identity(self) -> bool:
        n = self.original.dim
        total = zeros(n, n, self.original.p)
        for s in self.summands:
            total = total + s.include.mat @ s.project.mat
        return total.is_identity()


def _split_once(m: KGModule, config: EngineConfig, salt: int) -> Optional[tuple]:
    """One Fitting split (U, V, projections in ambient coords), or None when
    the endomorphism ring certifies indecomposability."""
    basis = hom_space(m, m, config)
    e = find_splitting_idempotent(basis, m.p, config, salt=salt)
    if e is None:
        return None
    u1 = rref_pack(e).image
    u2 = rref_pack(eye(m.dim, m.p) - e).image
    if u1.cols + u2.cols != m.dim:
        raise DecompositionError("idempotent image ranks do not add up")
    b = col_stack([u1, u2])
    binv = b.inv()
    proj1 = FpMatrix(m.p, binv.a[:u1.cols, :])
    proj2 = FpMatrix(m.p, binv.a[u1.cols:, :])
    return u1, u2, proj1, proj2


def _leaves(m: KGModule, config: EngineConfig, depth: int) -> list[tuple[KGModule, FpMatrix, FpMatrix]]:
    """(module, include matrix, project matrix) per indecomposable leaf."""
    from .modules import sub_module

    if m.dim == 0:
        return []
    if m.parts is not None:
        out = []
        for part, emb, proj in m.parts:
            for leaf, inc, prj in _leaves(part, config, depth + 1):
                out.append((leaf, emb @ inc, prj @ proj))
        return out
    split = _split_once(m, config, salt=depth * 1009 + m.dim)
    if split is None:
        return [(m, eye(m.dim, m.p), eye(m.dim, m.p))]
    u1, u2, proj1, proj2 = split
    out = []
    for ubasis, proj in ((u1, proj1), (u2, proj2)):
        sub, incl = sub_module(m, ubasis, label=f"{m.label}|{ubasis.cols}")
        for leaf, inc, prj in _leaves(sub, config, depth + 1):
            out.append((leaf, incl.mat @ inc, prj @ proj))
    return out


def decompose(m: KGModule, config: EngineConfig = DEFAULT_CONFIG) -> DecompositionReport:
    leaves = _leaves(m, config, 0)
    summands = tuple(
        Summand(module=leaf, include=ModuleHom(leaf, m, inc), project=ModuleHom(m, leaf, prj))
        for leaf, inc, prj in leaves
    )
    classes: list[list[int]] = []
    reps: list[KGModule] = []
    for i, s in enumerate(summands):
        placed = False
        for ci, rep in enumerate(reps):
            if iso_test(rep, s.module, config) is not None:
                classes[ci].append(i)
                placed = True
                break
        if not placed:
            reps.append(s.module)
            classes.append([i])
    report = DecompositionReport(original=m, summands=summands,
                                 classes=tuple(tuple(c) for c in classes))
    if not report.check_resolution_of_identity():
        raise DecompositionError("summand projections do not resolve the identity")
    return report


# ---------------------------------------------------------------------------
# relative projectivity to subgroups (Higman), vertices, sources


def relative_trace_of_hom(m: KGModule, sub: SubgroupRef, f: FpMatrix) -> FpMatrix:
    """tr from sub to the full group of a sub-equivariant endomorphism."""
    total = zeros(m.dim, m.dim, m.p)
    for t in m.group.left_transversal(sub):
        total = total + m.matrix_of(t) @ f @ m.matrix_of(pinv(t))
    return total


def traces_from_subgroups(m: KGModule, subs: list[SubgroupRef],
                          config: EngineConfig = DEFAULT_CONFIG) -> list[FpMatrix]:
    out = []
    for sub in subs:
        res = restrict_module(m, sub)
        for f in hom_space(res, res, config):
            out.append(relative_trace_of_hom(m, sub, f))
    return out


def is_projective_relative_to_subgroups(m: KGModule, subs: list[SubgroupRef],
                                        config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """Higman's criterion, family form: the identity is a sum of relative
    traces from the listed subgroups."""
    if m.dim == 0:
        return True
    traces = traces_from_subgroups(m, subs, config)
    ident = np.eye(m.dim, dtype=np.int64)
    return in_span([t.a for t in traces], ident, m.p) is not None


def is_subgroup_projective(m: KGModule, sub: SubgroupRef,
                           config: EngineConfig = DEFAULT_CONFIG) -> bool:
    return is_projective_relative_to_subgroups(m, [sub], config)


def is_projective_module(m: KGModule, config: EngineConfig = DEFAULT_CONFIG) -> bool:
    return is_subgroup_projective(m, trivial_subgroup(m.group.parent), config)


def vertex_of(m: KGModule, table: Optional[PSubgroupTable] = None,
              config: EngineConfig = DEFAULT_CONFIG) -> SubgroupRef:
    """Vertex of an indecomposable module, as a class representative of the
    p-subgroup table of its group."""
    if m.dim == 0:
        raise DecompositionError("the zero module has no vertex")
    if table is None:
        table = p_subgroup_table(m.group, m.p, config)
    flags = [is_subgroup_projective(m, rep, config) for rep in table.class_reps]
    if not flags[table.sylow_index]:
        raise DecompositionError("module is not projective relative to a Sylow subgroup")
    candidates = [i for i, ok in enumerate(flags) if ok]
    min_order = min(table.class_reps[i].order for i in candidates)
    minimal = [i for i in candidates if table.class_reps[i].order == min_order]
    if len(minimal) != 1:
        raise DecompositionError("vertex is not unique among minimal classes; "
                                 "the module is probably decomposable")
    return table.class_reps[minimal[0]]


def has_trivial_source(m: KGModule, table: Optional[PSubgroupTable] = None,
                       config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """Whether an indecomposable module is a direct summand of a permutation
    module on the cosets of its vertex."""
    v = vertex_of(m, table, config)
    host = perm_module_on_cosets(m.group, v, m.p)
    rep = decompose(host, config)
    for cls in rep.classes:
        if iso_test(m, rep.summands[cls[0]].module, config) is not None:
            return True
    return False


@dataclass
class ModuleAnalysis:
    report: DecompositionReport
    vertices: tuple[Optional[SubgroupRef], ...]
    trivial_source: tuple[Optional[bool], ...]


def analyze_module(m: KGModule, table: Optional[PSubgroupTable] = None,
                   config: EngineConfig = DEFAULT_CONFIG,
                   with_sources: bool = False) -> ModuleAnalysis:
    """Decompose and annotate each isomorphism class with its vertex."""
    if table is None and m.dim:
        table = p_subgroup_table(m.group, m.p, config)
    report = decompose(m, config)
    verts: list[Optional[SubgroupRef]] = []
    srcs: list[Optional[bool]] = []
    for cls in report.classes:
        rep = report.summands[cls[0]].module
        verts.append(vertex_of(rep, table, config))
        srcs.append(has_trivial_source(rep, table, config) if with_sources else None)
    return ModuleAnalysis(report=report, vertices=tuple(verts),
                          trivial_source=tuple(srcs))
