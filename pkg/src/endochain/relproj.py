"""Projectivity of modules and complexes relative to a fixed module.

An object X is projective relative to a module V exactly when its identity
factors through the evaluation map dual(V) (x) V (x) X -> X.  That criterion
is one exact linear solve over GF(p) and is the authoritative route here for
modules and complexes alike (for a complex the solve runs across all degrees
at once).

When V is a p-permutation module the question localizes: the Brauer quotient
V(P) vanishes on an upward-closed set of p-subgroup classes, and projectivity
relative to V coincides with projectivity relative to the family of classes
on which V survives.  The family test (identity in the span of relative
traces, Higman's criterion) is far cheaper, so it serves both as the
fallback when the factoring system would be too large and as an independent
cross-check when the tensor dimensions are small enough to afford both.

A context object precomputes the per-class Brauer data, the vanishing and
support sets, absolute p-divisibility (every indecomposable summand of V has
dimension divisible by p), and a permutation-module generator: the direct
sum of coset modules k[G/P] over the maximal classes P for which k[G/P] is
V-projective.  Relative syzygies take kernels of the evaluation epimorphism
(or cokernels of the coevaluation monomorphism) and strip the V-projective
summands of the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .algebra import in_span
from .complexes import (
    ChainComplex,
    chain_hom_space,
    chain_decompose,
    one_term,
    restrict_complex,
    sum_complexes,
    tensor_complexes,
    zero_complex,
)
from .config import DEFAULT_CONFIG, EngineConfig
from .decompose import (
    decompose,
    has_trivial_source,
    is_projective_relative_to_subgroups,
    vertex_of,
)
from .errors import (
    CapExceeded,
    EngineError,
    FieldMismatch,
    GroupMismatch,
    NotAbsolutelyPDivisible,
)
from .groups import PSubgroupTable, SubgroupRef, p_subgroup_table, pinv
from .linalg import FpMatrix, zeros
from .modules import (
    KGModule,
    ModuleHom,
    brauer,
    cokernel,
    dsum_modules,
    dual_module,
    hom_space,
    kernel_module,
    perm_module_on_cosets,
    tensor_module,
    trivial_module,
    zero_module,
)

ChainOrModule = Union[KGModule, ChainComplex]


# ---------------------------------------------------------------------------
# evaluation and coevaluation


def evaluation_hom(v: KGModule) -> ModuleHom:
    """The pairing dual(v) (x) v -> k, delta (x) w -> delta(w)."""
    w = tensor_module(dual_module(v), v)
    row = np.eye(v.dim, dtype=np.int64).reshape(1, v.dim * v.dim)
    return ModuleHom(w, trivial_module(v.group, v.p), FpMatrix(v.p, row))


def coevaluation_hom(v: KGModule) -> ModuleHom:
    """The canonical map k -> v (x) dual(v), 1 -> sum of e_i (x) delta_i."""
    w = tensor_module(v, dual_module(v))
    col = np.eye(v.dim, dtype=np.int64).reshape(v.dim * v.dim, 1)
    return ModuleHom(trivial_module(v.group, v.p), w, FpMatrix(v.p, col))


def _ev_block(v_dim: int, x_dim: int) -> np.ndarray:
    """Matrix of (evaluation (x) id): dual(v) (x) v (x) X -> X."""
    row = np.eye(v_dim, dtype=np.int64).reshape(1, v_dim * v_dim)
    return np.kron(row, np.eye(x_dim, dtype=np.int64))


# ---------------------------------------------------------------------------
# context


@dataclass
class RelProjContext:
    """Everything the projectivity tests need to know about the fixed module.

    vanishing / support are index sets into table.class_reps: the classes on
    which the Brauer quotient of the module is zero / nonzero.  generator is
    the direct sum of k[G/P] over the maximal admissible classes; for a
    p-permutation module these are exactly the maximal support classes.
    """

    module: KGModule
    table: PSubgroupTable
    brauer_dims: tuple[int, ...]
    vanishing: tuple[int, ...]
    support: tuple[int, ...]
    abs_p_divisible: bool
    is_p_permutation: bool
    summand_dims: tuple[int, ...]
    generator: KGModule
    generator_indices: tuple[int, ...]
    config: EngineConfig

    @property
    def group(self) -> SubgroupRef:
        return self.table.group

    @property
    def p(self) -> int:
        return self.table.p

    def vanishing_reps(self) -> list[SubgroupRef]:
        return [self.table.class_reps[i] for i in self.vanishing]

    def support_reps(self) -> list[SubgroupRef]:
        return [self.table.class_reps[i] for i in self.support]

    def family_reps(self) -> list[SubgroupRef]:
        """Maximal support classes; the trace family for the cheap route."""
        return [self.table.class_reps[i] for i in self.generator_indices]

    def summary(self) -> dict:
        """Plain-data form for serialization."""
        return {
            "group_order": self.group.order,
            "p": self.p,
            "module_dim": self.module.dim,
            "classes": [
                {
                    "id": self.table.rep_id(i),
                    "order": rep.order,
                    "brauer_dim": self.brauer_dims[i],
                    "vanishing": i in set(self.vanishing),
                }
                for i, rep in enumerate(self.table.class_reps)
            ],
            "abs_p_divisible": self.abs_p_divisible,
            "p_permutation": self.is_p_permutation,
            "summand_dims": list(self.summand_dims),
            "generator": {
                "dim": self.generator.dim,
                "classes": [self.table.rep_id(i) for i in self.generator_indices],
            },
        }


def _maximal_indices(indices: list[int], table: PSubgroupTable) -> list[int]:
    """Indices whose class is not below any other listed class."""
    out = []
    for i in indices:
        if all(j == i or not table.leq[i, j] for j in indices):
            out.append(i)
    return out


def make_context(v: KGModule, table: Optional[PSubgroupTable] = None,
                 config: EngineConfig = DEFAULT_CONFIG) -> RelProjContext:
    if table is None:
        table = p_subgroup_table(v.group, v.p, config)
    dims = []
    for i, rep in enumerate(table.class_reps):
        if v.dim == 0:
            dims.append(0)
        elif i == table.trivial_index:
            dims.append(v.dim)
        else:
            dims.append(brauer(v, rep).module.dim)
    vanishing = tuple(i for i, d in enumerate(dims) if d == 0)
    support = tuple(i for i, d in enumerate(dims) if d != 0)

    if v.dim == 0:
        summand_dims: tuple[int, ...] = ()
        abs_div = True
        p_perm = True
    else:
        report = decompose(v, config)
        summand_dims = tuple(sorted(s.module.dim for s in report.summands))
        abs_div = all(d % v.p == 0 for d in summand_dims)
        p_perm = all(
            has_trivial_source(report.summands[cls[0]].module, table, config)
            for cls in report.classes
        )

    if p_perm:
        # Brauer-side reading of absolute p-divisibility must agree.
        if abs_div != (dims[table.sylow_index] == 0):
            raise EngineError("p-divisibility disagrees with the Sylow Brauer quotient")
        for i in vanishing:
            for j in range(len(table)):
                if table.leq[i, j] and dims[j] != 0:
                    raise EngineError("vanishing classes are not upward closed")
        admissible = list(support)
    else:
        admissible = []
        for i, rep in enumerate(table.class_reps):
            host = perm_module_on_cosets(v.group, rep, v.p)
            if _factor_identity_module(host, v, config) is not None:
                admissible.append(i)

    gen_idx = tuple(_maximal_indices(admissible, table))
    if gen_idx:
        gen = dsum_modules(
            [perm_module_on_cosets(v.group, table.class_reps[i], v.p) for i in gen_idx],
            label="generator",
        )
    else:
        gen = zero_module(v.group, v.p)

    ctx = RelProjContext(
        module=v, table=table, brauer_dims=tuple(dims),
        vanishing=vanishing, support=support,
        abs_p_divisible=abs_div, is_p_permutation=p_perm,
        summand_dims=summand_dims, generator=gen, generator_indices=gen_idx,
        config=config,
    )
    if p_perm:
        _cross_check_admissible_scan(ctx)
    return ctx


def _cross_check_admissible_scan(ctx: RelProjContext) -> None:
    """For a p-permutation module the support classes must match the direct
    factoring scan wherever that scan is affordable."""
    v = ctx.module
    cap = ctx.config.cross_check_dim_cap
    for i, rep in enumerate(ctx.table.class_reps):
        host = perm_module_on_cosets(v.group, rep, v.p)
        if v.dim * v.dim * host.dim > cap:
            continue
        try:
            direct = _factor_identity_module(host, v, ctx.config) is not None
        except CapExceeded:
            continue
        if direct != (i in set(ctx.support)):
            raise EngineError(
                f"factoring scan disagrees with the Brauer support at class {i}")


# ---------------------------------------------------------------------------
# the factoring criterion


def _factor_identity_module(x: KGModule, v: KGModule,
                            config: EngineConfig) -> Optional[FpMatrix]:
    """A section g of (evaluation (x) id) with ev . g = id_x, or None."""
    if x.dim == 0:
        return zeros(0, 0, x.p)
    big = tensor_module(tensor_module(dual_module(v), v), x)
    if big.dim == 0:
        return None
    basis = hom_space(x, big, config)
    if not basis:
        return None
    ev = _ev_block(v.dim, x.dim)
    cols = [((ev @ b.a) % x.p).ravel() for b in basis]
    coeffs = in_span(cols, np.eye(x.dim, dtype=np.int64).ravel(), x.p)
    if coeffs is None:
        return None
    g = np.zeros((big.dim, x.dim), dtype=np.int64)
    for c, b in zip(coeffs, basis):
        if int(c):
            g = (g + int(c) * b.a) % x.p
    sec = FpMatrix(x.p, g)
    if not FpMatrix(x.p, (ev @ sec.a) % x.p).is_identity():
        raise EngineError("factoring solve produced a non-section")
    return sec


def _factor_identity_chain(c: ChainComplex, v: KGModule,
                           config: EngineConfig) -> Optional[dict[int, FpMatrix]]:
    """Chain-map section of (evaluation (x) id) degreewise, or None.

    One linear system across all degrees: the unknowns are coefficients of a
    chain-map basis of Hom(c, dual(v) (x) v (x) c)."""
    w = tensor_module(dual_module(v), v)
    if w.dim == 0:
        return None
    wc = tensor_complexes(one_term(w, 0), c)
    basis = chain_hom_space(c, wc, config)
    if not basis:
        return None
    support = c.support()
    evs = {n: _ev_block(v.dim, c.term(n).dim) for n in support}
    cols = []
    for b in basis:
        pieces = []
        for n in support:
            nd = c.term(n).dim
            blk = b.get(n)
            if blk is None:
                pieces.append(np.zeros(nd * nd, dtype=np.int64))
            else:
                pieces.append(((evs[n] @ blk.a) % c.p).ravel())
        cols.append(np.concatenate(pieces))
    target = np.concatenate(
        [np.eye(c.term(n).dim, dtype=np.int64).ravel() for n in support])
    coeffs = in_span(cols, target, c.p)
    if coeffs is None:
        return None
    out: dict[int, FpMatrix] = {}
    for ci, b in zip(coeffs, basis):
        if int(ci) == 0:
            continue
        for n, blk in b.items():
            add = blk.scale(int(ci))
            cur = out.get(n)
            out[n] = add if cur is None else cur + add
    for n in support:
        gn = out.get(n)
        nd = c.term(n).dim
        got = zeros(nd, nd, c.p) if gn is None else FpMatrix(c.p, (evs[n] @ gn.a) % c.p)
        if not got.is_identity():
            raise EngineError("chain factoring solve produced a non-section")
    return out


# ---------------------------------------------------------------------------
# the trace-family route for complexes


def chain_relative_trace(c: ChainComplex, sub: SubgroupRef,
                         comp: dict[int, FpMatrix]) -> dict[int, FpMatrix]:
    """Degreewise relative trace of a chain endomorphism of the restriction;
    the result is a chain endomorphism of c."""
    out = {}
    transversal = c.group.left_transversal(sub)
    for n, m in c.terms.items():
        blk = comp.get(n)
        if blk is None:
            continue
        total = zeros(m.dim, m.dim, c.p)
        for t in transversal:
            total = total + m.matrix_of(t) @ blk @ m.matrix_of(pinv(t))
        out[n] = total
    return out


def chain_traces_from_subgroups(c: ChainComplex, subs: list[SubgroupRef],
                                config: EngineConfig = DEFAULT_CONFIG
                                ) -> list[dict[int, FpMatrix]]:
    out = []
    for sub in subs:
        res = restrict_complex(c, sub)
        for h in chain_hom_space(res, res, config):
            out.append(chain_relative_trace(c, sub, h))
    return out


def _chain_endo_vec(c: ChainComplex, comp: dict[int, FpMatrix]) -> np.ndarray:
    pieces = []
    for n in c.support():
        nd = c.term(n).dim
        blk = comp.get(n)
        pieces.append(blk.a.ravel() if blk is not None
                      else np.zeros(nd * nd, dtype=np.int64))
    return np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)


def chain_projective_relative_to_subgroups(c: ChainComplex,
                                           subs: list[SubgroupRef],
                                           config: EngineConfig = DEFAULT_CONFIG
                                           ) -> bool:
    """Higman's criterion for a complex: the identity chain map is a sum of
    relative traces from the listed subgroups."""
    if c.is_zero():
        return True
    traces = chain_traces_from_subgroups(c, subs, config)
    vecs = [_chain_endo_vec(c, t) for t in traces]
    ident = np.concatenate(
        [np.eye(c.term(n).dim, dtype=np.int64).ravel() for n in c.support()])
    return in_span(vecs, ident, c.p) is not None


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class ProjectivityVerdict:
    """Outcome of a relative projectivity test.

    section is the factoring witness when the factoring route produced the
    answer and the answer is positive: a matrix for a module, a degree-keyed
    dict of matrices for a complex."""

    holds: bool
    route: str
    section: Optional[object] = None
    cross_checked: bool = False

    def __bool__(self) -> bool:
        return self.holds


def _guard(x: ChainOrModule, ctx: RelProjContext) -> None:
    if x.group != ctx.module.group:
        raise GroupMismatch("projectivity test across groups")
    if x.p != ctx.p:
        raise FieldMismatch("projectivity test across fields")


def _vertex_route(x: KGModule, ctx: RelProjContext) -> Optional[bool]:
    """Vertex reading of the support family, valid when x is p-permutation:
    every summand's vertex class must carry nonzero Brauer quotient.  None
    when x has a summand without trivial source (route not applicable)."""
    if x.dim == 0:
        return True
    report = decompose(x, ctx.config)
    supp = set(ctx.support)
    verdict = True
    for cls in report.classes:
        rep = report.summands[cls[0]].module
        if not has_trivial_source(rep, ctx.table, ctx.config):
            return None
        vi = ctx.table.rep_of(vertex_of(rep, ctx.table, ctx.config))[0]
        if vi not in supp:
            verdict = False
    return verdict


def is_relatively_projective(x: ChainOrModule,
                             ctx: RelProjContext) -> ProjectivityVerdict:
    """Whether x is projective relative to the context module.

    The factoring criterion decides; when its system exceeds the engine caps
    and the context module is p-permutation, the trace-family route decides
    instead.  Both routes run and must agree whenever the tensor dimensions
    fit under the cross-check cap."""
    _guard(x, ctx)
    if isinstance(x, ChainComplex):
        return _chain_verdict(x, ctx)
    return _module_verdict(x, ctx)


def _module_verdict(x: KGModule, ctx: RelProjContext) -> ProjectivityVerdict:
    if x.dim == 0:
        return ProjectivityVerdict(True, "zero-object", section=zeros(0, 0, x.p))
    v = ctx.module
    try:
        section = _factor_identity_module(x, v, ctx.config)
        holds = section is not None
        route = "factoring"
    except CapExceeded:
        if not ctx.is_p_permutation:
            raise
        holds = is_projective_relative_to_subgroups(x, ctx.family_reps(), ctx.config)
        return ProjectivityVerdict(holds, "trace-family")
    checked = False
    if ctx.is_p_permutation and v.dim * v.dim * x.dim <= ctx.config.cross_check_dim_cap:
        other = _vertex_route(x, ctx)
        if other is None:
            other = is_projective_relative_to_subgroups(x, ctx.family_reps(), ctx.config)
        if other != holds:
            raise EngineError("factoring and family routes disagree")
        checked = True
    return ProjectivityVerdict(holds, route, section=section if holds else None,
                               cross_checked=checked)


def _chain_verdict(c: ChainComplex, ctx: RelProjContext) -> ProjectivityVerdict:
    if c.is_zero():
        return ProjectivityVerdict(True, "zero-object", section={})
    v = ctx.module
    try:
        section = _factor_identity_chain(c, v, ctx.config)
        holds = section is not None
        route = "factoring"
    except CapExceeded:
        if not ctx.is_p_permutation:
            raise
        holds = chain_projective_relative_to_subgroups(c, ctx.family_reps(), ctx.config)
        return ProjectivityVerdict(holds, "trace-family")
    checked = False
    if (ctx.is_p_permutation
            and v.dim * v.dim * c.total_dim() <= ctx.config.cross_check_dim_cap):
        other = chain_projective_relative_to_subgroups(c, ctx.family_reps(), ctx.config)
        if other != holds:
            raise EngineError("chain factoring and family routes disagree")
        checked = True
    return ProjectivityVerdict(holds, route, section=section if holds else None,
                               cross_checked=checked)


# ---------------------------------------------------------------------------
# stripping and syzygies


def strip_projective_summands(m: KGModule, ctx: RelProjContext) -> KGModule:
    """The module with every indecomposable summand that is projective
    relative to the context removed; idempotent up to isomorphism."""
    _guard(m, ctx)
    if m.dim == 0:
        return m
    report = decompose(m, ctx.config)
    keep = [s.module for s in report.summands
            if not is_relatively_projective(s.module, ctx).holds]
    if not keep:
        return zero_module(m.group, m.p)
    return dsum_modules(keep, label=f"stripped({m.label})")


def strip_projective_complexes(c: ChainComplex, ctx: RelProjContext) -> ChainComplex:
    """Drop every indecomposable chain summand that is projective relative to
    the context, as a complex; idempotent up to isomorphism."""
    _guard(c, ctx)
    pieces = chain_decompose(c, ctx.config)
    keep = [s for s in pieces if not is_relatively_projective(s, ctx).holds]
    if not keep:
        return zero_complex(c.group, c.p)
    return sum_complexes(keep, label=f"stripped({c.label})")


def _syzygy_step(m: KGModule, ctx: RelProjContext) -> KGModule:
    """Kernel of the evaluation epimorphism, with projective summands
    stripped."""
    v = ctx.module
    big = tensor_module(tensor_module(dual_module(v), v), m)
    epi = ModuleHom(big, m, FpMatrix(m.p, _ev_block(v.dim, m.dim)))
    ker, _ = kernel_module(epi, label=f"syz({m.label})")
    return strip_projective_summands(ker, ctx)


def _cosyzygy_step(m: KGModule, ctx: RelProjContext) -> KGModule:
    """Cokernel of the coevaluation monomorphism, with projective summands
    stripped."""
    v = ctx.module
    big = tensor_module(tensor_module(v, dual_module(v)), m)
    col = np.eye(v.dim, dtype=np.int64).reshape(v.dim * v.dim, 1)
    mono = ModuleHom(m, big, FpMatrix(m.p, np.kron(col, np.eye(m.dim, dtype=np.int64))))
    cq = cokernel(mono, label=f"cosyz({m.label})")
    return strip_projective_summands(cq.module, ctx)


def relative_syzygy(m: KGModule, ctx: RelProjContext, n: int) -> KGModule:
    """Iterated syzygy of m along the evaluation resolution (n in -2..2).

    n = 0 strips projective summands; positive n takes kernels of the
    evaluation epimorphism, negative n takes cokernels of the coevaluation
    monomorphism, stripping after every step.  Requires the context module
    to be absolutely p-divisible, so that the trivial module is not killed."""
    _guard(m, ctx)
    if not ctx.abs_p_divisible:
        raise NotAbsolutelyPDivisible(
            "syzygies need an absolutely p-divisible context module")
    if n not in (-2, -1, 0, 1, 2):
        raise ValueError(f"syzygy index {n} outside the supported range -2..2")
    out = strip_projective_summands(m, ctx)
    if n != 0 and ctx.module.dim == 0 and out.dim > 0:
        raise EngineError("syzygy relative to the zero module is undefined "
                          "for a nonzero module")
    for _ in range(abs(n)):
        out = _syzygy_step(out, ctx) if n > 0 else _cosyzygy_step(out, ctx)
    return out


# ---------------------------------------------------------------------------
# vertices of complexes


def chain_vertex(c: ChainComplex, table: Optional[PSubgroupTable] = None,
                 config: EngineConfig = DEFAULT_CONFIG) -> int:
    """Class index of the vertex of an indecomposable bounded complex.

    The vertex is the minimal p-subgroup class relative to which the complex
    is projective (Higman's criterion degreewise across the complex).  The
    candidate set is upward closed; a unique minimal class must exist for an
    indecomposable complex, and anything else raises."""
    if table is None:
        table = p_subgroup_table(c.group, c.p, config)
    if c.is_zero():
        return table.trivial_index
    hits = [i for i, rep in enumerate(table.class_reps)
            if chain_projective_relative_to_subgroups(c, [rep], config)]
    if not hits:
        raise EngineError("complex is not projective relative to any "
                          "p-subgroup class, Sylow included")
    minimal = [i for i in hits
               if not any(j != i and table.leq[j, i] for j in hits)]
    if len(minimal) != 1:
        raise EngineError(f"vertex candidates {minimal} are incomparable; "
                          "input is not indecomposable")
    return minimal[0]
