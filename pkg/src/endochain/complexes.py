"""Bounded chain complexes of modules with equivariant differentials.

Terms are stored sparsely by degree; the differential d_n maps degree n to
degree n-1 and is validated to be equivariant and to square to zero.  The
dual is the unsigned transpose (so double dual is the identity on the nose),
the tensor product carries the usual alternating sign on the second factor,
and shifting by k twists the differential by (-1)^k.

Chain endomorphisms are represented as block-diagonal matrices on the total
space, which lets the matrix-algebra machinery (radical, locality
certificates, exact idempotents) drive decomposition of complexes the same
way it drives decomposition of modules.

Stripping contractible summands is Gaussian elimination in the additive
category: decompose every term into indecomposables, cancel any differential
component that is an isomorphism between two of them, repeat.  The result is
a minimal complex: C is contractible exactly when nothing survives, and C is
split exactly when the surviving differential is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import find_splitting_idempotent
from .config import DEFAULT_CONFIG, EngineConfig
from .errors import (
    CapExceeded,
    FieldMismatch,
    GroupMismatch,
    InvalidRepresentation,
    ShapeMismatch,
)
from .groups import SubgroupRef, is_p_subgroup
from .linalg import FpMatrix, eye, rref_pack, solve, zeros
from .modules import (
    BrauerData,
    KGModule,
    ModuleHom,
    Subquotient,
    brauer,
    dsum_modules,
    dual_module,
    hom_space,
    iso_test,
    restrict_module,
    sub_module,
    subquotient,
    tensor_module,
    trivial_module,
    zero_module,
)


class ChainComplex:
    """A bounded complex; terms[n] is the degree-n module (nonzero dims only)."""

    def __init__(self, group: SubgroupRef, p: int,
                 terms: dict[int, KGModule],
                 diffs: dict[int, ModuleHom],
                 label: str = "C", validate: bool = True):
        self.group = group
        self.p = p
        self.terms = {n: m for n, m in terms.items() if m.dim > 0}
        self.diffs = {}
        for n, d in diffs.items():
            if n in self.terms and (n - 1) in self.terms and not d.mat.is_zero():
                self.diffs[n] = d
        self.label = label
        for m in self.terms.values():
            if m.group != group:
                raise GroupMismatch("complex terms over different groups")
            if m.p != p:
                raise FieldMismatch("complex terms over different fields")
        if validate:
            self._validate()

    def _validate(self) -> None:
        for n, d in self.diffs.items():
            if d.source.dim != self.term(n).dim or d.target.dim != self.term(n - 1).dim:
                raise ShapeMismatch(f"differential at degree {n} has wrong shape")
            nxt = self.diffs.get(n + 1)
            if nxt is not None and not (d.mat @ nxt.mat).is_zero():
                raise InvalidRepresentation(f"d^2 != 0 at degree {n + 1}")

    # -- access ----------------------------------------------------------

    def support(self) -> list[int]:
        return sorted(self.terms)

    def term(self, n: int) -> KGModule:
        hit = self.terms.get(n)
        if hit is not None:
            return hit
        return zero_module(self.group, self.p)

    def diff_matrix(self, n: int) -> FpMatrix:
        hit = self.diffs.get(n)
        if hit is not None:
            return hit.mat
        return zeros(self.term(n - 1).dim, self.term(n).dim, self.p)

    def total_dim(self) -> int:
        return sum(m.dim for m in self.terms.values())

    def dim_vector(self) -> dict[int, int]:
        return {n: m.dim for n, m in sorted(self.terms.items())}

    def is_zero(self) -> bool:
        return not self.terms

    def min_degree(self) -> int:
        return min(self.terms) if self.terms else 0

    def max_degree(self) -> int:
        return max(self.terms) if self.terms else 0

    def __repr__(self):
        dims = ", ".join(f"{n}:{m.dim}" for n, m in sorted(self.terms.items()))
        return f"ChainComplex({self.label}; {dims or 'zero'}; GF({self.p}))"


def zero_complex(group: SubgroupRef, p: int) -> ChainComplex:
    return ChainComplex(group, p, {}, {}, label="0", validate=False)


def one_term(m: KGModule, degree: int = 0) -> ChainComplex:
    return ChainComplex(m.group, m.p, {degree: m}, {},
                        label=f"{m.label}[{degree}]", validate=False)


def from_matrices_complex(group: SubgroupRef, p: int,
                          terms: dict[int, KGModule],
                          diff_mats: dict[int, FpMatrix],
                          label: str = "C") -> ChainComplex:
    diffs = {}
    for n, mat in diff_mats.items():
        src = terms.get(n)
        tgt = terms.get(n - 1)
        if src is None or tgt is None or src.dim == 0 or tgt.dim == 0:
            continue
        diffs[n] = ModuleHom(src, tgt, mat)
    return ChainComplex(group, p, terms, diffs, label=label)


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    mats: dict[int, FpMatrix]

    def __post_init__(self):
        if self.source.group != self.target.group:
            raise GroupMismatch("chain map across groups")
        self.mats = {n: m for n, m in self.mats.items()
                     if n in self.source.terms and n in self.target.terms}
        for n, m in self.mats.items():
            ModuleHom(self.source.term(n), self.target.term(n), m)
        for n in set(self.source.terms) | set(self.target.terms):
            lhs = self.target.diff_matrix(n) @ self.component(n)
            rhs = self.component(n - 1) @ self.source.diff_matrix(n)
            if lhs != rhs:
                raise InvalidRepresentation(f"chain map does not commute at degree {n}")

    def component(self, n: int) -> FpMatrix:
        hit = self.mats.get(n)
        if hit is not None:
            return hit
        return zeros(self.target.term(n).dim, self.source.term(n).dim, self.source.p)

    def is_iso(self) -> bool:
        if set(self.source.terms) != set(self.target.terms):
            return False
        return all(self.source.term(n).dim == self.target.term(n).dim
                   and self.component(n).rank() == self.source.term(n).dim
                   for n in self.source.terms)


def identity_chain_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {n: eye(m.dim, c.p) for n, m in c.terms.items()})


# ---------------------------------------------------------------------------
# operations


def shift_complex(c: ChainComplex, k: int) -> ChainComplex:
    """Degree shift: the new degree n term is the old degree n-k term; the
    differential picks up the sign (-1)^k."""
    terms = {n + k: m for n, m in c.terms.items()}
    sign = 1 if k % 2 == 0 else -1
    diffs = {}
    for n, d in c.diffs.items():
        mat = d.mat if sign == 1 else -d.mat
        diffs[n + k] = ModuleHom(d.source, d.target, mat)
    return ChainComplex(c.group, c.p, terms, diffs,
                        label=f"{c.label}[{k}]", validate=False)


def dual_complex(c: ChainComplex) -> ChainComplex:
    """Unsigned transpose dual; applying it twice gives back the complex."""
    terms = {-n: dual_module(m) for n, m in c.terms.items()}
    diffs = {}
    for n, d in c.diffs.items():
        # d_n : C_n -> C_{n-1} dualizes to degree 1-n of the dual complex
        diffs[1 - n] = ModuleHom(terms[-(n - 1)], terms[-n], d.mat.T)
    return ChainComplex(c.group, c.p, terms, diffs,
                        label=f"dual({c.label})", validate=False)


def restrict_complex(c: ChainComplex, sub: SubgroupRef) -> ChainComplex:
    """Degreewise restriction to a subgroup; the differentials are reused."""
    terms = {n: restrict_module(m, sub) for n, m in c.terms.items()}
    diff_mats = {n: d.mat for n, d in c.diffs.items()}
    return from_matrices_complex(sub, c.p, terms, diff_mats,
                                 label=f"res[{sub.name}]({c.label})")


def sum_complexes(cs: Sequence[ChainComplex], label: Optional[str] = None) -> ChainComplex:
    if not cs:
        raise ShapeMismatch("empty sum needs a group; use zero_complex")
    group, p = cs[0].group, cs[0].p
    degrees = sorted({n for c in cs for n in c.terms})
    terms = {}
    for n in degrees:
        mods = [c.term(n) for c in cs if c.term(n).dim]
        terms[n] = dsum_modules(mods) if len(mods) > 1 else mods[0]
    diff_mats = {}
    for n in degrees:
        if n - 1 not in terms:
            continue
        big = np.zeros((terms[n - 1].dim, terms[n].dim), dtype=np.int64)
        roff = 0
        coff = 0
        for c in cs:
            rdim = c.term(n - 1).dim
            cdim = c.term(n).dim
            if rdim and cdim:
                big[roff:roff + rdim, coff:coff + cdim] = c.diff_matrix(n).a
            roff += rdim
            coff += cdim
        diff_mats[n] = FpMatrix(p, big)
    return from_matrices_complex(group, p, terms, diff_mats,
                                 label=label or ("(" + "+".join(c.label for c in cs) + ")"))


def tensor_complexes(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Total complex of the double complex, blocks ordered by ascending
    first-factor degree; d(x (.) y) = dx (.) y + (-1)^i x (.) dy."""
    if a.group != b.group:
        raise GroupMismatch("tensor across groups")
    p = a.p
    pairs_by_deg: dict[int, list[tuple[int, int]]] = {}
    for i in a.terms:
        for j in b.terms:
            pairs_by_deg.setdefault(i + j, []).append((i, j))
    for lst in pairs_by_deg.values():
        lst.sort()
    terms = {}
    offsets: dict[int, dict[tuple[int, int], int]] = {}
    for n, pairs in pairs_by_deg.items():
        blocks = [tensor_module(a.term(i), b.term(j)) for i, j in pairs]
        terms[n] = dsum_modules(blocks) if len(blocks) > 1 else blocks[0]
        offs = {}
        off = 0
        for (i, j), blk in zip(pairs, blocks):
            offs[(i, j)] = off
            off += blk.dim
        offsets[n] = offs
    diff_mats = {}
    for n in sorted(pairs_by_deg):
        if n - 1 not in pairs_by_deg:
            continue
        big = np.zeros((terms[n - 1].dim, terms[n].dim), dtype=np.int64)
        for (i, j) in pairs_by_deg[n]:
            coff = offsets[n][(i, j)]
            di = a.term(i).dim * b.term(j).dim
            if (i - 1, j) in offsets.get(n - 1, {}):
                roff = offsets[n - 1][(i - 1, j)]
                blk = np.kron(a.diff_matrix(i).a, np.eye(b.term(j).dim, dtype=np.int64))
                big[roff:roff + blk.shape[0], coff:coff + di] = blk
            if (i, j - 1) in offsets.get(n - 1, {}):
                roff = offsets[n - 1][(i, j - 1)]
                sign = 1 if i % 2 == 0 else p - 1
                blk = (sign * np.kron(np.eye(a.term(i).dim, dtype=np.int64),
                                      b.diff_matrix(j).a)) % p
                big[roff:roff + blk.shape[0], coff:coff + di] = blk
        diff_mats[n] = FpMatrix(p, big)
    return from_matrices_complex(a.group, p, terms, diff_mats,
                                 label=f"tensor({a.label},{b.label})")


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: degree n is C_{n-1} (+) D_n with differential
    [[-d_C, 0], [-f, d_D]]."""
    c, d = f.source, f.target
    p = c.p
    degrees = sorted({n + 1 for n in c.terms} | set(d.terms))
    terms = {}
    for n in degrees:
        blocks = []
        if c.term(n - 1).dim:
            blocks.append(c.term(n - 1))
        if d.term(n).dim:
            blocks.append(d.term(n))
        if blocks:
            terms[n] = dsum_modules(blocks) if len(blocks) > 1 else blocks[0]
    diff_mats = {}
    for n in degrees:
        if n - 1 not in terms or n not in terms:
            continue
        rows = terms[n - 1].dim
        cols = terms[n].dim
        big = np.zeros((rows, cols), dtype=np.int64)
        ctop = c.term(n - 1).dim       # C-part width at degree n
        rtop = c.term(n - 2).dim       # C-part height at degree n-1
        big[:rtop, :ctop] = (-c.diff_matrix(n - 1).a) % p
        big[rtop:, :ctop] = (-f.component(n - 1).a) % p
        big[rtop:, ctop:] = d.diff_matrix(n).a
        diff_mats[n] = FpMatrix(p, big)
    return from_matrices_complex(c.group, p, terms, diff_mats,
                                 label=f"cone({c.label}->{d.label})")


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyData:
    module: KGModule
    degree: int
    subq: Subquotient


def homology(c: ChainComplex, n: int) -> HomologyData:
    term = c.term(n)
    if term.dim == 0:
        return HomologyData(module=zero_module(c.group, c.p), degree=n, subq=None)
    ker = rref_pack(c.diff_matrix(n)).kernel
    img = rref_pack(c.diff_matrix(n + 1)).image
    sq = subquotient(term, ker, img, label=f"H_{n}({c.label})")
    return HomologyData(module=sq.module, degree=n, subq=sq)


def homology_dims(c: ChainComplex) -> dict[int, int]:
    out = {}
    for n in c.support():
        h = homology(c, n)
        if h.module.dim:
            out[n] = h.module.dim
    return out


def is_exact(c: ChainComplex) -> bool:
    return not homology_dims(c)


# ---------------------------------------------------------------------------
# Brauer construction on complexes


@dataclass
class BrauerChain:
    complex: ChainComplex
    psub: SubgroupRef
    normalizer: SubgroupRef
    term_data: dict[int, BrauerData]


def brauer_chain(c: ChainComplex, psub: SubgroupRef) -> BrauerChain:
    if not is_p_subgroup(psub, c.p):
        from .errors import NotPSubgroup
        raise NotPSubgroup(f"order {psub.order} is no power of {c.p}")
    norm = psub.normalizer_in(c.group)
    data = {n: brauer(m, psub) for n, m in c.terms.items()}
    terms = {n: d.module for n, d in data.items() if d.module.dim}
    diff_mats = {}
    for n, dmap in c.diffs.items():
        if n in terms and (n - 1) in terms:
            diff_mats[n] = data[n].transport(dmap, data[n - 1])
    out = from_matrices_complex(norm, c.p, terms, diff_mats,
                                label=f"br({c.label},{psub.name})")
    return BrauerChain(complex=out, psub=psub, normalizer=norm, term_data=data)


# ---------------------------------------------------------------------------
# chain hom spaces, isomorphism, decomposition


def chain_hom_space(c: ChainComplex, d: ChainComplex,
                    config: EngineConfig = DEFAULT_CONFIG) -> list[dict[int, FpMatrix]]:
    """Basis of chain maps c -> d: degreewise equivariant maps commuting with
    the differentials."""
    if c.group != d.group:
        raise GroupMismatch("chain hom across groups")
    degrees = sorted(set(c.terms) & set(d.terms))
    per_degree: list[tuple[int, list[FpMatrix]]] = []
    for n in degrees:
        per_degree.append((n, hom_space(c.term(n), d.term(n), config)))
    coords = []
    for n, basis in per_degree:
        for b in basis:
            coords.append((n, b))
    if not coords:
        return []
    defects = []
    for idx, (n, b) in enumerate(coords):
        pieces = []
        for m in sorted(set(list(c.terms) + list(d.terms))):
            lhs = d.diff_matrix(m) @ (b if m == n else
                                      zeros(d.term(m).dim, c.term(m).dim, c.p))
            rhs = (b if m - 1 == n else
                   zeros(d.term(m - 1).dim, c.term(m - 1).dim, c.p)) @ c.diff_matrix(m)
            pieces.append(((lhs - rhs).a).ravel())
        defects.append(np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64))
    dmat = FpMatrix(c.p, np.stack(defects, axis=1))
    ker = rref_pack(dmat).kernel
    out = []
    for j in range(ker.cols):
        comp: dict[int, FpMatrix] = {}
        for idx, (n, b) in enumerate(coords):
            coeff = int(ker.a[idx, j])
            if coeff == 0:
                continue
            cur = comp.get(n)
            add = b.scale(coeff)
            comp[n] = add if cur is None else cur + add
        out.append(comp)
    return out


def _total_blockdiag(comp: dict[int, FpMatrix], support: list[int],
                     src_dims: dict[int, int], tgt_dims: dict[int, int],
                     p: int) -> FpMatrix:
    rows = sum(tgt_dims[n] for n in support)
    cols = sum(src_dims[n] for n in support)
    big = np.zeros((rows, cols), dtype=np.int64)
    roff = coff = 0
    for n in support:
        blk = comp.get(n)
        if blk is not None:
            big[roff:roff + tgt_dims[n], coff:coff + src_dims[n]] = blk.a
        roff += tgt_dims[n]
        coff += src_dims[n]
    return FpMatrix(p, big)


def chain_end_basis(c: ChainComplex,
                    config: EngineConfig = DEFAULT_CONFIG) -> tuple[list[FpMatrix], list[int]]:
    """Chain endomorphisms as block-diagonal matrices on the total space."""
    support = c.support()
    dims = c.dim_vector()
    total = sum(dims.values())
    if total * total > config.end_ring_unknown_cap * 4:
        raise CapExceeded(f"chain endomorphism space on total dim {total} exceeds cap")
    basis = chain_hom_space(c, c, config)
    mats = [_total_blockdiag(b, support, dims, dims, c.p) for b in basis]
    return mats, support


def _slice_blocks(big: FpMatrix, support: list[int], dims: dict[int, int]) -> dict[int, FpMatrix]:
    out = {}
    off = 0
    for n in support:
        d = dims[n]
        out[n] = FpMatrix(big.p, big.a[off:off + d, off:off + d])
        off += d
    return out


def chain_iso_test(c: ChainComplex, d: ChainComplex,
                   config: EngineConfig = DEFAULT_CONFIG) -> Optional[ChainMap]:
    """A chain isomorphism, or None when provably none exists."""
    if c.group != d.group:
        raise GroupMismatch("chain iso across groups")
    if c.dim_vector() != d.dim_vector():
        return None
    if c.is_zero():
        return ChainMap(c, d, {})
    basis = chain_hom_space(c, d, config)
    if not basis:
        return None
    support = c.support()
    dims = c.dim_vector()
    bigs = [_total_blockdiag(b, support, dims, dims, c.p) for b in basis]
    from .modules import _search_invertible
    total = sum(dims.values())
    wit = _search_invertible(bigs, c.p, total, config)
    if wit is None:
        return None
    return ChainMap(c, d, _slice_blocks(wit, support, dims))


def _split_chain_by_idempotent(c: ChainComplex, blocks: dict[int, FpMatrix],
                               complement: bool) -> ChainComplex:
    terms = {}
    bases = {}
    for n in c.support():
        e = blocks[n]
        if complement:
            e = eye(e.rows, c.p) - e
        img = rref_pack(e).image
        if img.cols == 0:
            continue
        sub, incl = sub_module(c.term(n), img, label=f"{c.label}@{n}")
        terms[n] = sub
        bases[n] = img
    diff_mats = {}
    for n in terms:
        if n - 1 not in terms:
            continue
        sol = solve(bases[n - 1], c.diff_matrix(n) @ bases[n])
        if sol is None:
            raise InvalidRepresentation("idempotent image is not a subcomplex")
        diff_mats[n] = sol[0]
    return from_matrices_complex(c.group, c.p, terms, diff_mats, label=c.label)


def chain_decompose(c: ChainComplex,
                    config: EngineConfig = DEFAULT_CONFIG,
                    _depth: int = 0) -> list[ChainComplex]:
    """Indecomposable direct summands of the complex (no embeddings kept)."""
    if c.is_zero():
        return []
    mats, support = chain_end_basis(c, config)
    e = find_splitting_idempotent(mats, c.p, config, salt=0xC0 + _depth)
    if e is None:
        return [c]
    blocks = _slice_blocks(e, support, c.dim_vector())
    left = _split_chain_by_idempotent(c, blocks, complement=False)
    right = _split_chain_by_idempotent(c, blocks, complement=True)
    if left.total_dim() + right.total_dim() != c.total_dim():
        raise InvalidRepresentation("chain idempotent split lost dimensions")
    return chain_decompose(left, config, _depth + 1) + chain_decompose(right, config, _depth + 1)


# ---------------------------------------------------------------------------
# stripping contractible summands


def _term_summands(c: ChainComplex, config: EngineConfig):
    """Per degree: list of (module, include, project) in ambient coordinates."""
    from .decompose import _leaves

    return {n: _leaves(c.term(n), config, 0) for n in c.support()}


def strip_contractibles(c: ChainComplex,
                        config: EngineConfig = DEFAULT_CONFIG) -> ChainComplex:
    """Cancel differential components that are isomorphisms between
    indecomposable summands until none remain (the minimal complex)."""
    cur = c
    while True:
        if cur.is_zero():
            return cur
        pieces = _term_summands(cur, config)
        cancel = None
        for n in cur.support():
            if n - 1 not in cur.terms:
                continue
            dmat = cur.diff_matrix(n)
            for bi, (bmod, binc, bprj) in enumerate(pieces[n]):
                for ai, (amod, ainc, aprj) in enumerate(pieces[n - 1]):
                    if amod.dim != bmod.dim:
                        continue
                    comp = aprj @ dmat @ binc
                    if comp.rank() == amod.dim:
                        cancel = (n, bi, ai, comp)
                        break
                if cancel:
                    break
            if cancel:
                break
        if not cancel:
            return cur
        n, bi, ai, phi = cancel
        cur = _cancel_pair(cur, pieces, n, bi, ai, phi)


def _cancel_pair(c: ChainComplex, pieces, n: int, bi: int, ai: int,
                 phi: FpMatrix) -> ChainComplex:
    """Gaussian elimination of one iso component phi: (summand bi of C_n) ->
    (summand ai of C_{n-1})."""
    p = c.p
    phinv = phi.inv()
    keep_n = [t for i, t in enumerate(pieces[n]) if i != bi]
    keep_n1 = [t for i, t in enumerate(pieces[n - 1]) if i != ai]
    bmod, binc, bprj = pieces[n][bi]
    amod, ainc, aprj = pieces[n - 1][ai]

    terms = dict(c.terms)
    newbases: dict[int, list] = {}

    def rebuild(deg, kept):
        if not kept:
            terms.pop(deg, None)
            return
        mods = [t[0] for t in kept]
        terms[deg] = dsum_modules(mods) if len(mods) > 1 else mods[0]
        newbases[deg] = kept

    rebuild(n, keep_n)
    rebuild(n - 1, keep_n1)

    diff_mats: dict[int, FpMatrix] = {}
    for m in set(list(c.diffs) + [n, n + 1]):
        if m not in terms or m - 1 not in terms:
            continue
        old = c.diff_matrix(m)
        src_pieces = newbases.get(m, [(c.term(m), eye(c.term(m).dim, p), eye(c.term(m).dim, p))]
                                  if m not in (n, n - 1) else [])
        tgt_pieces = newbases.get(m - 1, [(c.term(m - 1), eye(c.term(m - 1).dim, p),
                                           eye(c.term(m - 1).dim, p))]
                                  if m - 1 not in (n, n - 1) else [])
        if m == n:
            # Schur correction: delta' = delta - gamma phi^{-1} beta
            blocks = []
            for (tmod, tinc, tprj) in keep_n1:
                row = []
                for (smod, sinc, sprj) in keep_n:
                    delta = tprj @ old @ sinc
                    gamma = aprj @ old @ sinc
                    beta_t = tprj @ old @ binc
                    row.append((delta - beta_t @ phinv @ gamma).a)
                blocks.append(np.hstack(row) if row else np.zeros((tmod.dim, 0), dtype=np.int64))
            if blocks and blocks[0].shape[1]:
                diff_mats[m] = FpMatrix(p, np.vstack(blocks))
        else:
            # dropped components simply vanish; remaining blocks transport
            blocks = []
            for (tmod, tinc, tprj) in tgt_pieces:
                row = []
                for (smod, sinc, sprj) in src_pieces:
                    row.append((tprj @ old @ sinc).a)
                blocks.append(np.hstack(row) if row else np.zeros((tmod.dim, 0), dtype=np.int64))
            if blocks and blocks[0].shape[1]:
                diff_mats[m] = FpMatrix(p, np.vstack(blocks))
    return from_matrices_complex(c.group, p, terms, diff_mats, label=c.label)


def is_contractible(c: ChainComplex, config: EngineConfig = DEFAULT_CONFIG) -> bool:
    return strip_contractibles(c, config).is_zero()


def is_split(c: ChainComplex, config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """Split complexes are exactly those whose minimal model has zero
    differential."""
    return not strip_contractibles(c, config).diffs


def is_concentrated(c: ChainComplex) -> Optional[int]:
    """The unique degree with nonzero homology, or None if there are several
    (or none)."""
    dims = homology_dims(c)
    if len(dims) == 1:
        return next(iter(dims))
    return None
