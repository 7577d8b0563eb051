"""Endotriviality checks for bounded complexes of trivial-source modules.

A complex C is endotrivial relative to a context module V when the
endomorphism complex dual(C) (x) C is, up to homotopy, the trivial module in
degree zero plus a remainder that the context absorbs.  Three gradings of
"absorbs" are implemented, strictest last:

  weak      the remainder is a bounded complex whose terms are V-projective
  strong    the remainder is projective relative to V as a complex
  esplit    C is a shifted endosplit resolution whose homology module is
            V-endotrivial (so the remainder sits in a single degree)

Each grading has two routes.  The local route evaluates homology of the
Brauer chain complex class by class: weak endotriviality asks for
one-dimensional homology concentrated in a single degree at every class
where the context vanishes; the endosplit conditions extend the demand to
every class.  The direct route strips the contractible summands off
dual(C) (x) C and inspects what is left.  For a trivial-source context the
local route decides and the direct route cross-checks whenever the tensor
square fits under the engine caps; otherwise the direct route decides.  The
two routes disagreeing raises EngineError, never a quiet preference.

The degree of the concentrated local homology, as a function of the
p-subgroup class, is the h-mark of the complex; the one-dimensional homology
itself is recorded as a character of the normalizer (the class subgroup acts
trivially, so the character descends to the quotient).  Reports of both are
the complete stable invariants in weak mode and feed the superclass-function
checks downstream.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .complexes import (
    ChainComplex,
    brauer_chain,
    chain_decompose,
    chain_iso_test,
    dual_complex,
    homology,
    homology_dims,
    is_contractible,
    is_split,
    one_term,
    strip_contractibles,
    sum_complexes,
    tensor_complexes,
    zero_complex,
)
from .config import DEFAULT_CONFIG, EngineConfig
from .decompose import decompose, has_trivial_source
from .errors import (
    CapExceeded,
    EngineError,
    FieldMismatch,
    GroupMismatch,
    Indeterminate,
    NoTrivialSummand,
    NotAbsolutelyPDivisible,
    NotPPermutation,
)
from .groups import PSubgroupTable, SubgroupRef, p_subgroup_table
from .modules import (
    Character,
    KGModule,
    character1d,
    dual_module,
    iso_test,
    tensor_module,
    trivial_module,
)
from .relproj import (
    RelProjContext,
    is_relatively_projective,
    strip_projective_summands,
)

# ---------------------------------------------------------------------------
# report and verdict types


@dataclass(frozen=True)
class HMarkEntry:
    """Local homology data of one complex at one p-subgroup class.

    degree is the unique degree carrying homology of the Brauer chain,
    homology_dim its dimension, character the normalizer character of the
    homology when that dimension is one.  defined is False off the mode's
    domain (weak mode outside the vanishing classes, endosplit-resolution
    mode at contractible classes); an undefined entry still records its
    concentration data when there is any, informationally.  Only defined
    entries enter verdicts and stable comparison."""

    class_index: int
    class_id: str
    defined: bool
    degree: Optional[int] = None
    homology_dim: Optional[int] = None
    character: Optional[Character] = None

    def to_json(self) -> dict:
        return {
            "class": self.class_id,
            "defined": self.defined,
            "degree": self.degree,
            "homology_dim": self.homology_dim,
            "character": None if self.character is None
            else [int(v) for v in self.character.values],
        }


@dataclass
class HMarkReport:
    """h-marks and local homology characters across the p-subgroup classes.

    mode "weak" defines entries exactly on the vanishing classes of the
    context, "plain" is weak with the zero context (every class is a
    vanishing class), "endosplit" defines them everywhere.  Entries are
    indexed by class, in table order."""

    mode: str
    group: SubgroupRef
    p: int
    entries: tuple[HMarkEntry, ...]

    def entry(self, i: int) -> HMarkEntry:
        return self.entries[i]

    def degree_of(self, i: int) -> int:
        e = self.entries[i]
        if not e.defined or e.degree is None:
            raise KeyError(f"h-mark undefined at class {i}")
        return e.degree

    def h_values(self) -> dict[int, int]:
        """Every recorded concentration degree keyed by class index; the
        superclass-function content of the report.  Includes informational
        entries from off the mode's domain."""
        return {e.class_index: e.degree for e in self.entries
                if e.degree is not None}

    def characters(self) -> dict[int, Character]:
        return {e.class_index: e.character for e in self.entries
                if e.character is not None}

    def same_marks(self, other: "HMarkReport") -> bool:
        """Entrywise equality of degrees, homology dimensions and
        characters; reports must describe the same group and prime."""
        if self.group != other.group or self.p != other.p:
            raise GroupMismatch("h-mark reports over different settings")
        if self.mode != other.mode or len(self.entries) != len(other.entries):
            return False
        for a, b in zip(self.entries, other.entries):
            if a.defined != b.defined:
                return False
            if not a.defined:
                continue
            if a.degree != b.degree or a.homology_dim != b.homology_dim:
                return False
            av = None if a.character is None else a.character.values
            bv = None if b.character is None else b.character.values
            if av != bv:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "group": self.group.name,
            "p": self.p,
            "entries": [e.to_json() for e in self.entries],
        }


@dataclass
class EndoVerdict:
    """Outcome of one endotriviality check.

    certificate is plain data, ordered for byte-stable serialization: the
    per-class evidence when the check is local, the summand bookkeeping when
    it is direct, and the names of the failing classes either way.  entries
    carries the local scan for report building and is not serialized."""

    prop: str
    holds: bool
    certificate: dict
    cap_complex: Optional[ChainComplex] = None
    entries: Optional[tuple[HMarkEntry, ...]] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {"property": self.prop, "holds": self.holds,
               "certificate": self.certificate}
        if self.cap_complex is not None:
            out["cap"] = {str(n): self.cap_complex.term(n).dim
                          for n in self.cap_complex.support()}
        return out


# ---------------------------------------------------------------------------
# shared internals


def _guard(x, ctx: RelProjContext) -> None:
    if x.group != ctx.group:
        raise GroupMismatch("endotriviality test across groups")
    if x.p != ctx.p:
        raise FieldMismatch("endotriviality test across fields")


def _require_divisible(ctx: RelProjContext) -> None:
    if not ctx.abs_p_divisible:
        raise NotAbsolutelyPDivisible(
            "endotriviality needs a zero or absolutely p-divisible context")


_TRIVSRC_CACHE: dict[tuple, bool] = {}


def _term_is_trivial_source(m: KGModule, table: PSubgroupTable,
                            config: EngineConfig) -> bool:
    if m.dim == 0 or m.trivial_source_hint:
        return True
    key = (m.struct_key(), config)
    hit = _TRIVSRC_CACHE.get(key)
    if hit is None:
        report = decompose(m, config)
        hit = all(has_trivial_source(report.summands[cls[0]].module, table, config)
                  for cls in report.classes)
        _TRIVSRC_CACHE[key] = hit
    return hit


def _require_p_permutation_terms(c: ChainComplex, table: PSubgroupTable,
                                 config: EngineConfig) -> None:
    for n in c.support():
        if not _term_is_trivial_source(c.term(n), table, config):
            raise NotPPermutation(
                f"term of {c.label} in degree {n} has a summand "
                "without trivial source")


def _scan(c: ChainComplex, table: PSubgroupTable, indices: Iterable[int],
          config: EngineConfig) -> list[tuple[int, ChainComplex, dict[int, int]]]:
    """Brauer chain and homology profile per requested class, in the given
    order regardless of worker count."""
    idx = list(indices)

    def one(i: int) -> tuple[int, ChainComplex, dict[int, int]]:
        chain = brauer_chain(c, table.class_reps[i]).complex
        return i, chain, homology_dims(chain)

    if config.jobs > 1 and len(idx) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(one, idx))
    return [one(i) for i in idx]


def _profile_json(prof: dict[int, int]) -> dict[str, int]:
    return {str(n): prof[n] for n in sorted(prof)}


def _entry(i: int, table: PSubgroupTable, chain: ChainComplex,
           prof: dict[int, int], defined: bool = True) -> HMarkEntry:
    cid = table.rep_id(i)
    if len(prof) != 1:
        return HMarkEntry(i, cid, defined)
    (deg, dim), = prof.items()
    char = character1d(homology(chain, deg).module) if dim == 1 else None
    return HMarkEntry(i, cid, defined, deg, dim, char)


def _square_affordable(c: ChainComplex, config: EngineConfig) -> bool:
    # the cross-check gate reads the total dimension of the tensor square
    t = c.total_dim()
    return t * t <= config.cross_check_dim_cap


def _square_min_model(c: ChainComplex, config: EngineConfig) -> ChainComplex:
    return strip_contractibles(tensor_complexes(dual_complex(c), c), config)


def _square_shape(c: ChainComplex,
                  ctx: RelProjContext) -> tuple[list[ChainComplex], list[ChainComplex]]:
    """Indecomposable summands of the minimal endomorphism complex, split
    into copies of the trivial module in degree zero and everything else."""
    e = _square_min_model(c, ctx.config)
    pieces = chain_decompose(e, ctx.config)
    unit = one_term(trivial_module(c.group, c.p))
    triv, rest = [], []
    for piece in pieces:
        if (piece.total_dim() == 1 and piece.support() == [0]
                and chain_iso_test(piece, unit, ctx.config) is not None):
            triv.append(piece)
        else:
            rest.append(piece)
    return triv, rest


def _module_split_shape(m: KGModule,
                        ctx: RelProjContext) -> tuple[int, list[dict]]:
    """(multiplicity of the trivial summand, data of summands that are
    neither trivial nor projective relative to the context)."""
    if m.dim == 0:
        return 0, []
    report = decompose(m, ctx.config)
    triv = 0
    bad: list[dict] = []
    for cls in report.classes:
        rep = report.summands[cls[0]].module
        if rep.dim == 1 and character1d(rep).is_trivial():
            triv += len(cls)
        elif not is_relatively_projective(rep, ctx).holds:
            bad.append({"dim": rep.dim, "multiplicity": len(cls)})
    return triv, bad


def _direct_weak(c: ChainComplex, ctx: RelProjContext) -> bool:
    """Definition route: one trivial degree-zero summand in the minimal
    endomorphism complex, every term of every other summand V-projective."""
    triv, rest = _square_shape(c, ctx)
    if len(triv) != 1:
        return False
    for piece in rest:
        for n in piece.support():
            if not is_relatively_projective(piece.term(n), ctx).holds:
                return False
    return True


def _direct_endosplit(c: ChainComplex, config: EngineConfig) -> bool:
    """Definition route: contractible, or homology in one degree with a
    split endomorphism complex."""
    if is_contractible(c, config):
        return True
    if len(homology_dims(c)) != 1:
        return False
    return is_split(tensor_complexes(dual_complex(c), c), config)


def _form_tensor_square(c: ChainComplex, ctx: RelProjContext) -> bool:
    """Concentration route: the minimal endomorphism complex is a single
    degree-zero module splitting as trivial plus V-projective."""
    e = _square_min_model(c, ctx.config)
    if e.support() != [0]:
        return False
    triv, bad = _module_split_shape(e.term(0), ctx)
    return triv == 1 and not bad


# ---------------------------------------------------------------------------
# checks


def check_weak(c: ChainComplex, ctx: RelProjContext) -> EndoVerdict:
    """Weak endotriviality relative to the context module.

    Local route: at every vanishing class, the Brauer chain has homology
    concentrated in exactly one degree with dimension one.  With the zero
    context every class vanishes and the verdict is plain endotriviality.
    Classes outside the vanishing set never influence the verdict; their
    entries are still recorded (flagged undefined) whenever the local
    homology happens to concentrate, so reports stay informative there."""
    _guard(c, ctx)
    _require_divisible(ctx)
    _require_p_permutation_terms(c, ctx.table, ctx.config)
    table, config = ctx.table, ctx.config
    mode = "plain" if ctx.module.dim == 0 else "weak"
    scan = _scan(c, table, range(len(table.class_reps)), config)
    vanishing = set(ctx.vanishing)
    rows, failures, entries = [], [], []
    ok_local = True
    for i, chain, prof in scan:
        if i not in vanishing:
            entries.append(_entry(i, table, chain, prof, defined=False))
            continue
        ok = len(prof) == 1 and next(iter(prof.values())) == 1
        rows.append({"class": table.rep_id(i),
                     "homology": _profile_json(prof), "ok": ok})
        if not ok:
            ok_local = False
            failures.append(table.rep_id(i))
        entries.append(_entry(i, table, chain, prof))
    cross: Optional[bool] = None
    if ctx.is_p_permutation:
        holds, route = ok_local, "local"
        if _square_affordable(c, config):
            try:
                cross = _direct_weak(c, ctx)
            except (CapExceeded, Indeterminate):
                cross = None
        if cross is not None and cross != holds:
            raise EngineError(
                "local detection and the stripped endomorphism complex "
                f"disagree on weak endotriviality of {c.label}")
    else:
        holds, route = _direct_weak(c, ctx), "tensor-square"
    cert = {"mode": mode, "route": route, "local": rows,
            "failures": failures, "cross_checked": cross is not None}
    return EndoVerdict("weak", holds, cert, entries=tuple(entries))


def check_endosplit_resolution(c: ChainComplex,
                               table: Optional[PSubgroupTable] = None,
                               config: EngineConfig = DEFAULT_CONFIG) -> EndoVerdict:
    """Whether c is a shifted endosplit resolution.

    Local route: at every p-subgroup class the Brauer chain is contractible
    or has nonzero homology in exactly one degree.  Direct route, asserted
    whenever the tensor square is affordable: homology of c sits in one
    degree and dual(c) (x) c is a split complex."""
    if table is None:
        table = p_subgroup_table(c.group, c.p, config)
    _require_p_permutation_terms(c, table, config)
    scan = _scan(c, table, range(len(table.class_reps)), config)
    rows, failures, entries = [], [], []
    holds = True
    for i, chain, prof in scan:
        cid = table.rep_id(i)
        if len(prof) == 1:
            (deg, dim), = prof.items()
            rows.append({"class": cid, "status": "concentrated",
                         "degree": deg, "homology_dim": dim})
            entries.append(_entry(i, table, chain, prof))
        elif is_contractible(chain, config):
            rows.append({"class": cid, "status": "contractible"})
            entries.append(HMarkEntry(i, cid, False))
        else:
            holds = False
            rows.append({"class": cid, "status": "spread",
                         "homology": _profile_json(prof)})
            failures.append(cid)
            entries.append(HMarkEntry(i, cid, True))
    cross: Optional[bool] = None
    if _square_affordable(c, config):
        try:
            cross = _direct_endosplit(c, config)
        except (CapExceeded, Indeterminate):
            cross = None
    if cross is not None and cross != holds:
        raise EngineError(
            "per-class homology and the split tensor square disagree on "
            f"the endosplit property of {c.label}")
    cert = {"local": rows, "failures": failures,
            "cross_checked": cross is not None}
    return EndoVerdict("endosplit_resolution", holds, cert,
                       entries=tuple(entries))


def check_esplit_trivial(c: ChainComplex, ctx: RelProjContext) -> EndoVerdict:
    """Endosplit-trivial relative to the context: the strongest grading.

    Three equivalent forms are computed and their agreement asserted.  The
    local form demands homology concentrated in one degree at every class,
    of dimension one wherever the context vanishes.  The resolution form
    runs the endosplit check and tests the unique homology module.  The
    tensor-square form inspects the minimal endomorphism complex.  For a
    trivial-source context the local form decides and the others are
    asserted when they fit under the caps; otherwise the tensor-square form
    decides alone."""
    _guard(c, ctx)
    _require_divisible(ctx)
    table, config = ctx.table, ctx.config
    _require_p_permutation_terms(c, table, config)
    scan = _scan(c, table, range(len(table.class_reps)), config)
    vanishing = set(ctx.vanishing)
    rows, failures, entries = [], [], []
    ok_local = True
    for i, chain, prof in scan:
        cid = table.rep_id(i)
        if len(prof) == 1:
            (deg, dim), = prof.items()
            ok = dim == 1 if i in vanishing else True
            rows.append({"class": cid, "degree": deg, "homology_dim": dim,
                         "dim_one_required": i in vanishing, "ok": ok})
        else:
            ok = False
            rows.append({"class": cid, "degree": None,
                         "homology": _profile_json(prof), "ok": False})
        if not ok:
            ok_local = False
            failures.append(cid)
        entries.append(_entry(i, table, chain, prof))
    forms: dict[str, Optional[bool]] = {}
    if ctx.is_p_permutation:
        holds, route = ok_local, "local"
        forms["local"] = ok_local
        try:
            forms["resolution_module"] = _form_resolution_module(c, ctx)
        except (CapExceeded, Indeterminate):
            forms["resolution_module"] = None
        if _square_affordable(c, config):
            try:
                forms["tensor_square"] = _form_tensor_square(c, ctx)
            except (CapExceeded, Indeterminate):
                forms["tensor_square"] = None
        else:
            forms["tensor_square"] = None
        for name, val in forms.items():
            if val is not None and val != holds:
                raise EngineError(
                    f"esplit-trivial forms disagree on {c.label}: "
                    f"{name} says {val}, local says {holds}")
    else:
        holds, route = _form_tensor_square(c, ctx), "tensor-square"
        forms = {"local": None, "resolution_module": None,
                 "tensor_square": holds}
    cert = {"route": route, "forms": forms, "local": rows,
            "failures": failures}
    return EndoVerdict("esplit_trivial", holds, cert, entries=tuple(entries))


def _form_resolution_module(c: ChainComplex, ctx: RelProjContext) -> Optional[bool]:
    """None when the homology module is too large to test under the
    cross-check cap; the cheap resolution half still decides failures."""
    res = check_endosplit_resolution(c, table=ctx.table, config=ctx.config)
    if not res.holds:
        return False
    prof = homology_dims(c)
    if len(prof) != 1:
        return False
    (deg, _), = prof.items()
    m = homology(c, deg).module
    if m.dim * m.dim > ctx.config.cross_check_dim_cap:
        return None
    return check_module_endotrivial(m, ctx).holds


def check_strong(c: ChainComplex, ctx: RelProjContext) -> EndoVerdict:
    """Strong endotriviality: the minimal endomorphism complex is the
    trivial module in degree zero plus a complement that is V-projective as
    a complex.  No local shortcut exists for this grading, so the direct
    route always decides; a missing trivial summand raises rather than
    failing quietly, since every other certificate field would be vacuous."""
    _guard(c, ctx)
    _require_divisible(ctx)
    _require_p_permutation_terms(c, ctx.table, ctx.config)
    triv, rest = _square_shape(c, ctx)
    if not triv:
        raise NoTrivialSummand(
            f"endomorphism complex of {c.label} has no trivial summand "
            "in degree zero")
    cert: dict = {"trivial_multiplicity": len(triv)}
    if len(triv) > 1:
        cert["complement_projective"] = None
        cert["failures"] = ["trivial summand repeats"]
        return EndoVerdict("strong", False, cert)
    comp = sum_complexes(rest) if rest else zero_complex(c.group, c.p)
    pv = is_relatively_projective(comp, ctx)
    cert["complement_projective"] = pv.holds
    cert["complement_route"] = pv.route
    cert["failures"] = [] if pv.holds else ["complement is not projective "
                                            "relative to the context"]
    return EndoVerdict("strong", pv.holds, cert)


def check_module_endotrivial(m: KGModule, ctx: RelProjContext) -> EndoVerdict:
    """Endotriviality of a module relative to the context: dual(m) (x) m
    splits as one copy of the trivial module plus V-projectives."""
    _guard(m, ctx)
    _require_divisible(ctx)
    triv, bad = _module_split_shape(tensor_module(dual_module(m), m), ctx)
    holds = triv == 1 and not bad
    cert = {"trivial_multiplicity": triv, "nonprojective_summands": bad}
    return EndoVerdict("module_endotrivial", holds, cert)


# ---------------------------------------------------------------------------
# caps, stable classes, reports


_MODE_CHECKS: dict[str, Callable] = {
    "weak": check_weak,
    "strong": check_strong,
    "esplit": check_esplit_trivial,
}


def _passes(mode: str, x: ChainComplex, ctx: RelProjContext) -> bool:
    try:
        return _MODE_CHECKS[mode](x, ctx).holds
    except NoTrivialSummand:
        return False


def cap(c: ChainComplex, ctx: RelProjContext, mode: str = "strong") -> ChainComplex:
    """The unique indecomposable summand of c that carries the class.

    Every other chain summand must vanish in the mode's stable category:
    after stripping contractibles, degreewise V-projective terms in weak
    mode, a V-projective complex in the stronger modes.  Violations raise,
    they are never absorbed."""
    if mode not in _MODE_CHECKS:
        raise ValueError(f"unknown mode {mode!r}")
    if not _passes(mode, c, ctx):
        raise EngineError(f"cap requested for a complex failing the {mode} check")
    pieces = chain_decompose(c, ctx.config)
    if len(pieces) == 1:
        return pieces[0]
    winners, rest = [], []
    for piece in pieces:
        (winners if _passes(mode, piece, ctx) else rest).append(piece)
    if len(winners) != 1:
        raise EngineError(
            f"{len(winners)} summands pass the {mode} check; the cap must "
            "be unique")
    for piece in rest:
        stripped = strip_contractibles(piece, ctx.config)
        if stripped.is_zero():
            continue
        if mode == "weak":
            ok = all(is_relatively_projective(stripped.term(n), ctx).holds
                     for n in stripped.support())
        else:
            ok = is_relatively_projective(stripped, ctx).holds
        if not ok:
            raise EngineError(
                "a non-cap summand fails to vanish in the stable category")
    return winners[0]


def hmarks(c: ChainComplex, ctx: RelProjContext, mode: str = "weak") -> HMarkReport:
    """The h-mark report of a complex passing the mode's check.

    Weak mode reports on the vanishing classes (all classes when the
    context is zero); endosplit mode runs the esplit-trivial check and
    reports on every class."""
    if mode in ("weak", "plain"):
        verdict = check_weak(c, ctx)
        rmode = "plain" if ctx.module.dim == 0 else "weak"
    elif mode == "endosplit":
        verdict = check_esplit_trivial(c, ctx)
        rmode = "endosplit"
    else:
        raise ValueError(f"unknown h-mark mode {mode!r}")
    if not verdict.holds:
        raise EngineError(
            f"h-marks need the {rmode} check to hold; failing classes: "
            f"{verdict.certificate['failures']}")
    assert verdict.entries is not None
    return HMarkReport(mode=rmode, group=ctx.group, p=ctx.p,
                       entries=verdict.entries)


def _weak_normal_form(c: ChainComplex, ctx: RelProjContext) -> tuple[int, KGModule]:
    """(degree, module) left after stripping contractible chain summands and
    V-projective module summands; for a weakly endotrivial complex with zero
    h-marks this concentrates in one degree and has trivial source."""
    e = strip_contractibles(c, ctx.config)
    found: Optional[tuple[int, KGModule]] = None
    for n in e.support():
        s = strip_projective_summands(e.term(n), ctx)
        if s.dim == 0:
            continue
        if found is not None:
            raise EngineError("weak normal form spread over several degrees")
        found = (n, s)
    if found is None:
        raise EngineError("weak normal form vanished entirely")
    if not has_trivial_source(found[1], ctx.table, ctx.config):
        raise EngineError("weak normal form with zero h-marks must have "
                          "trivial source")
    return found


def stable_class_equal(c: ChainComplex, d: ChainComplex, ctx: RelProjContext,
                       mode: str = "strong") -> bool:
    """Whether two complexes agree in the mode's stable category.

    Strong and esplit classes compare caps up to chain isomorphism.  Weak
    classes are complete invariants of the h-mark report, so reports are
    compared; when both sets of marks are identically zero the torsion
    comparison is re-run through the weak normal forms and any disagreement
    raises."""
    if mode in ("strong", "esplit"):
        return chain_iso_test(cap(c, ctx, mode), cap(d, ctx, mode),
                              ctx.config) is not None
    if mode not in ("weak", "plain"):
        raise ValueError(f"unknown mode {mode!r}")
    if not ctx.is_p_permutation:
        raise NotPPermutation(
            "weak stable classes are compared through local data, which "
            "needs a trivial-source context module")
    rc = hmarks(c, ctx, "weak")
    rd = hmarks(d, ctx, "weak")
    equal = rc.same_marks(rd)
    all_zero = (all(e.degree == 0 for e in rc.entries if e.defined)
                and all(e.degree == 0 for e in rd.entries if e.defined))
    if all_zero:
        nc, nd = _weak_normal_form(c, ctx), _weak_normal_form(d, ctx)
        nf_equal = (nc[0] == nd[0]
                    and iso_test(nc[1], nd[1], ctx.config) is not None)
        if nf_equal != equal:
            raise EngineError("h-mark comparison and weak normal forms "
                              "disagree")
    return equal


def sum_endosplit_compatible(c: ChainComplex, d: ChainComplex,
                             table: Optional[PSubgroupTable] = None,
                             config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """Whether the direct sum of two endosplit resolutions is endosplit.

    Per class the Brauer chains must not be concentrated in two different
    degrees; a contractible side is compatible with anything.  The summed
    complex is checked outright as a built-in oracle and must agree."""
    if table is None:
        table = p_subgroup_table(c.group, c.p, config)
    vc = check_endosplit_resolution(c, table=table, config=config)
    vd = check_endosplit_resolution(d, table=table, config=config)
    if not (vc.holds and vd.holds):
        raise EngineError("sum compatibility is defined for endosplit "
                          "resolutions only")
    assert vc.entries is not None and vd.entries is not None
    compat = True
    for ea, eb in zip(vc.entries, vd.entries):
        if ea.defined and eb.defined and ea.degree != eb.degree:
            compat = False
            break
    vs = check_endosplit_resolution(sum_complexes([c, d]), table=table,
                                    config=config)
    if vs.holds != compat:
        raise EngineError("per-class compatibility and the summed endosplit "
                          "check disagree")
    return compat
