"""Endotriviality gradings, h-marks, caps, and stable comparison.

Expected values are derived ahead of the implementation under test:

- Homology dimensions come from the rank formula
  dim H_n = dim C_n - rank d_n - rank d_{n+1}, evaluated here straight from
  the differential matrices; every concentration claim below is checked
  against it.
- For the augmentation complex kG -> k the only homology is the
  augmentation kernel, of dimension |G| - 1 in degree 1.  A nontrivial
  p-subgroup fixes no group element under left multiplication, so at every
  nontrivial class the Brauer chain collapses to k in degree 0.  Hence the
  plain check passes exactly when |G| = 2 and the weak check with regular
  context passes for every p-group.
- The norm map kC2 -> kC2 has rank one, leaving one dimension of homology
  in each degree: concentrated nowhere, so every grading must fail and the
  certificate must show both degrees.  The short exact sequence
  k -> kC2 -> k is exact but does not split, so at the trivial class it is
  neither concentrated nor contractible.
- Sign characters are parities of permutations, computed here from cycle
  counts, never read off the module.
- Tensoring adds h-marks and dualizing negates them, because homology is
  multiplicative over a field and taking Brauer chains commutes with both
  operations on trivial-source terms.
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endochain.complexes import (
    ChainComplex,
    chain_iso_test,
    cone,
    from_matrices_complex,
    homology_dims,
    identity_chain_map,
    one_term,
    shift_complex,
    sum_complexes,
    tensor_complexes,
)
from endochain.complexes import dual_complex as cdual
from endochain.config import DEFAULT_CONFIG, EngineConfig
from endochain.endotrivial import (
    cap,
    check_endosplit_resolution,
    check_esplit_trivial,
    check_module_endotrivial,
    check_strong,
    check_weak,
    hmarks,
    stable_class_equal,
    sum_endosplit_compatible,
)
from endochain.errors import (
    EngineError,
    GroupMismatch,
    NotAbsolutelyPDivisible,
    NoTrivialSummand,
    NotPPermutation,
)
from endochain.groups import named_group
from endochain.linalg import FpMatrix
from endochain.modules import (
    KGModule,
    dsum_modules,
    regular_module,
    trivial_module,
    zero_module,
)
from endochain.relproj import make_context


# ---------------------------------------------------------------------------
# independent oracles and fixtures


def rank_homology(c: ChainComplex) -> dict[int, int]:
    """Homology dimensions from matrix ranks alone."""
    out = {}
    for n in c.support():
        h = c.term(n).dim - c.diff_matrix(n).rank() - c.diff_matrix(n + 1).rank()
        if h:
            out[n] = h
    return out


def _parity(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for i in range(len(perm)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return (-1) ** (len(perm) - cycles)


def aug_complex(gname: str, p: int) -> ChainComplex:
    g = named_group(gname).top
    m = regular_module(g, p)
    k = trivial_module(g, p)
    row = FpMatrix(p, np.ones((1, m.dim), dtype=np.int64))
    return from_matrices_complex(g, p, {1: m, 0: k}, {1: row},
                                 label=f"aug_{gname}")


def norm_complex_c2() -> ChainComplex:
    g = named_group("c2").top
    m = regular_module(g, 2)
    norm = FpMatrix(2, np.array([[1, 1], [1, 1]]))
    return from_matrices_complex(g, 2, {1: m, 0: m}, {1: norm}, label="norm")


def exact_ses_c2() -> ChainComplex:
    g = named_group("c2").top
    m = regular_module(g, 2)
    k = trivial_module(g, 2)
    incl = FpMatrix(2, np.array([[1], [1]]))
    augm = FpMatrix(2, np.array([[1, 1]]))
    return from_matrices_complex(g, 2, {2: k, 1: m, 0: k},
                                 {2: incl, 1: augm}, label="ses")


def sign_module_s3() -> KGModule:
    g = named_group("s3").top
    mats = [FpMatrix(3, np.array([[_parity(s) % 3]], dtype=np.int64))
            for s in g.generators]
    return KGModule(g, 3, mats, label="sign")


def band_module_v4() -> KGModule:
    """Indecomposable of dimension 4 over the Klein group without trivial
    source; the standard witness that a context can fall outside the local
    route."""
    i2 = np.eye(2, dtype=np.int64)
    jj = np.array([[0, 1], [0, 0]], dtype=np.int64)
    zz = np.zeros((2, 2), dtype=np.int64)
    g = named_group("c2xc2").top
    return KGModule(g, 2, [FpMatrix(2, np.block([[i2, i2], [zz, i2]])),
                           FpMatrix(2, np.block([[i2, jj], [zz, i2]]))],
                    label="band")


def plain_ctx(gname: str, p: int, config: EngineConfig = DEFAULT_CONFIG):
    g = named_group(gname).top
    return make_context(zero_module(g, p), config=config)


def regular_ctx(gname: str, p: int, config: EngineConfig = DEFAULT_CONFIG):
    g = named_group(gname).top
    return make_context(regular_module(g, p), config=config)


def test_rank_oracle_agreement():
    for c in (aug_complex("c2", 2), aug_complex("c2xc2", 2),
              aug_complex("s3", 3), norm_complex_c2(), exact_ses_c2(),
              tensor_complexes(aug_complex("c2", 2), aug_complex("c2", 2))):
        assert homology_dims(c) == rank_homology(c)


def test_augmentation_homology_is_the_kernel():
    for gname, p, order in (("c2", 2, 2), ("c2xc2", 2, 4), ("s3", 3, 6)):
        assert rank_homology(aug_complex(gname, p)) == {1: order - 1}


# ---------------------------------------------------------------------------
# the weak check


def test_plain_check_on_c2_augmentation():
    c = aug_complex("c2", 2)
    ctx = plain_ctx("c2", 2)
    v = check_weak(c, ctx)
    assert v.holds and bool(v)
    assert v.certificate["mode"] == "plain"
    assert v.certificate["route"] == "local"
    assert v.certificate["failures"] == []
    assert v.certificate["cross_checked"]
    # the augmentation kernel is spanned by the orbit sum, a trivial module
    rep = hmarks(c, ctx, "weak")
    assert rep.mode == "plain"
    assert rep.h_values() == {0: 1, 1: 0}
    assert all(ch.is_trivial() for ch in rep.characters().values())
    assert [e.class_index for e in rep.entries] == [0, 1]
    assert rep.entry(0).homology_dim == 1


def test_plain_check_fails_beyond_order_two():
    c = aug_complex("c2xc2", 2)
    ctx = plain_ctx("c2xc2", 2)
    v = check_weak(c, ctx)
    assert not v.holds
    assert v.certificate["failures"] == [ctx.table.rep_id(0)]
    row = v.certificate["local"][0]
    assert row["homology"] == {"1": 3}
    with pytest.raises(EngineError):
        hmarks(c, ctx, "weak")


def test_weak_check_with_regular_context_on_klein_augmentation():
    c = aug_complex("c2xc2", 2)
    ctx = regular_ctx("c2xc2", 2)
    v = check_weak(c, ctx)
    assert v.holds
    assert v.certificate["mode"] == "weak"
    assert v.certificate["cross_checked"]
    rep = hmarks(c, ctx, "weak")
    # the trivial class is outside the domain; its concentration in degree 1
    # is still recorded informationally, every certified mark is zero
    assert not rep.entry(0).defined
    marks = {i: 0 for i in range(1, len(ctx.table.class_reps))}
    marks[0] = 1
    assert rep.h_values() == marks
    with pytest.raises(KeyError):
        rep.degree_of(0)


def test_context_must_be_absolutely_divisible():
    g = named_group("c2").top
    ctx = make_context(trivial_module(g, 2))
    with pytest.raises(NotAbsolutelyPDivisible):
        check_weak(aug_complex("c2", 2), ctx)


def test_nonpermutation_terms_are_rejected():
    band = band_module_v4()
    ctx = regular_ctx("c2xc2", 2)
    with pytest.raises(NotPPermutation):
        check_weak(one_term(band), ctx)
    with pytest.raises(NotPPermutation):
        check_endosplit_resolution(one_term(band))


def test_direct_route_decides_for_nonpermutation_context():
    """A context without trivial source turns off the local criterion; the
    stripped endomorphism complex must still reach a verdict."""
    ctx = make_context(band_module_v4())
    assert not ctx.is_p_permutation
    v = check_weak(aug_complex("c2xc2", 2), ctx)
    assert v.holds
    assert v.certificate["route"] == "tensor-square"
    assert not v.certificate["cross_checked"]


# ---------------------------------------------------------------------------
# negative controls


def test_norm_complex_fails_weak_everywhere():
    c = norm_complex_c2()
    ctx = plain_ctx("c2", 2)
    v = check_weak(c, ctx)
    assert not v.holds
    rows = {r["class"]: r for r in v.certificate["local"]}
    assert rows["P0"]["homology"] == {"0": 1, "1": 1}
    assert rows["P1"]["homology"] == {}
    assert v.certificate["failures"] == ["P0", "P1"]


def test_norm_complex_is_not_endosplit():
    v = check_endosplit_resolution(norm_complex_c2())
    assert not v.holds
    rows = {r["class"]: r for r in v.certificate["local"]}
    assert rows["P0"]["status"] == "spread"
    assert rows["P0"]["homology"] == {"0": 1, "1": 1}
    assert rows["P1"]["status"] == "contractible"
    assert v.certificate["failures"] == ["P0"]
    assert v.certificate["cross_checked"]


def test_norm_complex_fails_esplit_and_strong():
    c = norm_complex_c2()
    ctx = plain_ctx("c2", 2)
    assert not check_esplit_trivial(c, ctx).holds
    with pytest.raises(NoTrivialSummand):
        check_strong(c, ctx)


def test_exact_unsplit_sequence_is_not_endosplit():
    v = check_endosplit_resolution(exact_ses_c2())
    assert not v.holds
    rows = {r["class"]: r for r in v.certificate["local"]}
    # exact, so no homology anywhere, yet not contractible: spread at P0
    assert rows["P0"]["status"] == "spread" and rows["P0"]["homology"] == {}
    assert v.certificate["cross_checked"]


# ---------------------------------------------------------------------------
# endosplit and esplit-trivial


def test_esplit_forms_agree_on_c2_augmentation():
    v = check_esplit_trivial(aug_complex("c2", 2), plain_ctx("c2", 2))
    assert v.holds
    assert v.certificate["route"] == "local"
    assert v.certificate["forms"] == {"local": True, "resolution_module": True,
                                      "tensor_square": True}


def test_esplit_forms_agree_on_klein_augmentation():
    v = check_esplit_trivial(aug_complex("c2xc2", 2), regular_ctx("c2xc2", 2))
    assert v.holds
    assert v.certificate["forms"] == {"local": True, "resolution_module": True,
                                      "tensor_square": True}
    # trivial class carries the 3-dimensional kernel but sits outside the
    # vanishing set, so no dimension-one demand applies there
    row = v.certificate["local"][0]
    assert row["homology_dim"] == 3 and not row["dim_one_required"]


def test_endosplit_check_accepts_augmentations():
    for gname, p in (("c2", 2), ("c2xc2", 2), ("s3", 3)):
        assert check_endosplit_resolution(aug_complex(gname, p)).holds


# ---------------------------------------------------------------------------
# strong check and module endotriviality


def test_strong_check_on_augmentations():
    v = check_strong(aug_complex("c2", 2), plain_ctx("c2", 2))
    assert v.holds
    assert v.certificate["trivial_multiplicity"] == 1
    assert v.certificate["complement_projective"]

    v4 = check_strong(aug_complex("c2xc2", 2), regular_ctx("c2xc2", 2))
    assert v4.holds and v4.certificate["failures"] == []


def test_strong_needs_a_trivial_summand():
    g = named_group("c2").top
    with pytest.raises(NoTrivialSummand):
        check_strong(one_term(regular_module(g, 2)), plain_ctx("c2", 2))


def test_module_endotriviality():
    g = named_group("c2").top
    ctx = plain_ctx("c2", 2)
    assert check_module_endotrivial(trivial_module(g, 2), ctx).holds
    free = check_module_endotrivial(regular_module(g, 2), ctx)
    assert not free.holds
    assert free.certificate["trivial_multiplicity"] == 0
    doubled = check_module_endotrivial(
        dsum_modules([trivial_module(g, 2), trivial_module(g, 2)]), ctx)
    assert not doubled.holds
    assert doubled.certificate["trivial_multiplicity"] == 4
    assert check_module_endotrivial(sign_module_s3(), plain_ctx("s3", 3)).holds


# ---------------------------------------------------------------------------
# h-mark reports


def test_hmark_report_domains_and_serialization():
    c = aug_complex("c2", 2)
    plain = hmarks(c, plain_ctx("c2", 2), "weak")
    weak = hmarks(c, regular_ctx("c2", 2), "weak")
    endo = hmarks(c, plain_ctx("c2", 2), "endosplit")
    assert plain.h_values() == {0: 1, 1: 0}
    assert weak.h_values() == {0: 1, 1: 0}
    assert not weak.entry(0).defined
    assert endo.h_values() == {0: 1, 1: 0}
    assert plain.mode == "plain" and weak.mode == "weak" and endo.mode == "endosplit"
    blob = json.dumps(plain.to_json(), sort_keys=True)
    again = json.dumps(hmarks(aug_complex("c2", 2), plain_ctx("c2", 2),
                              "weak").to_json(), sort_keys=True)
    assert blob == again
    assert plain.to_json()["entries"][0]["class"] == "P0"


def test_same_marks_comparisons():
    c = aug_complex("c2", 2)
    ctx = plain_ctx("c2", 2)
    assert hmarks(c, ctx).same_marks(hmarks(aug_complex("c2", 2), ctx))
    k0 = one_term(trivial_module(named_group("c2").top, 2))
    assert not hmarks(c, ctx).same_marks(hmarks(k0, ctx))
    # weak and plain reports live on different domains
    assert not hmarks(c, regular_ctx("c2", 2)).same_marks(hmarks(c, ctx))
    with pytest.raises(GroupMismatch):
        other = one_term(trivial_module(named_group("s3").top, 3))
        hmarks(c, ctx).same_marks(hmarks(other, plain_ctx("s3", 3)))


def test_sign_homology_carries_the_parity_character():
    rep = hmarks(one_term(sign_module_s3()), plain_ctx("s3", 3))
    assert rep.h_values() == {0: 0, 1: 0}
    # each local homology lives over the normalizer of its class, so the
    # parity oracle is evaluated on that subgroup's own generators
    for ch in rep.characters().values():
        assert ch.values == tuple(_parity(s) % 3 for s in ch.group.generators)
        assert not ch.is_trivial()


def test_tensor_adds_marks_and_dual_negates_them():
    c = aug_complex("c2", 2)
    ctx = plain_ctx("c2", 2)
    base = hmarks(c, ctx).h_values()
    square = hmarks(tensor_complexes(c, c), ctx).h_values()
    assert square == {i: 2 * d for i, d in base.items()}
    flipped = hmarks(cdual(c), ctx).h_values()
    assert flipped == {i: -d for i, d in base.items()}


# ---------------------------------------------------------------------------
# caps


def test_cap_strips_junk_down_to_the_augmentation():
    ctx = regular_ctx("c2", 2)
    g = ctx.group
    c = aug_complex("c2", 2)
    free0 = one_term(regular_module(g, 2))
    junk = cone(identity_chain_map(free0))
    total = sum_complexes([c, junk, free0])
    for mode in ("weak", "strong"):
        got = cap(total, ctx, mode)
        assert chain_iso_test(got, c, ctx.config) is not None
    # a free module in a single degree spreads homology over two degrees of
    # the endomorphism complex, which the esplit grading does not absorb
    with pytest.raises(EngineError):
        cap(total, ctx, "esplit")
    pure = sum_complexes([c, junk])
    assert chain_iso_test(cap(pure, ctx, "esplit"), c, ctx.config) is not None


def test_cap_refuses_a_failing_complex():
    g = named_group("c2").top
    k = trivial_module(g, 2)
    ctx = plain_ctx("c2", 2)
    doubled = sum_complexes([one_term(k), one_term(k, 1)])
    for mode in ("weak", "strong"):
        with pytest.raises(EngineError):
            cap(doubled, ctx, mode)


# ---------------------------------------------------------------------------
# stable classes


def test_weak_class_collapse_for_regular_context():
    """Against the regular context the augmentation complex and the bare
    trivial module fall into one weak class, while the strong and esplit
    classes keep them apart."""
    ctx = regular_ctx("c2", 2)
    c = aug_complex("c2", 2)
    k0 = one_term(trivial_module(ctx.group, 2))
    assert stable_class_equal(c, k0, ctx, "weak")
    assert not stable_class_equal(c, k0, ctx, "strong")
    assert not stable_class_equal(c, k0, ctx, "esplit")
    assert not stable_class_equal(c, shift_complex(k0, 1), ctx, "weak")


def test_weak_class_distinguishes_torsion():
    ctx = plain_ctx("s3", 3)
    k0 = one_term(trivial_module(ctx.group, 3))
    sgn = one_term(sign_module_s3())
    assert stable_class_equal(k0, k0, ctx, "weak")
    assert not stable_class_equal(sgn, k0, ctx, "weak")


def test_weak_class_needs_trivial_source_context():
    ctx = make_context(band_module_v4())
    c = aug_complex("c2xc2", 2)
    with pytest.raises(NotPPermutation):
        stable_class_equal(c, c, ctx, "weak")


# ---------------------------------------------------------------------------
# sums of endosplit resolutions


def test_sum_compatibility_tracks_local_degrees():
    c = aug_complex("c2", 2)
    g = c.group
    k = trivial_module(g, 2)
    assert sum_endosplit_compatible(c, c)
    # degree 0 at the full group against degree 1 there: incompatible
    assert not sum_endosplit_compatible(c, one_term(k, 1))
    # a contractible side never obstructs
    assert sum_endosplit_compatible(c, cone(identity_chain_map(one_term(k))))
    with pytest.raises(EngineError):
        sum_endosplit_compatible(c, norm_complex_c2())


# ---------------------------------------------------------------------------
# generated complexes: the two routes must agree


_CROSS_CFG = EngineConfig(cross_check_dim_cap=400)


def _atoms_c2() -> dict:
    g = named_group("c2").top
    k = trivial_module(g, 2)
    return {
        "k0": one_term(k),
        "k1": one_term(k, 1),
        "aug": aug_complex("c2", 2),
        "coaug": cdual(aug_complex("c2", 2)),
        "free": one_term(regular_module(g, 2)),
        "cone": cone(identity_chain_map(one_term(k))),
    }


@st.composite
def small_c2_complexes(draw) -> ChainComplex:
    atoms = _atoms_c2()
    names = draw(st.lists(st.sampled_from(sorted(atoms)), min_size=1,
                          max_size=2))
    parts = [shift_complex(atoms[n], draw(st.integers(-1, 1))) for n in names]
    c = parts[0] if len(parts) == 1 else sum_complexes(parts)
    if draw(st.booleans()) and c.total_dim() <= 3:
        c = tensor_complexes(c, atoms[draw(st.sampled_from(["aug", "k0"]))])
    return c


@settings(max_examples=25, deadline=None)
@given(small_c2_complexes())
def test_routes_agree_on_generated_complexes(c):
    """check_weak and check_endosplit_resolution raise EngineError whenever
    the local scan and the stripped endomorphism complex disagree, so a
    clean pass with the cross-check active is the agreement assertion."""
    for ctx in (plain_ctx("c2", 2, _CROSS_CFG), regular_ctx("c2", 2, _CROSS_CFG)):
        v = check_weak(c, ctx)
        assert v.certificate["cross_checked"] == (
            c.total_dim() ** 2 <= _CROSS_CFG.cross_check_dim_cap)
    ve = check_endosplit_resolution(c, config=_CROSS_CFG)
    assert ve.certificate["cross_checked"] == (
        c.total_dim() ** 2 <= _CROSS_CFG.cross_check_dim_cap)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["k0", "aug"]), st.sampled_from(["k0", "aug"]),
       st.integers(-1, 1), st.integers(-1, 1))
def test_marks_are_additive_under_tensor(a, b, sa, sb):
    atoms = _atoms_c2()
    ctx = plain_ctx("c2", 2)
    c = shift_complex(atoms[a], sa)
    d = shift_complex(atoms[b], sb)
    hc = hmarks(c, ctx).h_values()
    hd = hmarks(d, ctx).h_values()
    ht = hmarks(tensor_complexes(c, d), ctx).h_values()
    assert ht == {i: hc[i] + hd[i] for i in hc}
    assert hmarks(cdual(c), ctx).h_values() == {i: -v for i, v in hc.items()}


def test_reports_do_not_depend_on_worker_count():
    c = aug_complex("c2xc2", 2)
    seq = hmarks(c, regular_ctx("c2xc2", 2), "weak")
    par = hmarks(c, regular_ctx("c2xc2", 2, EngineConfig(jobs=2)), "weak")
    assert seq.same_marks(par)
    assert json.dumps(seq.to_json()) == json.dumps(par.to_json())
