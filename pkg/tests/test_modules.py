"""Module-layer tests.

Oracles are independent of the module code: permutation-module facts are
computed from raw group data (orbit counts, double-coset counts, fixed
points of group actions on cosets), so Brauer quotients, fixed spaces and
Hom dimensions are checked against combinatorics rather than against the
linear algebra under test.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endochain.config import DEFAULT_CONFIG, EngineConfig
from endochain.errors import (
    GroupMismatch,
    InvalidCharacter,
    InvalidRepresentation,
    NotPSubgroup,
)
from endochain.groups import (
    named_group,
    pcompose,
    pinv,
    subgroup_from_elements,
    subgroup_from_generators,
    trivial_subgroup,
)
from endochain.linalg import FpMatrix, eye, rref_pack, zeros
from endochain.modules import (
    Character,
    ModuleHom,
    brauer,
    character1d,
    cokernel,
    conjugate_module,
    dsum_modules,
    dual_module,
    enumerate_characters,
    fixed_point_basis,
    from_matrices,
    hom_module,
    hom_space,
    identity_hom,
    induce_hom,
    induce_module,
    inflate_module,
    iso_test,
    kernel_module,
    perm_module_on_cosets,
    regular_module,
    restrict_module,
    sign_character,
    sub_module,
    subquotient,
    tensor_module,
    trivial_character,
    trivial_module,
    zero_hom,
)

# ---------------------------------------------------------------------------
# oracles


def coset_space(group, sub):
    """Left cosets as frozensets, in the order of the canonical transversal."""
    top = group.top if hasattr(group, "top") else group
    reps = top.left_transversal(sub)
    return [frozenset(pcompose(t, h) for h in sub.elements) for t in reps]


def orbit_count(acting_elements, points, act):
    """Number of orbits of the given elements acting on points via act."""
    remaining = set(range(len(points)))
    orbits = 0
    while remaining:
        seed = min(remaining)
        frontier = {seed}
        orbit = {seed}
        while frontier:
            nxt = set()
            for i in frontier:
                for g in acting_elements:
                    j = points.index(act(g, points[i]))
                    if j not in orbit:
                        orbit.add(j)
                        nxt.add(j)
            frontier = nxt
        remaining -= orbit
        orbits += 1
    return orbits


def fixed_cosets(group, sub, psub):
    """Indices of cosets of sub fixed by every element of psub."""
    cosets = coset_space(group, sub)
    out = []
    for i, c in enumerate(cosets):
        moved = {frozenset(pcompose(g, x) for x in c) for g in psub.elements}
        if moved == {c}:
            out.append(i)
    return out


def brute_double_coset_count(group, a, b):
    """Count A\\G/B by partitioning the elements directly."""
    remaining = set(group.elements)
    count = 0
    while remaining:
        g = min(remaining)
        block = {pcompose(pcompose(x, g), y) for x in a.elements for y in b.elements}
        remaining -= block
        count += 1
    return count


def full_homomorphism_check(mod):
    """Check A(g)A(h) = A(gh) over the complete multiplication table."""
    for g in mod.group.elements:
        for h in mod.group.elements:
            assert mod.matrix_of(g) @ mod.matrix_of(h) == mod.matrix_of(pcompose(g, h))


def s3():
    return named_group("s3")


def c3_in(group):
    from endochain.groups import porder
    x = next(x for x in group.elements if porder(x) == 3)
    return subgroup_from_generators(group, [x], name="C3")


def c2_in(group):
    for g in group.elements:
        if g != group.identity and pcompose(g, g) == group.identity:
            return subgroup_from_elements(group, {group.identity, g})
    raise AssertionError


# ---------------------------------------------------------------------------
# construction and validation


def test_regular_module_is_homomorphism():
    g = s3()
    m = regular_module(g.top, 3)
    assert m.dim == 6
    full_homomorphism_check(m)
    for mat in m.gen_mats:
        assert np.all(mat.a.sum(axis=0) == 1)


def test_coset_module_matches_coset_action():
    g = s3()
    c3 = c3_in(g)
    m = perm_module_on_cosets(g.top, c3, 3)
    assert m.dim == 2
    full_homomorphism_check(m)
    cosets = coset_space(g.top, c3)
    for i, gen in enumerate(g.generators):
        for j, c in enumerate(cosets):
            target = frozenset(pcompose(gen, x) for x in c)
            assert m.gen_mats[i].a[cosets.index(target), j] == 1


def test_invalid_representation_rejected():
    g = s3()
    bad = [eye(2, 3), FpMatrix(3, np.array([[1, 1], [0, 1]]))]
    with pytest.raises(InvalidRepresentation):
        from_matrices(g.top, 3, bad)


def test_module_hom_validation():
    g = s3()
    m = perm_module_on_cosets(g.top, c2_in(g), 3)
    with pytest.raises(InvalidRepresentation):
        ModuleHom(m, trivial_module(g.top, 3), FpMatrix(3, np.array([[1, 0, 0]])))
    aug = ModuleHom(m, trivial_module(g.top, 3), FpMatrix(3, np.ones((1, 3), dtype=np.int64)))
    assert not aug.is_zero()


# ---------------------------------------------------------------------------
# characters


def test_character_counts_match_abelianization():
    assert len(enumerate_characters(s3().top, 3)) == 2
    c3 = named_group("c3")
    assert len(enumerate_characters(c3.top, 3)) == 1
    q8 = named_group("q8")
    assert len(enumerate_characters(q8.top, 3)) == 4
    assert len(enumerate_characters(s3().top, 2)) == 1


def test_sign_character_on_s3():
    chi = sign_character(s3().top, 3)
    assert not chi.is_trivial()
    assert chi.mul(chi).is_trivial()
    m = chi.module()
    assert character1d(m).values == chi.values
    assert character1d(tensor_module(m, m)).is_trivial()


def test_character_order_constraint():
    c3 = named_group("c3")
    with pytest.raises(InvalidCharacter):
        Character(c3.top, 3, (2,))  # 2 = -1 has order 2, not dividing 3
    chi = Character(c3.top, 7, (2,))  # 2^3 = 1 mod 7
    assert chi.value(pcompose(c3.generators[0], c3.generators[0])) == 4


# ---------------------------------------------------------------------------
# functors


def test_dual_of_permutation_module_is_itself():
    g = s3()
    m = perm_module_on_cosets(g.top, c2_in(g), 3)
    d = dual_module(m)
    assert d.gen_mats == m.gen_mats


def test_dual_of_character_is_inverse():
    chi = sign_character(s3().top, 5)
    d = dual_module(chi.module())
    assert character1d(d).mul(chi).is_trivial()


def test_tensor_dimensions_and_values():
    g = s3()
    a = perm_module_on_cosets(g.top, c2_in(g), 3)
    b = regular_module(g.top, 3)
    t = tensor_module(a, b)
    assert t.dim == 18
    full_homomorphism_check(t)
    for i in range(len(g.generators)):
        assert np.array_equal(t.gen_mats[i].a, np.kron(a.gen_mats[i].a, b.gen_mats[i].a))


def test_induction_from_trivial_and_self():
    g = s3()
    c3 = c3_in(g)
    k_c3 = trivial_module(c3, 3)
    ind = induce_module(k_c3, g.top)
    coset = perm_module_on_cosets(g.top, c3, 3)
    assert ind.gen_mats == coset.gen_mats
    k_1 = trivial_module(trivial_subgroup(g), 3)
    assert induce_module(k_1, g.top).gen_mats == regular_module(g.top, 3).gen_mats


def test_frobenius_reciprocity_dimensions():
    g = s3()
    c2 = c2_in(g)
    m = trivial_module(c2, 2)
    n = regular_module(g.top, 2)
    left = hom_space(induce_module(m, g.top), n)
    right = hom_space(m, restrict_module(n, c2))
    assert len(left) == len(right)


def test_restrict_then_matrices_agree():
    g = s3()
    m = regular_module(g.top, 3)
    c3 = c3_in(g)
    r = restrict_module(m, c3)
    assert r.matrix_of(c3.generators[0]) == m.matrix_of(c3.generators[0])
    full_homomorphism_check(r)


def test_conjugate_module_group_and_action():
    g = s3()
    c2 = c2_in(g)
    m = trivial_module(c2, 3)
    x = g.generators[0]
    cm = conjugate_module(m, x)
    assert cm.group == c2.conjugate(x)
    assert cm.gen_mats == m.gen_mats


def test_inflation_of_quotient_character_is_sign():
    from endochain.groups import quotient_realization
    g = s3()
    c3 = c3_in(g)
    q, qmap = quotient_realization(g.top, c3)
    chars = enumerate_characters(q.top, 3)
    nontriv = [c for c in chars if not c.is_trivial()]
    assert len(nontriv) == 1
    infl = inflate_module(nontriv[0].module(), g.top, qmap)
    assert character1d(infl).values == sign_character(g.top, 3).values


def test_induced_hom_is_blockwise():
    g = s3()
    c2 = c2_in(g)
    f = ModuleHom(regular_module(c2, 3), trivial_module(c2, 3),
                  FpMatrix(3, np.ones((1, 2), dtype=np.int64)))
    big = induce_hom(f, g.top)
    assert big.source.dim == 6 and big.target.dim == 3
    assert big.mat.rank() == 3


# ---------------------------------------------------------------------------
# submodules and subquotients


def test_augmentation_kernel_of_regular_module():
    g = s3()
    m = regular_module(g.top, 3)
    aug = ModuleHom(m, trivial_module(g.top, 3),
                    FpMatrix(3, np.ones((1, 6), dtype=np.int64)))
    ker, incl = kernel_module(aug)
    assert ker.dim == 5
    full_homomorphism_check(ker)
    assert (aug.mat @ incl.mat).is_zero()


def test_cokernel_of_inclusion():
    g = named_group("c2")
    m = regular_module(g.top, 2)
    socle = FpMatrix(2, np.array([[1], [1]]))
    sub, incl = sub_module(m, socle)
    assert sub.dim == 1
    cok = cokernel(incl)
    assert cok.module.dim == 1
    assert character1d(cok.module).is_trivial()


def test_subquotient_requires_stability():
    g = s3()
    m = regular_module(g.top, 3)
    unstable = FpMatrix(3, np.eye(6, dtype=np.int64)[:, :1])
    with pytest.raises(InvalidRepresentation):
        sub_module(m, unstable)


def test_subquotient_transport_roundtrip():
    g = named_group("c2")
    m = regular_module(g.top, 2)
    full = eye(2, 2)
    rad = FpMatrix(2, np.array([[1], [1]]))
    sq = subquotient(m, full, rad)
    assert sq.module.dim == 1
    ident = sq.transport(identity_hom(m), sq)
    assert ident.is_identity()
    assert (sq.pi @ sq.iota).is_identity()


# ---------------------------------------------------------------------------
# fixed points and the Brauer construction


def test_fixed_points_match_orbit_counts():
    g = s3()
    c3 = c3_in(g)
    c2 = c2_in(g)
    for sub in (c3, c2):
        for by in (c3, c2, g.top):
            m = perm_module_on_cosets(g.top, sub, 3)
            cosets = coset_space(g.top, sub)
            expect = orbit_count(by.generators or [g.identity], cosets,
                                 lambda x, c: frozenset(pcompose(x, y) for y in c))
            assert fixed_point_basis(m, by).cols == expect


@pytest.mark.parametrize("subname,pname,p", [
    ("C3", "C3", 3),   # C3 normal: both cosets fixed
    ("C2", "C3", 3),   # C3 rotates the three cosets freely
    ("C2", "C2", 2),   # one coset fixed by the C2 itself
])
def test_brauer_dimension_matches_fixed_cosets(subname, pname, p):
    g = s3()
    named = {
        "C3": c3_in(g),
        "C2": c2_in(g),
    }
    sub, psub = named[subname], named[pname]
    m = perm_module_on_cosets(g.top, sub, p)
    data = brauer(m, psub)
    assert data.module.dim == len(fixed_cosets(g, sub, psub))
    assert data.normalizer == psub.normalizer_in(g.top)
    full_homomorphism_check(data.module)


def test_brauer_of_free_module_vanishes():
    g = s3()
    c3 = c3_in(g)
    m = regular_module(g.top, 3)
    assert brauer(m, c3).module.dim == 0
    c2g = named_group("c2")
    m2 = regular_module(c2g.top, 2)
    assert brauer(m2, c2g.top).module.dim == 0


def test_brauer_of_trivial_module_is_trivial():
    q8 = named_group("q8")
    z = subgroup_from_elements(
        q8, {q8.identity, next(g for g in q8.elements
                               if g != q8.identity and pcompose(g, g) == q8.identity)},
        name="Z")
    data = brauer(trivial_module(q8.top, 2), z)
    assert data.module.dim == 1
    assert character1d(data.module).is_trivial()


def test_brauer_at_trivial_subgroup_is_identity():
    g = s3()
    m = perm_module_on_cosets(g.top, c2_in(g), 3)
    data = brauer(m, trivial_subgroup(g))
    assert data.module.dim == m.dim
    assert data.normalizer == g.top
    for i, x in enumerate(data.module.group.generators):
        assert data.module.gen_mats[i] == m.matrix_of(x)


def test_brauer_central_involution_on_q8_cosets():
    q8 = named_group("q8")
    minus1 = next(g for g in q8.elements if g != q8.identity and pcompose(g, g) == q8.identity)
    z = subgroup_from_elements(q8, {q8.identity, minus1}, name="Z")
    c4 = None
    for g in q8.elements:
        from endochain.groups import porder
        if porder(g) == 4:
            c4 = subgroup_from_generators(q8, [g], name="C4")
            break
    m = perm_module_on_cosets(q8.top, c4, 2)
    data = brauer(m, z)
    assert data.module.dim == len(fixed_cosets(q8, c4, z))
    assert data.module.dim == 2


def test_brauer_rejects_non_p_subgroup():
    g = s3()
    c2 = c2_in(g)
    m = trivial_module(g.top, 3)
    with pytest.raises(NotPSubgroup):
        brauer(m, c2)


def test_brauer_transport_of_augmentation():
    g = s3()
    c3 = c3_in(g)
    m = perm_module_on_cosets(g.top, c3, 3)
    k = trivial_module(g.top, 3)
    aug = ModuleHom(m, k, FpMatrix(3, np.ones((1, 2), dtype=np.int64)))
    bm = brauer(m, c3)
    bk = brauer(k, c3)
    t = bm.transport(aug, bk)
    assert t.shape == (1, 2)
    assert t.rank() == 1
    ident = bm.transport(identity_hom(m), bm)
    assert ident.is_identity()


# ---------------------------------------------------------------------------
# Hom spaces


def test_hom_dimension_equals_double_cosets():
    g = s3()
    c3 = c3_in(g)
    c2 = c2_in(g)
    for p in (2, 3):
        for a in (c3, c2, g.top, trivial_subgroup(g)):
            for b in (c3, c2, g.top):
                ma = perm_module_on_cosets(g.top, a, p)
                mb = perm_module_on_cosets(g.top, b, p)
                want = brute_double_coset_count(g, a, b)
                assert len(hom_space(ma, mb)) == want, (a.name, b.name, p)


def test_hom_basis_is_equivariant_everywhere():
    g = s3()
    c2 = c2_in(g)
    ma = perm_module_on_cosets(g.top, c2, 2)
    mb = regular_module(g.top, 2)
    basis = hom_space(ma, mb)
    vecs = np.stack([h.a.ravel() for h in basis])
    assert rref_pack(FpMatrix(2, vecs.T)).rank == len(basis)
    for h in basis:
        for x in g.elements:
            assert h @ ma.matrix_of(x) == mb.matrix_of(x) @ h


def test_hom_module_fixed_points_are_homs():
    g = s3()
    a = perm_module_on_cosets(g.top, c2_in(g), 3)
    b = regular_module(g.top, 3)
    hm = hom_module(a, b)
    assert fixed_point_basis(hm, g.top).cols == len(hom_space(a, b))


def test_hom_space_of_characters():
    g = s3()
    chi = sign_character(g.top, 3).module()
    k = trivial_module(g.top, 3)
    assert len(hom_space(chi, k)) == 0
    assert len(hom_space(chi, chi)) == 1
    assert len(hom_space(zero_hom(chi, k).source, chi)) == 1


# ---------------------------------------------------------------------------
# isomorphism testing


def test_iso_test_finds_basis_change():
    g = s3()
    m = dsum_modules([perm_module_on_cosets(g.top, c2_in(g), 3),
                      sign_character(g.top, 3).module()])
    rng = np.random.default_rng(7)
    while True:
        b = FpMatrix(3, rng.integers(0, 3, size=(4, 4), dtype=np.int64))
        if b.rank() == 4:
            break
    binv = b.inv()
    twisted = from_matrices(g.top, 3, [b @ mat @ binv for mat in m.gen_mats], label="twist")
    wit = iso_test(m, twisted)
    assert wit is not None
    ModuleHom(m, twisted, wit)  # validates equivariance
    assert wit.rank() == 4


def test_iso_test_rejects_different_characters():
    g = s3()
    assert iso_test(sign_character(g.top, 3).module(), trivial_module(g.top, 3)) is None


def test_iso_test_exhaustive_rejects_nonisomorphic():
    v4 = named_group("c2xc2")
    a, b = v4.generators
    ha = subgroup_from_generators(v4, [a], name="A")
    hb = subgroup_from_generators(v4, [b], name="B")
    hd = subgroup_from_generators(v4, [pcompose(a, b)], name="D")
    m1 = dsum_modules([perm_module_on_cosets(v4.top, ha, 2),
                       perm_module_on_cosets(v4.top, hb, 2)])
    m2 = dsum_modules([perm_module_on_cosets(v4.top, hd, 2),
                       trivial_module(v4.top, 2), trivial_module(v4.top, 2)])
    cfg = EngineConfig(iso_sample_budget=8)
    assert iso_test(m1, m2, cfg) is None


def test_iso_test_regular_self():
    g = named_group("d8")
    m = regular_module(g.top, 2)
    wit = iso_test(m, m)
    assert wit is not None and wit.rank() == 8


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5))
def test_matrix_of_is_multiplicative(i, j):
    g = s3()
    m = regular_module(g.top, 3)
    x, y = g.elements[i], g.elements[j]
    assert m.matrix_of(x) @ m.matrix_of(y) == m.matrix_of(pcompose(x, y))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 100))
def test_random_hom_combination_is_equivariant(seed):
    g = s3()
    a = perm_module_on_cosets(g.top, c2_in(g), 2)
    basis = hom_space(a, a)
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, 2, size=len(basis))
    mat = zeros(a.dim, a.dim, 2)
    for c, h in zip(coeffs, basis):
        if c:
            mat = mat + h
    ModuleHom(a, a, mat)


def test_group_mismatch_guards():
    g = s3()
    q8 = named_group("q8")
    with pytest.raises(GroupMismatch):
        tensor_module(trivial_module(g.top, 3), trivial_module(q8.top, 3))
    with pytest.raises(GroupMismatch):
        iso_test(trivial_module(g.top, 3), trivial_module(q8.top, 3))
