"""Structure of finite-dimensional matrix algebras over GF(p).

The inputs are bases of subalgebras of M_n(GF(p)), typically endomorphism
rings of modules or chain complexes.  Provides the Jacobson radical (trace
forms built from characteristic polynomial coefficients, valid in small
characteristic), a locality certificate through the quotient by the radical,
and splitting idempotents found from minimal polynomials of algebra elements.

Idempotents produced here are exact: they are polynomials in a single matrix
evaluated through a Bezout identity, not numerical approximations.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
import sympy

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import DecompositionError, Indeterminate
from .linalg import FpMatrix, eye, mulmod, rref_pack, solve

# ---------------------------------------------------------------------------
# characteristic and minimal polynomials mod p


def charpoly_modp(a: np.ndarray, p: int) -> np.ndarray:
    """Coefficients of det(xI - a) mod p, highest degree first (monic)."""
    n = a.shape[0]
    if n == 0:
        return np.array([1], dtype=np.int64)
    h = a.astype(np.int64) % p
    h = h.copy()
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if h[i, j] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            h[[j + 1, piv]] = h[[piv, j + 1]]
            h[:, [j + 1, piv]] = h[:, [piv, j + 1]]
        inv = pow(int(h[j + 1, j]), p - 2, p)
        for i in range(j + 2, n):
            f = (int(h[i, j]) * inv) % p
            if f:
                h[i] = (h[i] - f * h[j + 1]) % p
                h[:, j + 1] = (h[:, j + 1] + f * h[:, i]) % p
    # charpoly of an upper Hessenberg matrix by the standard recurrence
    polys = [np.array([1], dtype=np.int64)]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = np.zeros(k + 1, dtype=np.int64)
        cur[:k] += prev                      # x * prev
        cur[1:k + 1] -= int(h[k - 1, k - 1]) * prev
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = (prod * int(h[i, i - 1])) % p
            if prod == 0:
                break
            term = (int(h[i - 1, k - 1]) * prod) % p
            if term:
                cur[k + 1 - i:] -= term * polys[i - 1]
        polys.append(cur % p)
    return polys[n]


def elementary_symmetric_from_charpoly(coeffs: np.ndarray, k: int, p: int) -> int:
    """e_k of the eigenvalues, read off the charpoly (monic, high first)."""
    n = len(coeffs) - 1
    if k > n:
        return 0
    sign = 1 if k % 2 == 0 else p - 1
    return (sign * int(coeffs[k])) % p


def minpoly_modp(a: np.ndarray, p: int) -> np.ndarray:
    """Monic minimal polynomial of a mod p, coefficients highest first."""
    n = a.shape[0]
    if n == 0:
        return np.array([1], dtype=np.int64)
    amod = a.astype(np.int64) % p
    flat_dim = n * n
    power = np.eye(n, dtype=np.int64)
    cols = [power.ravel().copy()]
    while True:
        power = mulmod(power, amod, p)
        stacked = FpMatrix(p, np.array(cols, dtype=np.int64).T)
        target = FpMatrix(p, power.ravel().reshape(flat_dim, 1))
        sol = solve(stacked, target)
        if sol is not None:
            k = len(cols)
            out = np.zeros(k + 1, dtype=np.int64)
            out[0] = 1
            for i in range(k):
                # x^k - sum c_i x^i, with c_i the solved coordinates
                out[k - i] = (-int(sol[0].a[i, 0])) % p
            return out
        cols.append(power.ravel().copy())


def poly_eval_matrix(coeffs: np.ndarray, a: np.ndarray, p: int) -> np.ndarray:
    """Evaluate a polynomial (monic-agnostic, high first) at a matrix, mod p."""
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in coeffs:
        out = mulmod(out, a, p)
        out = (out + int(c) % p * np.eye(n, dtype=np.int64)) % p
    return out


# ---------------------------------------------------------------------------
# span bookkeeping


def _pack(mats: Sequence[np.ndarray]) -> np.ndarray:
    if not mats:
        return np.zeros((0, 0), dtype=np.int64)
    return np.stack([m.ravel() for m in mats], axis=1)


def span_basis(mats: Sequence[np.ndarray], p: int) -> list[np.ndarray]:
    """Reduce a list of matrices to an independent spanning sublist."""
    if not mats:
        return []
    shape = mats[0].shape
    packed = rref_pack(FpMatrix(p, _pack(mats))).image
    return [packed.a[:, j].reshape(shape) for j in range(packed.cols)]


def in_span(mats: Sequence[np.ndarray], target: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Coordinates of target in the span, or None."""
    if not mats:
        return None if target.any() else np.zeros(0, dtype=np.int64)
    sol = solve(FpMatrix(p, _pack(mats)),
                FpMatrix(p, target.ravel().reshape(-1, 1)))
    if sol is None:
        return None
    return sol[0].a[:, 0]


# ---------------------------------------------------------------------------
# radical


def algebra_radical(basis: Sequence[FpMatrix], p: int) -> list[FpMatrix]:
    """Basis of the Jacobson radical of the spanned algebra.

    Iterated radicals of the forms (x, y) -> e_{p^i}((xy)'s eigenvalues); the
    plain trace form alone is not enough when p <= n.  Over the prime field
    each form is honestly bilinear on the surviving subspace.
    """
    if not basis:
        return []
    n = basis[0].rows
    cur = [m.a for m in basis]
    i = 0
    while p ** i <= n and cur:
        d = len(cur)
        if i == 0:
            stack = np.stack(cur)
            form = np.einsum("iab,jba->ij", stack, stack) % p
        else:
            k = p ** i
            form = np.zeros((d, d), dtype=np.int64)
            for aidx in range(d):
                for bidx in range(d):
                    z = mulmod(cur[aidx], cur[bidx], p)
                    cp = charpoly_modp(z, p)
                    form[aidx, bidx] = elementary_symmetric_from_charpoly(cp, k, p)
        ker = rref_pack(FpMatrix(p, form)).kernel.a
        if ker.shape[1] == d:
            i += 1
            continue
        packed = _pack(cur)
        newpacked = mulmod(packed, ker, p)
        cur = span_basis([newpacked[:, j].reshape(n, n) for j in range(newpacked.shape[1])], p)
        i += 1
    return [FpMatrix(p, m) for m in cur]


def product_span(a: Sequence[FpMatrix], b: Sequence[FpMatrix], p: int) -> list[FpMatrix]:
    prods = [mulmod(x.a, y.a, p) for x in a for y in b]
    return [FpMatrix(p, m) for m in span_basis(prods, p)]


def is_nilpotent_span(mats: Sequence[FpMatrix], p: int) -> bool:
    cur = list(mats)
    while cur:
        nxt = product_span(cur, list(mats), p)
        if len(nxt) >= len(cur):
            return False
        cur = nxt
    return True


# ---------------------------------------------------------------------------
# locality


def _quotient_coords(full: Sequence[np.ndarray], rad: Sequence[np.ndarray], p: int):
    """Complement representatives for span(full)/span(rad) together with a
    coordinate map: vec -> coordinates in (radical basis + complement)."""
    packed_rad = [m for m in rad]
    chosen: list[np.ndarray] = []
    current = list(packed_rad)
    for m in full:
        if in_span(current, m, p) is None:
            chosen.append(m)
            current.append(m)
    return chosen, current


def quotient_is_commutative(full: Sequence[FpMatrix], rad: Sequence[FpMatrix], p: int) -> bool:
    reps, _ = _quotient_coords([m.a for m in full], [m.a for m in rad], p)
    radmats = [m.a for m in rad]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            comm = (mulmod(reps[i], reps[j], p) - mulmod(reps[j], reps[i], p)) % p
            if in_span(radmats, comm, p) is None:
                return False
    return True


def frobenius_fixed_dimension(full: Sequence[FpMatrix], rad: Sequence[FpMatrix],
                              p: int) -> tuple[int, list[np.ndarray]]:
    """Dimension (and preimage representatives) of the fixed space of x -> x^p
    on the commutative quotient algebra; counts its field factors."""
    reps, basis_with_rad = _quotient_coords([m.a for m in full], [m.a for m in rad], p)
    radmats = [m.a for m in rad]
    q = len(reps)
    if q == 0:
        return 0, []
    rows = []
    for rep in reps:
        out = np.eye(rep.shape[0], dtype=np.int64)
        e = p
        base = rep
        while e:
            if e & 1:
                out = mulmod(out, base, p)
            base = mulmod(base, base, p)
            e >>= 1
        diff = (out - rep) % p
        coords = in_span(radmats + reps, diff, p)
        if coords is None:
            raise DecompositionError("p-th power left the algebra span")
        rows.append(coords[len(radmats):] % p)
    fmat = FpMatrix(p, np.array(rows, dtype=np.int64).T)
    ker = rref_pack(fmat).kernel
    fixed_reps = []
    for j in range(ker.cols):
        combo = np.zeros_like(reps[0])
        for i in range(q):
            combo = (combo + int(ker.a[i, j]) * reps[i]) % p
        fixed_reps.append(combo)
    return ker.cols, fixed_reps


def is_local_algebra(basis: Sequence[FpMatrix], p: int) -> bool:
    """Certified locality: the quotient by the radical is a (commutative)
    finite division ring exactly when it is commutative with a 1-dimensional
    Frobenius-fixed subalgebra."""
    if not basis:
        return False
    rad = algebra_radical(basis, p)
    if len(basis) - len(rad) == 1:
        return True
    if not quotient_is_commutative(basis, rad, p):
        return False
    t, _ = frobenius_fixed_dimension(basis, rad, p)
    return t == 1


# ---------------------------------------------------------------------------
# splitting idempotents


def _sympoly(coeffs: np.ndarray, p: int):
    x = sympy.Symbol("x")
    return sympy.Poly([int(c) % p for c in coeffs], x, modulus=p)


def _idempotent_from_element(z: np.ndarray, p: int) -> Optional[np.ndarray]:
    """An exact idempotent in GF(p)[z] that is neither 0 nor 1, when the
    minimal polynomial of z has at least two distinct irreducible factors."""
    mu = minpoly_modp(z, p)
    poly = _sympoly(mu, p)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None
    g0, e0 = factors[0]
    primary = g0 ** e0
    rest = poly.quo(primary)
    u, _, h = primary.gcdex(rest)
    if not h.is_one:
        raise DecompositionError("primary factors are not coprime")
    # e = (u * primary) evaluated at z acts as 0 on the g0-block, 1 elsewhere
    prod = (u * primary).rem(poly)
    coeffs = np.array([int(c) % p for c in prod.all_coeffs()], dtype=np.int64)
    e = poly_eval_matrix(coeffs, z, p)
    if not e.any():
        return None
    if not ((e - np.eye(z.shape[0], dtype=np.int64)) % p).any():
        return None
    assert not ((mulmod(e, e, p) - e) % p).any(), "idempotent is not exact"
    return e


def find_splitting_idempotent(basis: Sequence[FpMatrix], p: int,
                              config: EngineConfig = DEFAULT_CONFIG,
                              salt: int = 0) -> Optional[FpMatrix]:
    """A nontrivial idempotent of the spanned algebra, or None when the
    algebra is certified local.

    Random elements are tried first; when the quotient by the radical is
    commutative with several field factors, Frobenius-fixed representatives
    give a deterministic fallback.  Raises Indeterminate only in the
    noncommutative corner where sampling runs out.
    """
    if not basis:
        return None
    d = len(basis)
    n = basis[0].rows
    if d == 1:
        return None
    stack = np.stack([m.a for m in basis])
    rng = np.random.default_rng((config.seed * 0x9E3779B1 + salt) % (2 ** 63))
    quick = min(8, config.fitting_attempts)
    for _ in range(quick):
        coeffs = rng.integers(0, p, size=d, dtype=np.int64)
        z = np.tensordot(coeffs, stack, axes=(0, 0)) % p
        e = _idempotent_from_element(z, p)
        if e is not None:
            return FpMatrix(p, e)
    rad = algebra_radical(basis, p)
    if len(basis) - len(rad) == 1:
        return None
    if quotient_is_commutative(basis, rad, p):
        t, fixed = frobenius_fixed_dimension(basis, rad, p)
        if t == 1:
            return None
        for rep in fixed:
            e = _idempotent_from_element(rep % p, p)
            if e is not None:
                return FpMatrix(p, e)
        # fixed reps can all be radical shifts of scalars; perturb pairwise
        for i in range(len(fixed)):
            for j in range(i + 1, len(fixed)):
                e = _idempotent_from_element((fixed[i] + fixed[j]) % p, p)
                if e is not None:
                    return FpMatrix(p, e)
        raise DecompositionError("commutative quotient with several factors "
                                 "yielded no splitting element")
    for _ in range(config.fitting_attempts - quick):
        coeffs = rng.integers(0, p, size=d, dtype=np.int64)
        z = np.tensordot(coeffs, stack, axes=(0, 0)) % p
        e = _idempotent_from_element(z, p)
        if e is not None:
            return FpMatrix(p, e)
    raise Indeterminate("no splitting idempotent found within the sampling budget")
