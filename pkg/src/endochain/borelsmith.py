"""Borel-Smith conditions for superclass functions on p-subgroup classes.

A superclass function assigns an integer to each conjugacy class of
p-subgroups, possibly only on part of them.  The conditions are imposed
section by section: for p-subgroups H normal in L inside the normalizer N
of H, the isomorphism type of L/H, together with witnesses above it,
selects the condition.  Quotient types are recognized from the order of
L/H and coset order statistics alone; no quotient group is ever built:

  Cp        |L/H| = p; for odd p the two values must agree mod 2
  C2_in_C4  |L/H| = 2 and some L' between L and N has L'/H cyclic of
            order 4; the two values must agree mod 2
  C2_in_Q8  |L/H| = 2 and some L'/H is quaternion of order 8; its center
            is forced to be L/H, and the values must agree mod 4
  CpxCp     |L/H| = p^2 with every nonidentity coset of order p; the
            value at H plus p times the value at L equals the sum over
            the p + 1 intermediate classes

A quaternion witness shadows a cyclic one, matching the strength of the
conditions.  Larger cyclic or quaternion sections impose nothing new, so
they are not enumerated separately: their conditions follow from the
rank-one and rank-two sections listed here, applied inside subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .config import DEFAULT_CONFIG, EngineConfig
from .endotrivial import EndoVerdict, HMarkReport
from .errors import EngineError, GroupMismatch
from .groups import (
    Perm,
    PSubgroupTable,
    SubgroupRef,
    p_subgroup_table,
    pcompose,
)
from .relproj import RelProjContext

# coset order multisets that pin down the two order relevant quotient
# shapes among groups of their size
_C4_STATS = (1, 2, 4, 4)
_Q8_STATS = (1, 2, 4, 4, 4, 4, 4, 4)


@dataclass
class SuperclassFn:
    """An integer-valued function on p-subgroup classes, keyed by class
    index into its table; classes outside the mapping are simply not in
    the domain and checks skip whatever needs them."""

    table: PSubgroupTable
    values: dict[int, int]

    def __post_init__(self):
        n = len(self.table)
        for i in self.values:
            if not 0 <= i < n:
                raise EngineError(f"superclass value at unknown class {i}")

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.values)

    def value_at(self, i: int) -> int:
        return self.values[i]

    def to_json(self) -> dict:
        return {
            "group": self.table.group.name,
            "p": self.table.p,
            "values": {self.table.rep_id(i): int(self.values[i])
                       for i in sorted(self.values)},
        }

    @classmethod
    def from_json(cls, data: dict, table: PSubgroupTable) -> "SuperclassFn":
        if data.get("p") != table.p:
            raise EngineError("superclass function for a different prime")
        by_id = {table.rep_id(i): i for i in range(len(table))}
        vals = {}
        for key, v in data["values"].items():
            if key not in by_id:
                raise EngineError(f"unknown class id {key!r}")
            vals[by_id[key]] = int(v)
        return cls(table, vals)


def superclass_from_marks(report: HMarkReport,
                          table: PSubgroupTable) -> SuperclassFn:
    """The degree table of an h-mark report as a superclass function."""
    if report.group != table.group or report.p != table.p:
        raise GroupMismatch("h-mark report over a different setting")
    return SuperclassFn(table, dict(report.h_values()))


@dataclass(frozen=True)
class SectionWitness:
    """One section H normal in L imposing a condition, with N the full
    normalizer of H.  order_p_intermediates lists the subgroups strictly
    between H and L for the rank-two type and is empty otherwise."""

    bottom: SubgroupRef
    top: SubgroupRef
    normalizer: SubgroupRef
    quotient_type: str
    order_p_intermediates: tuple[SubgroupRef, ...] = ()


def _coset_order(x: Perm, small: SubgroupRef) -> int:
    k, y = 1, x
    while y not in small:
        y = pcompose(y, x)
        k += 1
    return k


def _coset_reps(big: SubgroupRef, small: SubgroupRef) -> list[Perm]:
    seen: set[frozenset] = set()
    reps = []
    for x in big.elements:
        key = frozenset(pcompose(x, h) for h in small.elements)
        if key not in seen:
            seen.add(key)
            reps.append(x)
    return reps

def _quotient_stats(big: SubgroupRef, small: SubgroupRef) -> tuple[int, ...]:
    return tuple(sorted(_coset_order(x, small) for x in _coset_reps(big, small)))


def enumerate_sections(table: PSubgroupTable,
                       config: EngineConfig = DEFAULT_CONFIG) -> list[SectionWitness]:
    """All rank-one and rank-two sections of the p-subgroup lattice, one
    per (class of H, class of L, type, intermediate classes) combination,
    in table order."""
    p = table.p
    subs = list(table.all_subgroups.values())
    out: list[SectionWitness] = []
    seen: set[tuple] = set()
    for i, h in enumerate(table.class_reps):
        norm = table.normalizers[i]
        inside = [s for s in subs
                  if s.order > h.order and s.is_subgroup_of(norm)
                  and h.is_subgroup_of(s)]
        for l in inside:
            index = l.order // h.order
            if index == p:
                qt = "Cp"
                if p == 2:
                    overs = [s for s in inside if l.is_subgroup_of(s)]
                    if any(s.order == 8 * h.order
                           and _quotient_stats(s, h) == _Q8_STATS
                           for s in overs):
                        qt = "C2_in_Q8"
                    elif any(s.order == 4 * h.order
                             and _quotient_stats(s, h) == _C4_STATS
                             for s in overs):
                        qt = "C2_in_C4"
                mids: tuple[SubgroupRef, ...] = ()
            elif index == p * p:
                stats = _quotient_stats(l, h)
                if stats != (1,) + (p,) * (p * p - 1):
                    continue
                qt = "CpxCp"
                mids = tuple(s for s in inside
                             if s.order == p * h.order and s.is_subgroup_of(l))
                if len(mids) != p + 1:
                    raise EngineError(
                        f"rank-two section with {len(mids)} intermediates")
            else:
                continue
            key = (i, table.rep_of(l)[0], qt,
                   tuple(sorted(table.rep_of(m)[0] for m in mids)))
            if key in seen:
                continue
            seen.add(key)
            out.append(SectionWitness(h, l, norm, qt, mids))
    return out


def _check_sections(f: SuperclassFn, sections: Sequence[SectionWitness],
                    enforce: Optional[Iterable[int]] = None) -> EndoVerdict:
    table = f.table
    allowed = None if enforce is None else set(enforce)
    rows, failures = [], []
    holds = True
    for s in sections:
        hi = table.rep_of(s.bottom)[0]
        li = table.rep_of(s.top)[0]
        mids = sorted(table.rep_of(m)[0] for m in s.order_p_intermediates)
        row = {"H": table.rep_id(hi), "L": table.rep_id(li),
               "type": s.quotient_type}
        needed = [hi, li] + mids
        if allowed is not None and hi not in allowed:
            row["status"] = "skipped"
            row["reason"] = "outside the enforced classes"
            rows.append(row)
            continue
        if any(i not in f.values for i in needed):
            row["status"] = "skipped"
            row["reason"] = "value missing from the domain"
            rows.append(row)
            continue
        fh, fl = f.values[hi], f.values[li]
        if s.quotient_type == "CpxCp":
            lhs = fh + table.p * fl
            rhs = sum(f.values[i] for i in mids)
            ok = lhs == rhs
            row.update(lhs=lhs, rhs=rhs,
                       intermediates=[table.rep_id(i) for i in mids])
        elif s.quotient_type == "C2_in_Q8":
            ok = (fh - fl) % 4 == 0
            row.update(difference=fh - fl, modulus=4)
        elif s.quotient_type == "C2_in_C4" or table.p != 2:
            ok = (fh - fl) % 2 == 0
            row.update(difference=fh - fl, modulus=2)
        else:
            # a bare index-2 section imposes nothing
            ok = True
            row["condition"] = "none"
        row["status"] = "ok" if ok else "violated"
        rows.append(row)
        if not ok:
            holds = False
            failures.append(f"{row['H']} < {row['L']} ({s.quotient_type})")
    cert = {"sections": rows, "failures": failures}
    return EndoVerdict("borel_smith", holds, cert)


def check_borel_smith(f: SuperclassFn,
                      sections: Optional[Sequence[SectionWitness]] = None,
                      config: EngineConfig = DEFAULT_CONFIG) -> EndoVerdict:
    """Whether f satisfies every Borel-Smith condition its domain can
    express; sections needing missing values are reported as skipped."""
    if sections is None:
        sections = enumerate_sections(f.table, config)
    return _check_sections(f, sections)


def check_borel_smith_at_vanishing(f: SuperclassFn, ctx: RelProjContext,
                                   sections: Optional[Sequence[SectionWitness]] = None
                                   ) -> EndoVerdict:
    """The partial Borel-Smith check relative to a context: only sections
    whose bottom subgroup class is in the context's vanishing set are
    enforced, the rest are reported as skipped."""
    if ctx.group != f.table.group or ctx.p != f.table.p:
        raise GroupMismatch("context and superclass function disagree")
    if sections is None:
        sections = enumerate_sections(f.table, ctx.config)
    v = _check_sections(f, sections, enforce=ctx.vanishing)
    v.certificate["enforced_classes"] = [f.table.rep_id(i)
                                         for i in sorted(ctx.vanishing)]
    return v
