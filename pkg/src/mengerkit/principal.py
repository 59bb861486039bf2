"""Per-subset analyses: induced partitions, residues, class families, strongness.

Everything here is driven by a membership matrix S with one row per probe and
one column per element: S[k, g] says whether probe k sends g into the subset.
The probes are unary maps (kind "v"), argument vectors (kind "l", selector
vector first), or vector/map pairs (kind "full", vector-major).  Elements
with equal columns form the partition; all-false columns form the residue.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .core import MengerAlgebra
from .relations import Check, PartialPartition, Partition
from .terms import TranslationClosure

_KIND_NAMES = {"v": "strong", "l": "l-strong", "full": "bistrong"}


@dataclass(frozen=True)
class FamilyMember:
    """A class together with the first probe index defining it; None marks the residue."""

    members: frozenset
    tag: int | None


@dataclass(frozen=True)
class PrincipalAnalysis:
    kind: str
    subset: frozenset
    partition: Partition
    residue: frozenset
    class_family: tuple
    # kind "v" only: the partition restricted off the residue
    partial: PartialPartition | None = None
    note: str | None = None


def _checked_subset(alg, H):
    H = frozenset(int(h) for h in H)
    for h in H:
        alg._check_element(h)
    return H


def _signature_matrix(alg, closure, H, kind):
    mask = np.zeros(alg.size, dtype=bool)
    mask[list(H)] = True
    if kind == "v":
        return mask[closure.value_matrix()]
    if kind == "l":
        return mask[alg.apply_matrix()]
    if kind == "full":
        return mask[closure.pair_matrix()]
    raise ValueError(f"unknown kind {kind!r}")


def _analysis(alg, closure, H, kind):
    H = _checked_subset(alg, H)
    S = _signature_matrix(alg, closure, H, kind)
    m = alg.size
    cols = np.ascontiguousarray(S.T)
    first = {}
    labels = [first.setdefault(cols[a].tobytes(), a) for a in range(m)]
    partition = Partition(labels)
    residue = frozenset(a for a in range(m) if not cols[a].any())
    family = []
    seen = set()
    for idx in range(S.shape[0]):
        row = S[idx]
        if not row.any():
            continue
        key = row.tobytes()
        if key in seen:
            continue
        seen.add(key)
        family.append(FamilyMember(frozenset(np.flatnonzero(row).tolist()), idx))
    if residue:
        family.append(FamilyMember(residue, None))
    partial = None
    if kind == "v":
        partial = partition.restrict(frozenset(range(m)) - residue)
    return PrincipalAnalysis(
        kind=kind,
        subset=H,
        partition=partition,
        residue=residue,
        class_family=tuple(family),
        partial=partial,
        note=None if H else "H empty",
    )


def v_analysis(alg: MengerAlgebra, closure: TranslationClosure, H) -> PrincipalAnalysis:
    """Probe with unary maps: which maps send each element into H."""
    return _analysis(alg, closure, H, "v")


def l_analysis(alg: MengerAlgebra, H) -> PrincipalAnalysis:
    """Probe with argument vectors: which vectors take each element into H."""
    return _analysis(alg, None, H, "l")


def full_analysis(alg: MengerAlgebra, closure: TranslationClosure, H) -> PrincipalAnalysis:
    """Probe with vector/map pairs, vector-major."""
    return _analysis(alg, closure, H, "full")


def _strongness(S, method) -> Check:
    """Three equivalent characterizations over a membership matrix.

    a: distinct elements with intersecting signatures have equal signatures;
       witness (g1, g2, shared probe, differing probe).
    b: probes t1, t2 and elements g1, g2 with t1 hitting both and t2 hitting
       g2 force t2 to hit g1; witness (g1, g2, t1, t2).
    c: distinct probe fibers that intersect are equal;
       witness (probe1, probe2, shared element, differing element).
    All witnesses are lexicographically first in the order written.
    """
    m = S.shape[1]
    cols = np.ascontiguousarray(S.T)
    if method == "a":
        for a in range(m):
            for b in range(a + 1, m):
                both = cols[a] & cols[b]
                if both.any() and not np.array_equal(cols[a], cols[b]):
                    diff = cols[a] ^ cols[b]
                    return Check(
                        False, (a, b, int(np.argmax(both)), int(np.argmax(diff)))
                    )
        return Check(True)
    if method == "b":
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                t1s = cols[a] & cols[b]
                t2s = cols[b] & ~cols[a]
                if t1s.any() and t2s.any():
                    return Check(
                        False, (a, b, int(np.argmax(t1s)), int(np.argmax(t2s)))
                    )
        return Check(True)
    if method == "c":
        return _fibers_check(S)
    raise ValueError(f"unknown method {method!r}")


def _fibers_check(S) -> Check:
    keys = [row.tobytes() for row in S]
    first_at = {}
    occurrences = {}
    distinct = []
    for i, k in enumerate(keys):
        if k not in first_at:
            first_at[k] = i
            distinct.append(k)
        occurrences.setdefault(k, []).append(i)
    nonempty = [k for k in distinct if S[first_at[k]].any()]
    conflicting = False
    for a in range(len(nonempty)):
        ra = S[first_at[nonempty[a]]]
        for b in range(a + 1, len(nonempty)):
            if (ra & S[first_at[nonempty[b]]]).any():
                conflicting = True
                break
        if conflicting:
            break
    if not conflicting:
        return Check(True)
    for i in range(S.shape[0]):
        ri = S[i]
        if not ri.any():
            continue
        best = None
        for k in nonempty:
            if k == keys[i]:
                continue
            if (ri & S[first_at[k]]).any():
                js = occurrences[k]
                at = bisect_right(js, i)
                if at < len(js) and (best is None or js[at] < best):
                    best = js[at]
        if best is not None:
            shared = int(np.argmax(ri & S[best]))
            diff = int(np.argmax(ri ^ S[best]))
            return Check(False, (i, best, shared, diff))
    raise AssertionError("witness vanished")


def is_strong(alg, closure, H, method="a") -> Check:
    """Unary-map strongness; probes are closure indices."""
    H = _checked_subset(alg, H)
    return _strongness(_signature_matrix(alg, closure, H, "v"), method)


def is_l_strong(alg, H, method="a") -> Check:
    """Argument-vector strongness; probes are arg_vectors indices."""
    H = _checked_subset(alg, H)
    return _strongness(_signature_matrix(alg, None, H, "l"), method)


def is_bistrong(alg, closure, H, method="a") -> Check:
    """Vector/map-pair strongness; probes are vector-major pair indices."""
    H = _checked_subset(alg, H)
    return _strongness(_signature_matrix(alg, closure, H, "full"), method)


@dataclass(frozen=True)
class ClauseResult:
    cls: frozenset
    clause: str
    ok: bool
    detail: str | None = None


@dataclass(frozen=True)
class ClassTheoremReport:
    ok: bool
    precondition_ok: bool
    note: str | None
    items: tuple


def check_strong_class_theorems(alg, closure, H, kind="v") -> ClassTheoremReport:
    """For strong H, every class X off the residue inherits the structure.

    Clauses per class: X is itself strong (of the same kind); H's residue is
    contained in X's; H's partition refines X's; both partitions agree off
    X's residue.  A violated precondition (empty or non-strong H) is reported
    in the note, never silently skipped.
    """
    if kind not in _KIND_NAMES:
        raise ValueError(f"unknown kind {kind!r}")
    H = _checked_subset(alg, H)
    name = _KIND_NAMES[kind]
    if not H:
        return ClassTheoremReport(False, False, "H is empty", ())
    sc = _strongness(_signature_matrix(alg, closure, H, kind), "a")
    if not sc.ok:
        return ClassTheoremReport(
            False, False, f"H is not {name}: witness={sc.witness}", ()
        )
    base = _analysis(alg, closure, H, kind)
    W = base.residue
    items = []
    for blk in base.partition.blocks():
        X = frozenset(blk)
        if X == W:
            continue
        xa = _analysis(alg, closure, X, kind)
        c = _strongness(_signature_matrix(alg, closure, X, kind), "a")
        items.append(
            ClauseResult(X, name, c.ok, None if c.ok else f"witness={c.witness}")
        )
        nested = W <= xa.residue
        items.append(
            ClauseResult(
                X,
                "residue-nested",
                nested,
                None if nested else f"escaping={sorted(W - xa.residue)}",
            )
        )
        refines = base.partition.refines(xa.partition)
        items.append(
            ClauseResult(X, "relation-refines", refines, None if refines else None)
        )
        dom = frozenset(range(alg.size)) - xa.residue
        if kind == "v":
            agrees = base.partition.restrict(dom) == xa.partial
        else:
            agrees = base.partition.restrict(dom) == xa.partition.restrict(dom)
        items.append(ClauseResult(X, "restriction-agrees", agrees, None))
    return ClassTheoremReport(
        all(i.ok for i in items), True, None, tuple(items)
    )
