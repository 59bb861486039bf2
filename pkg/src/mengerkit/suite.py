"""Cross-checks tying the analyses to their defining laws, run per algebra.

Each item quantifies over every subset of the carrier (or every congruence)
and verifies one structural claim.  Items are pure: given the same algebra
and closure the report is identical run to run, whatever the job count.

The corrupt flag deliberately falsifies every cached partition before the
items run; it exists so harnesses can watch the suite fail loudly.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .core import MengerAlgebra
from .errors import MengerError
from .principal import (
    _signature_matrix,
    check_strong_class_theorems,
    full_analysis,
    is_bistrong,
    is_l_strong,
    is_strong,
    l_analysis,
    v_analysis,
)
from .relations import (
    Partition,
    check_partially_v_cancellative,
    check_partially_v_cancellative_translations,
    check_relation_property,
    check_subset_property,
    meet_partitions,
)
from .enumeration import enumerate_congruences
from .terms import TranslationClosure

_CONGRUENCE_PROP = {"v": "v-congruence", "l": "l-congruence", "full": "congruence"}
_RESIDUE_IDEAL = {"v": "l-ideal", "l": "s-ideal", "full": "sl-ideal"}
_NORMAL_PROP = {"v": "normal-v-complex", "l": "normal-l-complex", "full": "normal-bicomplex"}


@dataclass(frozen=True)
class SuiteItem:
    ident: str
    description: str
    passed: bool
    detail: str | None = None


@dataclass(frozen=True)
class SuiteReport:
    items: tuple

    @property
    def ok(self):
        return all(i.passed for i in self.items)

    @property
    def failed(self):
        return tuple(i for i in self.items if not i.passed)


def _corrupted(partition):
    # always differs from the original when the carrier has >= 2 elements
    if partition.size < 2:
        return partition
    if partition.num_blocks == 1:
        return Partition.identity(partition.size)
    return Partition.universal(partition.size)


class _Context:
    """Shared per-algebra state; caches are guarded for threaded item runs."""

    def __init__(self, alg, closure, corrupt=False):
        self.alg = alg
        self.closure = closure
        m = alg.size
        self.subsets = [
            frozenset(i for i in range(m) if mask >> i & 1) for mask in range(2**m)
        ]
        self._lock = threading.Lock()
        self._congruences = {}
        self._strongness = {}
        self._analyses = {}
        for H in self.subsets:
            for kind, an in (
                ("v", v_analysis(alg, closure, H)),
                ("l", l_analysis(alg, H)),
                ("full", full_analysis(alg, closure, H)),
            ):
                if corrupt:
                    an = replace(an, partition=_corrupted(an.partition))
                self._analyses[(kind, H)] = an

    def analysis(self, kind, H):
        return self._analyses[(kind, H)]

    def congruences(self, kind):
        with self._lock:
            if kind not in self._congruences:
                self._congruences[kind] = enumerate_congruences(self.alg, kind)
            return self._congruences[kind]

    def strong(self, kind, H, method="a"):
        key = (kind, H, method)
        with self._lock:
            if key not in self._strongness:
                fn = {"v": is_strong, "l": is_l_strong, "full": is_bistrong}[kind]
                if kind == "l":
                    self._strongness[key] = fn(self.alg, H, method=method)
                else:
                    self._strongness[key] = fn(self.alg, self.closure, H, method=method)
            return self._strongness[key]

    def fmt_subset(self, H):
        return "{" + " ".join(self.alg.names[i] for i in sorted(H)) + "}"

    def fmt_partition(self, p):
        return " ".join(self.fmt_subset(frozenset(blk)) for blk in p.blocks())


_ITEMS = []


def _item(ident, description):
    def deco(fn):
        _ITEMS.append((ident, description, fn))
        return fn

    return deco


def _all_subsets_hold(ctx, check):
    """check(H) -> detail string or None; reports the first failing subset."""
    for H in ctx.subsets:
        detail = check(H)
        if detail is not None:
            return False, f"H={ctx.fmt_subset(H)}: {detail}"
    return True, None


def _induced_congruence(ctx, kind):
    def check(H):
        res = check_relation_property(
            ctx.alg, ctx.analysis(kind, H).partition, _CONGRUENCE_PROP[kind]
        )
        return None if res.ok else f"witness={res.witness}"

    return _all_subsets_hold(ctx, check)


def _residue_ideal(ctx, kind):
    def check(H):
        an = ctx.analysis(kind, H)
        if an.residue:
            res = check_subset_property(
                ctx.alg, an.residue, _RESIDUE_IDEAL[kind], closure=ctx.closure
            )
            if not res.ok:
                return f"residue not {_RESIDUE_IDEAL[kind]}: witness={res.witness}"
        if H & an.residue:
            return f"residue meets H at {ctx.fmt_subset(H & an.residue)}"
        return None

    return _all_subsets_hold(ctx, check)


def _blocks_as_sets(partition):
    return {frozenset(blk) for blk in partition.blocks()}


def _normal_complex_class(ctx, kind):
    def check(H):
        if not H:
            return None
        if not check_subset_property(
            ctx.alg, H, _NORMAL_PROP[kind], closure=ctx.closure
        ).ok:
            return None
        an = ctx.analysis(kind, H)
        if H not in _blocks_as_sets(an.partition):
            return "not a single class"
        if H == an.residue:
            return "equals the residue"
        return None

    return _all_subsets_hold(ctx, check)


def _meet_of_classes(ctx, kind):
    for eps in ctx.congruences(kind):
        parts = [
            ctx.analysis(kind, frozenset(blk)).partition for blk in eps.blocks()
        ]
        if meet_partitions(parts) != eps:
            return False, (
                f"eps={ctx.fmt_partition(eps)} "
                f"meet={ctx.fmt_partition(meet_partitions(parts))}"
            )
    return True, None


def _methods_agree(ctx, kind):
    for H in ctx.subsets:
        verdicts = [ctx.strong(kind, H, meth).ok for meth in "abc"]
        if len(set(verdicts)) != 1:
            return False, f"H={ctx.fmt_subset(H)}: methods disagree {verdicts}"
    if not ctx.strong(kind, frozenset()).ok:
        return False, "empty subset not judged strong"
    return True, None


def _strong_is_class(ctx, kind):
    def check(H):
        if not H or not ctx.strong(kind, H).ok:
            return None
        an = ctx.analysis(kind, H)
        if H not in _blocks_as_sets(an.partition):
            return "not a single class"
        if H == an.residue:
            return "equals the residue"
        return None

    return _all_subsets_hold(ctx, check)


def _family_matches(ctx, kind):
    def check(H):
        if not ctx.strong(kind, H).ok:
            return None
        an = ctx.analysis(kind, H)
        family = {fm.members for fm in an.class_family}
        blocks = _blocks_as_sets(an.partition)
        if family != blocks:
            return (
                f"family={sorted(map(sorted, family))} "
                f"blocks={sorted(map(sorted, blocks))}"
            )
        return None

    return _all_subsets_hold(ctx, check)


def _class_theorems(ctx, kind):
    def check(H):
        if not H or not ctx.strong(kind, H).ok:
            return None
        rep = check_strong_class_theorems(ctx.alg, ctx.closure, H, kind)
        if not rep.ok:
            bad = [i for i in rep.items if not i.ok]
            if bad:
                first = bad[0]
                return f"class={ctx.fmt_subset(first.cls)} clause={first.clause}"
            return rep.note
        return None

    return _all_subsets_hold(ctx, check)


def _fibers_strong(ctx, kind):
    def check(H):
        if not ctx.strong(kind, H).ok:
            return None
        an = ctx.analysis(kind, H)
        for fm in an.class_family:
            if fm.tag is None:
                continue
            if not ctx.strong(kind, fm.members).ok:
                return f"fiber {ctx.fmt_subset(fm.members)} (probe {fm.tag}) not strong"
        return None

    return _all_subsets_hold(ctx, check)


def _cancellative_classes(ctx, kind, canc_prop):
    for eps in ctx.congruences(kind):
        if not check_relation_property(ctx.alg, eps, canc_prop).ok:
            continue
        for blk in eps.blocks():
            X = frozenset(blk)
            if not ctx.strong(kind, X).ok:
                return False, f"class {ctx.fmt_subset(X)} of {ctx.fmt_partition(eps)} not strong"
            xa = ctx.analysis(kind, X)
            if not eps.refines(xa.partition):
                return False, f"{ctx.fmt_partition(eps)} not within induced partition of {ctx.fmt_subset(X)}"
            dom = frozenset(range(ctx.alg.size)) - xa.residue
            if eps.restrict(dom) != xa.partition.restrict(dom):
                return False, f"restrictions differ off residue of {ctx.fmt_subset(X)}"
    return True, None


# ---------------------------------------------------------------- unary maps


@_item("P2.1", "map-induced partitions are v-congruences")
def _p21(ctx):
    return _induced_congruence(ctx, "v")


@_item("P2.2", "nonempty map residues are l-ideals disjoint from their subsets")
def _p22(ctx):
    return _residue_ideal(ctx, "v")


@_item("P2.3", "nonempty normal v-complexes are single classes off the residue")
def _p23(ctx):
    return _normal_complex_class(ctx, "v")


@_item("P2.4", "every v-congruence is the meet of its classes' induced partitions")
def _p24(ctx):
    return _meet_of_classes(ctx, "v")


@_item(
    "P2.6",
    "classes of v-congruences lie inside single induced classes, off the residue "
    "when some member has a nonempty signature",
)
def _p26(ctx):
    for eps in ctx.congruences("v"):
        for blk in eps.blocks():
            H = frozenset(blk)
            an = ctx.analysis("v", H)
            labels = {an.partition.label(h) for h in H}
            if len(labels) != 1:
                return False, f"class {ctx.fmt_subset(H)} splits"
            if any(h not in an.residue for h in H):
                container = frozenset(
                    i
                    for i in range(ctx.alg.size)
                    if an.partition.label(i) == next(iter(labels))
                )
                if container == an.residue:
                    return False, f"class {ctx.fmt_subset(H)} lands in the residue"
    return True, None


@_item("P2.8", "the three strongness tests agree; the empty subset is strong")
def _p28(ctx):
    return _methods_agree(ctx, "v")


@_item("P2.9", "nonempty strong subsets are single classes off the residue")
def _p29(ctx):
    return _strong_is_class(ctx, "v")


@_item("P2.10", "for strong subsets the classes are the signature fibers plus the residue")
def _p210(ctx):
    return _family_matches(ctx, "v")


@_item("P2.11", "classes of strong subsets inherit strongness, residues and partitions")
def _p211(ctx):
    return _class_theorems(ctx, "v")


@_item("P2.12", "signature fibers of strong subsets are strong")
def _p212(ctx):
    return _fibers_strong(ctx, "v")


@_item("P2.13", "a strong l-ideal induces the same partition as its off-residue classes")
def _p213(ctx):
    def check(H):
        if not ctx.strong("v", H).ok:
            return None
        if not check_subset_property(ctx.alg, H, "l-ideal").ok:
            return None
        an = ctx.analysis("v", H)
        for blk in an.partition.blocks():
            X = frozenset(blk)
            if X == an.residue:
                continue
            if ctx.analysis("v", X).partition != an.partition:
                return f"class {ctx.fmt_subset(X)} induces a different partition"
        return None

    return _all_subsets_hold(ctx, check)


@_item("P2.14", "the unary-map and single-slot forms of partial cancellation agree")
def _p214(ctx):
    def check(H):
        an = ctx.analysis("v", H)
        by_maps = check_partially_v_cancellative_translations(
            ctx.alg, ctx.closure, an.partition, an.residue
        )
        by_slots = check_partially_v_cancellative(ctx.alg, an.partition, an.residue)
        if by_maps.ok != by_slots.ok:
            return f"maps={by_maps.ok} slots={by_slots.ok}"
        return None

    return _all_subsets_hold(ctx, check)


@_item(
    "P2.15",
    "a nonempty subset is strong iff members have equal signatures and partial "
    "cancellation holds",
)
def _p215(ctx):
    # Pairwise-intersecting member signatures would not suffice: on the
    # three-element table with cc=b and all other products a, H={b,c} has
    # intersecting unequal signatures and partial cancellation yet is not
    # strong.  Equality of member signatures closes the gap.
    def check(H):
        if not H:
            return None
        sig = _signature_matrix(ctx.alg, ctx.closure, H, "v")
        cols = sig.T
        members = sorted(H)
        equal = all(
            (cols[h1] == cols[h2]).all() for h1 in members for h2 in members
        )
        an = ctx.analysis("v", H)
        partial = check_partially_v_cancellative(ctx.alg, an.partition, an.residue).ok
        lhs = ctx.strong("v", H).ok
        if lhs != (equal and partial):
            return f"strong={lhs} equal={equal} partial={partial}"
        return None

    return _all_subsets_hold(ctx, check)


@_item(
    "P2.16",
    "for strong subsets the partition is v-cancellative iff the residue is l-consistent",
)
def _p216(ctx):
    def check(H):
        if not ctx.strong("v", H).ok:
            return None
        an = ctx.analysis("v", H)
        canc = check_relation_property(ctx.alg, an.partition, "v-cancellative").ok
        cons = check_subset_property(
            ctx.alg, an.residue, "l-consistent", closure=ctx.closure
        ).ok
        if canc != cons:
            return f"cancellative={canc} consistent={cons}"
        return None

    return _all_subsets_hold(ctx, check)


# ---------------------------------------------------------------- vectors


@_item(
    "P3.1",
    "vector-induced partitions are l-congruences; nonempty residues are s-ideals "
    "disjoint from their subsets",
)
def _p31(ctx):
    ok, detail = _induced_congruence(ctx, "l")
    if not ok:
        return ok, detail
    return _residue_ideal(ctx, "l")


@_item("P3.2", "every l-congruence is the meet of its classes' induced partitions")
def _p32(ctx):
    return _meet_of_classes(ctx, "l")


@_item("P3.4", "the three l-strongness tests agree; the empty subset is l-strong")
def _p34(ctx):
    return _methods_agree(ctx, "l")


@_item("P3.5", "nonempty normal l-complexes are single classes off the residue")
def _p35(ctx):
    return _normal_complex_class(ctx, "l")


@_item("P3.6", "nonempty l-strong subsets are single classes off the residue")
def _p36(ctx):
    return _strong_is_class(ctx, "l")


@_item("P3.7", "for l-strong subsets the classes are the vector fibers plus the residue")
def _p37(ctx):
    return _family_matches(ctx, "l")


@_item("P3.8", "classes of l-strong subsets inherit l-strongness, residues and partitions")
def _p38(ctx):
    return _class_theorems(ctx, "l")


@_item("P3.9", "vector fibers of l-strong subsets are l-strong")
def _p39(ctx):
    return _fibers_strong(ctx, "l")


@_item(
    "P3.10",
    "classes of l-cancellative l-congruences are l-strong with compatible partitions",
)
def _p310(ctx):
    return _cancellative_classes(ctx, "l", "l-cancellative")


# ---------------------------------------------------------------- pairs


@_item(
    "P4.1",
    "pair-induced partitions are congruences; nonempty residues are sl-ideals "
    "disjoint from their subsets",
)
def _p41(ctx):
    ok, detail = _induced_congruence(ctx, "full")
    if not ok:
        return ok, detail
    return _residue_ideal(ctx, "full")


@_item("P4.2", "every congruence is the meet of its classes' induced partitions")
def _p42(ctx):
    return _meet_of_classes(ctx, "full")


@_item("P4.4", "the three bistrongness tests agree; the empty subset is bistrong")
def _p44(ctx):
    return _methods_agree(ctx, "full")


@_item("P4.5", "nonempty normal bicomplexes are single classes off the residue")
def _p45(ctx):
    return _normal_complex_class(ctx, "full")


@_item("P4.6", "nonempty bistrong subsets are single classes off the residue")
def _p46(ctx):
    return _strong_is_class(ctx, "full")


@_item("P4.7", "for bistrong subsets the classes are the pair fibers plus the residue")
def _p47(ctx):
    return _family_matches(ctx, "full")


@_item("P4.8", "classes of bistrong subsets inherit bistrongness, residues and partitions")
def _p48(ctx):
    return _class_theorems(ctx, "full")


@_item("P4.9", "pair fibers of bistrong subsets are bistrong")
def _p49(ctx):
    return _fibers_strong(ctx, "full")


@_item(
    "P4.10",
    "classes of lv-cancellative congruences are bistrong with compatible partitions",
)
def _p410(ctx):
    return _cancellative_classes(ctx, "full", "lv-cancellative")


def suite_item_ids():
    return tuple(ident for ident, _, _ in _ITEMS)


def run_paper_suite(
    alg: MengerAlgebra,
    closure: TranslationClosure,
    jobs: int = 1,
    corrupt: bool = False,
) -> SuiteReport:
    """Run every item; report in registration order.

    With jobs > 1 items run on a thread pool; the report is identical either
    way.  Items that raise report as failures rather than abort the run.
    """
    ctx = _Context(alg, closure, corrupt=corrupt)

    def run_one(entry):
        ident, description, fn = entry
        try:
            passed, detail = fn(ctx)
        except (MengerError, ValueError) as exc:
            passed, detail = False, f"check raised {exc!r}"
        return SuiteItem(ident, description, passed, detail)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            items = list(pool.map(run_one, _ITEMS))
    else:
        items = [run_one(entry) for entry in _ITEMS]
    return SuiteReport(tuple(items))
