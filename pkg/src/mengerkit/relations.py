"""Equivalence relations on the carrier and decidable properties of them.

Partitions are canonical: the label of a block is its least member, so two
partitions are equal iff their label tuples are.  Property checkers return a
Check whose witness, when present, is the lexicographically first violation
under the scan order documented on each checker.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import MengerAlgebra


class Partition:
    """Equivalence relation as a label-per-element tuple; label = least member."""

    __slots__ = ("block_of",)

    def __init__(self, block_of):
        block_of = tuple(int(b) for b in block_of)
        for i, b in enumerate(block_of):
            if not 0 <= b < len(block_of) or block_of[b] != b or b > i:
                raise ValueError("labels must be the least member of each block")
        self.block_of = block_of

    @classmethod
    def from_labels(cls, labels):
        """Canonicalize an arbitrary hashable labelling."""
        first = {}
        out = []
        for i, lab in enumerate(labels):
            out.append(first.setdefault(lab, i))
        return cls(out)

    @classmethod
    def from_blocks(cls, blocks, size):
        out = [-1] * size
        for blk in blocks:
            blk = sorted(blk)
            for i in blk:
                if not 0 <= i < size or out[i] != -1:
                    raise ValueError("blocks must partition 0..size-1")
                out[i] = blk[0]
        if -1 in out:
            raise ValueError("blocks must cover 0..size-1")
        return cls(out)

    @classmethod
    def identity(cls, size):
        return cls(range(size))

    @classmethod
    def universal(cls, size):
        return cls([0] * size)

    @property
    def size(self):
        return len(self.block_of)

    def related(self, a, b):
        return self.block_of[a] == self.block_of[b]

    def label(self, a):
        return self.block_of[a]

    def blocks(self):
        """Blocks as tuples of ascending members, ordered by label."""
        by_label = {}
        for i, b in enumerate(self.block_of):
            by_label.setdefault(b, []).append(i)
        return tuple(tuple(by_label[b]) for b in sorted(by_label))

    @property
    def num_blocks(self):
        return len(set(self.block_of))

    def refines(self, other):
        """True iff every block of self lies inside a block of other."""
        if self.size != other.size:
            raise ValueError("partitions live on different carriers")
        return all(
            other.block_of[i] == other.block_of[self.block_of[i]]
            for i in range(self.size)
        )

    def restrict(self, domain):
        """The induced partial partition on `domain`."""
        return PartialPartition(self.size, domain, self.block_of)

    def relation_matrix(self):
        lab = np.array(self.block_of, dtype=np.int64)
        return lab[:, None] == lab[None, :]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.block_of == other.block_of

    def __hash__(self):
        return hash(self.block_of)

    def __repr__(self):
        body = " ".join("{" + " ".join(map(str, blk)) + "}" for blk in self.blocks())
        return f"Partition({body})"


class PartialPartition:
    """Equivalence on a subset of the carrier; elements off the domain relate to nothing."""

    __slots__ = ("size", "block_of")

    def __init__(self, size, domain, labels):
        domain = frozenset(int(d) for d in domain)
        for d in domain:
            if not 0 <= d < size:
                raise ValueError(f"domain element {d} out of range")
        first = {}
        out = [None] * size
        for i in sorted(domain):
            out[i] = first.setdefault(labels[i], i)
        self.size = size
        self.block_of = tuple(out)

    @property
    def domain(self):
        return frozenset(i for i, b in enumerate(self.block_of) if b is not None)

    def related(self, a, b):
        ba, bb = self.block_of[a], self.block_of[b]
        return ba is not None and ba == bb

    def blocks(self):
        by_label = {}
        for i, b in enumerate(self.block_of):
            if b is not None:
                by_label.setdefault(b, []).append(i)
        return tuple(tuple(by_label[b]) for b in sorted(by_label))

    def __eq__(self, other):
        return (
            isinstance(other, PartialPartition)
            and self.size == other.size
            and self.block_of == other.block_of
        )

    def __hash__(self):
        return hash((self.size, self.block_of))

    def __repr__(self):
        body = " ".join("{" + " ".join(map(str, blk)) + "}" for blk in self.blocks())
        return f"PartialPartition({body})"


def meet_partitions(parts) -> Partition:
    """Coarsest common refinement: related iff related in every argument."""
    parts = list(parts)
    if not parts:
        raise ValueError("meet of no partitions")
    size = parts[0].size
    for p in parts:
        if p.size != size:
            raise ValueError("partitions live on different carriers")
    return Partition.from_labels(tuple(zip(*(p.block_of for p in parts))))


@dataclass(frozen=True)
class Check:
    """Verdict of a property check; truthiness follows ok."""

    ok: bool
    witness: tuple | None = None
    note: str | None = None

    def __bool__(self):
        return self.ok


def _as_partition(rel, size):
    if isinstance(rel, Partition):
        if rel.size != size:
            raise ValueError("partition size does not match the carrier")
        return rel
    raise TypeError("relation must be a Partition")


def _subset_mask(alg, subset):
    mask = np.zeros(alg.size, dtype=bool)
    for h in subset:
        alg._check_element(h)
        mask[int(h)] = True
    return mask


# ---------------------------------------------------------------- relations

_RELATION_PROPS = {}


def relation_property_names():
    return tuple(sorted(_RELATION_PROPS))


def check_relation_property(alg, rel, prop, slot=None, closure=None) -> Check:
    """Dispatch on `prop`; see the individual checkers for witness shapes.

    `slot` is required by "i-regular" (1-based); `closure` by
    "v-cancellative-translations".
    """
    rel = _as_partition(rel, alg.size)
    try:
        fn = _RELATION_PROPS[prop]
    except KeyError:
        raise ValueError(f"unknown relation property {prop!r}") from None
    return fn(alg, rel, slot=slot, closure=closure)


def _register_rel(name):
    def deco(fn):
        _RELATION_PROPS[name] = fn
        return fn

    return deco


@_register_rel("stable")
def _check_stable(alg, rel, slot=None, closure=None):
    """Related heads applied to componentwise related vectors stay related.

    Witness (x, y, xs, ys, x[xs], y[ys]) scanned in that nesting order.
    """
    m, n = alg.size, alg.rank
    mat = rel.relation_matrix()
    flat = alg.table.reshape(m, -1)
    vecs = np.array(alg.arg_tuples(), dtype=np.int64)
    comp = np.ones((len(vecs), len(vecs)), dtype=bool)
    for k in range(n):
        comp &= mat[np.ix_(vecs[:, k], vecs[:, k])]
    for x in range(m):
        for y in range(m):
            if not mat[x, y]:
                continue
            if (comp & ~mat[np.ix_(flat[x], flat[y])]).any():
                return Check(False, _stable_witness(alg, rel, x, y))
    return Check(True)


def _stable_witness(alg, rel, x, y):
    tab = alg.table
    rng = range(alg.size)
    for xs in itertools.product(rng, repeat=alg.rank):
        for ys in itertools.product(rng, repeat=alg.rank):
            if all(rel.related(a, b) for a, b in zip(xs, ys)):
                vx, vy = int(tab[(x, *xs)]), int(tab[(y, *ys)])
                if not rel.related(vx, vy):
                    return (x, y, xs, ys, vx, vy)
    raise AssertionError("witness vanished")


@_register_rel("l-regular")
def _check_l_regular(alg, rel, slot=None, closure=None):
    """Related heads stay related under any common argument vector.

    Witness (x, y, zs, x[zs], y[zs]).
    """
    m = alg.size
    mat = rel.relation_matrix()
    flat = alg.table.reshape(m, -1)
    for x in range(m):
        for y in range(m):
            if not mat[x, y]:
                continue
            bad = ~mat[flat[x], flat[y]]
            if bad.any():
                zs = alg.arg_tuples()[int(np.argmax(bad))]
                return Check(
                    False, (x, y, zs, int(flat[x][np.argmax(bad)]), int(flat[y][np.argmax(bad)]))
                )
    return Check(True)


@_register_rel("v-regular")
def _check_v_regular(alg, rel, slot=None, closure=None):
    """Any head applied to componentwise related vectors gives related values.

    Witness (z, xs, ys, z[xs], z[ys]).
    """
    m, n = alg.size, alg.rank
    mat = rel.relation_matrix()
    flat = alg.table.reshape(m, -1)
    vecs = np.array(alg.arg_tuples(), dtype=np.int64)
    comp = np.ones((len(vecs), len(vecs)), dtype=bool)
    for k in range(n):
        comp &= mat[np.ix_(vecs[:, k], vecs[:, k])]
    for z in range(m):
        bad = comp & ~mat[np.ix_(flat[z], flat[z])]
        if bad.any():
            i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
            xs, ys = alg.arg_tuples()[i], alg.arg_tuples()[j]
            return Check(False, (z, xs, ys, int(flat[z][i]), int(flat[z][j])))
    return Check(True)


@_register_rel("i-regular")
def _check_i_regular(alg, rel, slot=None, closure=None):
    """Substituting related elements into the given slot preserves relatedness.

    Requires `slot` (1-based).  Witness (u, ws, x, y, lhs, rhs).
    """
    if slot is None or not 1 <= slot <= alg.rank:
        raise ValueError("i-regular needs a slot index in 1..rank")
    m = alg.size
    rng = range(m)
    tab = alg.table
    for u in rng:
        for ws in itertools.product(rng, repeat=alg.rank):
            pre, post = ws[: slot - 1], ws[slot:]
            line = [int(tab[(u,) + pre + (v,) + post]) for v in rng]
            for x in rng:
                for y in rng:
                    if rel.related(x, y) and not rel.related(line[x], line[y]):
                        return Check(False, (u, ws, x, y, line[x], line[y]))
    return Check(True)


@_register_rel("l-cancellative")
def _check_l_cancellative(alg, rel, slot=None, closure=None):
    """Heads related under some common argument vector are related outright.

    Witness (x, y, zs, x[zs], y[zs]).
    """
    m = alg.size
    mat = rel.relation_matrix()
    flat = alg.table.reshape(m, -1)
    for x in range(m):
        for y in range(m):
            if mat[x, y]:
                continue
            hit = mat[flat[x], flat[y]]
            if hit.any():
                k = int(np.argmax(hit))
                zs = alg.arg_tuples()[k]
                return Check(False, (x, y, zs, int(flat[x][k]), int(flat[y][k])))
    return Check(True)


def _slot_premise(alg, rel, exclude_mask=None):
    """P[x, y] = some one-slot context sends x and y to related values.

    With exclude_mask, contexts whose value at x lands in the mask are ignored.
    """
    m, n = alg.size, alg.rank
    mat = rel.relation_matrix()
    tab = alg.table
    prem = np.zeros((m, m), dtype=bool)
    rng = range(m)
    for u in rng:
        for ws in itertools.product(rng, repeat=n):
            for i in range(n):
                pre, post = ws[:i], ws[i + 1 :]
                line = np.array(
                    [int(tab[(u,) + pre + (v,) + post]) for v in rng], dtype=np.int64
                )
                contrib = mat[np.ix_(line, line)]
                if exclude_mask is not None:
                    contrib = contrib & ~exclude_mask[line][:, None]
                prem |= contrib
    return prem


def _slot_witness(alg, rel, exclude=frozenset()):
    """Lexicographically first (u, ws, i, x, y) with premise but unrelated x, y."""
    m, n = alg.size, alg.rank
    tab = alg.table
    rng = range(m)
    for u in rng:
        for ws in itertools.product(rng, repeat=n):
            for i in range(1, n + 1):
                pre, post = ws[: i - 1], ws[i:]
                line = [int(tab[(u,) + pre + (v,) + post]) for v in rng]
                for x in rng:
                    if line[x] in exclude:
                        continue
                    for y in rng:
                        if rel.related(line[x], line[y]) and not rel.related(x, y):
                            return (u, ws, i, x, y)
    raise AssertionError("witness vanished")


@_register_rel("v-cancellative")
def _check_v_cancellative(alg, rel, slot=None, closure=None):
    """Elements related after substitution into any single slot are related.

    Witness (u, ws, i, x, y) with i 1-based.
    """
    prem = _slot_premise(alg, rel)
    bad = prem & ~rel.relation_matrix()
    if bad.any():
        return Check(False, _slot_witness(alg, rel))
    return Check(True)


@_register_rel("lv-cancellative")
def _check_lv_cancellative(alg, rel, slot=None, closure=None):
    """Both l-cancellative and v-cancellative; the first failing side reports."""
    res = _check_l_cancellative(alg, rel)
    if not res.ok:
        return Check(False, res.witness, note="l-cancellative fails")
    res = _check_v_cancellative(alg, rel)
    if not res.ok:
        return Check(False, res.witness, note="v-cancellative fails")
    return Check(True)


@_register_rel("v-congruence")
def _check_v_congruence(alg, rel, slot=None, closure=None):
    return _check_v_regular(alg, rel)


@_register_rel("l-congruence")
def _check_l_congruence(alg, rel, slot=None, closure=None):
    return _check_l_regular(alg, rel)


@_register_rel("congruence")
def _check_congruence(alg, rel, slot=None, closure=None):
    return _check_stable(alg, rel)


@_register_rel("v-cancellative-translations")
def _check_v_cancellative_translations(alg, rel, slot=None, closure=None):
    """Diagnostic form over unary maps: t(x) related to t(y) forces x related to y.

    Requires `closure`.  Witness (t, x, y) with t a closure index; scanned
    t-major.  Agrees with "v-cancellative" on every algebra.
    """
    if closure is None:
        raise ValueError("v-cancellative-translations needs closure=")
    mat = rel.relation_matrix()
    vm = closure.value_matrix()
    for t in range(len(closure)):
        row = vm[t]
        bad = mat[np.ix_(row, row)] & ~mat
        if bad.any():
            x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return Check(False, (t, int(x), int(y)))
    return Check(True)


def check_partially_v_cancellative(alg, rel, W) -> Check:
    """Slot cancellation demanded only when the substituted value avoids W.

    W must be empty or exactly one block of rel (ValueError otherwise); with
    empty W this is the plain v-cancellative check.  Witness (u, ws, i, x, y).
    """
    rel = _as_partition(rel, alg.size)
    W = frozenset(int(w) for w in W)
    if W:
        some = min(W)
        block = frozenset(
            i for i in range(alg.size) if rel.block_of[i] == rel.block_of[some]
        )
        if W != block:
            raise ValueError("W must be empty or a single block of the relation")
    mask = _subset_mask(alg, W)
    prem = _slot_premise(alg, rel, exclude_mask=mask)
    bad = prem & ~rel.relation_matrix()
    if bad.any():
        return Check(False, _slot_witness(alg, rel, exclude=W))
    return Check(True)


def check_partially_v_cancellative_translations(alg, closure, rel, W) -> Check:
    """Unary-map form of the partial cancellation law.

    t(x) related to t(y) with t(x) outside W forces x related to y.  Same W
    precondition as check_partially_v_cancellative.  Witness (t, x, y).
    """
    rel = _as_partition(rel, alg.size)
    W = frozenset(int(w) for w in W)
    if W:
        some = min(W)
        block = frozenset(
            i for i in range(alg.size) if rel.block_of[i] == rel.block_of[some]
        )
        if W != block:
            raise ValueError("W must be empty or a single block of the relation")
    mask = _subset_mask(alg, W)
    mat = rel.relation_matrix()
    vm = closure.value_matrix()
    for t in range(len(closure)):
        row = vm[t]
        bad = (mat[np.ix_(row, row)] & ~mask[row][:, None]) & ~mat
        if bad.any():
            x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return Check(False, (t, int(x), int(y)))
    return Check(True)


# ---------------------------------------------------------------- subsets

_SUBSET_PROPS = {}


def subset_property_names():
    return tuple(sorted(_SUBSET_PROPS))


def check_subset_property(alg, H, prop, slot=None, closure=None) -> Check:
    """Dispatch on `prop`; see the individual checkers for witness shapes.

    `slot` is required by "i-ideal"; `closure` by the normal-complex checks
    involving unary maps and by "l-consistent".
    """
    H = frozenset(int(h) for h in H)
    for h in H:
        alg._check_element(h)
    try:
        fn = _SUBSET_PROPS[prop]
    except KeyError:
        raise ValueError(f"unknown subset property {prop!r}") from None
    return fn(alg, H, slot=slot, closure=closure)


def _register_sub(name):
    def deco(fn):
        _SUBSET_PROPS[name] = fn
        return fn

    return deco


def _need_closure(closure, prop):
    if closure is None:
        raise ValueError(f"{prop} needs closure=")
    return closure


def _first_bad_pair(rows, members):
    """First (g1, g2, row) with row true at g1, false at g2; members ascending."""
    for g1 in members:
        for g2 in members:
            hit = rows[:, g1] & ~rows[:, g2]
            if hit.any():
                return (g1, g2, int(np.argmax(hit)))
    raise AssertionError("witness vanished")


@_register_sub("normal-v-complex")
def _check_normal_v_complex(alg, H, slot=None, closure=None):
    """Membership of t(g) does not depend on which g in H was used.

    Witness (g1, g2, t) with t a closure index.  Empty H is vacuously normal.
    """
    if not H:
        return Check(True, note="vacuous")
    closure = _need_closure(closure, "normal-v-complex")
    mask = _subset_mask(alg, H)
    rows = mask[closure.value_matrix()]
    members = sorted(H)
    sub = rows[:, members]
    if (sub.any(axis=1) & ~sub.all(axis=1)).any():
        return Check(False, _first_bad_pair(rows, members))
    return Check(True)


@_register_sub("normal-l-complex")
def _check_normal_l_complex(alg, H, slot=None, closure=None):
    """Membership of g[xs] does not depend on which g in H was used.

    Witness (g1, g2, b) with b an arg_vectors index (0 is the selector
    vector).  Empty H is vacuously normal.
    """
    if not H:
        return Check(True, note="vacuous")
    mask = _subset_mask(alg, H)
    rows = mask[alg.apply_matrix()]
    members = sorted(H)
    sub = rows[:, members]
    if (sub.any(axis=1) & ~sub.all(axis=1)).any():
        return Check(False, _first_bad_pair(rows, members))
    return Check(True)


@_register_sub("normal-bicomplex")
def _check_normal_bicomplex(alg, H, slot=None, closure=None):
    """Membership of t(g[xs]) does not depend on which g in H was used.

    Witness (g1, g2, p) with p a pair index b*len(closure)+t.  Empty H is
    vacuously normal.
    """
    if not H:
        return Check(True, note="vacuous")
    closure = _need_closure(closure, "normal-bicomplex")
    mask = _subset_mask(alg, H)
    rows = mask[closure.pair_matrix()]
    members = sorted(H)
    sub = rows[:, members]
    if (sub.any(axis=1) & ~sub.all(axis=1)).any():
        return Check(False, _first_bad_pair(rows, members))
    return Check(True)


@_register_sub("l-ideal")
def _check_l_ideal(alg, H, slot=None, closure=None):
    """x[hs] lands in H whenever some component of hs does.

    Witness (x, hs, x[hs]).
    """
    mask = _subset_mask(alg, H)
    m = alg.size
    flat = alg.table.reshape(m, -1)
    vecs = alg.arg_tuples()
    touches = np.array([any(mask[c] for c in v) for v in vecs], dtype=bool)
    for x in range(m):
        bad = touches & ~mask[flat[x]]
        if bad.any():
            k = int(np.argmax(bad))
            return Check(False, (x, vecs[k], int(flat[x][k])))
    return Check(True)


@_register_sub("i-ideal")
def _check_i_ideal(alg, H, slot=None, closure=None):
    """Substituting a member into the given slot lands in H.

    Requires `slot` (1-based).  Witness (u, ws, h, result).
    """
    if slot is None or not 1 <= slot <= alg.rank:
        raise ValueError("i-ideal needs a slot index in 1..rank")
    tab = alg.table
    rng = range(alg.size)
    for u in rng:
        for ws in itertools.product(rng, repeat=alg.rank):
            pre, post = ws[: slot - 1], ws[slot:]
            for h in sorted(H):
                v = int(tab[(u,) + pre + (h,) + post])
                if v not in H:
                    return Check(False, (u, ws, h, v))
    return Check(True)


@_register_sub("s-ideal")
def _check_s_ideal(alg, H, slot=None, closure=None):
    """h[xs] stays in H for every member h and concrete vector xs.

    Witness (h, xs, h[xs]).
    """
    mask = _subset_mask(alg, H)
    flat = alg.table.reshape(alg.size, -1)
    for h in sorted(H):
        bad = ~mask[flat[h]]
        if bad.any():
            k = int(np.argmax(bad))
            return Check(False, (h, alg.arg_tuples()[k], int(flat[h][k])))
    return Check(True)


@_register_sub("sl-ideal")
def _check_sl_ideal(alg, H, slot=None, closure=None):
    """Both an s-ideal and an l-ideal; the first failing side reports."""
    res = _check_s_ideal(alg, H)
    if not res.ok:
        return Check(False, res.witness, note="s-ideal fails")
    res = _check_l_ideal(alg, H)
    if not res.ok:
        return Check(False, res.witness, note="l-ideal fails")
    return Check(True)


@_register_sub("l-consistent")
def _check_l_consistent(alg, H, slot=None, closure=None):
    """t(g) in H forces g in H.  Witness (g, t) with t a closure index."""
    closure = _need_closure(closure, "l-consistent")
    mask = _subset_mask(alg, H)
    hit = mask[closure.value_matrix()] & ~mask[None, :]
    if hit.any():
        for g in range(alg.size):
            col = hit[:, g]
            if col.any():
                return Check(False, (g, int(np.argmax(col))))
    return Check(True)
