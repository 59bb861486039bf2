"""Exhaustive sweeps: partitions, congruences, subset classification, closures.

Everything yields in a fixed order so repeated runs are reproducible:
partitions in restricted-growth-string order, subsets in bitmask order with
bit i standing for element i, generated carriers in discovery order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import MengerAlgebra
from .errors import CapacityError
from .principal import full_analysis, is_bistrong, is_l_strong, is_strong, l_analysis, v_analysis
from .relations import Partition, check_relation_property, check_subset_property
from .terms import TranslationClosure

DEFAULT_PARTITION_CAP = 10**6
DEFAULT_SUBSET_CAP = 2**16
DEFAULT_GENERATION_CAP = 1024

_CONGRUENCE_PROP = {"v": "v-congruence", "l": "l-congruence", "full": "congruence"}


def bell_number(m: int) -> int:
    """Number of partitions of an m-element set."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def enumerate_partitions(m: int, cap: int = DEFAULT_PARTITION_CAP):
    """All partitions of 0..m-1 in restricted-growth-string order."""
    total = bell_number(m)
    if total > cap:
        raise CapacityError(f"{total} partitions exceed cap {cap}")
    return _partition_gen(m)


def _partition_gen(m):
    labels = [0] * m

    def rec(i, used):
        if i == m:
            yield Partition.from_labels(labels)
            return
        for v in range(used + 1):
            labels[i] = v
            yield from rec(i + 1, max(used, v + 1))

    if m == 0:
        yield Partition(())
        return
    yield from rec(1, 1)


def enumerate_congruences(alg: MengerAlgebra, kind: str, cap: int = DEFAULT_PARTITION_CAP):
    """Partitions compatible with the operation; kind "v", "l" or "full"."""
    try:
        prop = _CONGRUENCE_PROP[kind]
    except KeyError:
        raise ValueError(f"unknown congruence kind {kind!r}") from None
    return [
        p
        for p in enumerate_partitions(alg.size, cap)
        if check_relation_property(alg, p, prop).ok
    ]


@dataclass(frozen=True)
class ClassificationRow:
    subset: frozenset
    strong: bool
    l_strong: bool
    bistrong: bool
    normal_v_complex: bool
    normal_l_complex: bool
    normal_bicomplex: bool
    l_ideal: bool
    s_ideal: bool
    sl_ideal: bool
    l_consistent: bool
    v_residue: frozenset
    l_residue: frozenset
    bi_residue: frozenset
    v_classes: int
    l_classes: int
    bi_classes: int


def classify_subsets(alg: MengerAlgebra, closure: TranslationClosure, cap: int = DEFAULT_SUBSET_CAP):
    """One row per subset, in bitmask order (bit i = element i)."""
    m = alg.size
    if 2**m > cap:
        raise CapacityError(f"2^{m} subsets exceed cap {cap}")
    rows = []
    for mask in range(2**m):
        H = frozenset(i for i in range(m) if mask >> i & 1)
        va = v_analysis(alg, closure, H)
        la = l_analysis(alg, H)
        fa = full_analysis(alg, closure, H)
        rows.append(
            ClassificationRow(
                subset=H,
                strong=is_strong(alg, closure, H).ok,
                l_strong=is_l_strong(alg, H).ok,
                bistrong=is_bistrong(alg, closure, H).ok,
                normal_v_complex=check_subset_property(
                    alg, H, "normal-v-complex", closure=closure
                ).ok,
                normal_l_complex=check_subset_property(alg, H, "normal-l-complex").ok,
                normal_bicomplex=check_subset_property(
                    alg, H, "normal-bicomplex", closure=closure
                ).ok,
                l_ideal=check_subset_property(alg, H, "l-ideal").ok,
                s_ideal=check_subset_property(alg, H, "s-ideal").ok,
                sl_ideal=check_subset_property(alg, H, "sl-ideal").ok,
                l_consistent=check_subset_property(
                    alg, H, "l-consistent", closure=closure
                ).ok,
                v_residue=va.residue,
                l_residue=la.residue,
                bi_residue=fa.residue,
                v_classes=va.partition.num_blocks,
                l_classes=la.partition.num_blocks,
                bi_classes=fa.partition.num_blocks,
            )
        )
    return rows


@dataclass(frozen=True)
class FunctionFamily:
    """Finitary operations on a k-element base set, all of one arity."""

    base_size: int
    arity: int
    functions: tuple

    def __post_init__(self):
        if self.base_size < 1:
            raise ValueError("base_size must be positive")
        if self.arity < 1:
            raise ValueError("arity must be positive")
        fns = []
        want = self.base_size**self.arity
        for f in self.functions:
            f = tuple(int(v) for v in f)
            if len(f) != want:
                raise ValueError(f"function table must have {want} entries")
            if any(not 0 <= v < self.base_size for v in f):
                raise ValueError("function value out of range")
            fns.append(f)
        object.__setattr__(self, "functions", tuple(fns))


def generate_function_algebra(
    generators: FunctionFamily, cap: int = DEFAULT_GENERATION_CAP
) -> MengerAlgebra:
    """Close the generators under superposition f(g1, .., gn) pointwise.

    Functions are tabulated over argument tuples in lexicographic order.
    The carrier keeps discovery order: generators first (duplicates dropped),
    then each pass appends the new superpositions of the snapshot so far.
    Element i is named f<i>.
    """
    if not generators.functions:
        raise ValueError("generators must be nonempty")
    k, n = generators.base_size, generators.arity
    points = list(itertools.product(range(k), repeat=n))
    point_index = {p: i for i, p in enumerate(points)}

    def superpose(f, gs):
        return tuple(
            f[point_index[tuple(g[i] for g in gs)]] for i, _ in enumerate(points)
        )

    funcs = []
    seen = set()
    for f in generators.functions:
        if f not in seen:
            seen.add(f)
            funcs.append(f)
    while True:
        snapshot = list(funcs)
        grew = False
        for f in snapshot:
            for gs in itertools.product(snapshot, repeat=n):
                h = superpose(f, gs)
                if h in seen:
                    continue
                if len(funcs) + 1 > cap:
                    raise CapacityError(f"generated carrier exceeds cap {cap}")
                seen.add(h)
                funcs.append(h)
                grew = True
        if not grew:
            break
    m = len(funcs)
    index = {f: i for i, f in enumerate(funcs)}
    table = np.empty((m,) * (n + 1), dtype=np.int64)
    for fi, f in enumerate(funcs):
        for gs in itertools.product(range(m), repeat=n):
            table[(fi, *gs)] = index[superpose(f, tuple(funcs[g] for g in gs))]
    names = tuple(f"f{i}" for i in range(m))
    return MengerAlgebra(n, names, table, validate=True)


def semigroup_as_menger(mult_table, names: Sequence[str] | None = None) -> MengerAlgebra:
    """Wrap an associative multiplication table as a rank-1 algebra."""
    arr = np.array(mult_table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("multiplication table must be square")
    m = arr.shape[0]
    if names is None:
        # letters stop before the reserved "x"
        if m <= 23:
            names = tuple("abcdefghijklmnopqrstuvw"[:m])
        else:
            names = tuple(f"g{i}" for i in range(m))
    return MengerAlgebra(1, names, arr, validate=True)
