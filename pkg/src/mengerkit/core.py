"""Finite algebras with one (n+1)-ary superassociative operation.

Elements are indices 0..size-1; names are display-only.  The operation is a
dense numpy table of shape (size,)*(rank+1), so g[x1..xn] = table[g, x1, .., xn].
"""

from __future__ import annotations

import itertools
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DuplicateEntryError,
    MissingEntryError,
    NotSuperassociativeError,
    UnknownElementError,
)

# ceiling on size**(rank+1); tables never get larger than this
MAX_TABLE_ENTRIES = 10**7

_FORBIDDEN_NAMES = frozenset({"x", "->"})
_FORBIDDEN_CHARS = frozenset("[]#")


class _Selector:
    """Stand-in for the argument vector of selectors; g applied to it is g itself."""

    __slots__ = ()

    def __repr__(self):
        return "SELECTOR"

    def __eq__(self, other):
        return isinstance(other, _Selector)

    def __hash__(self):
        return hash(_Selector)


SELECTOR = _Selector()


def _check_names(names):
    if not names:
        raise ValueError("carrier must be nonempty")
    seen = set()
    for nm in names:
        if not isinstance(nm, str) or not nm:
            raise ValueError(f"element name must be a nonempty string, got {nm!r}")
        if nm in _FORBIDDEN_NAMES:
            raise ValueError(f"element name {nm!r} is reserved")
        if any(c.isspace() or c in _FORBIDDEN_CHARS for c in nm):
            raise ValueError(f"element name {nm!r} contains whitespace or [ ] #")
        if nm in seen:
            raise ValueError(f"element name {nm!r} repeated")
        seen.add(nm)


class SuperassocReport(NamedTuple):
    ok: bool
    # (f, gs, hs, lhs, rhs) for the lexicographically first violation, else None
    counterexample: tuple | None


class MengerAlgebra:
    """Immutable carrier + operation table.

    `apply`, `apply_slot` and `star` do the index arithmetic; hot paths may
    index `table` directly.
    """

    __slots__ = (
        "rank",
        "size",
        "names",
        "table",
        "_name_index",
        "_arg_tuples",
        "_apply_matrix",
    )

    def __init__(self, rank: int, names: Sequence[str], table, validate: bool = True):
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
        names = tuple(names)
        _check_names(names)
        m = len(names)
        entries = m ** (rank + 1)
        if entries > MAX_TABLE_ENTRIES:
            raise CapacityError(
                f"table would hold {entries} entries (cap {MAX_TABLE_ENTRIES})"
            )
        arr = np.array(table, dtype=np.int64, copy=True)
        if arr.shape != (m,) * (rank + 1):
            raise ValueError(
                f"table shape {arr.shape} does not match {(m,) * (rank + 1)}"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= m):
            raise UnknownElementError("table entry out of range")
        arr.setflags(write=False)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "size", m)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "table", arr)
        object.__setattr__(self, "_name_index", {nm: i for i, nm in enumerate(names)})
        object.__setattr__(self, "_arg_tuples", None)
        object.__setattr__(self, "_apply_matrix", None)
        if validate:
            report = verify_superassociativity(self)
            if not report.ok:
                raise NotSuperassociativeError(report.counterexample)

    def __setattr__(self, key, value):
        raise AttributeError("MengerAlgebra is immutable")

    def __repr__(self):
        return f"MengerAlgebra(rank={self.rank}, size={self.size})"

    def __eq__(self, other):
        return (
            isinstance(other, MengerAlgebra)
            and self.rank == other.rank
            and self.names == other.names
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.rank, self.names, self.table.tobytes()))

    def element(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise UnknownElementError(f"no element named {name!r}") from None

    def name(self, index: int) -> str:
        self._check_element(index)
        return self.names[index]

    def _check_element(self, g):
        if not (isinstance(g, (int, np.integer)) and 0 <= g < self.size):
            raise UnknownElementError(f"no element with index {g!r}")

    def _check_vector(self, xs):
        xs = tuple(xs)
        if len(xs) != self.rank:
            raise ValueError(f"argument vector must have {self.rank} components")
        for x in xs:
            self._check_element(x)
        return xs

    def apply(self, g: int, xs) -> int:
        """g[x1..xn]; xs may be SELECTOR, in which case the result is g."""
        self._check_element(g)
        if isinstance(xs, _Selector):
            return int(g)
        xs = self._check_vector(xs)
        return int(self.table[(g, *xs)])

    def apply_slot(self, u: int, ws, i: int, h: int) -> int:
        """u[w1 .. w_{i-1} h w_{i+1} .. wn]; the slot index i is 1-based."""
        if not 1 <= i <= self.rank:
            raise ValueError(f"slot index {i} out of range 1..{self.rank}")
        ws = self._check_vector(ws)
        self._check_element(h)
        return self.apply(u, ws[: i - 1] + (h,) + ws[i:])

    def star(self, xs, ys):
        """Componentwise composition on argument vectors; SELECTOR is the identity."""
        if isinstance(xs, _Selector):
            return ys if isinstance(ys, _Selector) else self._check_vector(ys)
        if isinstance(ys, _Selector):
            return self._check_vector(xs)
        xs = self._check_vector(xs)
        ys = self._check_vector(ys)
        return tuple(int(self.table[(x, *ys)]) for x in xs)

    def arg_tuples(self) -> tuple:
        """All concrete argument vectors in lexicographic order."""
        if self._arg_tuples is None:
            tuples = tuple(itertools.product(range(self.size), repeat=self.rank))
            object.__setattr__(self, "_arg_tuples", tuples)
        return self._arg_tuples

    def arg_vectors(self) -> tuple:
        """SELECTOR followed by all concrete argument vectors in lexicographic order."""
        return (SELECTOR,) + self.arg_tuples()

    def apply_matrix(self) -> np.ndarray:
        """Row b, column g: g applied to arg_vectors()[b].  Row 0 is the identity."""
        if self._apply_matrix is None:
            m = self.size
            flat = self.table.reshape(m, m**self.rank)
            mat = np.vstack([np.arange(m, dtype=np.int64), flat.T])
            mat.setflags(write=False)
            object.__setattr__(self, "_apply_matrix", mat)
        return self._apply_matrix


def verify_superassociativity(alg: MengerAlgebra) -> SuperassocReport:
    """Exhaustive check of f[g1..gn][h1..hn] = f[g1[h1..hn] .. gn[h1..hn]].

    Scans (f, gs, hs) in lexicographic order and stops at the first violation.
    """
    tab = alg.table
    rng = range(alg.size)
    n = alg.rank
    for f in rng:
        for gs in itertools.product(rng, repeat=n):
            fg = tab[(f, *gs)]
            for hs in itertools.product(rng, repeat=n):
                lhs = tab[(fg, *hs)]
                rhs = tab[(f, *(tab[(g, *hs)] for g in gs))]
                if lhs != rhs:
                    return SuperassocReport(False, (f, gs, hs, int(lhs), int(rhs)))
    return SuperassocReport(True, None)


def build_algebra(
    rank: int,
    names: Sequence[str],
    entries: Iterable[tuple],
    validate: bool = True,
) -> MengerAlgebra:
    """Assemble an algebra from (argument-tuple, result) pairs.

    Each entry is ((g, x1, .., xn), r); components may be names or indices.
    The table must be total: every tuple exactly once.
    """
    names = tuple(names)
    _check_names(names)
    m = len(names)
    index = {nm: i for i, nm in enumerate(names)}

    def resolve(v):
        if isinstance(v, str):
            try:
                return index[v]
            except KeyError:
                raise UnknownElementError(f"no element named {v!r}") from None
        if isinstance(v, (int, np.integer)) and 0 <= v < m:
            return int(v)
        raise UnknownElementError(f"no element with index {v!r}")

    if m ** (rank + 1) > MAX_TABLE_ENTRIES:
        raise CapacityError(
            f"table would hold {m ** (rank + 1)} entries (cap {MAX_TABLE_ENTRIES})"
        )
    arr = np.full((m,) * (rank + 1), -1, dtype=np.int64)
    for args, result in entries:
        args = tuple(args)
        if len(args) != rank + 1:
            raise ValueError(f"entry {args} must have {rank + 1} components")
        key = tuple(resolve(v) for v in args)
        if arr[key] != -1:
            raise DuplicateEntryError(tuple(names[i] for i in key))
        arr[key] = resolve(result)
    if (arr == -1).any():
        flat = int(np.argmax(arr.reshape(-1) == -1))
        key = np.unravel_index(flat, arr.shape)
        raise MissingEntryError(tuple(names[int(i)] for i in key))
    return MengerAlgebra(rank, names, arr, validate=validate)
