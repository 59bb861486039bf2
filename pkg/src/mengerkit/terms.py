"""Unary polynomial terms and the monoid they generate on the carrier.

A term is either the variable, or head[a1 .. an] where exactly one argument
carries the variable and the rest are constants.  Every term denotes a unary
map on the carrier; maps are stored extensionally as value tuples, so two
terms inducing the same map are identified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import MengerAlgebra
from .errors import (
    ArityError,
    CapacityError,
    MultipleVariablesError,
    NoVariableError,
    TermSyntaxError,
)

DEFAULT_CLOSURE_CAP = 100_000


class _Var:
    """The unique variable; terms share this one instance."""

    __slots__ = ()

    def __repr__(self):
        return "VARIABLE"

    def __eq__(self, other):
        return isinstance(other, _Var)

    def __hash__(self):
        return hash(_Var)


VARIABLE = _Var()


@dataclass(frozen=True)
class Node:
    """head[args]; each arg is an element index, a Node, or VARIABLE."""

    head: int
    args: tuple


Term = object  # _Var | Node; int never appears at top level


def parse_term(alg: MengerAlgebra, text: str) -> Term:
    """Parse "a[b x]"-style text.  Exactly one occurrence of the variable x.

    Tokens are bracket characters and maximal runs of anything else; any
    whitespace separates.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def advance():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def parse_one():
        # returns (tree, has_var); tree is int | Node | VARIABLE
        tok = advance()
        if tok is None:
            raise TermSyntaxError("unexpected end of input")
        if tok in ("[", "]"):
            raise TermSyntaxError(f"unexpected {tok!r}")
        if tok == "x":
            return VARIABLE, True
        head = alg.element(tok)
        if peek() != "[":
            return head, False
        advance()
        args = []
        while peek() != "]":
            if peek() is None:
                raise TermSyntaxError("missing ]")
            args.append(parse_one())
        advance()
        if len(args) != alg.rank:
            raise ArityError(
                f"{alg.names[head]}[..] takes {alg.rank} arguments, got {len(args)}"
            )
        var_count = sum(1 for _, has in args if has)
        if var_count > 1:
            raise MultipleVariablesError("variable occurs more than once")
        if var_count == 0:
            raise NoVariableError(f"no variable under {alg.names[head]}[..]")
        return Node(head, tuple(tree for tree, _ in args)), True

    tree, has_var = parse_one()
    if peek() is not None:
        raise TermSyntaxError(f"unexpected trailing {peek()!r}")
    if not has_var:
        raise NoVariableError("term is a bare constant")
    return tree


def _tokenize(text):
    tokens = []
    cur = []
    for c in text:
        if c in "[]" or c.isspace():
            if cur:
                tokens.append("".join(cur))
                cur = []
            if not c.isspace():
                tokens.append(c)
        else:
            cur.append(c)
    if cur:
        tokens.append("".join(cur))
    return tokens


def format_term(alg: MengerAlgebra, term) -> str:
    """Canonical text: single spaces, no spaces against brackets."""
    if isinstance(term, _Var):
        return "x"
    if isinstance(term, (int, np.integer)):
        return alg.names[int(term)]
    parts = " ".join(format_term(alg, a) for a in term.args)
    return f"{alg.names[term.head]}[{parts}]"


def eval_term(alg: MengerAlgebra, term) -> tuple:
    """Value tuple of the term's unary map: entry g is the term at x := g."""
    m = alg.size
    if isinstance(term, _Var):
        return tuple(range(m))
    tab = alg.table
    sub = None
    pos = -1
    for j, a in enumerate(term.args):
        if not isinstance(a, (int, np.integer)):
            sub = eval_term(alg, a)
            pos = j
    if sub is None:
        raise NoVariableError("term has no variable")
    consts = tuple(
        int(a) if isinstance(a, (int, np.integer)) else -1 for a in term.args
    )
    out = []
    for g in range(m):
        idx = (term.head,) + consts[:pos] + (sub[g],) + consts[pos + 1 :]
        out.append(int(tab[idx]))
    return tuple(out)


def compose(t1: tuple, t2: tuple) -> tuple:
    """Value tuple of t1 after t2."""
    return tuple(t1[v] for v in t2)


def associate_polynomial(alg: MengerAlgebra, term, avec) -> Term:
    """Replace every constant c in the term by c[avec]; heads and x stay put.

    The result satisfies new(g[avec]) = old(g)[avec] for every g.  With
    avec = SELECTOR the term comes back unchanged.
    """
    if isinstance(term, _Var):
        return term
    args = tuple(
        alg.apply(int(a), avec)
        if isinstance(a, (int, np.integer))
        else associate_polynomial(alg, a, avec)
        for a in term.args
    )
    return Node(term.head, args)


class TranslationClosure:
    """All unary maps induced by terms, deduplicated extensionally.

    `tables[i]` is the i-th map's value tuple, `witness(i)` a shortest term
    inducing it.  Index 0 is always the identity with witness x.
    """

    __slots__ = ("algebra", "tables", "_witnesses", "_index", "_value_matrix", "_pair_matrix")

    def __init__(self, algebra, tables, witnesses):
        self.algebra = algebra
        self.tables = tuple(tables)
        self._witnesses = tuple(witnesses)
        self._index = {t: i for i, t in enumerate(self.tables)}
        self._value_matrix = None
        self._pair_matrix = None

    def __len__(self):
        return len(self.tables)

    def __iter__(self):
        return iter(self.tables)

    def index(self, table) -> int:
        return self._index[tuple(table)]

    def __contains__(self, table):
        return tuple(table) in self._index

    def witness(self, i: int) -> Term:
        return self._witnesses[i]

    def value_matrix(self) -> np.ndarray:
        """Row t, column g: tables[t][g]."""
        if self._value_matrix is None:
            mat = np.array(self.tables, dtype=np.int64)
            mat.setflags(write=False)
            self._value_matrix = mat
        return self._value_matrix

    def pair_matrix(self) -> np.ndarray:
        """Row b*len(self)+t, column g: tables[t][g applied to arg_vectors()[b]]."""
        if self._pair_matrix is None:
            vm = self.value_matrix()
            am = self.algebra.apply_matrix()
            mat = vm[:, am]  # (T, B, m)
            mat = np.ascontiguousarray(mat.transpose(1, 0, 2)).reshape(-1, self.algebra.size)
            mat.setflags(write=False)
            self._pair_matrix = mat
        return self._pair_matrix


def translation_closure(alg: MengerAlgebra, cap: int = DEFAULT_CLOSURE_CAP) -> TranslationClosure:
    """Breadth-first closure of the identity under one-layer wrapping.

    Each generation wraps every map of the previous one as head[c.. x ..c]
    for all heads, slots and constant fills, scanned in that lexicographic
    order.  A map is kept the first generation it appears; its witness is the
    minimal new term by (length, text) among that generation's producers.
    """
    m, n = alg.size, alg.rank
    tab = alg.table
    ident = tuple(range(m))
    tables = [ident]
    witnesses = [VARIABLE]
    index = {ident: 0}
    frontier = [0]
    while frontier:
        found = {}  # table -> (sort key, term)
        arrival = {}  # table -> discovery rank within this generation
        for ti in frontier:
            base = tables[ti]
            base_term = witnesses[ti]
            for head in range(m):
                for slot in range(n):
                    for consts in itertools.product(range(m), repeat=n - 1):
                        pre, post = consts[:slot], consts[slot:]
                        new = tuple(
                            int(tab[(head,) + pre + (base[g],) + post])
                            for g in range(m)
                        )
                        if new in index:
                            continue
                        term = Node(head, pre + (base_term,) + post)
                        text = format_term(alg, term)
                        key = (len(text), text)
                        prev = found.get(new)
                        if prev is None:
                            found[new] = (key, term)
                            arrival[new] = len(arrival)
                        elif key < prev[0]:
                            found[new] = (key, term)
        frontier = []
        for table in sorted(found, key=arrival.__getitem__):
            if len(tables) + 1 > cap:
                raise CapacityError(f"translation closure exceeds cap {cap}")
            index[table] = len(tables)
            tables.append(table)
            witnesses.append(found[table][1])
            frontier.append(index[table])
    return TranslationClosure(alg, tables, witnesses)
