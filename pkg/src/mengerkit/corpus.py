"""Reference algebras the test battery runs against.

Five named algebras (also shipped as data/*.menger) plus every associative
rank-1 table on up to three elements.  Construction order is fixed so names
like S3-17 stay stable.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from importlib.resources import files

import numpy as np

from .core import MengerAlgebra
from .enumeration import FunctionFamily, generate_function_algebra, semigroup_as_menger

NAND2_TABLE = (1, 1, 1, 0)
NAND3_TABLE = (1, 1, 1, 1, 1, 1, 1, 0)


@lru_cache(maxsize=None)
def lz2() -> MengerAlgebra:
    """Two elements, x[y] = x."""
    return MengerAlgebra(1, ("a", "b"), [[0, 0], [1, 1]])


@lru_cache(maxsize=None)
def rz2() -> MengerAlgebra:
    """Two elements, x[y] = y."""
    return MengerAlgebra(1, ("a", "b"), [[0, 1], [0, 1]])


@lru_cache(maxsize=None)
def bool_and() -> MengerAlgebra:
    """One element of rank 2: binary conjunction closed under itself."""
    return MengerAlgebra(2, ("f",), [[[0]]])


@lru_cache(maxsize=None)
def nand2() -> MengerAlgebra:
    """Superposition closure of binary nand: nand, and, const-1, const-0."""
    return generate_function_algebra(FunctionFamily(2, 2, (NAND2_TABLE,)))


@lru_cache(maxsize=None)
def nand3() -> MengerAlgebra:
    """Superposition closure of ternary nand; same four-element shape at rank 3."""
    return generate_function_algebra(FunctionFamily(2, 3, (NAND3_TABLE,)))


def _associative(tab, m):
    for a in range(m):
        for b in range(m):
            ab = tab[a][b]
            for c in range(m):
                if tab[ab][c] != tab[a][tab[b][c]]:
                    return False
    return True


@lru_cache(maxsize=None)
def rank1_algebras(max_size: int = 3):
    """Every associative multiplication table on 1..max_size elements.

    Tables scan in lexicographic order of their flattened rows; the index in
    that scan names the algebra, e.g. S3-0 is the first associative table on
    three elements.
    """
    out = []
    for m in range(1, max_size + 1):
        count = 0
        for flat in itertools.product(range(m), repeat=m * m):
            tab = tuple(flat[i * m : (i + 1) * m] for i in range(m))
            if _associative(tab, m):
                out.append((f"S{m}-{count}", semigroup_as_menger(np.array(tab))))
                count += 1
    return tuple(out)


@lru_cache(maxsize=None)
def corpus():
    """All reference algebras as (name, algebra) pairs."""
    named = (
        ("LZ2", lz2()),
        ("RZ2", rz2()),
        ("BOOL-AND", bool_and()),
        ("NAND2", nand2()),
        ("NAND3", nand3()),
    )
    return named + rank1_algebras()


def data_file(name: str):
    """Path-like handle on a shipped .menger file, e.g. data_file("lz2")."""
    return files("mengerkit") / "data" / f"{name}.menger"
