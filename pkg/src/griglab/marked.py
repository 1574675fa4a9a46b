"""Marked groups: a fixed generator tuple plus exact group operations.

A marked group here is a group given by an ordered tuple of generator
symbols together with computable multiplication, inversion and equality
on canonical element values.  Words over the symbols evaluate by folding
multiplication over generator images, so triviality and equality of words
are decidable wherever element equality is.

The zoo covers the standard comparison targets: free groups, cyclic
groups, grid (free abelian) groups, the rank-4 involutive base group, its
exact matrix realization, the trivial marking, and finite direct products
of compatibly marked groups.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

from . import matrixh, words


class MarkedGroup:
    """Base class; subclasses fill in the four core operations."""

    symbols: tuple = ()
    label: str = "group"

    @property
    def k(self) -> int:
        return len(self.symbols)

    def identity(self):
        raise NotImplementedError

    def generator(self, i: int):
        raise NotImplementedError

    def generators(self) -> list:
        return [self.generator(i) for i in range(self.k)]

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def inverse_symbol_index(self, i: int) -> int:
        """Index of the symbol whose image inverts generator i."""
        gi_inv = self.inv(self.generator(i))
        for j in range(self.k):
            if self.generator(j) == gi_inv:
                return j
        raise ValueError(f"generating set of {self.label} is not symmetric")

    def parse(self, w: Union[str, Iterable]) -> tuple:
        """Word as a tuple of generator indices."""
        if isinstance(w, str):
            if w in ("e", "1", ""):
                return ()
            out = []
            for ch in w:
                if ch not in self.symbols:
                    raise ValueError(f"unknown symbol {ch!r} for {self.label}")
                out.append(self.symbols.index(ch))
            return tuple(out)
        items = tuple(w)
        if all(isinstance(t, int) for t in items):
            for t in items:
                if not 0 <= t < self.k:
                    raise ValueError(f"generator index {t} out of range")
            return items
        return self.parse("".join(items))

    def evaluate(self, w: Union[str, Iterable]):
        x = self.identity()
        for i in self.parse(w):
            x = self.mul(x, self.generator(i))
        return x

    def is_trivial_word(self, w) -> bool:
        return self.evaluate(w) == self.identity()

    def distance(self, x) -> Union[int, None]:
        """Word-metric distance from the identity, when cheaply known."""
        return None

    def describe_element(self, x) -> str:
        return repr(x)

    def __repr__(self) -> str:
        return f"<{self.label}>"


def evaluate(group: MarkedGroup, w) -> object:
    return group.evaluate(w)


class TrivialGroup(MarkedGroup):
    """One-element group carrying the standard four-symbol marking."""

    symbols = ("a", "b", "c", "d")

    def __init__(self):
        self.label = "trivial"

    def identity(self):
        return "e"

    def generator(self, i):
        return "e"

    def mul(self, x, y):
        return "e"

    def inv(self, x):
        return "e"

    def distance(self, x):
        return 0


class GammaFree(MarkedGroup):
    """The rank-4 involutive group: Z/2 * (Z/2 x Z/2) on a, b, c, d.

    Elements are normal-form words; the normal form is a geodesic, so its
    length is the word metric.
    """

    symbols = ("a", "b", "c", "d")

    def __init__(self):
        self.label = "gamma_free()"

    def identity(self):
        return ()

    def generator(self, i):
        return (self.symbols[i],)

    def mul(self, x, y):
        return words.mul(x, y)

    def inv(self, x):
        return words.inverse(x)

    def evaluate(self, w):
        if isinstance(w, str):
            return words.reduce(w)
        idx = self.parse(w)
        return words.reduce(tuple(self.symbols[i] for i in idx))

    def distance(self, x):
        return len(x)

    def describe_element(self, x):
        return words.word_str(x)


class MatrixHGroup(MarkedGroup):
    """Exact projective-matrix realization of the four involutions."""

    symbols = ("a", "b", "c", "d")

    def __init__(self):
        self.label = "matrix_h()"
        self._gens = [matrixh.generator_matrices()[s] for s in self.symbols]

    def identity(self):
        return matrixh.MAT_ID

    def generator(self, i):
        return self._gens[i]

    def mul(self, x, y):
        return x @ y

    def inv(self, x):
        return x.inverse()


_FREE_LETTERS = "xyzw"


class FreeGroup(MarkedGroup):
    """Free group of rank m <= 4; symbols x, X, y, Y, ... in inverse pairs.

    Elements are tuples of nonzero ints (sign encodes inversion), freely
    reduced, so length is the word metric.
    """

    def __init__(self, rank: int):
        if not 1 <= rank <= 4:
            raise ValueError("rank must be between 1 and 4")
        self.rank = rank
        self.symbols = tuple(
            ch for i in range(rank) for ch in (_FREE_LETTERS[i], _FREE_LETTERS[i].upper())
        )
        self.label = f"free({rank})"

    def identity(self):
        return ()

    def generator(self, i):
        base = i // 2 + 1
        return (base,) if i % 2 == 0 else (-base,)

    def mul(self, x, y):
        out = list(x)
        for t in y:
            if out and out[-1] == -t:
                out.pop()
            else:
                out.append(t)
        return tuple(out)

    def inv(self, x):
        return tuple(-t for t in reversed(x))

    def distance(self, x):
        return len(x)


class CyclicGroup(MarkedGroup):
    """Z/n marked by a generator and its inverse (two symbols)."""

    symbols = ("s", "S")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.label = f"cycle({n})"

    def identity(self):
        return 0

    def generator(self, i):
        return 1 % self.n if i == 0 else (-1) % self.n

    def mul(self, x, y):
        return (x + y) % self.n

    def inv(self, x):
        return (-x) % self.n

    def distance(self, x):
        return min(x, self.n - x)


class GridGroup(MarkedGroup):
    """Z^d with the standard basis marking, d <= 4."""

    def __init__(self, dim: int):
        if not 1 <= dim <= 4:
            raise ValueError("dim must be between 1 and 4")
        self.dim = dim
        self.symbols = tuple(
            ch for i in range(dim) for ch in (_FREE_LETTERS[i], _FREE_LETTERS[i].upper())
        )
        self.label = f"grid({dim})"

    def identity(self):
        return (0,) * self.dim

    def generator(self, i):
        v = [0] * self.dim
        v[i // 2] = 1 if i % 2 == 0 else -1
        return tuple(v)

    def mul(self, x, y):
        return tuple(p + q for p, q in zip(x, y))

    def inv(self, x):
        return tuple(-p for p in x)

    def distance(self, x):
        return sum(abs(p) for p in x)


class ProductGroup(MarkedGroup):
    """Direct product of groups sharing one marking, generated diagonally."""

    def __init__(self, factors: Sequence[MarkedGroup], component_labels=None):
        factors = list(factors)
        if not factors:
            raise ValueError("need at least one factor")
        syms = factors[0].symbols
        for g in factors[1:]:
            if g.symbols != syms:
                raise ValueError("factors must share the same marking symbols")
        self.factors = factors
        self.symbols = syms
        self.component_labels = (
            list(component_labels)
            if component_labels is not None
            else [g.label for g in factors]
        )
        self.label = "product(" + ", ".join(g.label for g in factors) + ")"

    def identity(self):
        return tuple(g.identity() for g in self.factors)

    def generator(self, i):
        return tuple(g.generator(i) for g in self.factors)

    def mul(self, x, y):
        return tuple(g.mul(p, q) for g, p, q in zip(self.factors, x, y))

    def inv(self, x):
        return tuple(g.inv(p) for g, p in zip(self.factors, x))

    def component_triviality(self, x) -> list:
        return [p == g.identity() for g, p in zip(self.factors, x)]

    def describe_element(self, x):
        parts = [
            f"{lbl}: {g.describe_element(p)}"
            for lbl, g, p in zip(self.component_labels, self.factors, x)
        ]
        return "(" + "; ".join(parts) + ")"


def product(factors: Sequence[MarkedGroup], component_labels=None) -> ProductGroup:
    return ProductGroup(factors, component_labels)


def has_involutive_klein_marking(g: MarkedGroup) -> bool:
    """True when g carries four involutions a, b, c, d with bc = d.

    This is the shape of marking the level functor consumes.
    """
    if g.k != 4:
        return False
    e = g.identity()
    gens = g.generators()
    if any(g.mul(s, s) != e for s in gens):
        return False
    return g.mul(gens[1], gens[2]) == gens[3]
