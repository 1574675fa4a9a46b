"""Decorated binary-tree automorphisms and the level functor.

Elements are depth-d binary trees: internal nodes carry a swap bit, the
2^d leaves carry elements of a base marked group.  Composition follows
the left-action convention for the wreath recursion

    (s; g0, g1) (t; h0, h1) = (s xor t; g_t h0, g_(1 xor t) h1)

so that g h means "apply h first".  The child g0 is the state at input
bit 0.  Nodes are interned, which makes structural equality cheap in the
common case and keeps ball enumerations compact in memory.

The level functor takes a group with the involutive Klein marking
(a, b, c, d) and produces a new one of tree depth one greater, with the
letter x in {0, 1, 2} choosing which torsion generator is "weak" (gets an
identity child) at this level.  Iterating over a letter sequence omega
yields the decorated groups; over the trivial base, plain portrait
groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .marked import MarkedGroup, TrivialGroup, has_involutive_klein_marking
from .words import OmegaWord


class DecoratedElement:
    __slots__ = ("depth", "swap", "left", "right", "leaf", "_hash")

    def __init__(self, depth, swap, left, right, leaf, h):
        self.depth = depth
        self.swap = swap
        self.left = left
        self.right = right
        self.leaf = leaf
        self._hash = h

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, DecoratedElement):
            return NotImplemented
        if (
            self._hash != other._hash
            or self.depth != other.depth
            or self.swap != other.swap
        ):
            return False
        if self.depth == 0:
            return self.leaf == other.leaf
        return self.left == other.left and self.right == other.right

    def __repr__(self):
        if self.depth == 0:
            return f"leaf({self.leaf!r})"
        return f"({self.swap}; {self.left!r}, {self.right!r})"


_POOL: dict = {}


def leaf(value) -> DecoratedElement:
    key = (0, value)
    got = _POOL.get(key)
    if got is None:
        got = _POOL.setdefault(
            key, DecoratedElement(0, 0, None, None, value, hash(key))
        )
    return got


def node(swap: int, left: DecoratedElement, right: DecoratedElement) -> DecoratedElement:
    if left.depth != right.depth:
        raise ValueError("children must have equal depth")
    key = (1, swap, left, right)
    got = _POOL.get(key)
    if got is None:
        got = _POOL.setdefault(
            key,
            DecoratedElement(left.depth + 1, swap, left, right, None, hash(key)),
        )
    return got


def pool_size() -> int:
    return len(_POOL)


def compose(g: DecoratedElement, h: DecoratedElement, base_mul: Callable) -> DecoratedElement:
    if g.depth != h.depth:
        raise ValueError("depth mismatch")
    if g.depth == 0:
        return leaf(base_mul(g.leaf, h.leaf))
    if h.swap == 0:
        l = compose(g.left, h.left, base_mul)
        r = compose(g.right, h.right, base_mul)
    else:
        l = compose(g.right, h.left, base_mul)
        r = compose(g.left, h.right, base_mul)
    return node(g.swap ^ h.swap, l, r)


def invert(g: DecoratedElement, base_inv: Callable) -> DecoratedElement:
    if g.depth == 0:
        return leaf(base_inv(g.leaf))
    if g.swap == 0:
        return node(0, invert(g.left, base_inv), invert(g.right, base_inv))
    return node(1, invert(g.right, base_inv), invert(g.left, base_inv))


def act(g: DecoratedElement, address: tuple) -> tuple:
    """Image of a tree address (tuple of bits) under the element."""
    if len(address) > g.depth:
        raise ValueError("address deeper than the element")
    if not address:
        return ()
    x, rest = address[0], address[1:]
    child = g.left if x == 0 else g.right
    return (x ^ g.swap,) + act(child, rest)


def leaves(g: DecoratedElement) -> list:
    if g.depth == 0:
        return [g.leaf]
    return leaves(g.left) + leaves(g.right)


def leaf_permutation(group_or_elem, depth: int, elem=None) -> tuple:
    """Permutation induced on the 2^depth leaf addresses, in binary order."""
    g = elem if elem is not None else group_or_elem
    if not isinstance(g, DecoratedElement):
        raise TypeError("need a decorated element")
    if depth > g.depth:
        raise ValueError("depth exceeds element depth")
    out = []
    for v in range(1 << depth):
        bits = tuple((v >> (depth - 1 - j)) & 1 for j in range(depth))
        img = act(g, bits)
        out.append(sum(b << (depth - 1 - j) for j, b in enumerate(img)))
    return tuple(out)


@dataclass(frozen=True)
class Portrait:
    """Swap bits of a decorated element, level by level.

    ``bits`` packs the internal nodes in level order: the root is bit 0,
    level L starts at bit 2^L - 1, nodes within a level in binary address
    order.
    """

    depth: int
    bits: int

    @property
    def is_trivial(self) -> bool:
        return self.bits == 0

    def bit(self, level: int, index: int) -> int:
        if not 0 <= level < self.depth:
            raise ValueError("level out of range")
        if not 0 <= index < (1 << level):
            raise ValueError("index out of range")
        return (self.bits >> ((1 << level) - 1 + index)) & 1

    def to_json(self) -> dict:
        return {"depth": self.depth, "bits": format(self.bits, "x")}

    @classmethod
    def from_json(cls, data) -> "Portrait":
        return cls(int(data["depth"]), int(data["bits"], 16))


def portrait(g: DecoratedElement) -> Portrait:
    bits = 0
    pos = 0
    level = [g]
    while level and level[0].depth > 0:
        nxt = []
        for e in level:
            bits |= e.swap << pos
            pos += 1
            nxt.append(e.left)
            nxt.append(e.right)
        level = nxt
    return Portrait(g.depth, bits)


def nontrivial_leaves(g: DecoratedElement, base_identity) -> list:
    """(address, leaf value) pairs for leaves differing from the identity."""
    out = []

    def walk(e, addr):
        if e.depth == 0:
            if e.leaf != base_identity:
                out.append((addr, e.leaf))
            return
        walk(e.left, addr + (0,))
        walk(e.right, addr + (1,))

    walk(g, ())
    return out


# ------------------------------------------------------------ the functor

# per letter x: which torsion generator receives the identity child;
# the other two receive the a-generator on the left
_WEAK = {0: "d", 1: "c", 2: "b"}


class WreathGroup(MarkedGroup):
    """Image of a Klein-marked group under one level-functor application."""

    symbols = ("a", "b", "c", "d")

    def __init__(self, letter: int, base: MarkedGroup):
        if letter not in (0, 1, 2):
            raise ValueError("letter must be 0, 1 or 2")
        if not has_involutive_klein_marking(base):
            raise ValueError(
                f"base {base.label} lacks the involutive Klein marking"
            )
        self.letter = letter
        self.base = base
        if isinstance(base, WreathGroup):
            self.leaf_base = base.leaf_base
            self.depth = base.depth + 1
            self.omega_prefix = (letter,) + base.omega_prefix
            wrap = lambda e: e
        else:
            self.leaf_base = base
            self.depth = 1
            self.omega_prefix = (letter,)
            wrap = leaf
        a, b, c, d = (wrap(base.generator(i)) for i in range(4))
        e = wrap(base.identity())
        self._identity = node(0, e, e)
        weak = _WEAK[letter]
        mk = lambda s, child: node(0, e if s == weak else a, child)
        self._gens = [
            node(1, e, e),
            mk("b", b),
            mk("c", c),
            mk("d", d),
        ]
        self.label = f"F[{letter}]({base.label})"

    def identity(self):
        return self._identity

    def generator(self, i):
        return self._gens[i]

    def mul(self, x, y):
        return compose(x, y, self.leaf_base.mul)

    def inv(self, x):
        return invert(x, self.leaf_base.inv)

    def describe_element(self, x):
        pr = portrait(x)
        nt = nontrivial_leaves(x, self.leaf_base.identity())
        leaf_txt = ", ".join(
            "".join(map(str, addr)) + ": " + self.leaf_base.describe_element(v)
            for addr, v in nt
        )
        return f"portrait {pr.bits:#x} depth {pr.depth}; leaves {{{leaf_txt}}}"


def apply_functor(letter: int, base: MarkedGroup) -> WreathGroup:
    return WreathGroup(letter, base)


def iterate_functor(omega: OmegaWord, k: int, base: MarkedGroup) -> MarkedGroup:
    """k nested functor applications; the outermost uses omega's letter 1."""
    if k < 0:
        raise ValueError("k must be >= 0")
    g = base
    for i in range(k, 0, -1):
        g = apply_functor(omega.letter(i), g)
    if k > 0:
        g.label = f"functor({omega}, {k}, {base.label})"
    return g


def grig(omega: OmegaWord, level: int) -> MarkedGroup:
    """Depth-``level`` portrait group of the decorated family."""
    g = iterate_functor(omega, level, TrivialGroup())
    g.label = f"grig({omega}, {level})"
    return g


# ------------------------------------------------- ball agreement


def ball_agreement_radius(g1: MarkedGroup, g2: MarkedGroup, n_max: int) -> int:
    """Largest r <= n_max with identical marked balls of radius r.

    Runs a synchronized breadth-first search; the forced root-fixing
    label-respecting correspondence either extends or pinpoints the first
    radius at which the balls differ.
    """
    if g1.symbols != g2.symbols:
        raise ValueError("groups must share a marking to compare balls")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    k = g1.k
    e1, e2 = g1.identity(), g2.identity()
    idx1 = {e1: 0}
    idx2 = {e2: 0}
    pairs = [(e1, e2)]
    dist = [0]
    frontier = [0]
    gens1 = g1.generators()
    gens2 = g2.generators()

    def scan(frontier, layer, discover):
        # returns the agreement radius if a divergence shows up, else None
        nxt = []
        for pi in frontier:
            x1, x2 = pairs[pi]
            for s in range(k):
                y1 = g1.mul(x1, gens1[s])
                y2 = g2.mul(x2, gens2[s])
                i1 = idx1.get(y1)
                i2 = idx2.get(y2)
                if i1 is None and i2 is None:
                    if discover:
                        j = len(pairs)
                        idx1[y1] = j
                        idx2[y2] = j
                        pairs.append((y1, y2))
                        dist.append(layer)
                        nxt.append(j)
                    continue
                if i1 == i2:
                    continue
                # the edge lands inside at least one ball; the smallest
                # radius whose balls it refutes is max(layer - 1, d')
                hit = [dist[i] for i in (i1, i2) if i is not None]
                return min(max(layer - 1, min(hit)) - 1, n_max), nxt
        return None, nxt

    for layer in range(1, n_max + 1):
        bad, frontier = scan(frontier, layer, discover=True)
        if bad is not None:
            return bad
        if not frontier:
            return n_max  # both balls closed: entire groups agree
    # discovery done; verify edges among the outermost layer
    bad, _ = scan(frontier, n_max + 1, discover=False)
    return n_max if bad is None else bad
