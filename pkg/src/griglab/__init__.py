"""griglab: a computational laboratory for marked groups.

Exact word calculus over the four involutive letters, dyadic projective
matrices, level-functor constructions on rooted binary trees, product
families with separation witnesses, Cayley-ball exploration, and
statistical estimators for monotone group parameters.
"""

__version__ = "0.1.0"
