"""XOR-shared bits across n parties and NLB-assisted Boolean evaluation.

A distributed bit is held as one share per party whose XOR is the plaintext.
Initialisation and negation are local; the AND of two distributed bits costs
n(n-1) NLB firings, one per ordered cross-term x_i AND y_j (i != j) in the
expansion of (XOR_i x_i) AND (XOR_j y_j). Whole NOT/AND formula trees are
then evaluated gate by gate; ORs are rewritten through De Morgan at
construction time so the binary-AND count is the single cost metric.

These are pure reference functions with explicitly supplied free bits; the
same constructions wired into the round executor live in ``strategies``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .engine import nlb_evaluate


class FormulaError(Exception):
    pass


@dataclass(frozen=True)
class DistributedBit:
    shares: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.shares)

    def plaintext(self) -> int:
        """XOR of all shares. Oracle-side reveal for tests and verifiers;
        party programs only ever see their own share."""
        v = 0
        for s in self.shares:
            v ^= s
        return v


# --- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


def conj(terms):
    """Left-folded AND of one or more formulas."""
    terms = list(terms)
    if not terms:
        raise FormulaError("empty conjunction")
    acc = terms[0]
    for t in terms[1:]:
        acc = And(acc, t)
    return acc


def disj(terms):
    """Left-folded OR, rewritten via De Morgan so only NOT/AND remain."""
    terms = list(terms)
    if not terms:
        raise FormulaError("empty disjunction")
    acc = terms[0]
    for t in terms[1:]:
        acc = Not(And(Not(acc), Not(t)))
    return acc


def and_count(formula) -> int:
    if isinstance(formula, (Leaf, Const)):
        return 0
    if isinstance(formula, Not):
        return and_count(formula.child)
    if isinstance(formula, And):
        return 1 + and_count(formula.left) + and_count(formula.right)
    raise FormulaError(f"not a formula node: {formula!r}")


def leaf_count(formula) -> int:
    if isinstance(formula, Leaf):
        return formula.index + 1
    if isinstance(formula, Const):
        return 0
    if isinstance(formula, Not):
        return leaf_count(formula.child)
    if isinstance(formula, And):
        return max(leaf_count(formula.left), leaf_count(formula.right))
    raise FormulaError(f"not a formula node: {formula!r}")


def formula_eval(formula, values) -> int:
    """Plain Boolean evaluation; the independent oracle for dist_eval."""
    if isinstance(formula, Leaf):
        return values[formula.index] & 1
    if isinstance(formula, Const):
        return formula.value & 1
    if isinstance(formula, Not):
        return 1 ^ formula_eval(formula.child, values)
    if isinstance(formula, And):
        return formula_eval(formula.left, values) & formula_eval(formula.right, values)
    raise FormulaError(f"not a formula node: {formula!r}")


def flatten(formula) -> list[tuple]:
    """Post-order flat form: entries are ('leaf', v), ('const', v),
    ('not', child_pos), or ('and', left_pos, right_pos, and_ordinal).
    The and_ordinal numbers AND gates in evaluation order."""
    nodes: list[tuple] = []
    counter = itertools.count()

    def walk(f) -> int:
        if isinstance(f, Leaf):
            nodes.append(("leaf", f.index))
        elif isinstance(f, Const):
            nodes.append(("const", f.value & 1))
        elif isinstance(f, Not):
            c = walk(f.child)
            nodes.append(("not", c))
        elif isinstance(f, And):
            l = walk(f.left)
            r = walk(f.right)
            nodes.append(("and", l, r, next(counter)))
        else:
            raise FormulaError(f"not a formula node: {f!r}")
        return len(nodes) - 1

    walk(formula)
    return nodes


def majority_formula(n: int):
    """Biased majority over n bits as a NOT/AND tree: the OR over all
    (floor(n/2)+1)-subsets, in lexicographic subset order, of the left-folded
    AND of the subset's leaves. AND-gate count:
    floor(n/2) * C(n, floor(n/2)+1) + C(n, floor(n/2)+1) - 1."""
    if n < 2:
        raise FormulaError("majority_formula needs n >= 2")
    k = n // 2 + 1
    terms = [conj(Leaf(i) for i in subset)
             for subset in itertools.combinations(range(n), k)]
    return disj(terms)


# --- distributed operations -------------------------------------------------

def gadget_f(a1: int, a2: int, b1: int, b2: int, seeds) -> tuple[int, int]:
    """Two-party distributed computation of (a1 XOR b1) AND (a2 XOR b2).

    Expanding gives a1a2 XOR b1b2 XOR a1b2 XOR a2b1: the first two terms are
    local and each cross term costs one NLB, so exactly two free bits are
    consumed. Returns (a, b) with a XOR b equal to the target for every seed.
    """
    if len(seeds) != 2:
        raise ValueError("gadget_f consumes exactly 2 free bits")
    za1, zb1 = nlb_evaluate(a1, b2, seeds[0])
    za2, zb2 = nlb_evaluate(a2, b1, seeds[1])
    a = (a1 & a2) ^ za1 ^ za2
    b = (b1 & b2) ^ zb1 ^ zb2
    return a, b


def dist_init(owner: int, value: int, n: int) -> DistributedBit:
    """Initialise a distributed bit from one party's local bit: the owner's
    share is the value, everyone else holds 0."""
    if not 0 <= owner < n:
        raise ValueError("owner out of range")
    return DistributedBit(tuple(value & 1 if i == owner else 0 for i in range(n)))


def dist_not(x: DistributedBit) -> DistributedBit:
    """Negate by flipping party 0's share (any single party would do)."""
    return DistributedBit((x.shares[0] ^ 1,) + x.shares[1:])


def cross_pairs(n: int):
    """The n(n-1) ordered party pairs, in the fixed (i, j) lexicographic
    order in which dist_and consumes its free bits."""
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def dist_and(x: DistributedBit, y: DistributedBit, seeds) -> DistributedBit:
    """Distributed AND: each party keeps its local conjunction x_i AND y_i and
    XORs in its outputs from one NLB per ordered cross pair (i, j), where
    party i feeds its x-share and party j its y-share."""
    n = x.n
    if y.n != n:
        raise ValueError("operands must share the same party count")
    if len(seeds) != n * (n - 1):
        raise ValueError(f"dist_and over {n} parties consumes {n * (n - 1)} free bits")
    acc = [x.shares[i] & y.shares[i] for i in range(n)]
    for (i, j), r in zip(cross_pairs(n), seeds):
        zi, zj = nlb_evaluate(x.shares[i], y.shares[j], r)
        acc[i] ^= zi
        acc[j] ^= zj
    return DistributedBit(tuple(acc))


def dist_eval(formula, leaves, seeds) -> DistributedBit:
    """Evaluate a NOT/AND formula on distributed leaves, consuming n(n-1)
    free bits per AND gate in post-order gate order."""
    leaves = list(leaves)
    if not leaves:
        raise FormulaError("at least one leaf required")
    n = leaves[0].n
    if any(leaf.n != n for leaf in leaves):
        raise ValueError("leaves must share the same party count")
    if leaf_count(formula) > len(leaves):
        raise FormulaError("formula references a missing leaf")
    per_gate = n * (n - 1)
    need = per_gate * and_count(formula)
    if len(seeds) != need:
        raise ValueError(f"formula needs {need} free bits, got {len(seeds)}")

    pos = 0

    def walk(f) -> DistributedBit:
        nonlocal pos
        if isinstance(f, Leaf):
            return leaves[f.index]
        if isinstance(f, Const):
            return dist_init(0, f.value, n)
        if isinstance(f, Not):
            return dist_not(walk(f.child))
        if isinstance(f, And):
            left = walk(f.left)
            right = walk(f.right)
            chunk = seeds[pos:pos + per_gate]
            pos += per_gate
            return dist_and(left, right, chunk)
        raise FormulaError(f"not a formula node: {f!r}")

    return walk(formula)
