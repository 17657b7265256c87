"""Decorated words and forests: shuffles, contracting shuffles, and the order
morphisms between words and forests.

Multiset semantics throughout: every operation returns a Counter mapping a
Word (or Forest) to its multiplicity.  Decorations are exact Gaussian
rationals; two letters are equal iff their decorations are equal exactly.

Contracting covers carry two counting conventions (see
:func:`contracting_covers`); the choice matters as soon as a forest has
incomparable nodes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .values import GaussianRational, as_gaussian, format_exact, parse_exact


@dataclass(frozen=True)
class Letter:
    """A decoration omega from the alphabet; exact value, exact equality."""

    value: GaussianRational

    def __post_init__(self):
        if not isinstance(self.value, GaussianRational):
            object.__setattr__(self, "value", as_gaussian(self.value))

    @property
    def is_positive_integer(self) -> bool:
        return self.value.is_positive_integer

    def __add__(self, other: "Letter") -> "Letter":
        return Letter(self.value + other.value)

    def sort_key(self):
        return self.value.sort_key()

    def __str__(self):
        return format_exact(self.value)

    def __repr__(self):
        return f"Letter({self.value})"


def letter(x) -> Letter:
    if isinstance(x, Letter):
        return x
    if isinstance(x, str):
        return Letter(parse_exact(x))
    return Letter(as_gaussian(x))


@dataclass(frozen=True)
class Word:
    """Finite sequence of letters; the index set of moulds."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(letter(a) for a in self.letters))

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def norm(self) -> GaussianRational:
        total = GaussianRational(0)
        for a in self.letters:
            total = total + a.value
        return total

    def __len__(self):
        return len(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def sort_key(self):
        return tuple(a.sort_key() for a in self.letters)

    def __str__(self):
        return "(" + ",".join(str(a) for a in self.letters) + ")"

    def __repr__(self):
        return f"Word{str(self)}"


EMPTY_WORD = Word(())


def word(*decorations) -> Word:
    if len(decorations) == 1 and isinstance(decorations[0], (list, tuple)):
        decorations = tuple(decorations[0])
    return Word(tuple(letter(x) for x in decorations))


def parse_word(text: str) -> Word:
    """Parse ``(a,b,c)`` with exact decoration literals."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"word must be parenthesised: {text!r}")
    inner = s[1:-1].strip()
    if not inner:
        return EMPTY_WORD
    return word(*[parse_exact(part) for part in _split_top(inner)])


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


# ---------------------------------------------------------------------------
# shuffles
# ---------------------------------------------------------------------------


def shuffle(w1: Word, w2: Word) -> Counter:
    """All interleavings of w1 and w2 preserving internal orders.

    Returns a multiset; the total count is C(r1+r2, r1).
    """
    out: Counter = Counter()
    _shuffle_rec(w1.letters, w2.letters, out, ())
    return out


def _shuffle_rec(a, b, out, prefix):
    if not a:
        out[Word(prefix + b)] += 1
        return
    if not b:
        out[Word(prefix + a)] += 1
        return
    _shuffle_rec(a[1:], b, out, prefix + (a[0],))
    _shuffle_rec(a, b[1:], out, prefix + (b[0],))


def contracting_shuffle(w1: Word, w2: Word) -> Counter:
    """Quasi-shuffle of w1 and w2: ordinary shuffles plus all contractions
    merging one letter of w1 with one adjacent letter of w2 per merged slot.

    Recursion on the last letters: csh(u.a, v.b) = csh(u, v.b).a
    + csh(u.a, v).b + csh(u, v).(a+b).  Each contracted word is produced
    once per quasi-shuffle realization, so csh((a),(b)) has a single
    contraction term (a+b).
    """
    out: Counter = Counter()
    for suffix, mult in _csh_rec(w1.letters, w2.letters).items():
        out[Word(suffix)] += mult
    return out


@lru_cache(maxsize=None)
def _csh_rec(a: tuple, b: tuple) -> Counter:
    if not a:
        return Counter({b: 1})
    if not b:
        return Counter({a: 1})
    out: Counter = Counter()
    for prefix, mult in _csh_rec(a[:-1], b).items():
        out[prefix + (a[-1],)] += mult
    for prefix, mult in _csh_rec(a, b[:-1]).items():
        out[prefix + (b[-1],)] += mult
    merged = a[-1] + b[-1]
    for prefix, mult in _csh_rec(a[:-1], b[:-1]).items():
        out[prefix + (merged,)] += mult
    return out


def shuffle_many(words: Sequence[Word]) -> Counter:
    out: Counter = Counter({EMPTY_WORD: 1})
    for w in words:
        nxt: Counter = Counter()
        for u, m in out.items():
            for v, k in shuffle(u, w).items():
                nxt[v] += m * k
        out = nxt
    return out


def contracting_shuffle_many(words: Sequence[Word]) -> Counter:
    out: Counter = Counter({EMPTY_WORD: 1})
    for w in words:
        nxt: Counter = Counter()
        for u, m in out.items():
            for v, k in contracting_shuffle(u, w).items():
                nxt[v] += m * k
        out = nxt
    return out


# ---------------------------------------------------------------------------
# trees and forests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tree:
    """Decorated rooted tree; children form a Forest (canonically ordered)."""

    root: Letter
    children: "Forest"

    def __post_init__(self):
        object.__setattr__(self, "root", letter(self.root))
        if not isinstance(self.children, Forest):
            object.__setattr__(self, "children", Forest(tuple(self.children)))

    @property
    def node_count(self) -> int:
        return 1 + self.children.node_count

    @property
    def norm(self) -> GaussianRational:
        return self.root.value + self.children.norm

    def sort_key(self):
        return (self.root.sort_key(), self.children.sort_key())

    def __str__(self):
        if not self.children.trees:
            return str(self.root)
        return f"{self.root}({','.join(str(t) for t in self.children.trees)})"

    def __repr__(self):
        return f"Tree[{self}]"


@dataclass(frozen=True)
class Forest:
    """Multiset of decorated trees, stored sorted so equal forests compare equal."""

    trees: tuple[Tree, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.trees, key=lambda t: t.sort_key()))
        object.__setattr__(self, "trees", ordered)

    @property
    def node_count(self) -> int:
        return sum(t.node_count for t in self.trees)

    @property
    def norm(self) -> GaussianRational:
        total = GaussianRational(0)
        for t in self.trees:
            total = total + t.norm
        return total

    def __mul__(self, other: "Forest") -> "Forest":
        return Forest(self.trees + other.trees)

    def sort_key(self):
        return tuple(t.sort_key() for t in self.trees)

    def decorations(self) -> Counter:
        out: Counter = Counter()
        for t in self.trees:
            out[t.root] += 1
            out.update(t.children.decorations())
        return out

    def automorphism_count(self) -> int:
        """Order of the decorated-forest automorphism group."""
        n = 1
        for _, group in itertools.groupby(self.trees, key=lambda t: t.sort_key()):
            block = list(group)
            n *= _factorial(len(block))
            for t in block:
                n *= t.children.automorphism_count()
        return n

    def __str__(self):
        if not self.trees:
            return "<empty>"
        return ";".join(str(t) for t in self.trees)

    def __repr__(self):
        return f"Forest[{self}]"


EMPTY_FOREST = Forest(())


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def tree(root, children: Iterable = ()) -> Tree:
    kids = []
    for c in children:
        kids.append(c if isinstance(c, Tree) else tree(c))
    return Tree(letter(root), Forest(tuple(kids)))


def forest(*trees_: Tree) -> Forest:
    if len(trees_) == 1 and isinstance(trees_[0], (list, tuple)):
        trees_ = tuple(trees_[0])
    return Forest(tuple(t if isinstance(t, Tree) else tree(t) for t in trees_))


def canonicalize(f: Forest) -> Forest:
    """Canonical representative; idempotent and order-insensitive by construction."""
    return Forest(tuple(_canon_tree(t) for t in f.trees))


def _canon_tree(t: Tree) -> Tree:
    return Tree(t.root, Forest(tuple(_canon_tree(c) for c in t.children.trees)))


def parse_forest(text: str) -> Forest:
    """Parse ``a(b,c);d``: trees joined by ';', children in parentheses."""
    s = text.strip()
    if not s or s == "<empty>":
        return EMPTY_FOREST
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return Forest(tuple(_parse_tree(p) for p in parts))


def _parse_tree(text: str) -> Tree:
    s = text.strip()
    if "(" not in s:
        return tree(parse_exact(s))
    head, rest = s.split("(", 1)
    if not rest.endswith(")"):
        raise ValueError(f"bad tree literal: {text!r}")
    inner = rest[:-1]
    children = [_parse_tree(p) for p in _split_top(inner)] if inner.strip() else []
    return Tree(letter(parse_exact(head)), Forest(tuple(children)))


# ---------------------------------------------------------------------------
# order morphisms: words vs forests
# ---------------------------------------------------------------------------


class _Node:
    """Mutable node identity used while enumerating extensions/covers."""

    __slots__ = ("decoration", "parent", "pending")

    def __init__(self, decoration: Letter):
        self.decoration = decoration
        self.parent = None
        self.pending = 0  # number of unplaced predecessors


def _flatten(f: Forest) -> list[_Node]:
    nodes: list[_Node] = []

    def walk(t: Tree, parent):
        node = _Node(t.root)
        node.parent = parent
        nodes.append(node)
        for c in t.children.trees:
            walk(c, node)

    for t in f.trees:
        walk(t, None)
    return nodes


def linear_extensions(f: Forest) -> Counter:
    """All words w <= F: order- and decoration-preserving bijections from the
    nodes of F to word positions, counted once per bijection.

    An antichain of r distinct decorations yields r! words.
    """
    nodes = _flatten(f)
    children: dict[int, list[int]] = {i: [] for i in range(len(nodes))}
    for i, nd in enumerate(nodes):
        if nd.parent is not None:
            children[nodes.index(nd.parent)].append(i)
    out: Counter = Counter()
    available = [i for i, nd in enumerate(nodes) if nd.parent is None]

    def rec(available: list[int], placed: tuple[Letter, ...]):
        if not available:
            out[Word(placed)] += 1
            return
        for idx, i in enumerate(available):
            nxt = available[:idx] + available[idx + 1 :] + children[i]
            rec(nxt, placed + (nodes[i].decoration,))

    rec(available, ())
    return out


def contracting_covers(f: Forest, counting: str = "merges") -> Counter:
    """All words w << F: strict-order-preserving surjections from nodes to
    positions, each position decorated by the sum of its preimages.

    counting='surjections': one count per distinct surjection.  This is the
    convention under which covers of a disjoint union are the contracting
    shuffle of the covers of the parts, so the contracted arborified of a
    symmetrel mould is separative.

    counting='merges' (default): each surjection is weighted by the number
    of linear extensions of its fibers, i.e. one count per (linear
    extension, adjacent-merge pattern) pair.  This reproduces the classical
    worked example giving the cover (a, b+c) of the tree a(b,c) with
    multiplicity 2.
    """
    if counting not in ("merges", "surjections"):
        raise ValueError(f"unknown counting {counting!r}")
    nodes = _flatten(f)
    index_of = {id(nd): i for i, nd in enumerate(nodes)}
    children: dict[int, list[int]] = {i: [] for i in range(len(nodes))}
    for i, nd in enumerate(nodes):
        if nd.parent is not None:
            children[index_of[id(nd.parent)]].append(i)
    out: Counter = Counter()
    roots = frozenset(i for i, nd in enumerate(nodes) if nd.parent is None)

    def rec(avail: frozenset, placed: tuple[Letter, ...], weight: int):
        if not avail:
            out[Word(placed)] += weight
            return
        # each fiber is a nonempty subset of the currently minimal nodes;
        # minimal nodes are pairwise incomparable, so fibers are antichains
        avail_list = sorted(avail)
        for size in range(1, len(avail_list) + 1):
            for combo in itertools.combinations(avail_list, size):
                dec = nodes[combo[0]].decoration
                for i in combo[1:]:
                    dec = dec + nodes[i].decoration
                nxt = set(avail)
                for i in combo:
                    nxt.discard(i)
                    nxt.update(children[i])
                w = weight * (_factorial(size) if counting == "merges" else 1)
                rec(frozenset(nxt), placed + (dec,), w)

    rec(roots, (), 1)
    return out


def forests_of_norm(letters: Sequence[Letter], max_norm: int, max_nodes: int | None = None) -> list[Forest]:
    """All canonical forests with positive-integer decorations drawn from
    ``letters`` and norm <= max_norm (and, optionally, nodes <= max_nodes).

    Deterministic enumeration order: by (norm, node count, sort key).
    """
    values = sorted({a.value.re for a in letters})
    if any(v < 1 or v.denominator != 1 for v in values):
        raise ValueError("forest enumeration needs positive integer decorations")
    trees_by_norm: dict[int, list[Tree]] = {}

    def trees_up_to(n: int) -> list[Tree]:
        out = []
        for m in range(1, n + 1):
            out.extend(trees_by_norm.get(m, []))
        return out

    for n in range(1, max_norm + 1):
        acc: list[Tree] = []
        for v in values:
            v = int(v)
            if v > n:
                continue
            rest = n - v
            for sub in _forests_with_norm(trees_up_to(rest), rest, trees_by_norm):
                t = Tree(letter(v), sub)
                if max_nodes is None or t.node_count <= max_nodes:
                    acc.append(t)
        trees_by_norm[n] = _dedup(acc)
    all_trees = trees_up_to(max_norm)
    out: list[Forest] = []
    for f in _forests_with_norm(all_trees, max_norm, trees_by_norm, include_all_below=True):
        if f.trees and (max_nodes is None or f.node_count <= max_nodes):
            out.append(f)
    out = _dedup(out)
    out.sort(key=lambda f: (int(f.norm.re), f.node_count, f.sort_key()))
    return out


def _forests_with_norm(trees_pool, norm_budget, trees_by_norm, include_all_below=False):
    """Multisets of trees with total norm == budget (or <= budget)."""
    pool = sorted(_dedup(list(trees_pool)), key=lambda t: t.sort_key())
    results: list[Forest] = []

    def rec(start: int, budget: int, acc: tuple):
        if include_all_below or budget == 0:
            results.append(Forest(acc))
        if budget <= 0:
            return
        for i in range(start, len(pool)):
            t = pool[i]
            n = int(t.norm.re)
            if n <= budget:
                rec(i, budget - n, acc + (t,))

    rec(0, norm_budget, ())
    if not include_all_below:
        results = [f for f in results if int(f.norm.re) == norm_budget]
    return _dedup(results)


def _dedup(items):
    seen = set()
    out = []
    for x in items:
        k = x.sort_key() if hasattr(x, "sort_key") else x
        if k not in seen:
            seen.add(k)
            out.append(x)
    return out
