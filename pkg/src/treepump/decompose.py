"""Marked-node combinatorics: interesting nodes, path selection, k-cut splits.

The central construction: given a tree with marked nodes, find a root-to-leaf
path rich in *interesting* nodes and cut the tree along its last k+1 of them,
yielding an outer context, a chain of k one-hole pieces, and an inner tree.
Every chain piece is guaranteed to own at least one mark, and the inner part
(chain plus core) carries at most g_sigma(max_rank, k) marks, the counting
bound that makes the whole pumping argument work.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Address,
    Context,
    Marking,
    Tree,
    check_marks,
    context_at,
    is_strict_prefix,
    size_context,
    substitute,
    subtree_at,
    walk,
)

__all__ = [
    "NotEnoughInteresting",
    "Decomposition",
    "g_sigma",
    "pumping_threshold",
    "interesting_nodes",
    "depth_d",
    "max_interesting_path",
    "decompose_k",
    "recompose",
]


class NotEnoughInteresting(Exception):
    """No root-to-leaf path visits k+1 interesting nodes."""


def g_sigma(max_rank: int, n: int) -> int:
    """sum of max_rank**i for i in 0..n; the mark budget for n cuts."""
    if max_rank < 1:
        raise ValueError("max_rank must be at least 1")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(max_rank**i for i in range(n + 1))


def pumping_threshold(max_rank: int, k: int) -> int:
    """g_sigma(max_rank, k), except that rank-0 alphabets get the floor of 2.

    Over an all-nullary alphabet every tree is a single node, so no tree can
    carry 2 marks and the pumping guarantee holds vacuously.
    """
    return 2 if max_rank == 0 else g_sigma(max_rank, k)


@dataclass(frozen=True)
class Decomposition:
    """A k-cut: source = cprime . chain[0] . ... . chain[k-1] . tprime.

    cut_addresses are the k+1 cut points v_1..v_{k+1} in the source tree,
    each a strict ancestor of the next; chain[i] is the piece rooted at
    v_{i+1} with its hole at v_{i+2} (so each piece has size >= 1).
    """

    cprime: Context
    chain: tuple[Context, ...]
    tprime: Tree
    cut_addresses: tuple[Address, ...]

    def __post_init__(self) -> None:
        if len(self.cut_addresses) != len(self.chain) + 1:
            raise ValueError("need exactly one more cut address than chain pieces")
        for u, v in zip(self.cut_addresses, self.cut_addresses[1:]):
            if not is_strict_prefix(u, v):
                raise ValueError("cut addresses must strictly descend")
        for c in self.chain:
            if size_context(c) < 1:
                raise ValueError("chain pieces must be nonempty contexts")


def recompose(d: Decomposition) -> Tree:
    """Plug the pieces back together; equals the source tree by construction."""
    t = d.tprime
    for c in reversed(d.chain):
        t = substitute(c, t)
    return substitute(d.cprime, t)


def interesting_nodes(t: Tree, marks: Marking) -> frozenset[Address]:
    """Least set containing the marks and closed under branching joins.

    A node is interesting iff it is marked, or at least two of its children
    root subtrees that contain an interesting node. One bottom-up pass
    suffices because interestingness at a node depends only on its subtree.
    """
    check_marks(t, marks)
    out: set[Address] = set()
    contains: dict[Address, bool] = {}
    stack: list[tuple[Address, Tree, bool]] = [((), t, False)]
    while stack:
        addr, node, expanded = stack.pop()
        if not expanded:
            stack.append((addr, node, True))
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((addr + (i + 1,), node.children[i], False))
            continue
        busy = sum(contains[addr + (i + 1,)] for i in range(len(node.children)))
        here = addr in marks or busy >= 2
        if here:
            out.add(addr)
        contains[addr] = here or busy >= 1
    return frozenset(out)


def depth_d(t: Tree, interesting: frozenset[Address], u: Address) -> int:
    """Number of interesting strict ancestors of u."""
    subtree_at(t, u)  # validate
    return sum(u[:i] in interesting for i in range(len(u)))


def max_interesting_path(
    t: Tree, interesting: frozenset[Address]
) -> list[Address]:
    """Root-to-leaf address sequence visiting the most interesting nodes.

    Ties go to the lexicographically least leaf, which is the first one in
    preorder, so a single scan with a strict improvement test settles it.
    """
    if not interesting:
        raise ValueError("no interesting nodes")
    best_count = -1
    best_leaf: Address = ()
    stack: list[tuple[Address, Tree, int]] = [((), t, 0)]
    while stack:
        addr, node, above = stack.pop()
        count = above + (addr in interesting)
        if not node.children:
            if count > best_count:
                best_count, best_leaf = count, addr
            continue
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((addr + (i + 1,), node.children[i], count))
    return [best_leaf[:i] for i in range(len(best_leaf) + 1)]


def decompose_k(t: Tree, marks: Marking, k: int) -> Decomposition:
    """Cut t along the last k+1 interesting nodes of a maximal path.

    Raises NotEnoughInteresting when no root-to-leaf path visits k+1
    interesting nodes; by the counting bound this cannot happen once
    |marks| >= g_sigma(max_rank, k), but callers below that threshold are
    welcome to try. On success, every chain piece owns at least one mark
    (the piece's own cut node, or a marked node reachable without passing
    the next cut), and the subtree at the first cut carries at most
    g_sigma(max_rank, k) marks.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    interesting = interesting_nodes(t, marks)
    if not interesting:
        raise NotEnoughInteresting(
            f"no interesting nodes at all, need a path with {k + 1}"
        )
    path = max_interesting_path(t, interesting)
    on_path = [a for a in path if a in interesting]
    if len(on_path) < k + 1:
        raise NotEnoughInteresting(
            f"best path visits {len(on_path)} interesting nodes, need {k + 1}"
        )
    cuts = tuple(on_path[-(k + 1) :])
    cprime = context_at(t, cuts[0])
    chain = []
    for u, v in zip(cuts, cuts[1:]):
        chain.append(context_at(subtree_at(t, u), v[len(u) :]))
    tprime = subtree_at(t, cuts[-1])
    return Decomposition(cprime, tuple(chain), tprime, cuts)
