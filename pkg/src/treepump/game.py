"""The pumping adversary game, played to completion against a language oracle.

We present a tree in the language; the adversary picks any decomposition that
is legal under the agreed constraint (classic size bound or mark-based); we
then try to push the pumped tree out of the language with some n. The report
covers every legal decomposition, so a WE_WIN verdict is exhaustive and an
ADVERSARY_SURVIVES verdict names the surviving choices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .automata import Dta, accepts
from .terms import (
    Address,
    Context,
    Marking,
    RankedAlphabet,
    Tree,
    check_marks,
    is_strict_prefix,
    split,
    substitute,
    walk,
)

__all__ = [
    "DEFAULT_MAX_N",
    "LanguageOracle",
    "GameConstraint",
    "Candidate",
    "Verdict",
    "GameReport",
    "builtin_oracle",
    "dta_oracle",
    "enumerate_decompositions",
    "refute",
    "play",
]

DEFAULT_MAX_N = 5


@dataclass(frozen=True)
class LanguageOracle:
    """A named total membership predicate over trees of a fixed alphabet."""

    name: str
    alphabet: RankedAlphabet
    membership: Callable[[Tree], bool]


@dataclass(frozen=True)
class GameConstraint:
    """What the adversary's decomposition must satisfy.

    classic: the pumped context is nonempty and size(c . tprime) <= p.
    ogden:   c contains a marked node and c . tprime at most p of them.
    """

    mode: str
    p: int
    marks: Marking | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("classic", "ogden"):
            raise ValueError(f"unknown constraint mode {self.mode!r}")
        if self.p < 1:
            raise ValueError("p must be positive")
        if self.mode == "ogden" and self.marks is None:
            raise ValueError("ogden constraint needs a marking")
        if self.mode == "classic" and self.marks is not None:
            raise ValueError("classic constraint takes no marking")

    @classmethod
    def classic(cls, p: int) -> GameConstraint:
        return cls("classic", p)

    @classmethod
    def ogden(cls, p: int, marks: Marking) -> GameConstraint:
        return cls("ogden", p, frozenset(marks))


@dataclass(frozen=True)
class Candidate:
    """One legal decomposition t = cprime . c . tprime, cut at (u, v)."""

    u: Address
    v: Address
    cprime: Context
    c: Context
    tprime: Tree


@dataclass(frozen=True)
class Verdict:
    """Outcome for one candidate: refuted at the smallest n, or unrefuted."""

    candidate: Candidate
    refuted_at: int | None
    counterexample: Tree | None
    up_to: int


@dataclass(frozen=True)
class GameReport:
    verdicts: tuple[Verdict, ...]
    max_n: int

    @property
    def we_win(self) -> bool:
        return all(v.refuted_at is not None for v in self.verdicts)

    @property
    def overall(self) -> str:
        return "WE_WIN" if self.we_win else "ADVERSARY_SURVIVES"


def _unary_run(t: Tree, label: str) -> tuple[int, Tree]:
    n = 0
    while t.label == label and len(t.children) == 1:
        n += 1
        t = t.children[0]
    return n, t


def _is_l1(t: Tree) -> bool:
    # f(g^n a, g^n a) with matching n >= 1
    if t.label != "f" or len(t.children) != 2:
        return False
    n1, rest1 = _unary_run(t.children[0], "g")
    n2, rest2 = _unary_run(t.children[1], "g")
    return (
        n1 == n2 >= 1
        and rest1.label == "a"
        and not rest1.children
        and rest2.label == "a"
        and not rest2.children
    )


def _is_l2(t: Tree) -> bool:
    # f(g^n h^m1 a, g^n h^m2 a) with n >= 1 shared, m1, m2 >= 1 free
    if t.label != "f" or len(t.children) != 2:
        return False
    n1, rest1 = _unary_run(t.children[0], "g")
    m1, core1 = _unary_run(rest1, "h")
    n2, rest2 = _unary_run(t.children[1], "g")
    m2, core2 = _unary_run(rest2, "h")
    return (
        n1 == n2 >= 1
        and m1 >= 1
        and m2 >= 1
        and core1.label == "a"
        and not core1.children
        and core2.label == "a"
        and not core2.children
    )


_BUILTINS = {
    "L1": (RankedAlphabet({"f": 2, "g": 1, "a": 0}), _is_l1),
    "L2": (RankedAlphabet({"f": 2, "g": 1, "h": 1, "a": 0}), _is_l2),
}


def builtin_oracle(name: str) -> LanguageOracle:
    """L1: f(g^n a, g^n a), n >= 1. L2: f(g^n h^m1 a, g^n h^m2 a), all >= 1."""
    try:
        alphabet, membership = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown oracle {name!r}") from None
    return LanguageOracle(name, alphabet, membership)


def dta_oracle(m: Dta, name: str = "dta") -> LanguageOracle:
    """Wrap an automaton's accepts as a game oracle."""
    return LanguageOracle(name, m.alphabet, lambda t: accepts(m, t))


def enumerate_decompositions(
    t: Tree, constraint: GameConstraint
) -> list[Candidate]:
    """Every legal decomposition, ordered lexicographically by (u, v).

    Walks all strict ancestor pairs; admissibility is decided from per-subtree
    size and mark counts before any context is built.
    """
    nodes = list(walk(t))  # preorder = lexicographic
    index = {addr: i for i, (addr, _) in enumerate(nodes)}
    sizes: dict[Address, int] = {}
    marked: dict[Address, int] = {}
    if constraint.mode == "ogden":
        assert constraint.marks is not None
        check_marks(t, constraint.marks)
    for addr, node in reversed(nodes):
        k = len(node.children)
        sizes[addr] = 1 + sum(sizes[addr + (i + 1,)] for i in range(k))
        if constraint.mode == "ogden":
            marked[addr] = (addr in constraint.marks) + sum(
                marked[addr + (i + 1,)] for i in range(k)
            )
    out: list[Candidate] = []
    for i, (u, _) in enumerate(nodes):
        if constraint.mode == "classic":
            if sizes[u] > constraint.p:
                continue
        else:
            if marked[u] > constraint.p:
                continue
        # descendants of u sit in one contiguous preorder block right after it
        j = i + 1
        while j < len(nodes) and is_strict_prefix(u, nodes[j][0]):
            v = nodes[j][0]
            j += 1
            if constraint.mode == "ogden" and marked[u] - marked[v] < 1:
                continue
            cprime, c, tprime = split(t, u, v)
            out.append(Candidate(u, v, cprime, c, tprime))
    return out


def _pump_candidate(d: Candidate, n: int) -> Tree:
    inner = d.tprime
    for _ in range(n):
        inner = substitute(d.c, inner)
    return substitute(d.cprime, inner)


def refute(oracle: LanguageOracle, d: Candidate, max_n: int) -> int | None:
    """Smallest n in 0..max_n whose pumped tree leaves the language, if any."""
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    inner = d.tprime
    for n in range(max_n + 1):
        if not oracle.membership(substitute(d.cprime, inner)):
            return n
        inner = substitute(d.c, inner)
    return None


def play(
    oracle: LanguageOracle,
    t: Tree,
    constraint: GameConstraint,
    max_n: int = DEFAULT_MAX_N,
) -> GameReport:
    """Adjudicate every legal adversary move; WE_WIN iff all are refuted.

    A tree admitting no legal decomposition is a vacuous win: the adversary
    cannot move.
    """
    oracle.alphabet.check_tree(t)
    verdicts = []
    for d in enumerate_decompositions(t, constraint):
        n = refute(oracle, d, max_n)
        ce = _pump_candidate(d, n) if n is not None else None
        verdicts.append(Verdict(d, n, ce, max_n))
    return GameReport(tuple(verdicts), max_n)
