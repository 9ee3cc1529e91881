"""Constructive pumping witnesses for trees accepted by a bottom-up automaton.

Decompose an accepted tree along marked nodes, then use the pigeonhole on the
states at the cut points to find a loop: a context c that maps some state q
back to itself. The resulting witness certifies cprime . c^n . tprime is
accepted for every n, algebraically and by bounded spot checks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .automata import Dta, accepts, annotate, pumping_constant, run, run_context
from .decompose import decompose_k, pumping_threshold
from .terms import (
    Context,
    Marking,
    Tree,
    addresses,
    compose,
    power,
    size,
    size_context,
    substitute,
    subtree_at,
)

__all__ = [
    "NotAccepted",
    "NotEnoughMarks",
    "TreeTooSmall",
    "PumpWitness",
    "MultiPumpWitness",
    "VerificationReport",
    "ogden_decompose",
    "standard_decompose",
    "ogden_decompose_multi",
    "pump",
    "pump_multi",
    "verify_witness",
]


class NotAccepted(Exception):
    """The automaton rejects the tree, so no pumping witness exists."""


class NotEnoughMarks(Exception):
    """Fewer marks than the threshold; the guarantee does not apply."""


class TreeTooSmall(Exception):
    """The tree has fewer nodes than the pumping constant."""


@dataclass(frozen=True)
class PumpWitness:
    """A loop at state q: tprime runs to q, c maps q to q, cprime finishes final."""

    cprime: Context
    c: Context
    tprime: Tree
    q: str
    p_used: int

    def __post_init__(self) -> None:
        if size_context(self.c) < 1:
            raise ValueError("the pumped context must be nonempty")
        if self.p_used < 1:
            raise ValueError("p_used must be positive")


@dataclass(frozen=True)
class MultiPumpWitness:
    """Several loops at one shared state q, pumped in lockstep."""

    cprime: Context
    chain: tuple[Context, ...]
    tprime: Tree
    q: str
    p_used: int

    def __post_init__(self) -> None:
        if not self.chain:
            raise ValueError("need at least one pumped context")
        for c in self.chain:
            if size_context(c) < 1:
                raise ValueError("every pumped context must be nonempty")
        if self.p_used < 1:
            raise ValueError("p_used must be positive")


@dataclass(frozen=True)
class VerificationReport:
    """Named check results; the witness verifies iff all of them hold."""

    checks: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


def ogden_decompose(m: Dta, t: Tree, marks: Marking) -> PumpWitness:
    """Extract a pumping witness from an accepted tree with >= p marked nodes.

    Cuts the tree at |Q|+1 interesting nodes along a maximal path; two cuts
    must carry the same state, and the piece between them is the loop. Among
    equal-state index pairs (i, j), the one with smallest i, then smallest j,
    is chosen. The loop contains at least one mark and the pumped part
    c . tprime at most p of them.
    """
    if not accepts(m, t):
        raise NotAccepted("the automaton rejects this tree")
    p = pumping_constant(m)
    if len(marks) < p:
        raise NotEnoughMarks(f"{len(marks)} marks, need at least {p}")
    k = len(m.states)
    dec = decompose_k(t, marks, k)
    ann = annotate(m, t)
    assert ann is not None  # accepts(m, t) already held
    states = [ann[a] for a in dec.cut_addresses]
    pair = None
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            if states[i] == states[j]:
                pair = (i, j)
                break
        if pair:
            break
    assert pair is not None  # k+1 states drawn from k values
    i, j = pair
    cprime = dec.cprime
    for piece in dec.chain[:i]:
        cprime = compose(cprime, piece)
    loop = dec.chain[i]
    for piece in dec.chain[i + 1 : j]:
        loop = compose(loop, piece)
    tprime = subtree_at(t, dec.cut_addresses[j])
    return PumpWitness(cprime, loop, tprime, states[i], p)


def standard_decompose(m: Dta, t: Tree) -> PumpWitness:
    """The all-marked special case: any accepted tree of size >= p pumps."""
    if not accepts(m, t):
        raise NotAccepted("the automaton rejects this tree")
    p = pumping_constant(m)
    if size(t) < p:
        raise TreeTooSmall(f"size {size(t)}, need at least {p}")
    return ogden_decompose(m, t, frozenset(addresses(t)))


def ogden_decompose_multi(
    m: Dta, t: Tree, marks: Marking, mfold: int
) -> MultiPumpWitness:
    """Extract mfold loops at a single shared state.

    With k = mfold * |Q| cuts, some state occurs at least mfold+1 times among
    the k+1 cut states; the pieces between its first mfold+1 occurrences all
    map that state to itself. The most frequent such state is used, ties
    resolved by name order.
    """
    if mfold < 1:
        raise ValueError("mfold must be at least 1")
    if not accepts(m, t):
        raise NotAccepted("the automaton rejects this tree")
    k = mfold * len(m.states)
    p = pumping_threshold(m.alphabet.max_rank, k)
    if len(marks) < p:
        raise NotEnoughMarks(f"{len(marks)} marks, need at least {p}")
    dec = decompose_k(t, marks, k)
    ann = annotate(m, t)
    assert ann is not None
    states = [ann[a] for a in dec.cut_addresses]
    counts = Counter(states)
    top = max(counts.values())
    q = min(s for s, c in counts.items() if c == top)
    assert top >= mfold + 1  # k+1 states drawn from |Q| values
    spots = [i for i, s in enumerate(states) if s == q][: mfold + 1]
    cprime = dec.cprime
    for piece in dec.chain[: spots[0]]:
        cprime = compose(cprime, piece)
    chain = []
    for a, b in zip(spots, spots[1:]):
        loop = dec.chain[a]
        for piece in dec.chain[a + 1 : b]:
            loop = compose(loop, piece)
        chain.append(loop)
    tprime = subtree_at(t, dec.cut_addresses[spots[-1]])
    return MultiPumpWitness(cprime, tuple(chain), tprime, q, p)


def pump(w: PumpWitness, n: int) -> Tree:
    """cprime . c^n . tprime; n = 1 reproduces the source tree exactly."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return substitute(w.cprime, substitute(power(w.c, n), w.tprime))


def pump_multi(w: MultiPumpWitness, n: int) -> Tree:
    """cprime . c_1^n . ... . c_m^n . tprime, all loops pumped in lockstep."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    t = w.tprime
    for c in reversed(w.chain):
        t = substitute(power(c, n), t)
    return substitute(w.cprime, t)


def verify_witness(
    m: Dta, w: PumpWitness | MultiPumpWitness, max_n: int = 4
) -> VerificationReport:
    """Check the algebraic certificate, then pumped membership for n in 0..max_n.

    The certificate (tprime runs to q, every loop maps q to q, cprime sends q
    to a final state) covers all n at once; the spot checks catch witnesses
    whose pieces were assembled inconsistently.
    """
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    checks: list[tuple[str, bool]] = []
    checks.append(("tprime_state", run(m, w.tprime) == w.q))
    if isinstance(w, MultiPumpWitness):
        for i, c in enumerate(w.chain, 1):
            checks.append((f"loop_state_c{i}", run_context(m, c, w.q) == w.q))
        pumped = pump_multi
    else:
        checks.append(("loop_state", run_context(m, w.c, w.q) == w.q))
        pumped = pump
    root = run_context(m, w.cprime, w.q)
    checks.append(("cprime_final", root is not None and root in m.final))
    for n in range(max_n + 1):
        checks.append((f"pump_n{n}", accepts(m, pumped(w, n))))
    return VerificationReport(tuple(checks))
