"""Deterministic bottom-up tree automata with a partial transition table.

A missing transition behaves as an implicit rejecting sink: runs return None
instead of a state. The text format is line-oriented::

    # free-form comment
    alphabet: f/2 g/1 a/0
    states: q0 q1
    final: q0
    trans: a -> q1
    trans: g(q1) -> q1
    trans: f(q1,q1) -> q0

Sections may appear in any order; duplicate symbol declarations and duplicate
transition left-hand sides are errors.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .decompose import pumping_threshold
from .terms import HOLE, Address, Context, RankedAlphabet, Tree, render

__all__ = [
    "AutomatonError",
    "Dta",
    "StateAnnotation",
    "parse_dta",
    "run",
    "accepts",
    "annotate",
    "run_context",
    "enumerate_language",
    "pumping_constant",
]

StateAnnotation = dict[Address, str]

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TRANS_RE = re.compile(
    rf"^({_NAME})\s*(?:\(\s*({_NAME}(?:\s*,\s*{_NAME})*)\s*\))?\s*->\s*({_NAME})$"
)
_DECL_RE = re.compile(rf"^({_NAME})/(\d+)$")


class AutomatonError(ValueError):
    """Malformed or inconsistent automaton description."""


@dataclass(frozen=True)
class Dta:
    """Deterministic bottom-up tree automaton; transitions may be partial."""

    alphabet: RankedAlphabet
    states: frozenset[str]
    final: frozenset[str]
    transitions: dict[tuple[str, tuple[str, ...]], str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "transitions", dict(self.transitions))
        if not self.final <= self.states:
            raise ValueError(
                f"final states {sorted(self.final - self.states)} are undeclared"
            )
        for (sym, args), target in self.transitions.items():
            if sym not in self.alphabet:
                raise ValueError(f"transition on undeclared symbol {sym!r}")
            if len(args) != self.alphabet.rank(sym):
                raise ValueError(
                    f"transition on {sym!r} has {len(args)} argument states, "
                    f"rank is {self.alphabet.rank(sym)}"
                )
            for q in args + (target,):
                if q not in self.states:
                    raise ValueError(f"transition mentions undeclared state {q!r}")


def parse_dta(text: str) -> Dta:
    """Parse the line-oriented automaton format; see the module docstring."""
    symbols: dict[str, int] = {}
    states: set[str] = set()
    final: list[tuple[str, int]] = []
    transitions: dict[tuple[str, tuple[str, ...]], str] = {}
    trans_lines: list[tuple[tuple[str, tuple[str, ...]], str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, payload = line.partition(":")
        key = key.strip()
        payload = payload.strip()
        if not sep:
            raise AutomatonError(f"line {lineno}: expected 'key: ...'")
        if key == "alphabet":
            for entry in payload.split():
                m = _DECL_RE.match(entry)
                if not m:
                    raise AutomatonError(
                        f"line {lineno}: bad alphabet entry {entry!r}, "
                        "expected name/rank"
                    )
                name, rank = m.group(1), int(m.group(2))
                if name in symbols:
                    raise AutomatonError(
                        f"line {lineno}: duplicate symbol {name!r}"
                    )
                symbols[name] = rank
        elif key == "states":
            for name in payload.split():
                if not re.fullmatch(_NAME, name):
                    raise AutomatonError(f"line {lineno}: bad state name {name!r}")
                states.add(name)
        elif key == "final":
            for name in payload.split():
                if not re.fullmatch(_NAME, name):
                    raise AutomatonError(f"line {lineno}: bad state name {name!r}")
                final.append((name, lineno))
        elif key == "trans":
            m = _TRANS_RE.match(payload)
            if not m:
                raise AutomatonError(f"line {lineno}: bad transition {payload!r}")
            sym = m.group(1)
            args = tuple(a.strip() for a in m.group(2).split(",")) if m.group(2) else ()
            trans_lines.append(((sym, args), m.group(3), lineno))
        else:
            raise AutomatonError(f"line {lineno}: unknown section {key!r}")

    for name, lineno in final:
        if name not in states:
            raise AutomatonError(f"line {lineno}: final state {name!r} is undeclared")
    for (sym, args), target, lineno in trans_lines:
        if sym not in symbols:
            raise AutomatonError(f"line {lineno}: undeclared symbol {sym!r}")
        if len(args) != symbols[sym]:
            raise AutomatonError(
                f"line {lineno}: {sym!r} has rank {symbols[sym]}, "
                f"got {len(args)} argument states"
            )
        for q in args + (target,):
            if q not in states:
                raise AutomatonError(f"line {lineno}: undeclared state {q!r}")
        if (sym, args) in transitions:
            raise AutomatonError(
                f"line {lineno}: duplicate transition for "
                f"{sym}({','.join(args)})"
            )
        transitions[sym, args] = target

    return Dta(
        RankedAlphabet(symbols),
        frozenset(states),
        frozenset(name for name, _ in final),
        transitions,
    )


def _states_bottom_up(m: Dta, t: Tree, hole_state: str | None) -> str | None:
    """Evaluate t bottom-up; shared subtrees are evaluated once (memo by id)."""
    memo: dict[int, str | None] = {}
    stack: list[tuple[Tree, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in memo:
            continue
        if node.label == HOLE and hole_state is not None:
            if node.children:
                raise ValueError("the hole must be a leaf")
            memo[id(node)] = hole_state
            continue
        if node.label not in m.alphabet:
            raise ValueError(f"unknown symbol {node.label!r}")
        if len(node.children) != m.alphabet.rank(node.label):
            raise ValueError(
                f"rank mismatch: {node.label!r} takes "
                f"{m.alphabet.rank(node.label)} children, got {len(node.children)}"
            )
        if not expanded:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
            continue
        args = tuple(memo[id(c)] for c in node.children)
        if None in args:
            memo[id(node)] = None
        else:
            memo[id(node)] = m.transitions.get((node.label, args))
    return memo[id(t)]


def run(m: Dta, t: Tree) -> str | None:
    """The state t evaluates to, or None when a transition is missing."""
    return _states_bottom_up(m, t, None)


def accepts(m: Dta, t: Tree) -> bool:
    q = run(m, t)
    return q is not None and q in m.final


def run_context(m: Dta, c: Context, q: str) -> str | None:
    """Evaluate c with its hole preloaded to state q."""
    if q not in m.states:
        raise ValueError(f"unknown state {q!r}")
    return _states_bottom_up(m, c.shape, q)


def annotate(m: Dta, t: Tree) -> StateAnnotation | None:
    """Map every address to its state, or None if the run gets stuck anywhere."""
    out: StateAnnotation = {}
    stack: list[tuple[Address, Tree, bool]] = [((), t, False)]
    while stack:
        addr, node, expanded = stack.pop()
        if node.label not in m.alphabet:
            raise ValueError(f"unknown symbol {node.label!r}")
        if len(node.children) != m.alphabet.rank(node.label):
            raise ValueError(
                f"rank mismatch: {node.label!r} takes "
                f"{m.alphabet.rank(node.label)} children, got {len(node.children)}"
            )
        if not expanded:
            stack.append((addr, node, True))
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((addr + (i + 1,), node.children[i], False))
            continue
        args = []
        for i in range(len(node.children)):
            child = out[addr + (i + 1,)]
            if child is None:
                args = None
                break
            args.append(child)
        if args is None:
            out[addr] = None
        else:
            out[addr] = m.transitions.get((node.label, tuple(args)))
    if any(q is None for q in out.values()):
        return None
    return out


def _compositions(total: int, parts: int):
    """Tuples of `parts` positive integers summing to `total`."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for head in range(1, total - parts + 2):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def enumerate_language(m: Dta, size_bound: int) -> list[Tree]:
    """All accepted trees of size <= size_bound, ordered by (size, rendering).

    Dynamic programming over (state, size): a tree of size s with root symbol
    f arises from child trees whose sizes sum to s-1 and whose states match a
    transition. Every returned tree is re-checked with accepts.
    """
    if size_bound < 1:
        raise ValueError("size_bound must be at least 1")
    by: dict[tuple[str, int], list[Tree]] = {}
    for s in range(1, size_bound + 1):
        for (sym, args), target in m.transitions.items():
            arity = len(args)
            if arity == 0:
                if s == 1:
                    by.setdefault((target, 1), []).append(Tree(sym))
                continue
            if s - 1 < arity:
                continue
            for sizes in _compositions(s - 1, arity):
                pools = [by.get((q, sz)) for q, sz in zip(args, sizes)]
                if any(not pool for pool in pools):
                    continue
                bucket = by.setdefault((target, s), [])
                for kids in itertools.product(*pools):
                    bucket.append(Tree(sym, kids))
    out = [
        (s, t) for (q, s), trees in by.items() if q in m.final for t in trees
    ]
    out.sort(key=lambda pair: (pair[0], render(pair[1])))
    result = [t for _, t in out]
    for t in result:
        if not accepts(m, t):  # pragma: no cover - internal consistency check
            raise RuntimeError(f"enumeration produced a rejected tree: {render(t)}")
    return result


def pumping_constant(m: Dta) -> int:
    """Mark threshold above which an accepted tree is guaranteed pumpable."""
    return pumping_threshold(m.alphabet.max_rank, len(m.states))
