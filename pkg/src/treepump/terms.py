"""Ranked trees, one-hole contexts, and the splitting operations built on them.

Trees are ordered and labeled over a ranked alphabet; positions are Gorn
addresses (1-based child indices, the empty tuple is the root). A context is a
tree with exactly one hole, written ``@`` in concrete syntax. Traversals are
iterative throughout: pumped trees are routinely deep unary chains, and
recursion would overflow on them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

__all__ = [
    "HOLE",
    "Address",
    "Marking",
    "InvalidAddressError",
    "ParseError",
    "RankedAlphabet",
    "Tree",
    "Context",
    "parse_address",
    "format_address",
    "is_prefix",
    "is_strict_prefix",
    "walk",
    "addresses",
    "size",
    "size_context",
    "render",
    "subtree_at",
    "replace_at",
    "context_at",
    "substitute",
    "compose",
    "power",
    "split",
    "check_marks",
    "parse_tree",
    "parse_context",
    "infer_alphabet",
    "merge_alphabets",
]

HOLE = "@"

Address = tuple[int, ...]
Marking = frozenset[Address]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class InvalidAddressError(ValueError):
    """An address does not denote a node of the tree at hand."""


class ParseError(ValueError):
    """Malformed concrete syntax; `position` is the 1-based character index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_address(text: str) -> Address:
    """Parse a dot-separated address; ``e`` denotes the root."""
    text = text.strip()
    if text == "e":
        return ()
    if not text:
        raise ValueError("empty address (the root is written 'e')")
    parts = text.split(".")
    out = []
    for part in parts:
        if not part.isdigit() or int(part) < 1:
            raise ValueError(f"bad address component {part!r} in {text!r}")
        out.append(int(part))
    return tuple(out)


def format_address(addr: Address) -> str:
    return "e" if not addr else ".".join(str(i) for i in addr)


def is_prefix(u: Address, v: Address) -> bool:
    """True iff u is an ancestor of v or equal to it."""
    return len(u) <= len(v) and v[: len(u)] == u


def is_strict_prefix(u: Address, v: Address) -> bool:
    return len(u) < len(v) and v[: len(u)] == u


@dataclass(frozen=True)
class RankedAlphabet:
    """A finite map from symbol names to ranks (child counts)."""

    symbols: Mapping[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", dict(self.symbols))
        for name, rank in self.symbols.items():
            if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
                raise ValueError(f"bad symbol name {name!r}")
            if not isinstance(rank, int) or rank < 0:
                raise ValueError(f"bad rank {rank!r} for symbol {name!r}")

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def rank(self, name: str) -> int:
        try:
            return self.symbols[name]
        except KeyError:
            raise ValueError(f"unknown symbol {name!r}") from None

    @property
    def max_rank(self) -> int:
        return max(self.symbols.values(), default=0)

    def check_tree(self, t: Tree) -> None:
        """Raise ValueError unless every node uses a declared symbol at its rank."""
        for _, node in walk(t):
            if node.label not in self.symbols:
                raise ValueError(f"unknown symbol {node.label!r}")
            if len(node.children) != self.symbols[node.label]:
                raise ValueError(
                    f"rank mismatch: {node.label!r} takes "
                    f"{self.symbols[node.label]} children, got {len(node.children)}"
                )


@dataclass(frozen=True, eq=False)
class Tree:
    """An ordered labeled tree. Structural equality; hash cached per node."""

    label: str
    children: tuple[Tree, ...] = ()
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.label, str) or not self.label:
            raise ValueError(f"bad node label {self.label!r}")
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        h = hash((self.label,) + tuple(c._hash for c in self.children))
        object.__setattr__(self, "_hash", h)

    # equality and hashing avoid recursion: chains can exceed the stack limit
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        todo = [(self, other)]
        while todo:
            a, b = todo.pop()
            if a is b:
                continue
            if (
                a._hash != b._hash
                or a.label != b.label
                or len(a.children) != len(b.children)
            ):
                return False
            todo.extend(zip(a.children, b.children))
        return True

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Tree({render(self)!r})"

    def __str__(self) -> str:
        return render(self)


def walk(t: Tree) -> Iterator[tuple[Address, Tree]]:
    """Yield (address, subtree) pairs in preorder, i.e. lexicographic order."""
    stack: list[tuple[Address, Tree]] = [((), t)]
    while stack:
        addr, node = stack.pop()
        yield addr, node
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((addr + (i + 1,), node.children[i]))


def addresses(t: Tree) -> Iterator[Address]:
    return (addr for addr, _ in walk(t))


def size(t: Tree) -> int:
    """Number of nodes."""
    n = 0
    for _ in walk(t):
        n += 1
    return n


def subtree_at(t: Tree, addr: Address) -> Tree:
    node = t
    for depth, idx in enumerate(addr):
        if idx < 1 or idx > len(node.children):
            raise InvalidAddressError(
                f"address {format_address(addr)} invalid at component {depth + 1}"
            )
        node = node.children[idx - 1]
    return node


def replace_at(t: Tree, addr: Address, replacement: Tree) -> Tree:
    """Return t with the subtree at addr swapped for `replacement`."""
    spine: list[Tree] = []
    node = t
    for depth, idx in enumerate(addr):
        if idx < 1 or idx > len(node.children):
            raise InvalidAddressError(
                f"address {format_address(addr)} invalid at component {depth + 1}"
            )
        spine.append(node)
        node = node.children[idx - 1]
    new = replacement
    for idx, parent in zip(reversed(addr), reversed(spine)):
        new = Tree(
            parent.label, parent.children[: idx - 1] + (new,) + parent.children[idx:]
        )
    return new


@dataclass(frozen=True)
class Context:
    """A tree over the alphabet plus ``@`` with exactly one hole, at a leaf.

    `hole_address` is derived from the shape on construction. The size of a
    context never counts the hole.
    """

    shape: Tree
    hole_address: Address = field(init=False)

    def __post_init__(self) -> None:
        holes = [addr for addr, node in walk(self.shape) if node.label == HOLE]
        if len(holes) != 1:
            raise ValueError(f"a context needs exactly one hole, found {len(holes)}")
        if subtree_at(self.shape, holes[0]).children:
            raise ValueError("the hole must be a leaf")
        object.__setattr__(self, "hole_address", holes[0])

    @classmethod
    def identity(cls) -> Context:
        """The bare hole: substitution into it returns the argument unchanged."""
        return cls(Tree(HOLE))

    def __str__(self) -> str:
        return render(self.shape)


def size_context(c: Context) -> int:
    """Number of non-hole nodes."""
    return size(c.shape) - 1


def context_at(t: Tree, addr: Address) -> Context:
    """The complement of the subtree at addr: t with that subtree holed out."""
    return Context(replace_at(t, addr, Tree(HOLE)))


def substitute(c: Context, t: Tree) -> Tree:
    """Plug t into the hole of c."""
    return replace_at(c.shape, c.hole_address, t)


def compose(outer: Context, inner: Context) -> Context:
    """The context whose substitution acts as outer after inner."""
    return Context(replace_at(outer.shape, outer.hole_address, inner.shape))


def power(c: Context, n: int) -> Context:
    """n-fold self-composition; power(c, 0) is the bare hole."""
    if n < 0:
        raise ValueError("negative context power")
    out = Context.identity()
    for _ in range(n):
        out = compose(out, c)
    return out


def split(t: Tree, u: Address, v: Address) -> tuple[Context, Context, Tree]:
    """Cut t at a strict ancestor pair: t = cprime . c . tprime.

    cprime is t holed at u, c is the piece between u and v (hole at v,
    root at u), tprime is the subtree at v. Requires u to be a strict
    ancestor of v; in particular u = v is rejected, so c never collapses
    to the bare hole.
    """
    if not is_strict_prefix(u, v):
        raise ValueError(
            f"{format_address(u)} is not a strict ancestor of {format_address(v)}"
        )
    sub = subtree_at(t, u)  # validates u; v is validated by the inner cut
    cprime = context_at(t, u)
    c = context_at(sub, v[len(u) :])
    tprime = subtree_at(sub, v[len(u) :])
    return cprime, c, tprime


def check_marks(t: Tree, marks: Iterable[Address]) -> None:
    """Raise InvalidAddressError unless every mark denotes a node of t."""
    for m in marks:
        subtree_at(t, m)


def render(t: Tree, marks: Iterable[Address] = frozenset()) -> str:
    """Canonical concrete syntax; marked addresses carry a ``!`` suffix."""
    marks = marks if isinstance(marks, (set, frozenset)) else frozenset(marks)
    parts: list[str] = []
    stack: list[str | tuple[Address, Tree]] = [((), t)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        addr, node = item
        parts.append(node.label + ("!" if addr in marks else ""))
        if node.children:
            stack.append(")")
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((addr + (i + 1,), node.children[i]))
                if i:
                    stack.append(",")
            stack.append("(")
    return "".join(parts)


def parse_tree(
    alphabet: RankedAlphabet | None, text: str
) -> tuple[Tree, Marking]:
    """Parse ``name['!'][ '(' tree (',' tree)* ')' ]`` concrete syntax.

    With an alphabet, every symbol must be declared and used at its rank;
    with None, ranks are inferred and must merely be used consistently.
    The hole ``@`` is rejected here; use parse_context for contexts.
    """
    tree, marks, _ = _parse(text, alphabet, allow_hole=False)
    return tree, marks


def parse_context(
    alphabet: RankedAlphabet | None, text: str
) -> tuple[Context, Marking]:
    """Like parse_tree, but the input must contain exactly one hole ``@``."""
    shape, marks, holes = _parse(text, alphabet, allow_hole=True)
    if not holes:
        raise ParseError("context contains no hole '@'", len(text) + 1)
    return Context(shape), marks


def _parse(
    text: str, alphabet: RankedAlphabet | None, allow_hole: bool
) -> tuple[Tree, Marking, list[Address]]:
    n = len(text)
    pos = 0
    marks: set[Address] = set()
    holes: list[Address] = []
    seen: dict[str, int] = {}  # inferred ranks when alphabet is None
    # frames: one per open '(' -- [label, label position, children so far]
    frames: list[tuple[str, int, list[Tree]]] = []
    path: list[int] = []  # 1-based child index per open frame

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def fail(message: str, at: int) -> ParseError:
        return ParseError(message, at + 1)

    def check_rank(label: str, count: int, at: int) -> None:
        if label == HOLE:
            return
        if alphabet is None:
            if label in seen and seen[label] != count:
                raise fail(
                    f"symbol {label!r} used with {count} children, "
                    f"previously {seen[label]}",
                    at,
                )
            seen[label] = count
        else:
            if label not in alphabet:
                raise fail(f"unknown symbol {label!r}", at)
            want = alphabet.rank(label)
            if want != count:
                raise fail(
                    f"rank mismatch: {label!r} takes {want} children, got {count}", at
                )

    while True:
        # read one symbol occurrence
        skip_ws()
        if pos >= n:
            raise fail("expected a symbol name", pos)
        name_at = pos
        if text[pos] == HOLE:
            if not allow_hole:
                raise fail("hole '@' is only allowed in a context", pos)
            name = HOLE
            pos += 1
        else:
            m = _NAME_RE.match(text, pos)
            if not m:
                raise fail(f"expected a symbol name, found {text[pos]!r}", pos)
            name = m.group()
            pos = m.end()
        here = tuple(path)
        if pos < n and text[pos] == "!":
            if name == HOLE:
                raise fail("the hole cannot be marked", pos)
            marks.add(here)
            pos += 1
        if name == HOLE:
            if holes:
                raise fail("a context has exactly one hole, found a second", name_at)
            holes.append(here)
        skip_ws()
        if pos < n and text[pos] == "(":
            if name == HOLE:
                raise fail("the hole takes no children", pos)
            frames.append((name, name_at, []))
            path.append(1)
            pos += 1
            continue
        node = Tree(name)
        check_rank(name, 0, name_at)

        # attach the finished node, closing frames as their ')' arrives
        while True:
            if not frames:
                skip_ws()
                if pos < n:
                    raise fail(f"trailing input {text[pos]!r}", pos)
                return node, frozenset(marks), holes
            frames[-1][2].append(node)
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                path[-1] = len(frames[-1][2]) + 1
                break
            if pos < n and text[pos] == ")":
                pos += 1
                label, label_at, kids = frames.pop()
                path.pop()
                check_rank(label, len(kids), label_at)
                node = Tree(label, tuple(kids))
                continue
            raise fail("expected ',' or ')'", pos)


def infer_alphabet(*items: Tree | Context) -> RankedAlphabet:
    """Collect symbol ranks from usage; inconsistent arity is an error."""
    ranks: dict[str, int] = {}
    for item in items:
        t = item.shape if isinstance(item, Context) else item
        for _, node in walk(t):
            if node.label == HOLE:
                continue
            prev = ranks.get(node.label)
            if prev is None:
                ranks[node.label] = len(node.children)
            elif prev != len(node.children):
                raise ValueError(
                    f"symbol {node.label!r} used with ranks {prev} and "
                    f"{len(node.children)}"
                )
    return RankedAlphabet(ranks)


def merge_alphabets(*alphabets: RankedAlphabet) -> RankedAlphabet:
    """Union of alphabets; a symbol declared at two ranks is an error."""
    ranks: dict[str, int] = {}
    for alpha in alphabets:
        for name, rank in alpha.symbols.items():
            if ranks.setdefault(name, rank) != rank:
                raise ValueError(
                    f"symbol {name!r} declared with ranks {ranks[name]} and {rank}"
                )
    return RankedAlphabet(ranks)
