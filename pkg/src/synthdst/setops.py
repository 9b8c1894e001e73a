"""d-open sets as machines into ``d S``, with the Sierpinski logic at the base
level and its lifts to jump and nabla levels.

A level is a natural ``k`` (the ``k``-fold jump; 0 is the base level) or
:data:`NABLA`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence as Seq, Union

from .jumps import (
    JumpLift,
    NablaLogic,
    NablaNot,
    NotIntoJump,
    countable_shuffle_machine,
    jump_lift,
    product_shuffle_machine,
)
from .kernel import (
    ZEROS,
    Compose,
    Const,
    Identity,
    Machine,
    Pair,
    Sequence,
    TupleMachine,
    _diag_max_i,
    inject_machine,
    pair,
    split_machine,
    unpair,
)
from .spaces import CANTOR, SpaceDescriptor, SpaceMismatch, product

NABLA = "nabla"
Level = Union[int, str]


class UnsupportedLevel(ValueError):
    """The requested operation does not exist at this level."""


def level_text(level: Level) -> str:
    return "nabla" if level == NABLA else "jump^%d" % level


# ---------------------------------------------------------------------------
# Sierpinski logic


class SierpOr(Machine):
    """``out(k) = 1`` iff ``p`` or ``q`` has a nonzero among its first ``k+1`` entries.
    Input is ``interleave(p, q)``."""

    oblivious = True
    descriptor = "table(or)"
    both = False

    def _value(self, u, k):
        hp = any(u[2 * x] != 0 for x in range(k + 1))
        hq = any(u[2 * x + 1] != 0 for x in range(k + 1))
        return int((hp and hq) if self.both else (hp or hq))

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        hp = hq = False
        for k in range(min(m // 2, fuel)):
            hp = hp or u[2 * k] != 0
            hq = hq or u[2 * k + 1] != 0
            out.append(int((hp and hq) if self.both else (hp or hq)))
        return tuple(out)

    def value_at(self, u, fuel, k):
        if 2 * k + 1 < min(len(u), fuel):
            return self._value(u, k)
        return None


class SierpAnd(SierpOr):
    """``out(k) = 1`` iff both ``p`` and ``q`` have a nonzero among their first ``k+1`` entries."""

    descriptor = "table(and)"
    both = True


class SierpJoin(Machine):
    """Countable join on tupled rows: ``out(k) = 1`` iff some position ``<= k`` is nonzero."""

    oblivious = True
    descriptor = "table(join)"

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        seen = False
        for k in range(m):
            seen = seen or u[k] != 0
            out.append(int(seen))
        return tuple(out)

    def value_at(self, u, fuel, k):
        if k < min(len(u), fuel):
            return int(any(u[x] != 0 for x in range(k + 1)))
        return None


def sierp_or() -> Machine:
    return SierpOr()


def sierp_and() -> Machine:
    return SierpAnd()


def sierp_join() -> Machine:
    return SierpJoin()


def lifted_logic(level: Level, which: str) -> Machine:
    """``and``/``or`` on ``dS x dS`` (interleaved input) or ``join`` on ``C(N, dS)``
    (row-tupled input) for ``d`` at ``level``."""
    if which not in ("and", "or", "join"):
        raise ValueError("unknown connective %r" % which)
    if level == NABLA:
        if which == "join":
            raise UnsupportedLevel("nabla does not preserve countable products")
        return NablaLogic(which)
    if not isinstance(level, int) or level < 0:
        raise UnsupportedLevel("bad level %r" % (level,))
    base = {"and": SierpAnd, "or": SierpOr, "join": SierpJoin}[which]()
    if level == 0:
        return base
    shuffle = countable_shuffle_machine(level) if which == "join" else product_shuffle_machine(level)
    return Compose(shuffle, jump_lift(base, level))


# ---------------------------------------------------------------------------
# basic machines into S


class Cylinder(Machine):
    """Basic open ``[w]`` of Cantor space: ``out(k) = 1`` iff ``k+1 >= |w|`` and the
    input starts with ``w``."""

    oblivious = True

    def __init__(self, word: Seq[int]):
        self.word = tuple(word)
        self.descriptor = "cyl(%s)" % ("".join(map(str, self.word)) or "e")

    def step(self, u, fuel):
        m = min(len(u), fuel)
        w = self.word
        out = []
        for k in range(m):
            if k + 1 < len(w):
                out.append(0)
            else:
                out.append(int(tuple(u[: len(w)]) == w))
        return tuple(out)

    def value_at(self, u, fuel, k):
        if k >= min(len(u), fuel):
            return None
        if k + 1 < len(self.word):
            return 0
        return int(tuple(u[: len(self.word)]) == self.word)


class WindowChi(Machine):
    """Sigma_2 witness machines on Cantor space.

    Row ``n``, column ``i`` is 1 iff the window ``u[n..n+i]`` is all zero
    (``kind="evzero"``: the set of eventually-zero sequences) or constant
    (``kind="evconst"``: the eventually-constant sequences).
    """

    oblivious = True

    def __init__(self, kind: str):
        if kind not in ("evzero", "evconst"):
            raise ValueError(kind)
        self.kind = kind
        self.descriptor = "table(%s)" % kind

    @staticmethod
    def _need(k):
        n, i = unpair(k)
        return n + i + 1

    def step(self, u, fuel):
        m = min(len(u), fuel)
        # last index < j where the window condition breaks
        breaks = []
        last = -1
        for j in range(m):
            if self.kind == "evzero":
                if u[j] != 0:
                    last = j
            elif j and u[j] != u[j - 1]:
                last = j - 1
            breaks.append(last)
        out = []
        for k in range(fuel):
            if self._need(k) > m:
                break
            n, i = unpair(k)
            out.append(int(breaks[n + i] < n))
        return tuple(out)

    def value_at(self, u, fuel, k):
        if k >= fuel or self._need(k) > min(len(u), fuel):
            return None
        n, i = unpair(k)
        window = [u[x] for x in range(n, n + i + 1)]
        if self.kind == "evzero":
            return int(not any(window))
        return int(all(x == window[0] for x in window))


# ---------------------------------------------------------------------------
# d-open sets


@dataclass(frozen=True)
class DOpenSet:
    space: SpaceDescriptor
    level: Level
    machine: Machine

    @property
    def descriptor(self) -> str:
        return self.machine.descriptor

    def name_of(self, x: Sequence) -> Sequence:
        """The ``dS`` name of ``x``'s membership."""
        return self.machine.apply(x)


def _check_level(level: Level):
    if level != NABLA and not (isinstance(level, int) and level >= 0):
        raise UnsupportedLevel("bad level %r" % (level,))


def cylinder(word, space: SpaceDescriptor = CANTOR) -> DOpenSet:
    if isinstance(word, str):
        word = [] if word in ("", "e") else [int(c) for c in word]
    return DOpenSet(space, 0, Cylinder(word))


def empty_set(space: SpaceDescriptor, level: Level = 0) -> DOpenSet:
    _check_level(level)
    if level == NABLA:
        return DOpenSet(space, level, Const(_nabla_const(False), "nablaconst(0)"))
    return DOpenSet(space, level, Const(ZEROS, "const()"))


def full_set(space: SpaceDescriptor, level: Level = 0) -> DOpenSet:
    _check_level(level)
    if level == NABLA:
        return DOpenSet(space, level, Const(_nabla_const(True), "nablaconst(1)"))
    from .kernel import constant

    return DOpenSet(space, level, Const(constant(1), "const(ep [;1])"))


def _nabla_const(value: bool):
    from .kernel import EP

    return EP((0,), (2 if value else 1,))


def sigma2_set(kind: str) -> DOpenSet:
    """Named Sigma_2 subsets of Cantor space at jump level 1."""
    return DOpenSet(CANTOR, 1, WindowChi(kind))


def preimage(f, U: DOpenSet, domain: SpaceDescriptor = None) -> DOpenSet:
    """``f^-1(U)``.  ``f`` is a machine (then ``domain`` is required) or a
    function-space point."""
    from .spaces import SpacePoint, machine_of_function_point

    if isinstance(f, SpacePoint):
        if f.space.tag != "Function":
            raise SpaceMismatch("preimage needs a function-space point, got %s" % f.space)
        dom, cod = f.space.args
        if cod != U.space:
            raise SpaceMismatch("codomain %s does not match set space %s" % (cod, U.space))
        return DOpenSet(dom, U.level, Compose(machine_of_function_point(f), U.machine))
    if domain is None:
        raise SpaceMismatch("a bare machine needs an explicit domain space")
    return DOpenSet(domain, U.level, Compose(f, U.machine))


def cut(y, U: DOpenSet) -> DOpenSet:
    """``{x | (x, y) in U}`` for ``U`` over ``X x Y`` and a point ``y`` of ``Y``."""
    if U.space.tag != "Product":
        raise SpaceMismatch("cut needs a set over a product space, got %s" % U.space)
    if y.space != U.space.args[1]:
        raise SpaceMismatch("point space %s is not %s" % (y.space, U.space.args[1]))
    const = Const(y.name, "const(%r)" % (y.name,))
    return DOpenSet(U.space.args[0], U.level, Compose(Pair(Identity(), const), U.machine))


def _binary(U: DOpenSet, V: DOpenSet, which: str) -> DOpenSet:
    if U.space != V.space:
        raise SpaceMismatch("sets live over %s and %s" % (U.space, V.space))
    if U.level != V.level:
        raise UnsupportedLevel("level mismatch: %s vs %s" % (level_text(U.level), level_text(V.level)))
    return DOpenSet(U.space, U.level, Compose(Pair(U.machine, V.machine), lifted_logic(U.level, which)))


def intersect(U: DOpenSet, V: DOpenSet) -> DOpenSet:
    return _binary(U, V, "and")


def union(U: DOpenSet, V: DOpenSet) -> DOpenSet:
    return _binary(U, V, "or")


def product_set(U: DOpenSet, V: DOpenSet) -> DOpenSet:
    """``U x V`` over ``X x Y``."""
    if U.level != V.level:
        raise UnsupportedLevel("level mismatch")
    left = Compose(split_machine(0), U.machine)
    right = Compose(split_machine(1), V.machine)
    return DOpenSet(product(U.space, V.space), U.level, Compose(Pair(left, right), lifted_logic(U.level, "and")))


def countable_union(sets, space: SpaceDescriptor = None, level: Level = None) -> DOpenSet:
    """Union of a finite list (padded with empty sets) or of a family ``j -> DOpenSet``."""
    if callable(sets):
        if space is None or level is None:
            raise ValueError("a family needs explicit space and level")
        family = lambda j: sets(j).machine
        tm = TupleMachine(family)
    else:
        sets = list(sets)
        if not sets and (space is None or level is None):
            raise ValueError("an empty union needs explicit space and level")
        space = space or sets[0].space
        level = sets[0].level if level is None else level
        for s in sets:
            if s.space != space or s.level != level:
                raise UnsupportedLevel("countable union needs matching spaces and levels")
        pad = empty_set(space, level).machine
        tm = TupleMachine(lambda j: sets[j].machine if j < len(sets) else pad,
                          "tuple(%s)" % ",".join(s.descriptor for s in sets))
    if level == NABLA:
        raise UnsupportedLevel("countable union is not available at the nabla level")
    return DOpenSet(space, level, Compose(tm, lifted_logic(level, "join")))


def level_up(U: DOpenSet, complement: bool = False) -> DOpenSet:
    """``id`` or complement from ``O^(k)`` into ``O^(k+1)``."""
    if U.level == NABLA:
        raise UnsupportedLevel("levelUp is defined on jump levels only")
    k = U.level
    if complement:
        step = jump_lift(NotIntoJump(), k)
    else:
        step = inject_machine()
    return DOpenSet(U.space, k + 1, Compose(U.machine, step))


def nabla_complement(U: DOpenSet) -> DOpenSet:
    if U.level != NABLA:
        raise UnsupportedLevel("complement within a level needs nabla")
    return DOpenSet(U.space, NABLA, Compose(U.machine, NablaNot()))


# ---------------------------------------------------------------------------
# observation


def observe_prefix(prefix) -> tuple[bool, int]:
    """(top observed, index or scanned length) for a finite Sierpinski name part."""
    for t, x in enumerate(prefix):
        if x != 0:
            return True, t
    return False, len(prefix)


def member_prefix(U: DOpenSet, x: Sequence, fuel: int):
    """Output of ``U``'s machine on ``x[:fuel]`` at ``fuel``."""
    return U.machine.step(x.prefix(fuel), fuel)
