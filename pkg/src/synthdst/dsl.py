"""Textual forms for points, machines, sets and word streams.

Grammar (whitespace is free between tokens)::

    point   := 'ep' '[' nats? ';' nats ']' | 'nat' '(' N ')' | 'top' '(' N ')' | 'bot'
    jpoint  := 'inj' '(' point ')' | 'neg' '(' point ')'
             | 'lag' '(' point ',' N ',' N ')' | point
    machine := 'id' | 'interleave' | 'inject' | 'notjump'
             | 'const' '(' (nats? | point) ')' | 'compose' '(' machine ',' machine ')'
             | 'pair' '(' machine ',' machine ')' | 'split' '(' 0|1 ')' | 'row' '(' N ')'
             | 'delay' '(' N ',' machine ')' | 'table' '(' NAME ')' | 'cyl' '(' word ')'
             | 'jumplift' '(' machine ')' | 'pwlim' '(' '[' machine (',' machine)* ']' ')'
    set     := 'cyl' word | 'and' '(' set ',' set ')' | 'or' '(' set ',' set ')'
             | 'cup' '(' set (',' set)* ')' | 'pre' '(' machine ',' set ')'
             | 'up' '(' set ')' | 'upc' '(' set ')'
             | 'evzero' | 'evconst' | 'neq' | 'empty' | 'empty1' | 'full'
    words   := 'words' ':' item (',' item)*      item := word | '_'
    word    := [01]+ | 'e'
"""
from __future__ import annotations

import re
from typing import Callable, Optional

from .kernel import (
    EP,
    PRIMITIVES,
    Compose,
    Const,
    Delay,
    Identity,
    Machine,
    Pair,
    ZEROS,
    const_list,
    diagonal_machine,
    inject_machine,
    row_machine,
    split_machine,
)
from .jumps import (
    JumpFixture,
    JumpPairToNabla,
    NablaLogic,
    NablaNot,
    NotIntoJump,
    PointwiseLimit,
    inject_into_jump,
    jump_lift,
    not_into_jump,
)
from .spaces import CANTOR, SpaceDescriptor, encode_nat, top_at


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__("%s at column %d" % (message, pos + 1))


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[\[\](),;:]))")


def _tables() -> dict[str, Callable[[], Machine]]:
    from .borel import CantorNeq, E0EqualMachine, IsEmptyMachine
    from .setops import SierpAnd, SierpJoin, SierpOr, WindowChi

    t = dict(PRIMITIVES)
    t.update({
        "or": SierpOr,
        "and": SierpAnd,
        "join": SierpJoin,
        "evzero": lambda: WindowChi("evzero"),
        "evconst": lambda: WindowChi("evconst"),
        "neq": CantorNeq,
        "e0eq": E0EqualMachine,
        "isempty": IsEmptyMachine,
        "notjump": NotIntoJump,
        "pairnabla": JumpPairToNabla,
        "nablaand": lambda: NablaLogic("and"),
        "nablaor": lambda: NablaLogic("or"),
        "nablanot": NablaNot,
    })
    return t


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = len(text[pos:]) - len(text[pos:].lstrip()) + pos
                raise ParseError("unexpected character %r" % text[start], start, text)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    # token helpers

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def error(self, message: str):
        raise ParseError(message, self.pos(), self.text)

    def take(self, value: Optional[str] = None, kind: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input" + (", expected %r" % value if value else ""))
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            self.error("expected %s, found %r" % (repr(value) if value else kind, tok[1]))
        self.i += 1
        return tok[1]

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[1] == value:
            self.i += 1
            return True
        return False

    def nat(self) -> int:
        return int(self.take(kind="num"))

    def nats_until(self, *stops: str) -> list[int]:
        out = []
        tok = self.peek()
        if tok is not None and tok[1] in stops:
            return out
        out.append(self.nat())
        while self.accept(","):
            out.append(self.nat())
        return out

    def end(self):
        if self.peek() is not None:
            self.error("trailing input %r" % self.peek()[1])

    # grammar

    def word(self) -> str:
        tok = self.peek()
        if tok is None:
            self.error("expected a binary word")
        if tok[1] == "e":
            self.i += 1
            return ""
        if tok[0] == "num" and set(tok[1]) <= {"0", "1"}:
            self.i += 1
            return tok[1]
        self.error("expected a binary word, found %r" % tok[1])

    def point(self):
        tok = self.peek()
        head = tok[1] if tok else None
        if head == "ep":
            self.i += 1
            self.take("[")
            pre = self.nats_until(";")
            self.take(";")
            per = self.nats_until("]")
            if not per:
                self.error("period must be non-empty")
            self.take("]")
            return EP(pre, per)
        if head in ("nat", "top"):
            self.i += 1
            self.take("(")
            n = self.nat()
            self.take(")")
            return encode_nat(n) if head == "nat" else top_at(n)
        if head == "bot":
            self.i += 1
            return EP((), (0,))
        self.error("expected a point, found %r" % head)

    def jpoint(self):
        tok = self.peek()
        head = tok[1] if tok else None
        if head in ("inj", "neg"):
            self.i += 1
            self.take("(")
            p = self.point()
            self.take(")")
            return inject_into_jump(p) if head == "inj" else not_into_jump(p)
        if head == "lag":
            self.i += 1
            self.take("(")
            p = self.point()
            self.take(",")
            b = self.nat()
            self.take(",")
            v = self.nat()
            self.take(")")
            return JumpFixture(p, lag=b, noise=v)
        return self.point()

    def machine(self) -> Machine:
        tok = self.peek()
        if tok is None:
            self.error("expected a machine")
        head = tok[1]
        simple = {"id": Identity, "interleave": diagonal_machine, "inject": inject_machine, "notjump": NotIntoJump}
        if head in simple:
            self.i += 1
            return simple[head]()
        if head == "const":
            self.i += 1
            self.take("(")
            tok = self.peek()
            if tok is not None and tok[1] in ("ep", "nat", "top", "bot"):
                p = self.point()
                self.take(")")
                return Const(p, "const(%r)" % (p,))
            vals = self.nats_until(")")
            self.take(")")
            return const_list(vals) if vals else Const(ZEROS, "const()")
        if head in ("compose", "pair"):
            self.i += 1
            self.take("(")
            a = self.machine()
            self.take(",")
            b = self.machine()
            self.take(")")
            return Compose(a, b) if head == "compose" else Pair(a, b)
        if head in ("split", "row"):
            self.i += 1
            self.take("(")
            at = self.pos()
            n = self.nat()
            if head == "split" and n not in (0, 1):
                raise ParseError("split takes 0 or 1", at, self.text)
            self.take(")")
            return split_machine(n) if head == "split" else row_machine(n)
        if head == "delay":
            self.i += 1
            self.take("(")
            n = self.nat()
            self.take(",")
            m = self.machine()
            self.take(")")
            return Delay(n, m)
        if head == "table":
            self.i += 1
            self.take("(")
            at = self.pos()
            name = self.take(kind="name")
            self.take(")")
            tables = _tables()
            if name not in tables:
                raise ParseError("unknown table %r" % name, at, self.text)
            return tables[name]()
        if head == "cyl":
            from .setops import Cylinder

            self.i += 1
            self.take("(")
            w = self.word()
            self.take(")")
            return Cylinder([int(c) for c in w])
        if head == "jumplift":
            self.i += 1
            self.take("(")
            m = self.machine()
            self.take(")")
            return jump_lift(m)
        if head == "pwlim":
            self.i += 1
            self.take("(")
            self.take("[")
            family = [self.machine()]
            while self.accept(","):
                family.append(self.machine())
            self.take("]")
            self.take(")")
            return PointwiseLimit(family)
        self.error("unknown machine %r" % head)

    def set(self, space: SpaceDescriptor):
        from . import setops
        from .borel import cantor_neq

        tok = self.peek()
        if tok is None:
            self.error("expected a set")
        head = tok[1]
        if head == "cyl":
            self.i += 1
            return setops.cylinder(self.word(), space)
        if head in ("and", "or"):
            self.i += 1
            self.take("(")
            a = self.set(space)
            self.take(",")
            b = self.set(space)
            self.take(")")
            return setops.intersect(a, b) if head == "and" else setops.union(a, b)
        if head == "cup":
            self.i += 1
            self.take("(")
            sets = [self.set(space)]
            while self.accept(","):
                sets.append(self.set(space))
            self.take(")")
            return setops.countable_union(sets)
        if head == "pre":
            self.i += 1
            self.take("(")
            m = self.machine()
            self.take(",")
            U = self.set(space)
            self.take(")")
            return setops.preimage(m, U, space)
        if head in ("up", "upc"):
            self.i += 1
            self.take("(")
            U = self.set(space)
            self.take(")")
            return setops.level_up(U, complement=head == "upc")
        if head in ("evzero", "evconst"):
            self.i += 1
            return setops.sigma2_set(head)
        if head == "neq":
            self.i += 1
            return cantor_neq(0)
        if head in ("empty", "empty1", "full"):
            self.i += 1
            if head == "full":
                return setops.full_set(space, 0)
            return setops.empty_set(space, 1 if head == "empty1" else 0)
        self.error("unknown set %r" % head)

    def words(self) -> list[Optional[str]]:
        self.take("words")
        self.take(":")
        out = [self._item()]
        while self.accept(","):
            out.append(self._item())
        return out

    def _item(self):
        if self.accept("_"):
            return None
        return self.word()


def _whole(text: str, rule: Callable[[Parser], object]):
    p = Parser(text)
    out = rule(p)
    p.end()
    return out


def parse_point(text: str):
    return _whole(text, Parser.point)


def parse_jump_point(text: str):
    return _whole(text, Parser.jpoint)


def parse_machine(text: str) -> Machine:
    return _whole(text, Parser.machine)


def parse_set(text: str, space: SpaceDescriptor = CANTOR):
    return _whole(text, lambda p: p.set(space))


def parse_words(text: str) -> list[Optional[str]]:
    return _whole(text, Parser.words)
