"""Represented spaces: descriptors, points, Sierpinski observation, function
spaces as combinator descriptors.

Semantic checks (name validity, equality) are exact on eventually periodic
fixtures and fall back to prefix comparison on opaque names.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .kernel import EP, FnSequence, Machine, Sequence, ep_equal_from, lcm

DEFAULT_DEPTH = 32
MAX_DESCRIPTOR = 1 << 16


class SpaceMismatch(TypeError):
    """An operation received a point or set over the wrong space."""


class DecodeError(ValueError):
    """A name does not encode a well-formed descriptor."""


@dataclass(frozen=True)
class SpaceDescriptor:
    tag: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.tag
        return "%s(%s)" % (self.tag, ", ".join(map(str, self.args)))


NAT = SpaceDescriptor("Nat")
SIERPINSKI = SpaceDescriptor("Sierpinski")
TWO = SpaceDescriptor("Two")
CANTOR = SpaceDescriptor("Cantor")
BAIRE = SpaceDescriptor("Baire")
E0 = SpaceDescriptor("E0")


def product(a: SpaceDescriptor, b: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor("Product", (a, b))


def coproduct(*summands: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor("Coproduct", tuple(summands))


def function_space(a: SpaceDescriptor, b: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor("Function", (a, b))


def open_space(a: SpaceDescriptor, level=0) -> SpaceDescriptor:
    return SpaceDescriptor("Open", (a, level))


def closed_space(a: SpaceDescriptor, level=0) -> SpaceDescriptor:
    return SpaceDescriptor("Closed", (a, level))


def jump_space(a: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor("Jump", (a,))


def nabla_space(a: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor("Nabla", (a,))


@dataclass(frozen=True)
class SpacePoint:
    space: SpaceDescriptor
    name: Sequence
    denotation: Any = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# Sierpinski observation


@dataclass(frozen=True)
class ObservedTop:
    at_step: int


@dataclass(frozen=True)
class NotYetBottom:
    fuel_used: int


SierpObservation = Union[ObservedTop, NotYetBottom]


def observe_name(name: Sequence, fuel: int) -> SierpObservation:
    """Scan indices ``0 .. fuel-1`` for the first nonzero entry."""
    for t in range(fuel):
        if name.at(t) != 0:
            return ObservedTop(t)
    return NotYetBottom(fuel)


def observe(point: SpacePoint, fuel: int) -> SierpObservation:
    if point.space.tag != "Sierpinski":
        raise SpaceMismatch("observe needs a Sierpinski point, got %s" % point.space)
    return observe_name(point.name, fuel)


def top_at(t: int) -> EP:
    """Sierpinski name of top whose first nonzero is at index ``t``."""
    return EP([0] * t + [1], [0])


BOTTOM = EP((), (0,))


# ---------------------------------------------------------------------------
# naturals and coproducts


def encode_nat(n: int) -> EP:
    return EP([0] * n + [1], [0])


def decode_nat(name: Sequence, limit: Optional[int] = None) -> Optional[int]:
    """First-1 search; ``None`` if no 1 shows up before ``limit``."""
    n = 0
    while limit is None or n < limit:
        x = name.at(n)
        if x == 1:
            return n
        if x != 0:
            raise DecodeError("Nat names use only 0 and 1")
        n += 1
    return None


def coproduct_inject(i: int, name: Sequence) -> Sequence:
    if isinstance(name, EP):
        return EP((i,) + name.pre, name.per)
    return FnSequence(lambda k: i if k == 0 else name.at(k - 1), "inj%d" % i)


def coproduct_case(name: Sequence) -> tuple[int, Sequence]:
    i = name.at(0)
    if isinstance(name, EP):
        if name.pre:
            return i, EP(name.pre[1:], name.per)
        return i, EP((), name.per[1:] + name.per[:1])
    return i, FnSequence(lambda k: name.at(k + 1), "tail")


# ---------------------------------------------------------------------------
# exact operations on eventually periodic names


def ep_split(e: EP, which: int) -> EP:
    """Component of an interleaved fixture name."""
    start = len(e.pre) + (len(e.pre) & 1)
    per = len(e.per) * (1 if len(e.per) % 2 == 0 else 2)
    head = e.prefix(start + per)
    return EP(head[which:start:2], head[start + which::2])


def ep_interleave(p: EP, q: EP) -> EP:
    start = max(len(p.pre), len(q.pre))
    per = lcm(len(p.per), len(q.per))
    pre = []
    for k in range(start):
        pre += [p.at(k), q.at(k)]
    cyc = []
    for k in range(start, start + per):
        cyc += [p.at(k), q.at(k)]
    return EP(pre, cyc)


def is_valid_name(space: SpaceDescriptor, name: Sequence) -> Optional[bool]:
    """Name validity on fixtures; ``None`` when the name is opaque."""
    tag = space.tag
    if tag in ("Sierpinski", "Baire"):
        return True
    if tag == "Function":
        try:
            decode_descriptor(name)
        except DecodeError:
            return False
        return True
    if not isinstance(name, EP):
        return None
    if tag in ("Cantor", "E0"):
        return all(x in (0, 1) for x in name.pre + name.per)
    if tag == "Two":
        return name.at(0) in (0, 1)
    if tag == "Nat":
        e = name.normalized()
        return e.per == (0,) and e.pre.count(1) == 1 and e.pre[-1] == 1 and set(e.pre) <= {0, 1}
    if tag == "Product":
        a, b = space.args
        va, vb = is_valid_name(a, ep_split(name, 0)), is_valid_name(b, ep_split(name, 1))
        if va is None or vb is None:
            return None
        return va and vb
    if tag == "Coproduct":
        i, tail = coproduct_case(name)
        if i >= len(space.args):
            return False
        return is_valid_name(space.args[i], tail)
    if tag == "Nabla":
        # finitely many resets; the final candidate must be valid
        return 0 not in name.per
    return None


def denote(space: SpaceDescriptor, name: Sequence) -> Any:
    """Ground-truth value of a fixture name (exact on EP names)."""
    tag = space.tag
    if tag == "Nat":
        return decode_nat(name)
    if tag == "Sierpinski":
        if isinstance(name, EP):
            return any(name.pre + name.per)
        raise DecodeError("Sierpinski truth of an opaque name is not decidable")
    if tag == "Two":
        return name.at(0)
    if tag in ("Cantor", "Baire", "E0"):
        if isinstance(name, EP):
            return name.normalized()
        raise DecodeError("opaque name")
    if tag == "Product":
        if not isinstance(name, EP):
            raise DecodeError("opaque name")
        return (denote(space.args[0], ep_split(name, 0)), denote(space.args[1], ep_split(name, 1)))
    if tag == "Coproduct":
        i, tail = coproduct_case(name)
        return (i, denote(space.args[i], tail))
    if tag == "Nabla" and space.args[0].tag == "Sierpinski":
        from .jumps import nabla_fixture_value

        return nabla_fixture_value(name)
    if tag == "Jump":
        limit = getattr(name, "limit", None)
        if limit is None:
            raise DecodeError("jump names are decidable only as fixtures with a known limit")
        return denote(space.args[0], limit)
    raise DecodeError("no fixture semantics for %s" % space)


def equal(space: SpaceDescriptor, a: SpacePoint, b: SpacePoint, depth: int = DEFAULT_DEPTH) -> bool:
    """Equality oracle.  Exact on fixtures; opaque names compare their first
    ``depth`` entries."""
    if space.tag == "E0" and isinstance(a.name, EP) and isinstance(b.name, EP):
        start = max(len(a.name.pre), len(b.name.pre))
        return ep_equal_from(a.name, b.name, start)
    try:
        return denote(space, a.name) == denote(space, b.name)
    except DecodeError:
        pass
    if space.tag == "Product" and isinstance(a.name, EP) is False:
        from .kernel import split

        return all(
            equal(space.args[i], SpacePoint(space.args[i], split(a.name, i)),
                  SpacePoint(space.args[i], split(b.name, i)), depth)
            for i in (0, 1)
        )
    return a.name.prefix(depth) == b.name.prefix(depth)


def fixture(space: SpaceDescriptor, name: Sequence) -> SpacePoint:
    den = None
    try:
        den = denote(space, name)
    except DecodeError:
        pass
    return SpacePoint(space, name, den)


# ---------------------------------------------------------------------------
# function spaces


def encode_descriptor(text: str) -> EP:
    return EP([ord(c) + 1 for c in text], [0])


def decode_descriptor(name: Sequence) -> str:
    chars = []
    for k in range(MAX_DESCRIPTOR):
        x = name.at(k)
        if x == 0:
            return "".join(chars)
        try:
            chars.append(chr(x - 1))
        except (ValueError, OverflowError):
            raise DecodeError("entry %d is not a character code" % k) from None
    raise DecodeError("descriptor is not terminated within %d entries" % MAX_DESCRIPTOR)


def function_point(desc: Union[str, Machine], dom: SpaceDescriptor, cod: SpaceDescriptor) -> SpacePoint:
    text = desc if isinstance(desc, str) else desc.descriptor
    if "<" in text:
        raise DecodeError("machine %r has no textual descriptor" % text)
    return SpacePoint(function_space(dom, cod), encode_descriptor(text), text)


def _unwrap(text: str, head: str) -> Optional[str]:
    if text.startswith(head + "(") and text.endswith(")"):
        return text[len(head) + 1 : -1]
    return None


def machine_of_function_point(f: SpacePoint) -> Machine:
    from .dsl import ParseError, parse_machine

    text = decode_descriptor(f.name)
    if _unwrap(text, "curry") is not None or _unwrap(text, "uncurry") is not None:
        raise DecodeError("%r is evaluated symbolically, not as a single machine" % text)
    try:
        return parse_machine(text)
    except ParseError as e:
        raise DecodeError(str(e)) from None


def eval_function(f: SpacePoint, x: SpacePoint) -> SpacePoint:
    if f.space.tag != "Function":
        raise SpaceMismatch("not a function-space point: %s" % f.space)
    dom, cod = f.space.args
    if x.space != dom:
        raise SpaceMismatch("argument space %s is not %s" % (x.space, dom))
    text = decode_descriptor(f.name)
    inner = _unwrap(text, "curry")
    if inner is not None:
        # partial evaluation: y -> inner(x, y)
        if not isinstance(x.name, EP):
            raise DecodeError("partial evaluation needs a fixture argument")
        desc = "compose(pair(const(%r),id),%s)" % (x.name, inner)
        return function_point(desc, cod.args[0], cod.args[1])
    inner = _unwrap(text, "uncurry")
    if inner is not None:
        if dom.tag != "Product":
            raise SpaceMismatch("uncurried maps live on products")
        a, b = dom.args
        g = function_point(inner, a, function_space(b, cod))
        if isinstance(x.name, EP):
            xa, xb = ep_split(x.name, 0), ep_split(x.name, 1)
        else:
            from .kernel import split

            xa, xb = split(x.name, 0), split(x.name, 1)
        return eval_function(eval_function(g, SpacePoint(a, xa)), SpacePoint(b, xb))
    from .dsl import ParseError, parse_machine

    try:
        machine = parse_machine(text)
    except ParseError as e:
        raise DecodeError(str(e)) from None
    return SpacePoint(cod, machine.apply(x.name))


def curry_name(f: SpacePoint) -> SpacePoint:
    """``Function(X x Y, Z) -> Function(X, Function(Y, Z))``."""
    if f.space.tag != "Function" or f.space.args[0].tag != "Product":
        raise SpaceMismatch("curry needs a map out of a product, got %s" % f.space)
    (x, y), z = f.space.args[0].args, f.space.args[1]
    text = decode_descriptor(f.name)
    inner = _unwrap(text, "uncurry")
    desc = inner if inner is not None else "curry(%s)" % text
    return function_point(desc, x, function_space(y, z))


def uncurry_name(g: SpacePoint) -> SpacePoint:
    """``Function(X, Function(Y, Z)) -> Function(X x Y, Z)``."""
    if g.space.tag != "Function" or g.space.args[1].tag != "Function":
        raise SpaceMismatch("uncurry needs a map into a function space, got %s" % g.space)
    x = g.space.args[0]
    y, z = g.space.args[1].args
    text = decode_descriptor(g.name)
    inner = _unwrap(text, "curry")
    desc = inner if inner is not None else "uncurry(%s)" % text
    return function_point(desc, product(x, y), z)
