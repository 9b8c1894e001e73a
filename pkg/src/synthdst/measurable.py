"""d-measurable maps, heterogeneous composition and the kappa maps."""
from __future__ import annotations

from typing import Callable

from .jumps import NablaLift, jump_lift, unshuffle_jump_product
from .kernel import Compose, Identity, Machine, Sequence, row_machine
from .setops import NABLA, DOpenSet, Level, UnsupportedLevel, level_text
from .spaces import NAT, SpaceDescriptor, SpaceMismatch, open_space


def d_lift(level: Level, machine: Machine) -> Machine:
    """``dF`` for ``d`` the ``k``-fold jump or nabla."""
    if level == NABLA:
        return NablaLift(machine)
    if not isinstance(level, int) or level < 0:
        raise UnsupportedLevel("bad level %r" % (level,))
    return jump_lift(machine, level) if level else machine


def compose_levels(outer: Level, inner: Level) -> Level:
    """Level of ``e . d``.  Jump towers add; nabla only composes with the base level."""
    if outer == NABLA or inner == NABLA:
        if outer == 0:
            return inner
        if inner == 0:
            return outer
        raise UnsupportedLevel("cannot compose %s with %s" % (level_text(outer), level_text(inner)))
    return outer + inner


class MeasurableFunction:
    """A point of ``C^d(X, Y)``: a rule sending opens of ``Y`` (base level) to
    d-opens of ``X``."""

    def __init__(self, domain: SpaceDescriptor, codomain: SpaceDescriptor, level: Level,
                 preimage_machine: Callable[[DOpenSet], Machine], descriptor: str = "<measurable>"):
        self.domain, self.codomain, self.level = domain, codomain, level
        self._pre = preimage_machine
        self.descriptor = descriptor

    def preimage(self, U: DOpenSet) -> DOpenSet:
        if U.space != self.codomain:
            raise SpaceMismatch("open over %s, map into %s" % (U.space, self.codomain))
        if U.level != 0:
            raise UnsupportedLevel("preimages are taken of base-level opens")
        return DOpenSet(self.domain, self.level, self._pre(U))

    def preimage_of(self, text: str) -> DOpenSet:
        from .dsl import parse_set

        return self.preimage(parse_set(text, self.codomain))

    def __repr__(self):
        return "MeasurableFunction(%s -> %s, %s)" % (self.domain, self.codomain, level_text(self.level))


def continuous_to_measurable(f: Machine, domain: SpaceDescriptor, codomain: SpaceDescriptor,
                             level: Level) -> MeasurableFunction:
    """``id : C(X, dY) -> C^d(X, Y)``: ``U -> compose(f, dU)``."""
    d_lift(level, Identity())  # validates the level
    return MeasurableFunction(domain, codomain, level, lambda U: Compose(f, d_lift(level, U.machine)),
                              "meas(%s)" % f.descriptor)


def compose_het(f: Machine, outer: Level, g: MeasurableFunction, domain: SpaceDescriptor) -> MeasurableFunction:
    """``f : X -> eY`` after ``g in C^d(Y, Z)`` gives a point of ``C^{ed}(X, Z)``."""
    level = compose_levels(outer, g.level)
    return MeasurableFunction(domain, g.codomain, level,
                              lambda U: Compose(f, d_lift(outer, g.preimage(U).machine)),
                              "het(%s,%s)" % (f.descriptor, g.descriptor))


class Kappa:
    """``kappa^d(y)``: an open ``U`` of ``Y`` goes to ``dU`` applied to ``y``."""

    def __init__(self, y_name: Sequence, level: Level):
        self.y_name, self.level = y_name, level

    def __call__(self, U) -> Sequence:
        machine = U.machine if isinstance(U, DOpenSet) else U
        return d_lift(self.level, machine).apply(self.y_name)


def kappa(y_name: Sequence, level: Level) -> Kappa:
    return Kappa(y_name, level)


def membership_open(n: int) -> DOpenSet:
    """The open ``{U in O(N) : n in U}``.  Names of ``O(N)`` are row-tupled
    Sierpinski names, row ``n`` for membership of ``n``."""
    return DOpenSet(open_space(NAT), 0, row_machine(n))


def kappa_inverse_open_nat(phi: Callable[[DOpenSet], Sequence], level: int = 1) -> Sequence:
    """Recover a name in ``d O(N)`` from its kappa-image ``phi`` (``d`` a jump tower)."""
    if level == NABLA or not isinstance(level, int) or level < 1:
        raise UnsupportedLevel("kappa inverse needs a product-preserving jump level")
    cache: dict[int, Sequence] = {}

    def member(n):
        s = cache.get(n)
        if s is None:
            s = cache[n] = phi(membership_open(n))
        return s

    return unshuffle_jump_product(member, level)
