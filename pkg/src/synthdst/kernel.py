"""Sequences, prefixes, the Cantor pairing and the fueled monotone machine model.

A *name* is a total sequence of naturals (:class:`Sequence`).  A *machine*
is a prefix transformer ``step(u, fuel) -> prefix`` that is

* monotone: ``u <= v`` and ``m <= n`` imply ``step(u, m) <= step(v, n)``,
* deterministic,
* fuel-bounded: it reads at most ``u[:fuel]`` and emits at most ``fuel`` items.

Every continuous map in the package is realized by such a machine.
"""
from __future__ import annotations

import math
from math import gcd
from typing import Callable, Iterable, Optional, Sequence as Seq

Prefix = tuple

OUTPUT_FUEL_CAP = 1 << 20


class NoOutput(RuntimeError):
    """A machine did not produce the requested output position within the fuel cap."""


# ---------------------------------------------------------------------------
# pairing


def pair(n: int, i: int) -> int:
    """Cantor pairing ``<n, i> = (n+i)(n+i+1)/2 + i``."""
    w = n + i
    return w * (w + 1) // 2 + i


def unpair(k: int) -> tuple[int, int]:
    w = (math.isqrt(8 * k + 1) - 1) // 2
    i = k - w * (w + 1) // 2
    return w - i, i


def nested_index(*coords: int) -> int:
    """Index of ``(n, i1, i2, ...)`` in an iterated jump name: ``<<<n,i1>,i2>,...>``."""
    k = coords[0]
    for c in coords[1:]:
        k = pair(k, c)
    return k


def _diag_max_i(k: int) -> int:
    # largest column index among positions 0..k
    n, i = unpair(k)
    return max(i, n + i - 1)


# ---------------------------------------------------------------------------
# sequences


class Sequence:
    """A total, deterministic sequence of naturals (a point of Baire space)."""

    def at(self, n: int) -> int:
        raise NotImplementedError

    def prefix(self, n: int) -> Prefix:
        return tuple(self.at(k) for k in range(n))

    def __getitem__(self, n: int) -> int:
        return self.at(n)


class EP(Sequence):
    """Eventually periodic fixture: ``pre`` followed by ``per`` repeated forever."""

    def __init__(self, pre: Iterable[int] = (), per: Iterable[int] = (0,)):
        self.pre = tuple(int(x) for x in pre)
        self.per = tuple(int(x) for x in per)
        if not self.per:
            raise ValueError("period must be non-empty")
        if any(x < 0 for x in self.pre + self.per):
            raise ValueError("entries must be naturals")

    def at(self, n: int) -> int:
        if n < len(self.pre):
            return self.pre[n]
        return self.per[(n - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> Prefix:
        return tuple(self.at(k) for k in range(n))

    def normalized(self) -> "EP":
        per = self.per
        for d in range(1, len(per) + 1):
            if len(per) % d == 0 and per == per[:d] * (len(per) // d):
                per = per[:d]
                break
        pre = list(self.pre)
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = (per[-1],) + per[:-1]
        return EP(pre, per)

    def __eq__(self, other):
        if not isinstance(other, EP):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.pre == b.pre and a.per == b.per

    def __hash__(self):
        a = self.normalized()
        return hash((a.pre, a.per))

    def map(self, fn: Callable[[int], int]) -> "EP":
        return EP([fn(x) for x in self.pre], [fn(x) for x in self.per])

    def tail_start(self) -> int:
        return len(self.pre)

    def horizon(self) -> int:
        """Index after which one full period has been seen."""
        return len(self.pre) + len(self.per)

    def __repr__(self):
        return "ep [%s ; %s]" % (",".join(map(str, self.pre)), ",".join(map(str, self.per)))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def ep_equal_from(p: EP, q: EP, start: int = 0) -> bool:
    """Do two fixtures agree at every index >= start?  Exact."""
    end = max(len(p.pre), len(q.pre), start) + lcm(len(p.per), len(q.per))
    return all(p.at(k) == q.at(k) for k in range(start, end))


class FnSequence(Sequence):
    """Sequence given by a host function, memoized."""

    def __init__(self, fn: Callable[[int], int], label: str = "<fn>"):
        self.fn = fn
        self.label = label
        self._memo: dict[int, int] = {}

    def at(self, n: int) -> int:
        v = self._memo.get(n)
        if v is None:
            v = self.fn(n)
            self._memo[n] = v
        return v

    def __repr__(self):
        return self.label


def constant(v: int) -> EP:
    return EP((), (v,))


ZEROS = constant(0)


class Interleave(Sequence):
    """Product name: ``at(2i) = p.at(i)``, ``at(2i+1) = q.at(i)``."""

    def __init__(self, p: Sequence, q: Sequence):
        self.p, self.q = p, q

    def at(self, n: int) -> int:
        return (self.q if n & 1 else self.p).at(n >> 1)


def interleave(p: Sequence, q: Sequence) -> Sequence:
    return Interleave(p, q)


def split(s: Sequence, which: int) -> Sequence:
    if isinstance(s, Interleave):
        return s.q if which else s.p
    return FnSequence(lambda k: s.at(2 * k + which), "split%d" % which)


def split_name(s: Sequence) -> tuple[Sequence, Sequence]:
    return split(s, 0), split(s, 1)


class TupleRows(Sequence):
    """Countable product name: ``at(<j, m>) = rows(j).at(m)``."""

    def __init__(self, rows):
        if callable(rows):
            self._rows = rows
        else:
            rows = list(rows)
            self._rows = lambda j: rows[j] if j < len(rows) else ZEROS
        self._cache: dict[int, Sequence] = {}

    def row(self, j: int) -> Sequence:
        r = self._cache.get(j)
        if r is None:
            r = self._cache[j] = self._rows(j)
        return r

    def at(self, n: int) -> int:
        j, m = unpair(n)
        return self.row(j).at(m)


def tuple_rows(rows) -> Sequence:
    """``rows`` is a list of sequences (padded with zeros) or a callable ``j -> Sequence``."""
    return TupleRows(rows)


def row(q: Sequence, j: int) -> Sequence:
    if isinstance(q, TupleRows):
        return q.row(j)
    return FnSequence(lambda m: q.at(pair(j, m)), "row%d" % j)


class LazyPrefix:
    """A finite prefix whose entries are fetched on demand."""

    __slots__ = ("fn", "length")

    def __init__(self, fn: Callable[[int], int], length: int):
        self.fn = fn
        self.length = length

    def __len__(self):
        return self.length

    def __getitem__(self, k):
        if isinstance(k, slice):
            return tuple(self.fn(x) for x in range(*k.indices(self.length)))
        if k < 0 or k >= self.length:
            raise IndexError(k)
        return self.fn(k)


def is_prefix(u: Seq[int], v: Seq[int]) -> bool:
    return len(u) <= len(v) and tuple(u) == tuple(v[: len(u)])


# ---------------------------------------------------------------------------
# machines


class Machine:
    """Fueled monotone prefix machine.

    Subclasses implement :meth:`step`.  :meth:`value_at` and :meth:`apply`
    may be overridden for speed but must agree with :meth:`step`.

    ``oblivious`` machines emit a number of items that depends only on the
    input length and the fuel, never on the input values.
    """

    descriptor = "<host>"
    oblivious = False

    def step(self, u, fuel: int) -> Prefix:
        raise NotImplementedError

    def value_at(self, u, fuel: int, k: int) -> Optional[int]:
        out = self.step(u, fuel)
        return out[k] if k < len(out) else None

    def apply(self, p: Sequence) -> Sequence:
        return MachineOutput(self, p)

    def __repr__(self):
        return self.descriptor


class MachineOutput(Sequence):
    """The (lazy) infinite output of a machine on an infinite input."""

    def __init__(self, machine: Machine, p: Sequence, cap: int = OUTPUT_FUEL_CAP):
        self.machine, self.p, self.cap = machine, p, cap
        self._out: Prefix = ()
        self._fuel = 4

    def at(self, n: int) -> int:
        if n < len(self._out):
            return self._out[n]
        fuel = max(2 * self._fuel, n + 1)
        while True:
            out = self.machine.step(self.p.prefix(fuel), fuel)
            self._fuel = fuel
            if len(out) > len(self._out):
                self._out = out
            if n < len(out):
                return out[n]
            if fuel >= self.cap:
                raise NoOutput("%r emitted no position %d within fuel %d" % (self.machine, n, fuel))
            fuel = min(2 * fuel, self.cap)


def run_on_oracle(machine: Machine, p: Sequence, out_index: int, fuel: int) -> Optional[int]:
    """Output position ``out_index`` of ``machine`` fed ``p[:fuel]`` at ``fuel``, or None."""
    out = machine.step(p.prefix(fuel), fuel)
    return out[out_index] if out_index < len(out) else None


class FnMachine(Machine):
    """Host-code machine; allowed in tests, not expressible in the DSL."""

    def __init__(self, fn: Callable, descriptor: str = "<host>", oblivious: bool = False):
        self.oblivious = oblivious
        self.fn = fn
        self.descriptor = descriptor

    def step(self, u, fuel):
        return tuple(self.fn(tuple(u[: min(len(u), fuel)]), fuel))[:fuel]


class Identity(Machine):
    descriptor = "id"
    oblivious = True

    def step(self, u, fuel):
        return tuple(u[: min(len(u), fuel)])

    def value_at(self, u, fuel, k):
        return u[k] if k < min(len(u), fuel) else None

    def apply(self, p):
        return p


class Const(Machine):
    """Ignores its input and emits a fixed sequence."""

    oblivious = True

    def __init__(self, seq: Sequence, descriptor: Optional[str] = None):
        self.seq = seq
        self.descriptor = descriptor or "const(%r)" % (seq,)

    def step(self, u, fuel):
        return self.seq.prefix(fuel)

    def value_at(self, u, fuel, k):
        return self.seq.at(k) if k < fuel else None

    def apply(self, p):
        return self.seq


def const_list(values: Seq[int]) -> Const:
    """``const(a,b,c)``: the listed values followed by zeros."""
    vals = tuple(values)
    return Const(EP(vals, (0,)), "const(%s)" % ",".join(map(str, vals)))


class Compose(Machine):
    """Run ``first``, feed its output to ``second`` (both at the same fuel)."""

    def __init__(self, first: Machine, second: Machine):
        self.first, self.second = first, second
        self.descriptor = "compose(%s,%s)" % (first.descriptor, second.descriptor)
        self.oblivious = first.oblivious and second.oblivious

    def step(self, u, fuel):
        return self.second.step(self.first.step(u, fuel), fuel)

    def value_at(self, u, fuel, k):
        return self.second.value_at(self.first.step(u, fuel), fuel, k)

    def apply(self, p):
        return self.second.apply(self.first.apply(p))


def compose(*machines: Machine) -> Machine:
    """Left-to-right composition: ``compose(F, G)`` runs F then G."""
    out = machines[0]
    for m in machines[1:]:
        out = Compose(out, m)
    return out


class Pointwise(Machine):
    """``out[k] = fn(u[k])``."""

    oblivious = True

    def __init__(self, fn: Callable[[int], int], descriptor: str):
        self.fn = fn
        self.descriptor = descriptor

    def step(self, u, fuel):
        return tuple(self.fn(x) for x in u[: min(len(u), fuel)])

    def value_at(self, u, fuel, k):
        return self.fn(u[k]) if k < min(len(u), fuel) else None

    def apply(self, p):
        return FnSequence(lambda k: self.fn(p.at(k)), self.descriptor)


class Permute(Machine):
    """``out[k] = u[index(k)]``, emitted as long as every index so far is available.

    ``need(k)`` is the input length required for positions ``0..k``; it must be
    nondecreasing.  When omitted it is derived as a running maximum.
    """

    oblivious = True

    def __init__(self, index: Callable[[int], int], descriptor: str, need: Optional[Callable[[int], int]] = None):
        self.index = index
        self.descriptor = descriptor
        self._need = need
        self._running: list[int] = []

    def need(self, k: int) -> int:
        if self._need is not None:
            return self._need(k)
        r = self._running
        while len(r) <= k:
            j = len(r)
            r.append(max(r[-1] if r else 0, self.index(j) + 1))
        return r[k]

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        k = 0
        while k < fuel and self.need(k) <= m:
            out.append(u[self.index(k)])
            k += 1
        return tuple(out)

    def value_at(self, u, fuel, k):
        if k < fuel and self.need(k) <= min(len(u), fuel):
            return u[self.index(k)]
        return None

    def apply(self, p):
        return FnSequence(lambda k: p.at(self.index(k)), self.descriptor)


def split_machine(which: int) -> Permute:
    """Project a product name to one component."""
    return Permute(lambda k: 2 * k + which, "split(%d)" % which, lambda k: 2 * k + which + 1)


def diagonal_machine() -> Permute:
    """``x -> (x, x)``; the DSL's bare ``interleave``."""
    return Permute(lambda k: k >> 1, "interleave", lambda k: (k >> 1) + 1)


def row_machine(j: int) -> Permute:
    """Extract row ``j`` of a tupled name."""
    return Permute(lambda m: pair(j, m), "row(%d)" % j, lambda m: pair(j, m) + 1)


def inject_machine() -> Permute:
    """Constant-rows embedding ``X -> X'``: ``out<n,i> = u[n]``."""
    return Permute(lambda k: unpair(k)[0], "inject", lambda k: sum(unpair(k)) + 1)


class Pair(Machine):
    """``u -> interleave(F(u), G(u))``."""

    def __init__(self, left: Machine, right: Machine):
        self.left, self.right = left, right
        self.descriptor = "pair(%s,%s)" % (left.descriptor, right.descriptor)
        self.oblivious = left.oblivious and right.oblivious

    def step(self, u, fuel):
        a = self.left.step(u, fuel)
        b = self.right.step(u, fuel)
        out = []
        for k in range(min(fuel, 2 * min(len(a), len(b)) + (1 if len(a) > len(b) else 0))):
            out.append(b[k >> 1] if k & 1 else a[k >> 1])
        return tuple(out)

    def apply(self, p):
        return Interleave(self.left.apply(p), self.right.apply(p))


class TupleMachine(Machine):
    """``u -> tuple_rows(j -> F_j(u))`` for a family of machines."""

    def __init__(self, family, descriptor: Optional[str] = None):
        if callable(family) and not isinstance(family, Machine):
            self._family = family
            self.descriptor = descriptor or "<family>"
        else:
            items = list(family)
            fallback = Const(ZEROS, "const()")
            self._family = lambda j: items[j] if j < len(items) else fallback
            self.oblivious = all(m.oblivious for m in items)
            self.descriptor = descriptor or "tuple(%s)" % ",".join(m.descriptor for m in items)
        self._cache: dict[int, Machine] = {}

    def member(self, j: int) -> Machine:
        m = self._cache.get(j)
        if m is None:
            m = self._cache[j] = self._family(j)
        return m

    def step(self, u, fuel):
        outs: dict[int, Prefix] = {}
        out = []
        for k in range(fuel):
            j, m = unpair(k)
            o = outs.get(j)
            if o is None:
                o = outs[j] = self.member(j).step(u, fuel)
            if m >= len(o):
                break
            out.append(o[m])
        return tuple(out)

    def apply(self, p):
        return TupleRows(lambda j: self.member(j).apply(p))


class Delay(Machine):
    """Emit nothing until ``wait`` input items are available, then behave as ``inner``."""

    def __init__(self, wait: int, inner: Machine):
        self.wait, self.inner = wait, inner
        self.descriptor = "delay(%d,%s)" % (wait, inner.descriptor)
        self.oblivious = inner.oblivious

    def step(self, u, fuel):
        if min(len(u), fuel) < self.wait:
            return ()
        return self.inner.step(u, fuel)


# primitive table used by the DSL's ``table(<name>)``


def _headswap(u, fuel):
    u = u[: min(len(u), fuel)]
    return tuple(u[:1] and (1 - u[0],)) + tuple(u[1:])


def _headparity(u, fuel):
    m = min(len(u), fuel)
    if m == 0:
        return ()
    return (u[0] % 2,) + (0,) * (fuel - 1)


PRIMITIVES: dict[str, Callable[[], Machine]] = {
    "succ": lambda: Pointwise(lambda x: x + 1, "table(succ)"),
    "bit": lambda: Pointwise(lambda x: min(x, 1), "table(bit)"),
    "flip": lambda: Pointwise(lambda x: 1 - min(x, 1), "table(flip)"),
    "parity": lambda: Pointwise(lambda x: x % 2, "table(parity)"),
    "headswap": lambda: FnMachine(_headswap, "table(headswap)", True),
    "headparity": lambda: FnMachine(_headparity, "table(headparity)", True),
}
