"""The limit jump ``'``, its finite iterates and the omega level, and the
finite-mindchange functor ``nabla`` together with the conversions between
``S``, ``S'`` and ``S^nabla``.

Jump names are read as rows: row ``n``, column ``i`` is ``base.at(<n, i>)``;
a jump name denotes the base-space point named by the sequence of row limits.
Column ``i`` is the ``i``-th approximation, so approximation ``p_j`` has
``p_j(n) = base.at(<n, j>)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence as Seq

from .kernel import (
    EP,
    ZEROS,
    Compose,
    FnSequence,
    Interleave,
    LazyPrefix,
    Machine,
    Pair,
    Prefix,
    Sequence,
    TupleRows,
    _diag_max_i,
    inject_machine,
    pair,
    unpair,
)

OMEGA = "omega"


class LevelError(ValueError):
    """Unsupported or out-of-range jump level."""


# ---------------------------------------------------------------------------
# jump names


class JumpFixture(Sequence):
    """A jump name with known row limits.

    Row ``n`` shows ``noise(n, i)`` for columns ``i < lag(n)`` and ``limit.at(n)``
    afterwards, so ``lag`` is an exact per-row stabilization bound.
    """

    def __init__(self, limit: Sequence, lag=0, noise=0):
        self.limit = limit
        self._lag = lag if callable(lag) else (lambda n, b=lag: b)
        self._noise = noise if callable(noise) else (lambda n, i, v=noise: v)

    def lag(self, n: int) -> int:
        return self._lag(n)

    def at(self, k: int) -> int:
        n, i = unpair(k)
        if i < self._lag(n):
            return self._noise(n, i)
        return self.limit.at(n)

    def __repr__(self):
        return "lag(%r)" % (self.limit,)


def jump_row(q: Sequence, n: int) -> Sequence:
    return FnSequence(lambda i: q.at(pair(n, i)), "row%d" % n)


def inject_into_jump(p: Sequence) -> JumpFixture:
    """``id : X -> X'`` on names: every row is constant."""
    return JumpFixture(p, 0)


class NotIntoJump(Machine):
    """``not : S -> S'``.  Row 0, column i is 1 iff ``s[0..i]`` has no nonzero entry;
    all other rows are 0."""

    oblivious = True
    descriptor = "notjump"

    @staticmethod
    def _need(k: int) -> int:
        n, i = unpair(k)
        w = n + i
        return w + 1 if n == 0 else w

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        seen = False
        scanned = 0
        for k in range(fuel):
            if self._need(k) > m:
                break
            n, i = unpair(k)
            if n:
                out.append(0)
                continue
            while scanned <= i:
                seen = seen or u[scanned] != 0
                scanned += 1
            out.append(0 if seen else 1)
        return tuple(out)

    def value_at(self, u, fuel, k):
        if k >= fuel or self._need(k) > min(len(u), fuel):
            return None
        n, i = unpair(k)
        if n:
            return 0
        return 0 if any(u[x] != 0 for x in range(i + 1)) else 1

    def apply(self, p):
        state = {"scanned": 0, "first": None}

        def first_nonzero_upto(i):
            while state["first"] is None and state["scanned"] <= i:
                if p.at(state["scanned"]) != 0:
                    state["first"] = state["scanned"]
                state["scanned"] += 1
            f = state["first"]
            return f is not None and f <= i

        def at(k):
            n, i = unpair(k)
            if n:
                return 0
            return 0 if first_nonzero_upto(i) else 1

        return FnSequence(at, "notjump")


def not_into_jump(s: Sequence) -> Sequence:
    return NotIntoJump().apply(s)


class JumpLift(Machine):
    """Realizer of ``f'`` built from a realizer ``F`` of ``f``.

    Output position ``<n, i>`` is ``F^i(p_j)(n)`` for the largest ``j <= i`` at
    which the fuel-``i`` run on the first ``i`` entries of approximation ``p_j``
    reaches position ``n``; 0 when there is none.  A position is emitted only
    once all approximations it may consult are fully available, so it is
    written once and never revised.
    """

    oblivious = True

    def __init__(self, inner: Machine):
        self.inner = inner
        self.descriptor = "jumplift(%s)" % inner.descriptor

    @staticmethod
    def need_for_column(i: int) -> int:
        return pair(i - 1, i) + 1 if i > 0 else 0

    def _entry(self, get: Callable[[int], int], n: int, i: int) -> int:
        if i == 0:
            return 0
        inner = self.inner
        for j in range(i, -1, -1):
            pj = LazyPrefix(lambda x, j=j: get(pair(x, j)), i)
            v = inner.value_at(pj, i, n)
            if v is not None:
                return v
            if inner.oblivious:
                # every approximation has the same length, so none reaches n
                break
        return 0

    def step(self, u, fuel):
        m = min(len(u), fuel)
        get = u.__getitem__
        out = []
        for k in range(fuel):
            n, i = unpair(k)
            if self.need_for_column(_diag_max_i(k)) > m:
                break
            out.append(self._entry(get, n, i))
        return tuple(out)

    def value_at(self, u, fuel, k):
        m = min(len(u), fuel)
        if k >= fuel or self.need_for_column(_diag_max_i(k)) > m:
            return None
        n, i = unpair(k)
        return self._entry(u.__getitem__, n, i)

    def apply(self, p):
        return FnSequence(lambda k: self._entry(p.at, *unpair(k)), self.descriptor)


def jump_lift(machine: Machine, times: int = 1) -> Machine:
    for _ in range(times):
        machine = JumpLift(machine)
    return machine


class PointwiseLimit(Machine):
    """``pw-lim``: from machines ``F_0, F_1, ...`` for ``f_n : X -> Y`` to a
    machine ``X -> Y'``.  Position ``<n, i>`` carries ``F_j^i(x)(n)`` for the
    largest ``j <= i`` defined at fuel ``i``, else 0."""

    def __init__(self, family, descriptor: Optional[str] = None):
        if callable(family) and not isinstance(family, (list, tuple)):
            self.member = family
            self.descriptor = descriptor or "pwlim(<family>)"
        else:
            items = list(family)
            self.member = lambda j: items[min(j, len(items) - 1)]
            self.descriptor = descriptor or "pwlim([%s])" % ",".join(m.descriptor for m in items)

    def _entry(self, u, n, i):
        if i == 0:
            return 0
        for j in range(i, -1, -1):
            v = self.member(j).value_at(u, i, n)
            if v is not None:
                return v
        return 0

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        for k in range(fuel):
            n, i = unpair(k)
            if _diag_max_i(k) > m:
                break
            out.append(self._entry(LazyPrefix(u.__getitem__, min(i, m)), n, i))
        return tuple(out)

    def apply(self, p):
        def at(k):
            n, i = unpair(k)
            return self._entry(LazyPrefix(p.at, i), n, i)

        return FnSequence(at, self.descriptor)


def pointwise_limit(family) -> PointwiseLimit:
    return PointwiseLimit(family)


# ---------------------------------------------------------------------------
# finite levels and the omega level


def level_entry(name: Sequence, *coords: int) -> int:
    """Entry of a level-k name at row-of-row coordinates ``(n, i1, ..., ik)``."""
    k = coords[0]
    for c in coords[1:]:
        k = pair(k, c)
    return name.at(k)


def inject_levels(p: Sequence, levels: int) -> Sequence:
    for _ in range(levels):
        p = inject_into_jump(p)
    return p


class OmegaName(Sequence):
    """Coproduct name of ``X^(omega)``: head selects the level, tail is a name at that level."""

    def __init__(self, level: int, name: Sequence):
        self.level, self.name = level, name

    def at(self, n: int) -> int:
        return self.level if n == 0 else self.name.at(n - 1)


def jump_level_name(level, name: Sequence, inner_level: Optional[int] = None) -> Sequence:
    """Encode a name at ``level`` (a natural or ``OMEGA``).

    Finite levels are plain iterated jump names.  For ``OMEGA`` the caller
    supplies the finite level ``inner_level`` that the head selects.
    """
    if level == OMEGA:
        if inner_level is None:
            raise LevelError("omega-level names need an inner finite level")
        return OmegaName(inner_level, name)
    if not isinstance(level, int) or level < 0:
        raise LevelError("level must be a natural or omega, got %r" % (level,))
    return name


def decode_omega(name: Sequence, max_level: Optional[int] = None) -> tuple[int, Sequence]:
    head = name.at(0)
    if max_level is not None and head > max_level:
        raise LevelError("omega head %d exceeds supported level %d" % (head, max_level))
    if isinstance(name, OmegaName):
        return head, name.name
    return head, FnSequence(lambda n: name.at(n + 1), "tail")


# ---------------------------------------------------------------------------
# product preservation: index shuffles


def binary_shuffle_index(level: int, k: int) -> tuple[int, int]:
    """For a level-``level`` name of ``X x Y`` at position ``k``: (component, position)."""
    if level == 0:
        return k & 1, k >> 1
    r, i = unpair(k)
    w, r2 = binary_shuffle_index(level - 1, r)
    return w, pair(r2, i)


def countable_shuffle_index(level: int, k: int) -> tuple[int, int]:
    """For a level-``level`` name of ``C(N, X)`` at position ``k``: (member, position)."""
    if level == 0:
        return unpair(k)
    r, i = unpair(k)
    j, r2 = countable_shuffle_index(level - 1, r)
    return j, pair(r2, i)


def _countable_inverse(level: int, j: int, m: int) -> int:
    # position in the level-`level` name of C(N, X) holding member j's position m
    if level == 0:
        return pair(j, m)
    r2, i = unpair(m)
    return pair(_countable_inverse(level - 1, j, r2), i)


def product_shuffle_machine(level: int) -> Machine:
    """``d X x d Y -> d(X x Y)`` for ``d`` the ``level``-fold jump."""
    from .kernel import Permute

    def index(k):
        w, pos = binary_shuffle_index(level, k)
        return 2 * pos + w

    return Permute(index, "pshuffle(%d)" % level)


def countable_shuffle_machine(level: int) -> Machine:
    """``C(N, dX) -> d C(N, X)`` (input tupled by rows) for the ``level``-fold jump."""
    from .kernel import Permute

    def index(k):
        j, pos = countable_shuffle_index(level, k)
        return pair(j, pos)

    return Permute(index, "cshuffle(%d)" % level)


def shuffle_jump_product(q: Sequence, level: int = 1) -> Callable[[int], Sequence]:
    """``d C(N, X) -> C(N, dX)``: family ``n -> s_n`` with
    ``s_n(<m, i>) = q(<<n, m>, i>)`` at level 1."""

    def member(n):
        return FnSequence(lambda m: q.at(_countable_inverse(level, n, m)), "member%d" % n)

    return member


def unshuffle_jump_product(family, level: int = 1) -> Sequence:
    """Inverse of :func:`shuffle_jump_product`."""
    rows = TupleRows(family if callable(family) else list(family))

    def at(k):
        j, pos = countable_shuffle_index(level, k)
        return rows.row(j).at(pos)

    return FnSequence(at, "unshuffle")


# ---------------------------------------------------------------------------
# nabla


@dataclass(frozen=True)
class GuessTrajectory:
    """Decoding record: one entry per reset, with the candidate that followed it."""

    guesses: tuple
    mindchanges: int

    @property
    def candidate(self) -> Prefix:
        return self.guesses[-1][1] if self.guesses else ()


def nabla_decode(prefix: Seq[int]) -> GuessTrajectory:
    """Decode a finite part of a nabla name.

    Entries after the last zero, each minus one, form the current candidate.
    With no zero at all the whole prefix is the candidate.
    """
    guesses = []
    start, cand = 0, []
    zeros = 0
    for t, x in enumerate(prefix):
        if x == 0:
            if zeros or cand:
                guesses.append((start, tuple(cand)))
            zeros += 1
            start, cand = t, []
        else:
            cand.append(x - 1)
    guesses.append((start, tuple(cand)))
    return GuessTrajectory(tuple(guesses), zeros)


def nabla_encode(stages: Seq[Seq[int]]) -> Prefix:
    """Encode successive guesses; a guess that does not extend the previous one
    forces a reset token 0.  A leading 0 is always emitted."""
    out = [0]
    prev: tuple = ()
    for n, stage in enumerate(stages):
        stage = tuple(stage)
        if n and stage[: len(prev)] != prev:
            out.append(0)
            prev = ()
        out.extend(v + 1 for v in stage[len(prev):])
        prev = stage
    return tuple(out)


def nabla_sierp_flags(prefix: Seq[int]) -> list[bool]:
    """Stage ``t`` -> does the candidate decoded from ``prefix[0..t]`` contain a nonzero?"""
    flags = []
    seen = False
    for x in prefix:
        if x == 0:
            seen = False
        elif x >= 2:
            seen = True
        flags.append(seen)
    return flags


def nabla_fixture_value(name: EP) -> bool:
    """Exact boolean denoted by a nabla name of S given as a fixture."""
    if 0 in name.per:
        raise ValueError("infinitely many resets: not a valid nabla name")
    tail = name.prefix(name.horizon())
    return nabla_sierp_flags(tail)[-1] or any(x >= 2 for x in name.per)


class NablaToJump(Machine):
    """``S^nabla -> S'`` (or its complement): row 0, column t is the truth of the
    candidate decoded from ``b[0..t]``."""

    oblivious = True

    def __init__(self, negate: bool = False):
        self.negate = negate
        self.descriptor = "nablajump(%d)" % negate

    def step(self, u, fuel):
        m = min(len(u), fuel)
        flags = nabla_sierp_flags(u[:m])
        out = []
        for k in range(fuel):
            if NotIntoJump._need(k) > m:
                break
            n, t = unpair(k)
            out.append(0 if n else int(flags[t] != self.negate))
        return tuple(out)

    def value_at(self, u, fuel, k):
        if k >= fuel or NotIntoJump._need(k) > min(len(u), fuel):
            return None
        n, t = unpair(k)
        if n:
            return 0
        return int(nabla_sierp_flags(u[: t + 1])[t] != self.negate)

    def apply(self, p):
        # flags[t] only depends on p[0..t]; recompute on a doubling prefix
        flags: list[bool] = []

        def at(k):
            n, t = unpair(k)
            if n:
                return 0
            if t >= len(flags):
                flags[:] = nabla_sierp_flags(p.prefix(2 * (t + 1)))
            return int(flags[t] != self.negate)

        return FnSequence(at, self.descriptor)


def nabla_to_jump_pair(b: Sequence) -> tuple[Sequence, Sequence]:
    """``x -> (x, not x) : S^nabla -> S' x S'``."""
    return NablaToJump(False).apply(b), NablaToJump(True).apply(b)


def nabla_to_jump_pair_machine() -> Machine:
    return Pair(NablaToJump(False), NablaToJump(True))


class JumpPairToNabla(Machine):
    """``S' x S' -> S^nabla`` on pairs ``(p, q)`` with exactly one denoting top.

    Input is ``interleave(p, q)``.  At stage ``t`` the positions ``<= t`` of both
    names are known.  A witness ``(c, side)`` with ``c = <n, k>`` claims that row
    ``n`` of its side is nonzero at every column ``>= k``; it is born at stage
    ``c`` and dies at the first sampled zero.  The guess is the side of the live
    witness of least rank ``2c + side`` (p before q on ties) and is kept when
    none is live.  Nothing is emitted before the first live witness; after
    that each stage emits one token (2 for top, 1 for bottom), preceded by a
    reset when the guess changed.  The least live rank never decreases, so
    the output has at most ``r + 1`` resets where ``r`` is the rank of the
    least witness that never dies.
    """

    descriptor = "pairnabla"

    def trace(self, u, fuel) -> tuple[Prefix, list]:
        m = min(len(u), fuel)
        stages = m // 2
        # witness (<n, k>, side) is dead iff k < dead[side][n]
        dead: list[dict[int, int]] = [{}, {}]
        rank_ptr = 0  # candidate minimum rank 2c + side
        guess = None
        out = [0]
        guesses = []

        def is_dead(r):
            n, k = unpair(r >> 1)
            return k < dead[r & 1].get(n, 0)

        for t in range(stages):
            n, i = unpair(t)
            for side in (0, 1):
                if u[2 * t + side] == 0:
                    dead[side][n] = max(dead[side].get(n, 0), i + 1)
            while rank_ptr < 2 * (t + 1) and is_dead(rank_ptr):
                rank_ptr += 1
            new = guess
            if rank_ptr < 2 * (t + 1):
                new = (rank_ptr & 1) == 0
            if guess is not None and new != guess:
                out.append(0)
            guess = new
            if guess is not None:
                out.append(2 if guess else 1)
            guesses.append(guess)
            if len(out) >= fuel:
                break
        return tuple(out[:fuel]), guesses

    def step(self, u, fuel):
        if min(len(u), fuel) < 2:
            return (0,)[:fuel]
        return self.trace(u, fuel)[0]


def jump_pair_to_nabla(p: Sequence, q: Sequence) -> Sequence:
    return JumpPairToNabla().apply(Interleave(p, q))


class NablaLogic(Machine):
    """Guess-wise and/or on ``S^nabla x S^nabla`` (input interleaved).

    The output candidate is the bitwise contract of the current input candidates;
    it resets exactly when an input resets, plus one leading reset, so its
    mindchange count is at most the sum of the inputs' counts plus one.
    """

    def __init__(self, which: str):
        if which not in ("and", "or"):
            raise ValueError(which)
        self.which = which
        self.descriptor = "nabla%s" % which

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = [0]
        cands = ([], [])
        emitted = 0
        both = self.which == "and"
        for t in range(m):
            side, x = t & 1, u[t]
            if x == 0:
                cands[side].clear()
                out.append(0)
                emitted = 0
            else:
                cands[side].append(x - 1)
            a, b = cands
            upto = min(len(a), len(b))
            while emitted < upto:
                k = emitted
                ha = any(a[y] != 0 for y in range(k + 1))
                hb = any(b[y] != 0 for y in range(k + 1))
                out.append(2 if ((ha and hb) if both else (ha or hb)) else 1)
                emitted += 1
            if len(out) >= fuel:
                break
        return tuple(out[:fuel])


class NablaLift(Machine):
    """``F^nabla``: rerun ``F`` on each decoded candidate, resetting with the input."""

    def __init__(self, inner: Machine):
        self.inner = inner
        self.descriptor = "nablalift(%s)" % inner.descriptor

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = [0]
        cand: list[int] = []
        emitted = 0
        for t in range(m):
            x = u[t]
            if x == 0:
                if t:
                    out.append(0)
                cand = []
                emitted = 0
                continue
            cand.append(x - 1)
            res = self.inner.step(tuple(cand), len(cand))
            out.extend(v + 1 for v in res[emitted:])
            emitted = max(emitted, len(res))
            if len(out) >= fuel:
                break
        return tuple(out[:fuel])


class NablaNot(Machine):
    """Complement on ``S^nabla``: reset whenever the decoded truth value flips."""

    descriptor = "nablanot"

    def step(self, u, fuel):
        m = min(len(u), fuel)
        flags = nabla_sierp_flags(u[:m])
        out = [0]
        prev = None
        for f in flags:
            val = not f
            if prev is not None and val != prev:
                out.append(0)
            out.append(2 if val else 1)
            prev = val
            if len(out) >= fuel:
                break
        return tuple(out[:fuel])


def inject_levels_machine(levels: int) -> Machine:
    m: Machine = inject_machine()
    for _ in range(levels - 1):
        m = Compose(m, inject_machine())
    return m
