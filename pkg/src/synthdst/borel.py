"""Closed and overt subsets of Cantor space, the Sigma_2 decomposition, jump
overtness of Cantor space, overt images of Baire maps and the E0 space.

Words are strings over ``"01"``.  A word stream codes a word as its
length-lexicographic index plus one; 0 is a stutter.
"""
from __future__ import annotations

from bisect import bisect_left
from itertools import product as iproduct
from typing import Callable, Iterable, Optional

from .jumps import JumpLift, NotIntoJump, unshuffle_jump_product
from .kernel import (
    EP,
    FnSequence,
    Interleave,
    Machine,
    Sequence,
    pair,
    unpair,
)
from .setops import DOpenSet, SierpJoin, level_up
from .spaces import CANTOR, product


class PreconditionError(ValueError):
    """An operation was called outside its documented precondition."""


# ---------------------------------------------------------------------------
# word coding


def word_code(w: str) -> int:
    return (1 << len(w)) - 1 + (int(w, 2) if w else 0) + 1


def code_word(c: int) -> Optional[str]:
    """Inverse of :func:`word_code`; ``None`` for the stutter 0."""
    if c == 0:
        return None
    idx = c - 1
    L = (idx + 1).bit_length() - 1
    rest = idx - ((1 << L) - 1)
    return format(rest, "0%db" % L) if L else ""


def words_of_length(L: int) -> list[str]:
    return ["".join(bits) for bits in iproduct("01", repeat=L)]


def words_upto(L: int) -> list[str]:
    out = []
    for n in range(L + 1):
        out += words_of_length(n)
    return out


def word_stream(words: Iterable[Optional[str]]) -> EP:
    """A finite stream (``None`` or ``"_"`` for stutters) followed by stutters."""
    codes = [0 if w is None or w == "_" else word_code(w) for w in words]
    return EP(codes, (0,))


def decode_stream(seq: Sequence, length: int) -> list[Optional[str]]:
    return [code_word(seq.at(t)) for t in range(length)]


def prefix_of(p: Sequence, w: str) -> bool:
    return all(p.at(i) == int(c) for i, c in enumerate(w))


def covers(words, max_len: Optional[int] = None) -> bool:
    """Do the cylinders over ``words`` cover Cantor space?"""
    ws = set(words)
    if not ws:
        return False
    L = max(map(len, ws)) if max_len is None else max_len

    def cov(w):
        if w in ws:
            return True
        if len(w) >= L:
            return False
        return cov(w + "0") and cov(w + "1")

    return cov("")


# ---------------------------------------------------------------------------
# closed and overt sets


class ClosedCantorSet:
    """Cantor space minus the cylinders of an enumerated word stream."""

    def __init__(self, removed: Sequence):
        self.removed = removed

    @classmethod
    def from_words(cls, words: Iterable[Optional[str]]) -> "ClosedCantorSet":
        return cls(word_stream(words))

    def removed_words(self, upto: int) -> list[str]:
        return [w for w in decode_stream(self.removed, upto) if w is not None]

    def excludes(self, p: Sequence, upto: int) -> bool:
        """Some word among the first ``upto`` entries is a prefix of ``p``."""
        return any(prefix_of(p, w) for w in self.removed_words(upto))


class OvertCantorSet:
    """A closed set given by an enumeration of the words whose cylinder it meets."""

    def __init__(self, hits: Sequence, label: str = "overt"):
        self.hits = hits
        self.label = label

    @classmethod
    def from_predicate(cls, hit: Callable[[str], bool], label: str = "overt") -> "OvertCantorSet":
        """Entry ``t`` is the ``t``-th word in length-lex order if it is hit, else a stutter."""

        def at(t):
            w = code_word(t + 1)
            return t + 1 if hit(w) else 0

        return cls(FnSequence(at, label), label)

    @classmethod
    def from_words(cls, words: Iterable[Optional[str]], label: str = "overt") -> "OvertCantorSet":
        return cls(word_stream(words), label)

    def hit_words(self, upto: int) -> set[str]:
        return {w for w in decode_stream(self.hits, upto) if w is not None}


def full_overt() -> OvertCantorSet:
    return OvertCantorSet.from_predicate(lambda w: True, "full")


def point_overt(q: Sequence) -> OvertCantorSet:
    return OvertCantorSet.from_predicate(lambda w: prefix_of(q, w), "point(%r)" % (q,))


# ---------------------------------------------------------------------------
# emptiness of closed sets


class IsEmptyMachine(Machine):
    """Removed-word stream to Sierpinski: entry ``t`` is 1 iff the words among
    entries ``0..t`` cover Cantor space."""

    descriptor = "isempty"

    def step(self, u, fuel):
        m = min(len(u), fuel)
        words = []
        out = []
        done = False
        for t in range(m):
            w = code_word(u[t])
            if not done and w is not None:
                words.append(w)
                done = covers(words)
            out.append(int(done))
        return tuple(out)

    def apply(self, p):
        state = {"words": [], "t": 0, "hit": None}

        def at(k):
            while state["hit"] is None and state["t"] <= k:
                w = code_word(p.at(state["t"]))
                if w is not None:
                    state["words"].append(w)
                    if covers(state["words"]):
                        state["hit"] = state["t"]
                state["t"] += 1
            return int(state["hit"] is not None and state["hit"] <= k)

        return FnSequence(at, "isempty")


def is_empty_closed(A: ClosedCantorSet) -> Sequence:
    return IsEmptyMachine().apply(A.removed)


def is_nonempty_jump(A: ClosedCantorSet) -> Sequence:
    return NotIntoJump().apply(is_empty_closed(A))


# ---------------------------------------------------------------------------
# Sigma_2 decomposition


def fuel_for_depth(d: int) -> int:
    return 4 * (d + 1) ** 2


class Sigma2Decomposition:
    """``U = union of A_<n,k>`` with ``A_<n,k> = {p : chi(p)<n,i> != 0 for all i >= k}``.

    Piece ``<n,k>`` co-enumerates words ``w`` with ``[w]`` disjoint from the piece.
    Stage ``d`` decides every word of length ``d``: the word is dead when the
    run of ``chi`` on it (at fuel ``4(d+1)^2``) shows a zero at some ``<n,i>``
    with ``i >= k``.  The stage emits the newly certified maximal words (all of
    whose depth-``d`` extensions are dead), sorted by code and padded with
    stutters to ``2^d`` entries.
    """

    def __init__(self, U: DOpenSet):
        if U.space != CANTOR or U.level != 1:
            raise PreconditionError("decomposition needs a jump-1 open of Cantor space")
        self.U = U
        self._runs: dict[str, tuple] = {}
        self._pieces: dict[int, "_Piece"] = {}

    def run(self, w: str) -> tuple:
        out = self._runs.get(w)
        if out is None:
            u = tuple(int(c) for c in w)
            out = self._runs[w] = self.U.machine.step(u, fuel_for_depth(len(w)))
        return out

    def dead(self, w: str, n: int, k: int) -> bool:
        out = self.run(w)
        i = k
        while True:
            pos = pair(n, i)
            if pos >= len(out):
                return False
            if out[pos] == 0:
                return True
            i += 1

    def piece(self, c: int) -> ClosedCantorSet:
        p = self._pieces.get(c)
        if p is None:
            p = self._pieces[c] = _Piece(self, *unpair(c))
        return ClosedCantorSet(FnSequence(p.at, "piece%d" % c))

    def pieces(self) -> Callable[[int], ClosedCantorSet]:
        return self.piece

    def union_member(self, p: Sequence, max_code: int, depth: int) -> bool:
        """Membership of ``p`` in the union of the pieces ``<= max_code``, each
        co-enumerated through stage ``depth``."""
        upto = (1 << (depth + 1)) - 1
        return any(not self.piece(c).excludes(p, upto) for c in range(max_code + 1))


class _Piece:
    def __init__(self, dec: Sigma2Decomposition, n: int, k: int):
        self.dec, self.n, self.k = dec, n, k
        self.live = [""]  # live words of the current depth
        self.depth = -1
        self.emitted: set[str] = set()
        self.stream: list[int] = []

    def _covered(self, w):
        return any(w[:j] in self.emitted for j in range(len(w) + 1))

    def _stage(self):
        d = self.depth + 1
        if d == 0:
            live = [w for w in self.live if not self.dec.dead(w, self.n, self.k)]
        else:
            live = [w + b for w in self.live for b in "01" if not self.dec.dead(w + b, self.n, self.k)]
        self.live, self.depth = live, d
        prefixes = {w[:j] for w in live for j in range(d + 1)}
        if not live:
            new = [] if self._covered("") else [""]
        else:
            new = []
            for w in sorted(prefixes, key=word_code):
                if len(w) >= d:
                    continue
                for b in "01":
                    c = w + b
                    if c not in prefixes and not self._covered(c):
                        new.append(c)
        new.sort(key=word_code)
        self.emitted.update(new)
        codes = [word_code(w) for w in new]
        self.stream += codes + [0] * ((1 << d) - len(codes))

    def at(self, t):
        while len(self.stream) <= t:
            self._stage()
        return self.stream[t]


def sigma2_decompose(U: DOpenSet) -> Sigma2Decomposition:
    return Sigma2Decomposition(U)


# ---------------------------------------------------------------------------
# jump overtness of Cantor space


def jump_overt_cantor(U: DOpenSet) -> Sequence:
    """Jump name of ``U != empty``: the lifted join over the nonemptiness of
    all decomposition pieces."""
    dec = Sigma2Decomposition(U)
    cache: dict[int, Sequence] = {}

    def member(c):
        s = cache.get(c)
        if s is None:
            s = cache[c] = is_nonempty_jump(dec.piece(c))
        return s

    return JumpLift(SierpJoin()).apply(unshuffle_jump_product(member, 1))


# ---------------------------------------------------------------------------
# overt images of Baire maps


def _baire_words(s: int):
    """All words ``u`` over N with ``len(u) + sum(u) <= s``."""
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for u in frontier:
            budget = s - len(u) - sum(u) - 1
            for x in range(budget + 1):
                nxt.append(u + (x,))
        out += nxt
        frontier = nxt
    return out


def image_of_baire_map(f: Machine) -> OvertCantorSet:
    """Stage ``s`` runs ``f`` on every ``u`` with ``len(u) + sum(u) <= s`` at fuel
    ``4(s+1)^2``; every prefix of an output is a hit word.  New words are
    emitted in code order, then one stutter."""
    state = {"stream": [], "seen": set(), "s": 0}

    def stage():
        s = state["s"]
        fuel = fuel_for_depth(s)
        new = set()
        for u in _baire_words(s):
            o = f.step(u, fuel)
            if any(x not in (0, 1) for x in o):
                o = o[: next(i for i, x in enumerate(o) if x not in (0, 1))]
            w = "".join(map(str, o))
            for j in range(len(w) + 1):
                if w[:j] not in state["seen"]:
                    new.add(w[:j])
        state["seen"] |= new
        state["stream"] += [word_code(w) for w in sorted(new, key=word_code)] + [0]
        state["s"] = s + 1

    def at(t):
        while len(state["stream"]) <= t:
            stage()
        return state["stream"][t]

    return OvertCantorSet(FnSequence(at, "image(%s)" % f.descriptor), "image")


class OvertImageInverse(Machine):
    """Baire to Cantor map whose image is a given overt set.

    Vertices of a countably branching tree carry hit words; the root carries
    the empty word.  Let ``t0`` be the first entry that extends the label ``w``
    by one letter.  Child ``i`` is labeled ``E[i mod |E|]`` where ``E`` lists,
    in order of appearance, the distinct one-letter extensions of ``w`` among
    entries ``0 .. t0+i``.  The input is a path of child indices and the output
    is the label of the deepest vertex computable from fewer than ``fuel``
    entries.
    """

    def __init__(self, A: OvertCantorSet):
        self.A = A
        self.descriptor = "imageinv(%s)" % A.label
        self._entries: list[Optional[str]] = []

    def _entry(self, t):
        while len(self._entries) <= t:
            self._entries.append(code_word(self.A.hits.at(len(self._entries))))
        return self._entries[t]

    def _child(self, w, i, fuel):
        t0 = None
        for t in range(fuel):
            e = self._entry(t)
            if e is not None and len(e) == len(w) + 1 and e.startswith(w):
                t0 = t
                break
        if t0 is None or t0 + i >= fuel:
            return None
        ext = []
        for t in range(t0 + i + 1):
            e = self._entry(t)
            if e is not None and len(e) == len(w) + 1 and e.startswith(w) and e not in ext:
                ext.append(e)
        return ext[i % len(ext)]

    def step(self, u, fuel):
        m = min(len(u), fuel)
        w = ""
        for j in range(m):
            c = self._child(w, u[j], fuel)
            if c is None:
                break
            w = c
        return tuple(int(x) for x in w[:fuel])


def overt_image_inverse(A: OvertCantorSet, witness: Optional[str] = None, search: int = 1 << 16) -> Machine:
    """Returns a machine whose image is ``A``.  With a ``witness`` hit word the
    nonemptiness precondition is checked by scanning ``search`` entries."""
    if witness is not None:
        code = word_code(witness)
        if not any(A.hits.at(t) == code for t in range(search)):
            raise PreconditionError("witness %r not enumerated within %d entries" % (witness, search))
    return OvertImageInverse(A)


# ---------------------------------------------------------------------------
# E0


class E0Point:
    def __init__(self, name: Sequence):
        self.name = name

    def __repr__(self):
        return "E0Point(%r)" % (self.name,)


def e0_same(x: E0Point, y: E0Point) -> bool:
    """Exact tail equivalence on fixture names."""
    from .kernel import ep_equal_from

    p, q = x.name, y.name
    return ep_equal_from(p, q, max(len(p.pre), len(q.pre)))


class E0EqualMachine(Machine):
    """``interleave(p, q)`` to a jump name: row ``n``, column ``i`` is 1 iff
    ``p`` and ``q`` agree on positions ``n .. n+i``."""

    oblivious = True
    descriptor = "e0eq"

    @staticmethod
    def _need(k):
        n, i = unpair(k)
        return 2 * (n + i) + 2

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        for k in range(fuel):
            if self._need(k) > m:
                break
            out.append(self._value(u, k))
        return tuple(out)

    def _value(self, u, k):
        n, i = unpair(k)
        return int(all(u[2 * x] == u[2 * x + 1] for x in range(n, n + i + 1)))

    def value_at(self, u, fuel, k):
        if k < fuel and self._need(k) <= min(len(u), fuel):
            return self._value(u, k)
        return None

    def apply(self, p):
        # disagreement positions below the scanned horizon, in order
        diff: list[int] = []
        state = {"h": 0}

        def at(k):
            n, i = unpair(k)
            while state["h"] <= n + i:
                x = state["h"]
                if p.at(2 * x) != p.at(2 * x + 1):
                    diff.append(x)
                state["h"] = x + 1
            j = bisect_left(diff, n)
            return int(j == len(diff) or diff[j] > n + i)

        return FnSequence(at, self.descriptor)


def e0_equal_jump(x: E0Point, y: E0Point) -> Sequence:
    return E0EqualMachine().apply(Interleave(x.name, y.name))


class CantorNeq(Machine):
    """Inequality on Cantor x Cantor: ``out(k) = 1`` iff the components differ
    somewhere among positions ``0..k``."""

    oblivious = True
    descriptor = "neq"

    def step(self, u, fuel):
        m = min(len(u), fuel)
        out = []
        seen = False
        for k in range(m // 2):
            seen = seen or u[2 * k] != u[2 * k + 1]
            out.append(int(seen))
        return tuple(out[:fuel])


def cantor_neq(level: int = 0) -> DOpenSet:
    """The diagonal complement over Cantor x Cantor, raised to ``level``."""
    U = DOpenSet(product(CANTOR, CANTOR), 0, CantorNeq())
    for _ in range(level):
        U = level_up(U)
    return U
