import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import eps
from synthdst.dsl import parse_machine
from synthdst.jumps import (
    OMEGA,
    JumpFixture,
    JumpLift,
    JumpPairToNabla,
    LevelError,
    NablaLift,
    NablaLogic,
    NablaNot,
    PointwiseLimit,
    decode_omega,
    inject_into_jump,
    inject_levels,
    jump_level_name,
    jump_lift,
    jump_pair_to_nabla,
    jump_row,
    level_entry,
    nabla_decode,
    nabla_encode,
    nabla_fixture_value,
    nabla_to_jump_pair,
    not_into_jump,
    shuffle_jump_product,
    unshuffle_jump_product,
)
from synthdst.kernel import (
    EP,
    ZEROS,
    Identity,
    Interleave,
    PRIMITIVES,
    const_list,
    is_prefix,
    pair,
    tuple_rows,
)
from synthdst.scan import scan_row
from synthdst.spaces import BOTTOM, top_at


def limit_rows(q, rows, max_column=256):
    out = []
    for n in range(rows):
        r = scan_row(q, n, max_column)
        assert r.bound is not None, "row %d did not stabilize" % n
        out.append(r.value)
    return out


# --- injection and negation


def test_inject_constant_rows():
    q = inject_into_jump(ZEROS)
    assert all(q.at(pair(n, i)) == 0 for n in range(6) for i in range(6))
    q = inject_into_jump(EP([2], [5]))
    assert jump_row(q, 0).prefix(8) == (2,) * 8
    assert jump_row(q, 3).prefix(8) == (5,) * 8
    p = EP([1, 0, 3], [2, 0])
    assert limit_rows(inject_into_jump(p), 16) == list(p.prefix(16))
    assert all(scan_row(inject_into_jump(p), n, 128).bound == 0 for n in range(16))


def test_not_into_jump_examples():
    assert jump_row(not_into_jump(BOTTOM), 0).prefix(10) == (1,) * 10
    assert jump_row(not_into_jump(top_at(4)), 0).prefix(8) == (1, 1, 1, 1, 0, 0, 0, 0)
    assert jump_row(not_into_jump(top_at(0)), 0).prefix(8) == (0,) * 8
    assert all(jump_row(not_into_jump(BOTTOM), n).prefix(5) == (0,) * 5 for n in range(1, 4))


@given(eps())
def test_not_into_jump_denotes_negation(s):
    q = not_into_jump(s)
    lim = limit_rows(q, 3, 128)
    assert (lim[0] != 0) == (not oracles.sierp_true(s))


# --- jump lift


def test_jump_lift_identity_on_constant_rows():
    p = EP([0, 1], [1, 0, 2])
    out = JumpLift(Identity()).apply(inject_into_jump(p))
    assert limit_rows(out, 16) == list(p.prefix(16))


def test_jump_lift_successor():
    q = JumpFixture(EP([], [1]), lag=3, noise=0)
    out = JumpLift(PRIMITIVES["succ"]()).apply(q)
    assert limit_rows(out, 12, 512) == [2] * 12


def test_jump_lift_placeholders_are_written_once():
    G = JumpLift(Identity())
    q = JumpFixture(EP([], [3]), lag=2, noise=1)
    prev = ()
    for fuel in range(0, 80):
        out = G.step(q.prefix(fuel), fuel)
        assert is_prefix(prev, out)
        prev = out
    assert G.step((), 4) == (0, 0)  # column 0 of rows 0 and 1: placeholders


def test_jump_lift_step_matches_apply():
    G = JumpLift(parse_machine("compose(table(flip),interleave)"))
    q = JumpFixture(EP([1], [0, 1]), lag=lambda n: n % 3, noise=lambda n, i: (n + i) % 2)
    out = G.step(q.prefix(600), 600)
    full = G.apply(q)
    assert tuple(full.at(k) for k in range(len(out))) == out
    assert len(out) > 100


# --- levels


def test_levels():
    p = EP([4], [1, 2])
    assert jump_level_name(0, p) is p
    q = inject_levels(p, 2)
    rng = random.Random(3)
    for _ in range(16):
        n, i1, i2 = rng.randrange(6), rng.randrange(6), rng.randrange(6)
        assert level_entry(q, n, i1, i2) == q.at(pair(pair(n, i1), i2)) == p.at(n)
    w = jump_level_name(OMEGA, q, inner_level=3)
    head, tail = decode_omega(w, max_level=5)
    assert head == 3 and tail.prefix(10) == q.prefix(10)
    with pytest.raises(LevelError):
        decode_omega(w, max_level=2)
    with pytest.raises(LevelError):
        jump_level_name(OMEGA, q)


# --- nabla coding


def test_nabla_decode_examples():
    t = nabla_decode([0, 3, 5])
    assert t.candidate == (2, 4) and t.mindchanges == 1
    t = nabla_decode([4, 2, 0, 7])
    assert t.candidate == (6,) and t.mindchanges == 1
    t = nabla_decode([0])
    assert t.candidate == () and t.mindchanges == 1


def test_nabla_encode_examples():
    assert nabla_encode([[1], [1, 2]]) == (0, 2, 3)
    out = nabla_encode([[1], [5]])
    assert out == (0, 2, 0, 6) and nabla_decode(out).mindchanges == 2
    assert nabla_encode([[]]) == (0,)


stages_strategy = st.lists(st.lists(st.integers(0, 4), max_size=4), min_size=1, max_size=6)


@given(stages_strategy)
def test_decode_encode_gives_final_stage(stages):
    out = nabla_encode(stages)
    assert nabla_decode(out).candidate == tuple(stages[-1])
    # re-encoding the decoded trajectory changes nothing about the final candidate
    traj = nabla_decode(out)
    again = nabla_encode([list(c) for _, c in traj.guesses])
    assert nabla_decode(again).candidate == tuple(stages[-1])


@given(st.lists(st.integers(0, 4), max_size=30))
def test_decode_counts_zeros(prefix):
    t = nabla_decode(prefix)
    assert t.mindchanges == prefix.count(0)
    last = max((i for i, x in enumerate(prefix) if x == 0), default=-1)
    assert t.candidate == tuple(x - 1 for x in prefix[last + 1 :])


# --- S^nabla and S' x S'


def test_nabla_to_jump_pair_examples():
    b = EP([0], [1])  # bottom, no change after the lead
    top, bot = nabla_to_jump_pair(b)
    assert jump_row(top, 0).prefix(12) == (0,) * 12
    assert jump_row(bot, 0).prefix(12) == (1,) * 12
    b = EP([0, 1, 1, 1, 0], [2])  # bottom guesses, reset at 4, top from stage 5 on
    top, _ = nabla_to_jump_pair(b)
    assert jump_row(top, 0).prefix(8) == (0, 0, 0, 0, 0, 1, 1, 1)


def _pair_nabla(p, q, length=2000):
    tokens, guesses = JumpPairToNabla().trace(Interleave(p, q).prefix(2 * length), 2 * length)
    return tokens, guesses


def test_pair_to_nabla_honest_top():
    p = inject_into_jump(top_at(0))
    q = inject_into_jump(BOTTOM)
    tokens, guesses = _pair_nabla(p, q, 200)
    assert guesses[-1] is True
    assert nabla_decode(tokens).mindchanges <= 2


def test_pair_to_nabla_honest_bottom():
    p = JumpFixture(BOTTOM, lag=4, noise=1)
    q = inject_into_jump(top_at(2))
    tokens, guesses = _pair_nabla(p, q, 400)
    assert guesses[-1] is False


def test_pair_to_nabla_fake_witness():
    # p's row 0 is 1 up to column 8, then 0: the witness <0,0> for p dies late
    p = JumpFixture(BOTTOM, lag=lambda n: 8 if n == 0 else 0, noise=1)
    q = inject_into_jump(top_at(1))
    tokens, guesses = _pair_nabla(p, q, 400)
    traj = nabla_decode(tokens)
    assert traj.mindchanges >= 2
    assert guesses[-1] is False
    assert guesses[0] is True


@settings(max_examples=60, deadline=None)
@given(
    st.booleans(),
    st.integers(0, 3),
    st.integers(0, 6),
    st.integers(0, 6),
    st.sampled_from([0, 1]),
    st.sampled_from([0, 1]),
)
def test_pair_to_nabla_mindchange_bound(p_true, row, lag_true, lag_false, noise_true, noise_false):
    true_lim = top_at(row)
    t = JumpFixture(true_lim, lag=lag_true, noise=noise_true)
    f = JumpFixture(BOTTOM, lag=lag_false, noise=noise_false)
    p, q = (t, f) if p_true else (f, t)
    tokens, guesses = _pair_nabla(p, q, 1200)
    assert guesses[-1] is p_true

    def rows(n, lag=lag_true, noise=noise_true):
        return (lag, noise, true_lim.at(n))

    r = oracles.least_true_rank(rows, rows, True, 8)
    r = r - (r & 1) + (0 if p_true else 1)
    c = r >> 1
    mc = nabla_decode(tokens).mindchanges
    assert mc <= r + 1
    assert mc <= 2 * c + 2


@given(eps(st.integers(1, 3), 5, 3).map(lambda e: EP((0,) + e.pre, e.per)))
def test_nabla_round_trip(b):
    truth = oracles.nabla_truth(b)
    assert nabla_fixture_value(b) == truth
    top, bot = nabla_to_jump_pair(b)
    tokens, guesses = _pair_nabla(top, bot, 600)
    assert guesses[-1] is truth


def test_nabla_logic_mindchanges_and_value():
    one_change_top = EP([0, 1, 0], [2])
    one_change_bot = EP([0, 2, 0], [1])
    for a, b in [(one_change_top, one_change_bot), (one_change_top, one_change_top)]:
        for which in ("and", "or"):
            out = NablaLogic(which).step(Interleave(a, b).prefix(200), 200)
            mc = oracles.nabla_resets(out)
            assert mc <= 2 + 2 + 1
            ta, tb = oracles.nabla_truth(a), oracles.nabla_truth(b)
            want = (ta and tb) if which == "and" else (ta or tb)
            assert oracles.nabla_truth(EP(out, (2 if want else 1,))) == want
            assert any(x != 0 for x in nabla_decode(out).candidate) == want


@given(eps(st.integers(1, 3), 4, 3).map(lambda e: EP((0,) + e.pre, e.per)),
       eps(st.integers(1, 3), 4, 3).map(lambda e: EP((0,) + e.pre, e.per)))
def test_nabla_logic_bound_property(a, b):
    for which in ("and", "or"):
        out = NablaLogic(which).step(Interleave(a, b).prefix(60), 60)
        ra = nabla_decode(a.prefix(30)).mindchanges
        rb = nabla_decode(b.prefix(30)).mindchanges
        assert nabla_decode(out).mindchanges <= ra + rb + 1


def test_nabla_not_and_lift():
    b = EP([0, 1, 1, 0], [2])
    out = NablaNot().step(b.prefix(50), 50)
    assert nabla_decode(out).candidate[-1] == 0  # token 1: bottom
    lifted = NablaLift(PRIMITIVES["succ"]()).step(EP([0, 1, 2], [3]).prefix(10), 10)
    assert nabla_decode(lifted).candidate == (1, 2, 3, 3, 3, 3, 3, 3, 3)


# --- product shuffles


def test_shuffle_round_trip():
    rng = random.Random(11)
    for seed in range(5):
        q = JumpFixture(tuple_rows(lambda j, s=seed: EP([j % 3], [s, j % 2])), lag=lambda n: n % 4, noise=2)
        fam = shuffle_jump_product(q, 1)
        back = unshuffle_jump_product(fam, 1)
        for _ in range(16):
            k = rng.randrange(2000)
            assert back.at(k) == q.at(k)


def test_shuffle_of_constant_family():
    ps = [EP([n], [n + 1, 0]) for n in range(4)]
    q = inject_into_jump(tuple_rows(ps))
    fam = shuffle_jump_product(q, 1)
    for n, p in enumerate(ps):
        target = inject_into_jump(p)
        assert fam(n).prefix(16) == target.prefix(16)


def test_shuffle_preserves_stabilization_bounds():
    q = JumpFixture(tuple_rows(lambda j: EP([], [1])), lag=lambda r: 5, noise=0)
    s = shuffle_jump_product(q, 1)(2)
    assert scan_row(s, 3, 128).bound == 5


# --- pointwise limits


def test_pwlim_identity_family():
    m = PointwiseLimit([Identity()])
    for p in [EP([], [0]), EP([1], [0]), EP([2, 3], [1, 0]), EP([], [1, 2, 3]), EP([5], [5])]:
        assert limit_rows(m.apply(p), 16) == list(p.prefix(16))


def test_pwlim_stabilizing_constants():
    c = [7, 3]
    m = PointwiseLimit(lambda j: const_list([j]) if j < 4 else const_list(c))
    assert limit_rows(m.apply(ZEROS), 6) == [7, 3, 0, 0, 0, 0]


def test_pwlim_nonconvergent_is_flagged():
    m = PointwiseLimit(lambda j: const_list([j % 2]))
    assert scan_row(m.apply(ZEROS), 0, 512).bound is None


# --- functoriality


PAIRS = [
    ("table(flip)", "table(headswap)"),
    ("id", "table(succ)"),
    ("interleave", "split(1)"),
    ("table(parity)", "table(flip)"),
    ("const(1,0,1)", "table(succ)"),
]


@pytest.mark.parametrize("f,g", PAIRS)
def test_functoriality_small(f, g):
    F, G = parse_machine(f), parse_machine(g)
    q = JumpFixture(EP([1], [0, 1]), lag=lambda n: n % 3 + 1, noise=2)
    whole = limit_rows(jump_lift(parse_machine("compose(%s,%s)" % (f, g))).apply(q), 8)
    staged = limit_rows(JumpLift(G).apply(JumpLift(F).apply(q)), 8)
    brute = list(parse_machine("compose(%s,%s)" % (f, g)).apply(q.limit).prefix(8))
    assert whole == staged == brute


@given(eps(st.integers(0, 3), 6, 3))
def test_nabla_to_jump_apply_matches_step(b):
    from synthdst.jumps import NablaToJump

    for negate in (False, True):
        m = NablaToJump(negate)
        out = m.step(b.prefix(60), 60)
        full = m.apply(b)
        assert tuple(full.at(k) for k in range(len(out))) == out
