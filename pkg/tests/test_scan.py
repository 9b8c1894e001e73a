from hypothesis import given, settings
from hypothesis import strategies as st

from synthdst.jumps import JumpFixture, inject_into_jump
from synthdst.kernel import EP
from synthdst.scan import SLACK, limit_prefix, scan, scan_row
from synthdst.spaces import BOTTOM, top_at


def test_constant_rows():
    rep = scan(inject_into_jump(BOTTOM), 3, 256)
    assert rep.denotation is False
    assert all(r.bound == 0 and r.window == 257 for r in rep.rows)
    assert scan(inject_into_jump(top_at(1)), 3, 256).denotation is True


def test_unknown_when_too_short():
    q = JumpFixture(EP([], [0]), 200, lambda n, i: i % 2)
    rep = scan(q, 1, 128)
    assert rep.rows[0].bound is None
    assert rep.denotation is None


def test_constant_noise_fools_a_short_scan():
    # the reason reports are labeled heuristic
    q = JumpFixture(EP([], [0]), 200, 1)
    assert scan(q, 1, 128).denotation is True
    assert scan(q, 1, 1024).denotation is False


@settings(max_examples=50)
@given(st.integers(0, 100), st.integers(0, 1), st.integers(0, 1))
def test_exact_lag_is_found(lag, value, noise):
    # with noise != value the last change sits exactly at the lag
    q = JumpFixture(EP([], [value]), lag, noise)
    r = scan_row(q, 0, 2 * lag + SLACK + 200)
    assert r.value == value
    if noise != value:
        assert r.bound == lag
    else:
        assert r.bound == 0


def test_report_dict_and_limits():
    q = JumpFixture(EP([1, 0], [1]), 3, 0)
    d = scan(q, 2, 128).to_dict()
    assert d["heuristic"] is True and d["max_column"] == 128
    assert limit_prefix(q, 4, 128) == [1, 0, 1, 1]
