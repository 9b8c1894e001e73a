import pytest

import oracles
from synthdst.dsl import parse_machine
from synthdst.jumps import (
    JumpFixture,
    inject_into_jump,
    jump_lift,
    level_entry,
    nabla_decode,
    nabla_encode,
    shuffle_jump_product,
)
from synthdst.kernel import EP, Compose, Const, Identity, inject_machine, tuple_rows
from synthdst.measurable import (
    MeasurableFunction,
    compose_het,
    compose_levels,
    continuous_to_measurable,
    d_lift,
    kappa,
    kappa_inverse_open_nat,
    membership_open,
)
from synthdst.scan import scan
from synthdst.setops import NABLA, DOpenSet, UnsupportedLevel, cylinder, level_up, preimage
from synthdst.spaces import BOTTOM, CANTOR, SIERPINSKI, SpaceMismatch, top_at

PANEL = [
    EP([], [0]), EP([], [1]), EP([1], [0]), EP([0], [1]), EP([], [0, 1]),
    EP([], [1, 0]), EP([0, 0, 1], [0]), EP([1, 1, 0], [1]), EP([0, 1, 1], [0, 0, 1]), EP([1, 0], [0, 1]),
]


def jump_truth(q, rows=6, max_column=512):
    rep = scan(q, rows, max_column)
    assert rep.denotation is not None
    return rep.denotation


def level2_truth(q, rows=3, inner=6, outer=120):
    """Level-2 names of S built from injected fixtures settle within small
    columns; read them at fixed late columns."""
    return any(level_entry(q, n, inner, outer) for n in range(rows))


def test_levels_compose():
    assert compose_levels(1, 2) == 3
    assert compose_levels(0, NABLA) == NABLA
    assert compose_levels(NABLA, 0) == NABLA
    with pytest.raises(UnsupportedLevel):
        compose_levels(NABLA, 1)
    with pytest.raises(UnsupportedLevel):
        compose_levels(1, NABLA)
    with pytest.raises(UnsupportedLevel):
        d_lift(-1, Identity())


def test_continuous_to_measurable_inject():
    f = continuous_to_measurable(inject_machine(), CANTOR, CANTOR, 1)
    U = cylinder("1")
    pre = f.preimage(U)
    assert pre.level == 1
    up = level_up(U)
    for x in PANEL:
        assert jump_truth(pre.machine.apply(x)) == jump_truth(up.machine.apply(x)) == (x.at(0) == 1)


def test_continuous_to_measurable_const_top():
    f = continuous_to_measurable(Const(inject_into_jump(top_at(0))), CANTOR, SIERPINSKI, 1)
    top = DOpenSet(SIERPINSKI, 0, Identity())
    pre = f.preimage(top)
    for x in PANEL:
        assert jump_truth(pre.machine.apply(x)) is True


def test_continuous_to_measurable_nabla_indicator():
    # x -> nabla name revising "x has a 1 among its first t+1 entries" for t < 4
    def nabla_of(x):
        stages = [[1] if any(x.prefix(t + 1)) else [0] for t in range(4)]
        return EP(nabla_encode(stages), [stages[-1][0] + 1])

    f = continuous_to_measurable(Identity(), SIERPINSKI, SIERPINSKI, NABLA)
    top = DOpenSet(SIERPINSKI, 0, Identity())
    pre = f.preimage(top)
    assert pre.level == NABLA
    for x in PANEL:
        name = nabla_of(x)
        traj = nabla_decode(pre.machine.step(name.prefix(60), 60))
        assert traj.mindchanges <= nabla_decode(name.prefix(60)).mindchanges + 1
        assert bool(traj.candidate and traj.candidate[0]) == any(x.prefix(4))


def test_measurable_is_injective_on_panel():
    texts = ["id", "table(flip)", "table(headswap)", "const(1)", "const(0)", "compose(table(flip),table(headswap))",
             "const(0,1)", "const(1,1)", "split(0)", "compose(split(1),id)"]
    fs = [continuous_to_measurable(Compose(parse_machine(t), inject_machine()), CANTOR, CANTOR, 1) for t in texts]
    opens = [cylinder(w) for w in ["0", "1", "00", "01", "10", "11"]]
    inputs = PANEL + [EP([1, 0], [0]), EP([0, 1], [1])]

    def signature(f):
        return tuple(jump_truth(f.preimage(U).machine.apply(x), 4, 256) for U in opens for x in inputs)

    sigs = [signature(f) for f in fs]
    assert len(set(sigs)) == len(sigs)


def test_preimage_checks():
    f = continuous_to_measurable(inject_machine(), CANTOR, CANTOR, 1)
    with pytest.raises(SpaceMismatch):
        f.preimage(DOpenSet(SIERPINSKI, 0, Identity()))
    with pytest.raises(UnsupportedLevel):
        f.preimage(level_up(cylinder("1")))
    assert jump_truth(f.preimage_of("cyl 0").machine.apply(EP([], [0])))


# --- heterogeneous composition


def test_compose_het_identity_outer():
    g = continuous_to_measurable(inject_machine(), CANTOR, CANTOR, 1)
    h = parse_machine("table(headswap)")
    comp = compose_het(h, 0, g, CANTOR)
    assert comp.level == 1
    U = cylinder("0")
    direct = preimage(h, g.preimage(U), CANTOR)
    for x in PANEL:
        assert jump_truth(comp.preimage(U).machine.apply(x)) == jump_truth(direct.machine.apply(x))


def test_compose_het_jump_jump():
    g = continuous_to_measurable(Compose(parse_machine("table(flip)"), inject_machine()), CANTOR, CANTOR, 1)
    f = Compose(parse_machine("table(headswap)"), inject_machine())
    comp = compose_het(f, 1, g, CANTOR)
    assert comp.level == 2
    pre = comp.preimage(cylinder("1"))
    for x in PANEL:
        # brute force: flip(headswap(x)) starts with 1
        hx = [1 - x.at(0)] + [x.at(t) for t in range(1, 4)]
        expect = (1 - hx[0]) == 1
        assert level2_truth(pre.machine.apply(x)) == expect


def test_compose_het_continuous_inner():
    g = continuous_to_measurable(parse_machine("table(flip)"), CANTOR, CANTOR, 0)
    f = inject_machine()
    comp = compose_het(f, 1, g, CANTOR)
    assert comp.level == 1
    lifted = continuous_to_measurable(Compose(parse_machine("table(flip)"), inject_machine()), CANTOR, CANTOR, 1)
    for w in ["0", "10"]:
        U = cylinder(w)
        for x in PANEL:
            a = jump_truth(comp.preimage(U).machine.apply(x), 3, 128)
            assert a == jump_truth(lifted.preimage(U).machine.apply(x), 3, 128)


def test_compose_het_unsupported():
    g = continuous_to_measurable(Identity(), SIERPINSKI, SIERPINSKI, NABLA)
    with pytest.raises(UnsupportedLevel):
        compose_het(inject_machine(), 1, g, SIERPINSKI)


def test_compose_het_associative():
    a = parse_machine("table(headswap)")
    b = inject_machine()
    c = continuous_to_measurable(Compose(parse_machine("table(flip)"), inject_machine()), CANTOR, CANTOR, 1)
    left = compose_het(a, 0, compose_het(b, 1, c, CANTOR), CANTOR)
    right = compose_het(Compose(a, b), 1, c, CANTOR)
    assert left.level == right.level == 2
    U = cylinder("0")
    for x in PANEL[:6]:
        assert level2_truth(left.preimage(U).machine.apply(x)) == level2_truth(right.preimage(U).machine.apply(x))


# --- kappa


def test_kappa_sierpinski_top():
    y = inject_into_jump(top_at(0))
    assert jump_truth(kappa(y, 1)(DOpenSet(SIERPINSKI, 0, Identity()))) is True
    assert jump_truth(kappa(inject_into_jump(BOTTOM), 1)(DOpenSet(SIERPINSKI, 0, Identity()))) is False


def test_kappa_on_cylinders():
    for p in PANEL:
        y = inject_into_jump(p)
        for w in ["0", "1", "01", "110", "000"]:
            assert jump_truth(kappa(y, 1)(cylinder(w)), len(w) + 2) == oracles.starts_with(p, w)


def test_kappa_is_natural():
    F = parse_machine("table(headswap)")
    for p in PANEL[:6]:
        y = JumpFixture(p, 3, 1)  # three noisy columns per row
        dFy = jump_lift(F).apply(y)
        for w in ["0", "10"]:
            U = cylinder(w)
            lhs = kappa(dFy, 1)(U)
            rhs = kappa(y, 1)(preimage(F, U, CANTOR))
            assert jump_truth(lhs, 3, 128) == jump_truth(rhs, 3, 128)


# --- kappa inverse on O(N)


def open_nat(members, lag=0):
    rows = tuple_rows(lambda n: top_at(0) if n in members else BOTTOM)
    return JumpFixture(rows, lag, 1)


def member_truth(name, n):
    return jump_truth(shuffle_jump_product(name, 1)(n), 4, 256)


def test_kappa_inverse_recovers_two_five():
    y = open_nat({2, 5})
    back = kappa_inverse_open_nat(kappa(y, 1), 1)
    assert [member_truth(back, n) for n in range(8)] == [n in (2, 5) for n in range(8)]


def test_kappa_inverse_empty_and_full():
    empty = kappa_inverse_open_nat(kappa(open_nat(set()), 1), 1)
    for n in range(8):
        assert scan(shuffle_jump_product(empty, 1)(n), 4, 128).denotation is False
    full = kappa_inverse_open_nat(kappa(open_nat(set(range(100))), 1), 1)
    for n in range(8):
        assert member_truth(full, n)


def test_kappa_round_trips():
    for members, lag in [({0}, 2), ({1, 3}, 0), ({7}, 5), (set(), 3)]:
        y = open_nat(members, lag)
        phi = kappa(y, 1)
        back = kappa_inverse_open_nat(phi, 1)
        for n in range(8):
            W = membership_open(n)
            assert jump_truth(kappa(back, 1)(W), 4, 256) == jump_truth(phi(W), 4, 256) == (n in members)


def test_kappa_inverse_levels():
    with pytest.raises(UnsupportedLevel):
        kappa_inverse_open_nat(lambda W: BOTTOM, NABLA)
    with pytest.raises(UnsupportedLevel):
        kappa_inverse_open_nat(lambda W: BOTTOM, 0)


def test_measurable_repr():
    f = MeasurableFunction(CANTOR, CANTOR, 1, lambda U: U.machine)
    assert "jump" in repr(f) or "1" in repr(f)
