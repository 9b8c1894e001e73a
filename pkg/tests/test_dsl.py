import pytest

from synthdst.borel import CantorNeq
from synthdst.dsl import ParseError, parse_jump_point, parse_machine, parse_point, parse_set, parse_words
from synthdst.jumps import JumpFixture
from synthdst.kernel import EP
from synthdst.setops import cylinder
from synthdst.spaces import CANTOR, ObservedTop, encode_nat, observe_name, product, top_at


def test_points():
    assert parse_point("ep [0;1]") == EP([0], [1])
    assert parse_point("ep [ ; 1, 0 ]") == EP([], [1, 0])
    assert parse_point("nat(3)") == encode_nat(3)
    assert parse_point("top(2)") == top_at(2)
    assert parse_point("bot").prefix(5) == (0,) * 5


def test_jump_points():
    q = parse_jump_point("lag(top(0),3,1)")
    assert isinstance(q, JumpFixture)
    assert q.lag(0) == 3
    assert parse_jump_point("inj(bot)").prefix(10) == (0,) * 10
    # neg(top(k)): row 0 is 1 on columns before k, then 0
    neg = parse_jump_point("neg(top(2))")
    assert [neg.at(k) for k in (0, 2, 5)] == [1, 1, 0]


def test_sets():
    U = parse_set("or(cyl 0, cyl 1)")
    assert U.level == 0
    assert isinstance(observe_name(U.machine.apply(EP([], [1])), 8), ObservedTop)
    V = parse_set("up(pre(id, cyl 1))")
    assert V.level == 1
    assert parse_set("upc(cyl 1)").level == 1
    assert parse_set("evzero").level == 1
    assert parse_set("cup(cyl 1, cyl 01, cyl 001)").level == 0
    assert parse_set("neq").space == product(CANTOR, CANTOR)
    assert isinstance(parse_set("neq").machine, CantorNeq)
    assert parse_set("cyl e").machine.descriptor == cylinder("").machine.descriptor
    assert parse_set("empty").level == 0 and parse_set("empty1").level == 1


def test_machines_round_trip_descriptors():
    for text in ["id", "table(flip)", "compose(table(flip),table(succ))", "pair(id,const(1,0))",
                 "delay(2,id)", "jumplift(table(or))", "cyl(01)", "row(3)", "split(1)"]:
        m = parse_machine(text)
        assert parse_machine(m.descriptor).descriptor == m.descriptor


def test_words():
    assert parse_words("words: 0, _, 11, e") == ["0", None, "11", ""]


@pytest.mark.parametrize("text, column", [
    ("ep [0;", 7),
    ("ep [0 1]", 7),
    ("nat(x)", 5),
    ("ep [0;1] junk", 10),
])
def test_point_errors_carry_position(text, column):
    with pytest.raises(ParseError) as e:
        parse_point(text)
    assert e.value.pos + 1 == column
    assert str(e.value).endswith("at column %d" % column)


def test_set_and_machine_errors():
    with pytest.raises(ParseError) as e:
        parse_set("or(cyl")
    assert "column 7" in str(e.value)
    with pytest.raises(ParseError):
        parse_set("and(cyl 1 cyl 0)")
    with pytest.raises(ParseError):
        parse_machine("table(nosuch)")
    with pytest.raises(ParseError):
        parse_machine("compose(id)")
    with pytest.raises(ParseError):
        parse_words("0, 1")
    with pytest.raises(ParseError):
        parse_set("cyl 2")


def test_nabla_tables_parse():
    for name in ("nablaand", "nablaor", "nablanot", "pairnabla"):
        assert parse_machine("table(%s)" % name).step((0, 1, 2), 3) is not None
