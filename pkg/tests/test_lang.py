from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TUTORIAL
from finprob import lang
from finprob.conditional import MutualIndependence
from finprob.errors import (
    ArityError,
    ConditionOnNull,
    DuplicateName,
    InvalidWeight,
    ProbError,
    ProbSyntaxError,
    UnknownName,
)

SET_START = "expected one of '(', '{', '~', identifier"
QUERY_START = "expected one of 'P', 'indep', 'mutindep', 'partition', 'pme', 'sigma'"
AFTER_OPERAND = "expected one of '&', ')', '|'"
AFTER_ARG = "expected one of '&', ')', ',', '|'"

# (input, position, message) for malformed queries.
GOLDEN = [
    ("", (1, 1), f"{QUERY_START} but found end of input"),
    ("P", (1, 2), "expected '(' but found end of input"),
    ("P(", (1, 3), f"{SET_START} but found end of input"),
    ("P()", (1, 3), f"{SET_START} but found ')'"),
    ("P(A", (1, 4), f"{AFTER_OPERAND} but found end of input"),
    ("P(A |)", (1, 6), f"{SET_START} but found ')'"),
    ("P(A | B", (1, 8), f"{AFTER_OPERAND} but found end of input"),
    ("P(A) extra", (1, 6), "expected end of input but found identifier 'extra'"),
    ("Q(A)", (1, 1), f"{QUERY_START} but found identifier 'Q'"),
    ("P(A || B)", (1, 6), f"{SET_START} but found '|'"),
    ("P(A & )", (1, 7), f"{SET_START} but found ')'"),
    ("P({)", (1, 4), "expected one of '}', identifier but found ')'"),
    ("P({o1,})", (1, 7), "expected identifier but found '}'"),
    ("P({o1 o2})", (1, 7), "expected one of ',', '}' but found identifier 'o2'"),
    ("indep()", (1, 7), f"{SET_START} but found ')'"),
    ("indep(A,)", (1, 9), f"{SET_START} but found ')'"),
    ("indep(A B)", (1, 9), f"{AFTER_ARG} but found identifier 'B'"),
    ("P(~)", (1, 4), f"{SET_START} but found ')'"),
    ("P(A) )", (1, 6), "expected end of input but found ')'"),
    ("P(A $ B)", (1, 5), "unexpected character '$'"),
    ("P((A)", (1, 6), f"{AFTER_OPERAND} but found end of input"),
    ("P(A | B))", (1, 9), "expected end of input but found ')'"),
    ("mutindep(A, B,, C)", (1, 15), f"{SET_START} but found ','"),
    ("P(A\n|)", (2, 2), f"{SET_START} but found ')'"),
    ("P(A | ~~)", (1, 9), f"{SET_START} but found ')'"),
    ("sigma(A, {o1}", (1, 14), f"{AFTER_ARG} but found end of input"),
    ("P(A|B|C &)", (1, 10), f"{SET_START} but found ')'"),
    ("pme", (1, 4), "expected '(' but found end of input"),
    ("P(1)", (1, 3), f"{SET_START} but found integer 1"),
    ("P(A)\n\n  ?", (3, 3), "unexpected character '?'"),
    ("P(" + "(" * 201 + "A" + ")" * 201 + ")", (1, 203), "parentheses nested deeper than 200"),
]


@pytest.mark.parametrize("text, pos, message", GOLDEN, ids=[repr(g[0])[:24] for g in GOLDEN])
def test_golden_errors(text, pos, message):
    with pytest.raises(ProbSyntaxError) as info:
        lang.parse_query(text)
    assert info.value.pos == pos
    assert info.value.message == message
    assert str(info.value) == f"{pos[0]}:{pos[1]}: {message}"


def test_ast_shapes():
    q = lang.parse_query("P(A | B & C)")
    assert q == lang.CondProb(lang.Ref("A"), lang.Intersection(lang.Ref("B"), lang.Ref("C")))
    q = lang.parse_query("mutindep(A, B, C)")
    assert isinstance(q, lang.Predicate) and len(q.args) == 3
    # Inside P(...) the first top-level bar conditions; a parenthesised bar is a union.
    q = lang.parse_query("P((A | B))")
    assert q == lang.Prob(lang.Union(lang.Ref("A"), lang.Ref("B")))
    q = lang.parse_query("P(A | B | C)")
    assert q == lang.CondProb(lang.Ref("A"), lang.Union(lang.Ref("B"), lang.Ref("C")))
    assert lang.parse_query("P({o1, o2})") == lang.Prob(lang.SetLiteral(("o1", "o2")))


def test_precedence_and_format():
    e = lang.parse_set_expr("~A | B & C")
    assert e == lang.Union(lang.Complement(lang.Ref("A")),
                           lang.Intersection(lang.Ref("B"), lang.Ref("C")))
    assert lang.format_set_expr(lang.parse_set_expr("(A | B) & ~(C & D)")) == "(A | B) & ~(C & D)"
    assert lang.format_query(lang.parse_query("P((A|B)|C)")) == "P((A | B) | C)"
    assert lang.format_query(lang.parse_query("P(A|B|C)")) == "P(A | B | C)"


def test_deep_nesting_is_total():
    deep_tilde = "P(" + "~" * 100_000 + "A)"
    q = lang.parse_query(deep_tilde)
    assert isinstance(q, lang.Prob)
    with pytest.raises(ProbSyntaxError):
        lang.parse_query("P(" + "(" * 100_000 + "A" + ")" * 100_000 + ")")


NAMES = st.sampled_from(["A", "B", "C", "Odd", "x_1"])
OUTCOMES = st.lists(st.sampled_from(["o1", "o2", "o3", "t"]), max_size=3).map(tuple)


def set_exprs():
    leaves = st.one_of(NAMES.map(lang.Ref), OUTCOMES.map(lang.SetLiteral))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(lang.Complement),
            st.tuples(kids, kids).map(lambda t: lang.Union(*t)),
            st.tuples(kids, kids).map(lambda t: lang.Intersection(*t)),
        ),
        max_leaves=12,
    )


queries = st.one_of(
    set_exprs().map(lang.Prob),
    st.tuples(set_exprs(), set_exprs()).map(lambda t: lang.CondProb(*t)),
    st.tuples(st.sampled_from(lang.PREDICATES), st.lists(set_exprs(), min_size=1, max_size=4))
    .map(lambda t: lang.Predicate(t[0], tuple(t[1]))),
)


@settings(max_examples=1000)
@given(queries)
def test_round_trip(q):
    text = lang.format_query(q)
    again = lang.parse_query(text)
    assert again == q
    assert lang.format_query(again) == text


@given(st.text(alphabet="PA(){}|&~,o1 \n$", max_size=30))
def test_parser_total(text):
    try:
        lang.parse_query(text)
    except ProbSyntaxError as err:
        line, col = err.pos
        assert line >= 1 and col >= 1


@pytest.fixture(scope="module")
def die_file():
    return lang.parse_space_file((TUTORIAL / "die.prob").read_text())


def test_space_file(die_file):
    sf = die_file
    assert sf.name == "die"
    assert sf.events["A"].bits == "010101"
    assert sf.events["Odd"] == ~sf.events["A"]
    assert [str(b) for b in sf.partitions["Thirds"]] == ["{o1,o2}", "{o3,o4}", "{o5,o6}"]


def test_minimal_space_file():
    text = ("space die { o1:1/6,o2:1/6,o3:1/6,o4:1/6,o5:1/6,o6:1/6 }"
            " event A = {o2,o4,o6} event B = ~A")
    sf = lang.parse_space_file(text)
    assert list(sf.events) == ["A", "B"]
    assert sf.events["A"].bits == "010101"
    assert sf.events["B"].bits == "101010"


def test_space_file_errors():
    with pytest.raises(InvalidWeight) as info:
        lang.parse_space_file("space s { a:1/2, b:1/3 }")
    assert not info.value.report.normalized_ok
    assert "weights sum to 5/6" in info.value.message
    assert info.value.pos == (1, 1)
    with pytest.raises(InvalidWeight):
        lang.parse_space_file("space s { a:1/0 }")
    with pytest.raises(DuplicateName):
        lang.parse_space_file("space s { a:1/2, a:1/2 }")
    with pytest.raises(DuplicateName):
        lang.parse_space_file("space s { a:1 } event E = {a} partition E = [E]")
    with pytest.raises(UnknownName) as info:
        lang.parse_space_file("space s { a:1 }\nevent E = {b}")
    assert info.value.pos == (2, 11)
    with pytest.raises(UnknownName):
        lang.parse_space_file("space s { a:1 } event E = F")
    with pytest.raises(UnknownName):
        lang.parse_space_file("space s { a:1 } event E = {a} partition P = [E] event F = P")
    with pytest.raises(ProbSyntaxError):
        lang.parse_space_file("space s { a 1 }")


@pytest.mark.parametrize(
    "query, value",
    [("P(A)", F(1, 2)), ("P(A|B)", F(1, 3)), ("P({o2} | A)", F(1, 3)),
     ("P(A | Odd)", F(0)), ("P(~A & B)", F(1, 3)), ("P(Low | Low | Mid)", F(1, 2))],
)
def test_eval_rationals(die_file, query, value):
    assert lang.run_query(die_file, query) == value


@pytest.mark.parametrize(
    "query, value",
    [("indep(A, {o1,o2,o3})", False), ("pme(Thirds)", True), ("partition(Thirds)", True),
     ("partition(Low, Mid)", False), ("pme(A, Odd)", True), ("indep(A, Low | Mid | High)", True)],
)
def test_eval_predicates(die_file, query, value):
    assert bool(lang.run_query(die_file, query)) is value


def test_eval_mutindep_and_sigma(die_file):
    r = lang.run_query(die_file, "mutindep(Thirds, A)")
    assert isinstance(r, MutualIndependence) and r.violating == (0, 1)
    q = lang.parse_query("mutindep(Thirds, A)")
    assert lang.family_labels(die_file, q.args) == ["Thirds[1]", "Thirds[2]", "Thirds[3]", "A"]
    assert lang.run_query(die_file, "sigma({}, Low | Mid | High, A, Odd)")
    assert not lang.run_query(die_file, "sigma({}, Low | Mid | High, A)")


def test_eval_errors_carry_positions(die_file):
    with pytest.raises(ConditionOnNull) as info:
        lang.run_query(die_file, "P(A | A & ~A)")
    assert info.value.pos == (1, 9)
    with pytest.raises(UnknownName) as info:
        lang.run_query(die_file, "P(A | Nope)")
    assert info.value.pos == (1, 7)
    with pytest.raises(ArityError):
        lang.run_query(die_file, "indep(A)")
    with pytest.raises(ArityError):
        lang.run_query(die_file, "mutindep(A)")
    with pytest.raises(UnknownName):
        lang.run_query(die_file, "P(Thirds)")


def test_all_errors_are_prob_errors(die_file):
    for text in ["P(", "P(Z)", "indep(A)"]:
        with pytest.raises(ProbError):
            lang.run_query(die_file, text)
