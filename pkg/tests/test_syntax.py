import pytest
from hypothesis import given, strategies as st

from topopal.syntax import (BOT, TOP, And, Announce, ComplexityUndefined, Effort, Fragment, Int, Know,
                            Not, ParseError, Prop, complexity, depth, fragment, has_announcement, implies,
                            parse, props_of, render, substitute, subformulas, tokenize)
from strategies import formulas

p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_parse_examples():
    assert parse("[j]K d") == Announce(Prop("j"), Know(Prop("d")))
    assert parse("p -> q") == Not(And(p, Not(q)))
    assert parse("K p & int(q)") == And(Know(p), Int(q))


def test_render_examples():
    assert render(Announce(p, q)) == "[p]q"
    assert render(Not(And(p, Not(q)))) == "~(p & ~q)"
    assert render(Int(Know(p))) == "int(K p)"
    assert render(Not(And(p, Not(q))), sugar=True) == "p -> q"


def test_complexity_examples():
    assert complexity(p) == 1
    assert complexity(parse("p -> q")) == 5
    assert complexity(Announce(p, q)) == 7
    assert complexity(TOP) == complexity(BOT) == 1


def test_complexity_of_effort_is_undefined():
    with pytest.raises(ComplexityUndefined):
        complexity(Effort(p))
    with pytest.raises(ComplexityUndefined):
        complexity(And(p, Effort(q)))


def test_fragments():
    assert fragment(Know(p)) is Fragment.EL
    assert fragment(Int(p)) is Fragment.EL_INT
    assert fragment(Announce(p, q)) is Fragment.PAL
    assert fragment(Effort(Know(p))) is Fragment.PAL_EFFORT
    assert fragment(Announce(Int(p), Effort(q))) is Fragment.PAL_EFFORT


@pytest.mark.parametrize("text, expected", [
    ("p | q", Not(And(Not(p), Not(q)))),
    ("p -> q -> r", implies(p, implies(q, r))),
    ("p & q | r", Not(And(Not(And(p, q)), Not(r)))),
    ("~K p", Not(Know(p))),
    ("K ~p", Know(Not(p))),
    ("[p]q & r", And(Announce(p, q), r)),
    ("[p](q & r)", Announce(p, And(q, r))),
    ("<p>q", Not(Announce(p, Not(q)))),
    ("<>K p", Effort(Know(p))),
    ("[]p", Not(Effort(Not(p)))),
    ("true & false", And(TOP, BOT)),
    ("¬p ∧ ◇q", And(Not(p), Effort(q))),
    ("p → q", implies(p, q)),
    ("!p", Not(p)),
])
def test_derived_connectives_and_precedence(text, expected):
    assert parse(text) == expected


def test_iff_is_left_associative():
    a = parse("p <-> q <-> r")
    b = parse("(p <-> q) <-> r")
    assert a == b


@pytest.mark.parametrize("text", ["", "p &", "(p", "K", "int p", "[p q", "p q", "K(p", "#", "int(p"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("p & & q")
    assert info.value.position == 4


@pytest.mark.parametrize("name", ["K", "int", "true", "false"])
def test_reserved_words_are_not_props(name):
    with pytest.raises(ValueError):
        Prop(name)


def test_tokenize_longest_match():
    kinds = [t.kind for t in tokenize("p <-> q -> <>r")]
    assert kinds[:5] == ["IDENT", "IFF", "IDENT", "IMP", "DIAMOND"]


@given(formulas(effort=True))
def test_parse_render_round_trip(f):
    assert parse(render(f)) == f
    assert parse(render(f, sugar=True)) == f


@given(formulas())
def test_render_is_canonical(f):
    s = render(f)
    assert render(parse(s)) == s


@given(formulas())
def test_complexity_positive_and_monotone(f):
    c = complexity(f)
    assert c >= 1
    for child in f.children:
        assert complexity(child) < c


@given(formulas(), formulas())
def test_complexity_strictly_monotone_in_each_argument(a, b):
    bigger = And(a, a)
    for ctx in (Not, Know, Int, lambda x: And(x, b), lambda x: And(b, x),
                lambda x: Announce(x, b), lambda x: Announce(b, x)):
        assert complexity(ctx(a)) < complexity(ctx(bigger))


@given(formulas())
def test_fragment_matches_constructors(f):
    kinds = {type(g).__name__ for g in subformulas(f)}
    if "Announce" in kinds:
        assert fragment(f) is Fragment.PAL
    elif "Int" in kinds:
        assert fragment(f) is Fragment.EL_INT
    else:
        assert fragment(f) is Fragment.EL
    assert has_announcement(f) == ("Announce" in kinds)


@given(formulas())
def test_equal_trees_hash_equal(f):
    g = parse(render(f))
    assert g == f and hash(g) == hash(f)
    assert depth(g) == depth(f)


def test_substitute_and_props():
    f = parse("[A]K B")
    g = substitute(f, {"A": parse("p & q"), "B": r})
    assert g == parse("[p & q]K r")
    assert props_of(g) == {"p", "q", "r"}


@given(st.lists(st.sampled_from(["p", "q"]), min_size=1, max_size=5))
def test_conjunction_chain_complexity(names):
    f = Prop(names[0])
    for n in names[1:]:
        f = And(f, Prop(n))
    # atoms cost 1 each, every & adds 1
    assert complexity(f) == 2 * len(names) - 1
