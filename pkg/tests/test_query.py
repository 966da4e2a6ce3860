import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screenseek.colors import WEB_COLORS
from screenseek.errors import (AmbiguousOperators, DanglingOperator, EmptyQuery,
                               InvalidColorValue, InvalidPrefix,
                               UnbalancedParens)
from screenseek.model import And, Atom, Or, canonical_query_string, make_and, make_or
from screenseek.querylang import (TEXT_OR_APP, TypedToken, Vocabulary,
                                  classify_tokens, parse, preprocess, suggest,
                                  tokenize)

VOCAB = Vocabulary(
    color_names=frozenset(WEB_COLORS),
    ui_types=frozenset({"edittext", "button", "checkbox", "textview",
                        "progressbar"}),
    app_names=frozenset({"pizza", "chat", "bank", "go"}),
)


# --- preprocessing ---

def test_preprocess_collapses_spaces():
    assert preprocess("  red   edittext  pizza ") == "red edittext pizza"


def test_preprocess_pads_parens_and_lowercases():
    assert preprocess("(A AND B)") == "( a and b )"


def test_preprocess_empty():
    assert preprocess("") == ""


def test_preprocess_protects_quotes():
    assert preprocess('text:"Order  NOW" red') == 'text:"order now" red'
    # a dangling quote is closed rather than swallowing the rest
    assert preprocess('text:"order').startswith('text:"order')


def test_tokenize_keeps_quoted_segments():
    assert [t for t, _ in tokenize('text:"order now" red')] == \
        ['text:"order now"', "red"]
    offsets = [o for _, o in tokenize("a and b")]
    assert offsets == [0, 2, 6]


# --- classification ---

def test_classify_flagship_tokens():
    tokens = classify_tokens(["red", "edittext", "pizza"], VOCAB)
    assert [(t.category, t.value) for t in tokens] == [
        ("color", "red"), ("ui", "edittext"), (TEXT_OR_APP, "pizza")]


def test_classify_explicit_prefix_overrides():
    tokens = classify_tokens(["text:red"], VOCAB)
    assert [(t.category, t.value) for t in tokens] == [("text", "red")]


def test_classify_unknown_prefix():
    with pytest.raises(InvalidPrefix):
        classify_tokens(["shape:foo"], VOCAB)
    with pytest.raises(InvalidPrefix):
        classify_tokens(["text:"], VOCAB)


def test_classify_invalid_color_value():
    with pytest.raises(InvalidColorValue):
        classify_tokens(["color:notacolor"], VOCAB)


def test_classify_hex_tokens_are_colors():
    tokens = classify_tokens(["#ff0000", "a1b2c3"], VOCAB)
    assert [(t.category, t.value) for t in tokens] == [
        ("color", "ff0000"), ("color", "a1b2c3")]


def test_classify_operators_and_parens():
    tokens = classify_tokens(["(", "a", "and", "b", ")", "or"], VOCAB)
    assert [t.category for t in tokens] == [
        "lparen", TEXT_OR_APP, "operator_and", TEXT_OR_APP, "rparen",
        "operator_or"]
    assert all(t.value == "" for t in tokens if t.category != TEXT_OR_APP)


def test_classify_every_bare_token_gets_exactly_one_category():
    for token in ["red", "edittext", "pizza", "deeded", "00ff00", "zzz"]:
        out = classify_tokens([token], VOCAB)
        assert len(out) == 1
        assert out[0].category in {"color", "ui", TEXT_OR_APP}


def test_classify_color_beats_ui():
    vocab = Vocabulary(color_names=frozenset({"orange"}),
                       ui_types=frozenset({"orange"}),
                       app_names=frozenset())
    out = classify_tokens(["orange"], vocab)
    assert out[0].category == "color"


# --- parsing ---

def test_parse_flagship_query():
    ast = parse("red edittext pizza", VOCAB)
    assert canonical_query_string(ast) == \
        "color:red AND ui:edittext AND (text:pizza OR appname:pizza)"
    assert ast == And((
        Atom("color", "red"),
        Atom("ui", "edittext"),
        Or((Atom("text", "pizza"), Atom("appname", "pizza"))),
    ))


def test_parse_rejects_mixed_operators():
    with pytest.raises(AmbiguousOperators) as exc:
        parse("a and b or c", VOCAB)
    assert exc.value.offset is not None


def test_parse_parenthesized_variants_accepted():
    left = parse("(a and b) or c", VOCAB)
    right = parse("a and (b or c)", VOCAB)
    assert isinstance(left, Or)
    assert isinstance(right, And)


def test_parse_explicit_grouping():
    ast = parse("(ui:button or ui:checkbox) and appname:bank", VOCAB)
    assert ast == And((
        Or((Atom("ui", "button"), Atom("ui", "checkbox"))),
        Atom("appname", "bank"),
    ))


def test_parse_implicit_and_equals_explicit():
    assert parse("pizza chat", VOCAB) == parse("pizza and chat", VOCAB)
    assert parse("ui:button text:go", VOCAB) == parse("ui:button and text:go", VOCAB)


def test_parse_single_bare_token_expands():
    ast = parse("pizza", VOCAB)
    assert ast == Or((Atom("text", "pizza"), Atom("appname", "pizza")))


def test_parse_empty_query():
    with pytest.raises(EmptyQuery):
        parse("", VOCAB)
    with pytest.raises(EmptyQuery):
        parse("   ", VOCAB)
    with pytest.raises(EmptyQuery):
        parse("()", VOCAB)


def test_parse_unbalanced_parens():
    with pytest.raises(UnbalancedParens):
        parse("(a and b", VOCAB)
    with pytest.raises(UnbalancedParens):
        parse("a and b)", VOCAB)


def test_parse_dangling_operators():
    with pytest.raises(DanglingOperator):
        parse("and a", VOCAB)
    with pytest.raises(DanglingOperator):
        parse("a or", VOCAB)
    with pytest.raises(DanglingOperator):
        parse("(a and)", VOCAB)


def test_parse_quoted_multiword_value():
    ast = parse('text:"order now"', VOCAB)
    assert ast == Atom("text", "order now")


def test_parse_nested_groups_flatten_same_operator():
    assert parse("(a and b) and c", VOCAB) == parse("a b c", VOCAB)


def test_parse_error_offsets_point_into_preprocessed_query():
    pre = preprocess("a and b or c")
    with pytest.raises(AmbiguousOperators) as exc:
        parse("a and b or c", VOCAB)
    assert pre[exc.value.offset:exc.value.offset + 2] == "or"


# --- round-trip property ---

_value_words = ["pizza", "chat", "order", "bank", "go", "now", "settings"]
_atom_st = st.one_of(
    st.builds(Atom, st.just("color"),
              st.sampled_from(sorted(WEB_COLORS)[:40] + ["ff8800", "0a0b0c"])),
    st.builds(Atom, st.just("ui"), st.sampled_from(sorted(VOCAB.ui_types))),
    st.builds(Atom, st.just("appname"), st.sampled_from(_value_words)),
    st.builds(Atom, st.just("text"),
              st.sampled_from(_value_words + ["order now", "sign in"])),
)


def _tree_st(depth):
    if depth <= 1:
        return _atom_st
    sub = _tree_st(depth - 1)
    return st.one_of(
        _atom_st,
        st.builds(lambda kids: make_and(kids),
                  st.lists(sub, min_size=2, max_size=3)),
        st.builds(lambda kids: make_or(kids),
                  st.lists(sub, min_size=2, max_size=3)),
    )


@settings(max_examples=300, deadline=None)
@given(ast=_tree_st(3))
def test_round_trip_canonical_parse(ast):
    assert parse(canonical_query_string(ast), VOCAB) == ast


@settings(max_examples=100, deadline=None)
@given(words=st.lists(st.sampled_from(_value_words), min_size=1, max_size=6),
       op=st.sampled_from(["and", "or", " "]))
def test_parse_never_throws_on_uniform_operator_queries(words, op):
    query = f" {op} ".join(words)
    ast = parse(query, VOCAB)
    assert ast is not None


# --- suggestions ---

def test_suggest_prefix_match_includes_ui():
    got = suggest("ed", VOCAB, limit=10)
    assert ("edittext", "ui") in got


def test_suggest_empty_prefix_returns_merged_head():
    got = suggest("", VOCAB, limit=5)
    assert len(got) == 5
    assert all(category == "color" for _, category in got)
    assert [v for v, _ in got] == sorted(VOCAB.color_names)[:5]


def test_suggest_no_match():
    assert suggest("zzzz", VOCAB, limit=10) == []


def test_suggest_category_order_and_alphabetical():
    vocab = Vocabulary(color_names=frozenset({"blue", "black"}),
                       ui_types=frozenset({"button"}),
                       app_names=frozenset({"bank"}))
    got = suggest("b", vocab, limit=10)
    assert got == [("black", "color"), ("blue", "color"),
                   ("button", "ui"), ("bank", "appname")]


def test_suggest_limit_validation():
    with pytest.raises(ValueError):
        suggest("a", VOCAB, limit=0)
