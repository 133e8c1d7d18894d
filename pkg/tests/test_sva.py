import random
import re
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings

from assertflow.sva import (
    SvaError,
    SvaLexError,
    SvaParseError,
    SvaSubsetError,
    parse_sva,
    parse_sva_file,
    pretty_print,
    scan_identifiers,
)
from assertflow.sva import ast
from assertflow.verilog_decl import parse_declarations

from oracles import WORD
from strategies import RandomTrees, assertions

DATA = Path(__file__).parent / "data"
FIXTURE = Path(__file__).parent.parent / "fixtures" / "i2c"
CORPUS = [line for line in (DATA / "sva_corpus.sva").read_text().splitlines() if line.strip()]


def wrap(body: str) -> str:
    return f"assert property (@(posedge clk) {body});"


def test_corpus_size():
    assert len(CORPUS) >= 50


@pytest.mark.parametrize("text", CORPUS)
def test_corpus_parses_and_round_trips(text):
    tree = parse_sva(text)
    assert parse_sva(pretty_print(tree)) == tree


def test_whole_corpus_as_one_file():
    trees = parse_sva_file("\n".join(CORPUS))
    assert trees == [parse_sva(line) for line in CORPUS]


def test_implication_example():
    tree = parse_sva("assert property (@(posedge wb_clk_i) wb_stb_i |-> wb_cyc_i);")
    assert tree.clocking == ast.Clocking("posedge", "wb_clk_i")
    assert tree.body == ast.Implication(ast.Ident("wb_stb_i"), True, ast.Ident("wb_cyc_i"))


def test_width_example():
    tree = parse_sva("assert property (@(posedge clk) $bits(ctr) == 8);")
    assert tree.body == ast.Binary("==", ast.SysCall("$bits", (ast.Ident("ctr"),)), ast.Number(8))


def test_dangling_implication_points_at_close_paren():
    text = "assert property (@(posedge clk) a |-> );"
    with pytest.raises(SvaParseError) as info:
        parse_sva(text)
    err = info.value
    assert err.kind == "parse"
    assert err.offset == text.index(");")
    assert (err.line, err.column) == (1, err.offset + 1)


def test_error_position_on_later_line():
    text = "assert property (@(posedge clk)\n   a |-> b ##1 );"
    with pytest.raises(SvaParseError) as info:
        parse_sva(text)
    assert info.value.line == 2
    assert text[info.value.offset] == ")"


def test_property_declaration_form():
    text = """
    property p_ack;
        @(posedge wb_clk_i) disable iff (wb_rst_i) wb_stb_i && wb_cyc_i |=> wb_ack_o;
    endproperty : p_ack
    a_ack: assert property (p_ack);
    """
    tree = parse_sva(text)
    assert tree.label == "a_ack"
    assert tree.disable_iff == ast.Ident("wb_rst_i")
    assert isinstance(tree.body, ast.Implication) and not tree.body.overlapping
    unlabeled = parse_sva(text.replace("a_ack: ", ""))
    assert unlabeled.label == "p_ack"


def test_precedence_follows_ieee_levels():
    tree = parse_sva(wrap("a || b && c | d ^ e & f == g < h"))
    expected = ast.Binary(
        "||",
        ast.Ident("a"),
        ast.Binary(
            "&&",
            ast.Ident("b"),
            ast.Binary(
                "|",
                ast.Ident("c"),
                ast.Binary(
                    "^",
                    ast.Ident("d"),
                    ast.Binary(
                        "&",
                        ast.Ident("e"),
                        ast.Binary("==", ast.Ident("f"), ast.Binary("<", ast.Ident("g"), ast.Ident("h"))),
                    ),
                ),
            ),
        ),
    )
    assert tree.body == expected


def test_implication_is_right_associative():
    tree = parse_sva(wrap("a |-> b |=> c"))
    assert tree.body == ast.Implication(ast.Ident("a"), True, ast.Implication(ast.Ident("b"), False, ast.Ident("c")))


def test_nested_implication_prints_parenthesized():
    tree = parse_sva(wrap("a |-> b |=> c"))
    text = pretty_print(tree)
    assert "(b |=> c)" in text
    assert parse_sva(text) == tree


def test_delay_binds_looser_than_repetition():
    tree = parse_sva(wrap("a ##1 b[*2]"))
    assert tree.body == ast.Delay(ast.Ident("a"), 1, 1, ast.Repeat(ast.Ident("b"), 2))


@pytest.mark.parametrize(
    "body",
    [
        "a throughout b",
        "a within b",
        "a intersect b",
        "a until b",
        "s_eventually a",
        "first_match(a ##1 b) |-> c",
        "a ##[1:$] b",
        "a[*] |-> b",
        "a[+] |-> b",
        "a[*0] ##1 b",
        "a[*1:3] |-> b",
        "a[=2] |-> b",
        "a[->1] |-> b",
        "(a ##1 b) and (c ##1 d) |-> e",
        "a + b == c",
        "a << 1",
        "a ? b : c",
        "{a, b} == 2'b11",
        "a == 1'bx",
        "a == 4'sd3",
        "a == 1.5",
        "&a",
        "a |-> |b",
        "a |-> -b",
        "$countones(a) == 1",
        "$past(a, n)",
    ],
)
def test_outside_subset(body):
    with pytest.raises(SvaSubsetError):
        parse_sva(wrap(body))


@pytest.mark.parametrize(
    "text",
    [
        "cover property (@(posedge clk) a);",
        "assume property (@(posedge clk) a);",
        "assert (a);",
        "assert property (a |-> b);",
        "assert property (@(posedge clk) a |-> b) else $error(\"x\");",
        "assert property (@(clk) a);",
        "assert property (@(posedge clk or negedge rst) a);",
        "sequence s; a ##1 b; endsequence",
        "property p(x); @(posedge clk) x; endproperty",
    ],
)
def test_statements_outside_subset(text):
    with pytest.raises(SvaSubsetError):
        parse_sva_file(text)


@pytest.mark.parametrize(
    "text, kind",
    [
        ("assert property (@(posedge clk) a |-> b", SvaParseError),
        ("assert property (@(posedge clk) a b);", SvaParseError),
        ("assert property (@(posedge clk) a |-> ##[3:1] b);", SvaError),
        ("assert property (@(posedge clk) a ` b);", SvaLexError),
        ("assert property (@(posedge clk) a == 4'q3);", SvaLexError),
        ("", SvaParseError),
    ],
)
def test_malformed_text(text, kind):
    with pytest.raises(kind):
        parse_sva(text)


def test_reversed_range_is_not_a_subset_error():
    with pytest.raises(SvaError) as info:
        parse_sva(wrap("a |-> ##[3:1] b"))
    assert info.value.kind != "subset"


def test_error_serializes():
    with pytest.raises(SvaError) as info:
        parse_sva(wrap("a throughout b"))
    data = info.value.to_dict()
    assert data["kind"] == "subset"
    assert set(data) == {"kind", "message", "offset", "line", "column"}


def test_scan_includes_clock():
    tree = parse_sva("assert property (@(posedge clk) a |-> ##1 b);")
    assert scan_identifiers(tree) == {"clk", "a", "b"}


def test_scan_skips_system_functions():
    tree = parse_sva("assert property (@(posedge clk) $past(sr, 2) == sr);")
    names = scan_identifiers(tree)
    assert "sr" in names and "$past" not in names and "past" not in names


def test_scan_sees_disable_iff():
    tree = parse_sva("assert property (@(posedge clk) disable iff (rst) a);")
    assert scan_identifiers(tree) == {"clk", "rst", "a"}


def test_scan_matches_regex_oracle_on_corpus():
    declared = {d.identifier for d in parse_declarations((FIXTURE / "hdl" / "i2c_signals.v").read_text())}
    declared |= {"a", "b", "c", "d", "x", "y", "clk", "rst", "req", "ack", "state", "grant", "count", "data", "limit", "valid"}
    for text in CORPUS:
        tree = parse_sva(text)
        found = set(WORD.findall(text)) & declared
        assert found <= scan_identifiers(tree), text


def round_trip_failures(count: int, seed: int = 0) -> list:
    gen = RandomTrees(seed)
    failures = []
    for _ in range(count):
        tree = gen.assertion()
        text = pretty_print(tree)
        if "\n" in text or parse_sva(text) != tree or pretty_print(parse_sva(text)) != text:
            failures.append(text)
    return failures


def test_seeded_random_round_trip():
    assert round_trip_failures(1000, seed=3) == []


@settings(max_examples=200, deadline=None, suppress_health_check=list(HealthCheck))
@given(assertions())
def test_random_ast_round_trip(tree):
    text = pretty_print(tree)
    assert parse_sva(text) == tree


@settings(max_examples=100, deadline=None, suppress_health_check=list(HealthCheck))
@given(assertions())
def test_scan_is_complete_on_random_trees(tree):
    text = pretty_print(tree)
    tokens = set(WORD.findall(re.sub(r"\d+'[hbdo][0-9a-fA-F_]+|\$\w+", " ", text)))
    keywords = {"assert", "property", "posedge", "negedge", "disable", "iff", "not", "and", "or"}
    expected = tokens - keywords - {tree.label}
    assert scan_identifiers(tree) == expected


def _mutate(rng: random.Random, text: str) -> str:
    chars = list(text)
    for _ in range(rng.randint(1, 4)):
        op = rng.random()
        pos = rng.randint(0, len(chars))
        if op < 0.3 and chars:
            del chars[min(pos, len(chars) - 1)]
        elif op < 0.6:
            chars.insert(pos, rng.choice("()[]{}#$:;|-=>!~&^*'0123456789abhx_ \n"))
        elif op < 0.8:
            donor = rng.choice(CORPUS)
            start = rng.randint(0, len(donor))
            chars[pos:pos] = donor[start : start + rng.randint(1, 12)]
        else:
            chars = chars[: rng.randint(0, len(chars))]
    return "".join(chars)


def fuzz(count: int, seed: int = 1) -> int:
    """Parse ``count`` random inputs; return how many were rejected cleanly."""
    rng = random.Random(seed)
    rejected = 0
    for k in range(count):
        if k % 2:
            text = bytes(rng.getrandbits(8) for _ in range(rng.randint(0, 64))).decode("latin-1")
        else:
            text = _mutate(rng, rng.choice(CORPUS))
        try:
            parse_sva_file(text)
        except SvaError:
            rejected += 1
    return rejected


def test_fuzz_smoke():
    assert fuzz(2000, seed=7) > 0
