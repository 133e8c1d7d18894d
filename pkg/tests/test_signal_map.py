import json
import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assertflow.signal_map import (
    FUZZY_THRESHOLD,
    MappingConflictError,
    SignalMapping,
    is_injective,
    mappings_from_json,
    mappings_to_json,
    match_deterministic,
    match_one,
    merge,
    normalize,
    similarity,
)
from assertflow.verilog_decl import SignalDeclaration

from oracles import best_fuzzy, canon, edit_distance

POOL = (
    "wb_clk_i wb_rst_i arst_i wb_adr_i wb_dat_i wb_dat_o wb_we_i wb_stb_i wb_cyc_i wb_ack_o "
    "wb_inta_o scl_pad_i scl_pad_o scl_pad_oe sda_pad_i sda_pad_o sda_pad_oe prer ctr txr rxr cr sr "
    "core_en ien tip irq_flag i2c_busy rxack done state_q bit_cnt shift_reg clk_en filter_q "
    "fifo_wr_ptr fifo_rd_ptr fifo_full fifo_empty tx_valid tx_ready rx_valid rx_data baud_div "
    "parity_err frame_err overrun_err dma_req dma_ack irq_mask irq_status timer_load timer_val"
).split()


def decls(names, parameters=()):
    out = [SignalDeclaration(n, "internal", "wire", 1) for n in names]
    out += [SignalDeclaration(p, "internal", "parameter", 32) for p in parameters]
    return out


def _case_variant(rng, name):
    """Change case and punctuation without changing the normalized key."""
    chars = [c.upper() if rng.random() < 0.5 else c for c in name]
    text = "".join(chars)
    if "_" in text and rng.random() < 0.5:
        text = text.replace("_", rng.choice(("", "-", " ", ".")))
    if text == name:
        text = name.upper() + "_"
    return text


def _one_edit(rng, name):
    letters = string.ascii_lowercase
    pos = rng.randrange(len(name))
    op = rng.randrange(3)
    if op == 0:
        return name[:pos] + rng.choice(letters) + name[pos + 1 :]
    if op == 1:
        return name[:pos] + rng.choice(letters) + name[pos:]
    return name[:pos] + name[pos + 1 :]


def mapper_corpus(seed=2024):
    """100 cases: 40 exact, 30 normalized, 20 fuzzy (5 deliberate ties), 10 unresolved."""
    rng = random.Random(seed)
    cases = []
    for _ in range(40):
        idents = rng.sample(POOL, 8)
        cases.append({"spec": rng.choice(idents), "idents": idents, "tier": "exact"})
    while len([c for c in cases if c["tier"] == "normalized"]) < 30:
        idents = rng.sample(POOL, 8)
        target = rng.choice(idents)
        spec = _case_variant(rng, target)
        if spec in idents or [i for i in idents if canon(i) == canon(spec)] != [target]:
            continue
        cases.append({"spec": spec, "idents": idents, "tier": "normalized", "want": target})
    while len([c for c in cases if c["tier"] == "fuzzy"]) < 15:
        idents = rng.sample([p for p in POOL if len(canon(p)) >= 7], 8)
        target = rng.choice(idents)
        spec = _one_edit(rng, target)
        if any(canon(i) == canon(spec) for i in idents) or not spec:
            continue
        cases.append({"spec": spec, "idents": idents, "tier": "fuzzy"})
    for stem in ("counter", "address", "pattern", "channel", "trigger"):
        idents = [stem + "_b", stem + "_a"] + rng.sample(POOL, 4)
        cases.append({"spec": stem + "_c", "idents": idents, "tier": "fuzzy", "want": stem + "_a"})
    while len([c for c in cases if c["tier"] == "unresolved"]) < 10:
        idents = rng.sample(POOL, 8)
        spec = "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(4, 10)))
        if best_fuzzy(spec, idents) is None and all(canon(i) != canon(spec) for i in idents):
            cases.append({"spec": spec, "idents": idents, "tier": "unresolved"})
    return cases


CORPUS = mapper_corpus()


def corpus_report(cases=CORPUS) -> dict:
    """Per-tier (correct, total) against ground truth and the exhaustive oracle."""
    tally = {}
    for case in cases:
        spec, idents, tier = case["spec"], case["idents"], case["tier"]
        got = match_deterministic([spec], decls(idents))[0]
        if tier == "exact":
            ok = (got.hdl_identifier, got.method, got.confidence) == (spec, "exact", 1.0)
        elif tier == "normalized":
            ok = (got.hdl_identifier, got.method, got.confidence) == (case["want"], "normalized", 0.9)
        elif tier == "fuzzy":
            ident, score = best_fuzzy(spec, idents)
            ok = (got.hdl_identifier, got.method, got.confidence) == (ident, "fuzzy", score)
            ok = ok and ident == case.get("want", ident)
        else:
            ok = not got.resolved and got.method is None
        right, total = tally.get(tier, (0, 0))
        tally[tier] = (right + ok, total + 1)
    return tally


def test_corpus_shape():
    assert len(CORPUS) == 100
    assert {t: sum(c["tier"] == t for c in CORPUS) for t in ("exact", "normalized", "fuzzy", "unresolved")} == {
        "exact": 40,
        "normalized": 30,
        "fuzzy": 20,
        "unresolved": 10,
    }


def test_corpus_all_tiers_exact():
    report = corpus_report()
    assert all(right == total for right, total in report.values()), report


def test_examples():
    assert match_deterministic(["prer"], decls(["prer", "ctr"]))[0] == SignalMapping("prer", "prer", "exact", 1.0)
    got = match_deterministic(["SCL_pad_OE"], decls(["scl_pad_oe", "scl_pad_o"]))[0]
    assert (got.hdl_identifier, got.method, got.confidence) == ("scl_pad_oe", "normalized", 0.9)
    got = match_deterministic(["prescale_reg"], decls(["prer", "ctr"]))[0]
    assert (got.hdl_identifier is None) == (best_fuzzy("prescale_reg", ["prer", "ctr"]) is None)


def test_similarity_matches_textbook_edit_distance():
    rng = random.Random(5)
    for _ in range(500):
        a, b = rng.sample(POOL, 2)
        a = _one_edit(rng, a) if rng.random() < 0.5 else a
        expected = 1 - edit_distance(canon(a), canon(b)) / max(len(canon(a)), len(canon(b)))
        assert similarity(a, b) == pytest.approx(expected)


def test_normalize():
    assert normalize("SCL_pad-OE 1") == "sclpadoe1"


def test_parameters_never_match():
    assert not match_deterministic(["ARST_LVL"], decls([], parameters=["ARST_LVL"]))[0].resolved


def test_threshold_is_inclusive():
    # 4 of 5 characters shared: similarity exactly 0.8
    assert match_one("abcde", ["abcdx"]).method == "fuzzy"
    assert match_one("abcde", ["abcdx"], threshold=0.81).resolved is False
    assert FUZZY_THRESHOLD == 0.8


def test_conflict_raises_with_identifier():
    with pytest.raises(MappingConflictError) as info:
        match_deterministic(["Ctr", "CTR"], decls(["ctr"]))
    assert info.value.identifier == "ctr"
    assert info.value.spec_names == ["CTR", "Ctr"]


def test_conflict_collected():
    conflicts = []
    out = match_deterministic(["Ctr", "CTR", "prer"], decls(["ctr", "prer"]), conflicts=conflicts)
    assert [m.resolved for m in out] == [False, False, True]
    assert len(conflicts) == 1 and conflicts[0].identifier == "ctr"


def test_merge_rules():
    table = decls(["prer", "ctr", "txr"])
    det = match_deterministic(["prer", "control", "tx_reg_x"], table)
    warnings = []
    merged = merge(det, [("prer", "ctr"), ("control", "ctr"), ("tx_reg_x", "nope")], table, warnings=warnings)
    assert merged[0] == det[0]
    assert merged[1] == SignalMapping("control", "ctr", "llm", 0.5)
    assert not merged[2].resolved
    assert any("not declared" in w for w in warnings)


def test_merge_refuses_taken_identifier():
    table = decls(["prer", "ctr"])
    det = match_deterministic(["prer", "prescale"], table)
    det = [det[0], SignalMapping("prescale")]
    warnings = []
    merged = merge(det, [{"spec_name": "prescale", "hdl_identifier": "prer"}], table, warnings=warnings)
    assert not merged[1].resolved and "already mapped" in warnings[0]


names = st.sampled_from(POOL[:20])


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.text("abcdefgh_ABC", min_size=1, max_size=8), min_size=1, max_size=6, unique=True),
    st.lists(names, min_size=1, max_size=8, unique=True),
    st.lists(st.tuples(st.text("abcdefgh_ABC", min_size=1, max_size=8), names), max_size=6),
)
def test_merge_properties(spec_names, idents, proposals):
    table = decls(idents)
    det = match_deterministic(spec_names, table, conflicts=[])
    once = merge(det, proposals, table)
    assert merge(once, proposals, table) == once
    assert is_injective(once)
    assert [m.spec_name for m in once] == list(spec_names)
    for before, after in zip(det, once):
        if before.resolved:
            assert after == before
        if after.resolved:
            assert after.hdl_identifier in idents
            if after.method == "exact":
                assert after.spec_name == after.hdl_identifier
    assert match_deterministic(spec_names, table, conflicts=[]) == det


def test_json_round_trip():
    maps = [SignalMapping("prer", "prer", "exact", 1.0), SignalMapping("x")]
    text = mappings_to_json(maps)
    assert json.loads(text)[1] == {"spec_name": "x", "hdl_identifier": None, "method": None, "confidence": 0.0}
    assert mappings_from_json(text) == maps
