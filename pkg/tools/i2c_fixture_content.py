"""Authored model replies for the i2c fixture.

``build_fixture_transcripts.py`` pairs these with the exact requests the
pipeline issues and records them as replay transcripts.
"""

RESET = "disable iff (wb_rst_i || !arst_i) "
BUS_WRITE = "wb_cyc_i && wb_stb_i && wb_we_i && !wb_ack_o"
BUS_READ = "wb_cyc_i && wb_stb_i && !wb_we_i"


def sva(body: str, reset: bool = True) -> str:
    return f"assert property (@(posedge wb_clk_i) {RESET if reset else ''}{body});"


def width(signal: str, bits: int) -> dict:
    return {
        "category": "width",
        "sva": sva(f"$bits({signal}) == {bits}", reset=False),
        "rationale": f"{signal} is {bits} bit(s) wide in the port or register table.",
    }


def item(category: str, body: str, rationale: str, reset: bool = True) -> dict:
    return {"category": category, "sva": sva(body, reset), "rationale": rationale}


def extraction(name, definition, functionality, interconnection, related, additional=""):
    return {
        "name": name,
        "description": {
            "definition": definition,
            "functionality": functionality,
            "interconnection": interconnection,
            "additional": additional,
        },
        "interconnection_signals": related,
    }


EXTRACTIONS = {
    "wb_clk_i": extraction(
        "wb_clk_i",
        "1-bit input. Master clock of the core.",
        "Every register samples on the rising edge of wb_clk_i; all other signals except arst_i are synchronous to it.",
        "Clocks the bus interface, the bit engine and the bus monitor.",
        [],
    ),
    "wb_rst_i": extraction(
        "wb_rst_i",
        "1-bit input. Synchronous reset, active high.",
        "Returns all registers to their reset values on the next rising edge of the clock: prer to 16'hFFFF, ctr, txr, cr and sr to 0.",
        "Resets prer, ctr, txr, rxr, cr and sr; drops wb_ack_o and wb_inta_o.",
        ["prer", "ctr", "txr", "rxr", "cr", "sr", "wb_ack_o", "wb_inta_o"],
    ),
    "arst_i": extraction(
        "arst_i",
        "1-bit input. Asynchronous reset, active low by default (parameter ARST_LVL).",
        "Clears the core immediately, without waiting for a clock edge.",
        "Same effect as wb_rst_i on all registers.",
        ["wb_rst_i"],
    ),
    "wb_adr_i": extraction(
        "wb_adr_i",
        "3-bit input. Register address of the current bus cycle.",
        "Selects prer low (0), prer high (1), ctr (2), txr/rxr (3) or cr/sr (4).",
        "Decoded together with wb_we_i to select the register read on wb_dat_o or written from wb_dat_i.",
        ["wb_we_i", "wb_dat_o", "wb_dat_i"],
    ),
    "wb_dat_i": extraction(
        "wb_dat_i",
        "8-bit input. Write data from the bus host.",
        "Written into the register addressed by wb_adr_i when wb_we_i is high.",
        "Source of prer, ctr, txr and cr writes.",
        ["wb_adr_i", "wb_we_i", "prer", "ctr", "txr", "cr"],
    ),
    "wb_dat_o": extraction(
        "wb_dat_o",
        "8-bit output. Registered read data.",
        "Shows the register addressed by wb_adr_i as it was on the previous clock edge.",
        "Carries prer, ctr, rxr or sr back to the host.",
        ["wb_adr_i", "prer", "ctr", "rxr", "sr"],
    ),
    "wb_we_i": extraction(
        "wb_we_i",
        "1-bit input. Write enable.",
        "High for write cycles, low for read cycles.",
        "Qualifies wb_stb_i and wb_cyc_i for writes.",
        ["wb_stb_i", "wb_cyc_i"],
    ),
    "wb_stb_i": extraction(
        "wb_stb_i",
        "1-bit input. Strobe.",
        "Together with wb_cyc_i marks a valid transfer. The core answers with wb_ack_o on the following clock edge.",
        "A strobe with wb_cyc_i while wb_ack_o is low is acknowledged on the next cycle.",
        ["wb_cyc_i", "wb_ack_o"],
    ),
    "wb_cyc_i": extraction(
        "wb_cyc_i",
        "1-bit input. Cycle valid.",
        "High for the whole duration of a bus cycle.",
        "Qualifies wb_stb_i.",
        ["wb_stb_i"],
    ),
    "wb_ack_o": extraction(
        "wb_ack_o",
        "1-bit output. Bus cycle acknowledge.",
        "High for exactly one clock, on the edge after wb_stb_i and wb_cyc_i are seen; the host then ends the cycle.",
        "Answers wb_stb_i within a wb_cyc_i cycle.",
        ["wb_stb_i", "wb_cyc_i"],
    ),
    "wb_inta_o": extraction(
        "wb_inta_o",
        "1-bit output. Interrupt request, active high.",
        "Goes high on the clock edge after the IF bit of sr is set while IEN in ctr is 1.",
        "Registered from sr bit 0 and ctr bit 6, so it lags the flag by one cycle.",
        ["sr", "ctr"],
    ),
    "scl_pad_i": extraction(
        "scl_pad_i",
        "1-bit input. SCL line level at the pad.",
        "Sampled by the bus monitor to detect START and STOP conditions.",
        "Line is pulled low when scl_pad_oe is 1.",
        ["scl_pad_oe"],
    ),
    "scl_pad_o": extraction(
        "scl_pad_o",
        "1-bit output. SCL drive value, tied to 0.",
        "The line is open drain; the value only matters when scl_pad_oe is 1.",
        "Used with scl_pad_oe.",
        ["scl_pad_oe"],
    ),
    "sda_pad_i": extraction(
        "sda_pad_i",
        "1-bit input. SDA line level at the pad.",
        "Sampled for received data bits, the acknowledge bit and START/STOP detection.",
        "Line is pulled low when sda_pad_oe is 1.",
        ["sda_pad_oe"],
    ),
    "sda_pad_o": extraction(
        "sda_pad_o",
        "1-bit output. SDA drive value, tied to 0.",
        "The line is open drain; the value only matters when sda_pad_oe is 1.",
        "Used with sda_pad_oe.",
        ["sda_pad_oe"],
    ),
    "scl_pad_oe": extraction(
        "scl_pad_oe",
        "1-bit output. SCL output enable; 1 pulls SCL low.",
        "Driven by the bit engine; released while the core is disabled.",
        "Controlled by the bit engine, gated by ctr bit 7.",
        ["ctr"],
    ),
    "sda_pad_oe": extraction(
        "sda_pad_oe",
        "1-bit output. SDA output enable; 1 pulls SDA low.",
        "Driven by the bit engine for data, START and STOP; released while the core is disabled.",
        "Controlled by the bit engine, gated by ctr bit 7.",
        ["ctr"],
    ),
    "ctr": extraction(
        "ctr",
        "8-bit control register at address 2, reset value 8'h00.",
        "Bit 7 EN enables the core, bit 6 IEN enables the interrupt, bits 5:0 are reserved and read as 0. Written from wb_dat_i on the edge that accepts the write.",
        "Read back through wb_dat_o; IEN gates wb_inta_o together with sr bit 0; EN low releases scl_pad_oe and sda_pad_oe.",
        ["wb_dat_i", "wb_dat_o", "wb_inta_o", "sr", "scl_pad_oe", "sda_pad_oe"],
        "Reset by wb_rst_i and arst_i.",
    ),
    "sr": extraction(
        "sr",
        "8-bit status register at address 4 (read), reset value 8'h00.",
        "Bit 7 RxACK, bit 6 Busy, bit 5 AL, bits 4:2 reserved (0), bit 1 TIP (OR of the RD and WR bits of cr), bit 0 IF (sticky until IACK).",
        "Read through wb_dat_o; IF with ctr IEN drives wb_inta_o; TIP follows cr; Busy follows START/STOP seen on scl_pad_i and sda_pad_i.",
        ["wb_dat_o", "ctr", "wb_inta_o", "cr", "scl_pad_i", "sda_pad_i"],
        "Cleared by wb_rst_i and arst_i.",
    ),
    "prer": extraction(
        "prer",
        "16-bit clock prescale register at addresses 0 (low byte) and 1 (high byte), reset value 16'hFFFF.",
        "Sets the SCL period: the bit engine advances every prer+1 clocks. Should only be changed while ctr bit 7 is clear.",
        "Written from wb_dat_i, read back through wb_dat_o.",
        ["wb_dat_i", "wb_dat_o"],
    ),
    "txr": extraction(
        "txr",
        "8-bit transmit register at address 3 (write), reset value 8'h00.",
        "Holds the next byte to send; copied into the shift register when a command starts.",
        "Written from wb_dat_i.",
        ["wb_dat_i"],
    ),
    "rxr": extraction(
        "rxr",
        "8-bit receive register at address 3 (read), reset value 8'h00.",
        "Holds the last byte received by a READ command.",
        "Read through wb_dat_o.",
        ["wb_dat_o"],
    ),
    "cr": extraction(
        "cr",
        "8-bit command register at address 4 (write), reset value 8'h00.",
        "Bits STA, STO, RD, WR clear when the command completes; IACK clears one cycle after it is written; bits 2:1 are reserved and always 0.",
        "Written from wb_dat_i while the core is enabled; RD and WR form TIP in sr.",
        ["wb_dat_i", "sr"],
    ),
}

_PORT_WIDTHS = {
    "wb_clk_i": 1,
    "wb_rst_i": 1,
    "arst_i": 1,
    "wb_adr_i": 3,
    "wb_dat_i": 8,
    "wb_cyc_i": 1,
    "wb_dat_o": 8,
    "wb_we_i": 1,
    "scl_pad_i": 1,
    "scl_pad_o": 1,
    "sda_pad_i": 1,
    "sda_pad_o": 1,
    "scl_pad_oe": 1,
    "sda_pad_oe": 1,
}

ASSERTIONS = {name: [width(name, bits)] for name, bits in _PORT_WIDTHS.items()}

ASSERTIONS["sda_pad_oe"].append(
    item("connectivity", "!ctr[7] |-> !sda_padoen_o", "Disabled core releases SDA.")
)

ASSERTIONS["wb_stb_i"] = [
    width("wb_stb_i", 1),
    item("connectivity", "wb_cyc_i && wb_stb_i && !wb_ack_o |=> wb_ack_o", "A strobe inside a cycle is acknowledged on the next edge."),
    item("connectivity", "wb_stb_i |-> wb_ack_o", "Every strobe is acknowledged."),
]

ASSERTIONS["wb_ack_o"] = [
    width("wb_ack_o", 1),
    item("connectivity", "wb_ack_o |-> ##1 wb_stb_i", "The acknowledge is followed by the strobe of the cycle."),
    item("function", "wb_ack_o |-> wb_sel_i", "Acknowledge only for selected byte lanes."),
]

ASSERTIONS["wb_inta_o"] = [
    width("wb_inta_o", 1),
    item("connectivity", "sr[0] |-> wb_inta_o", "The interrupt output follows the interrupt flag."),
]

ASSERTIONS["ctr"] = [
    width("ctr", 8),
    item("connectivity", f"{BUS_WRITE} && wb_adr_i == 3'd2 |=> ctr == ($past(wb_dat_i) & 8'hc0)", "A write at address 2 loads ctr with the reserved bits masked."),
    item("connectivity", f"{BUS_READ} && wb_adr_i == 3'd2 |=> wb_dat_o == $past(ctr)", "A read at address 2 returns ctr on the registered read port."),
    item("connectivity", "!ctr[7] && !$past(ctr[7]) |-> !scl_pad_oe && !sda_pad_oe", "A disabled core releases both pads."),
    item("connectivity", "ctr[6] && sr[0] |=> wb_inta_o", "With IEN set, a pending flag raises the interrupt on the next edge."),
    item("function", "ctr[5:0] == 6'h0", "Reserved bits read as zero.", reset=False),
    item("function", "$rose(wb_rst_i) |=> ctr == 8'h00", "Synchronous reset clears ctr.", reset=False),
    item("function", "!arst_i |-> ctr == 8'h00", "Asynchronous reset clears ctr immediately.", reset=False),
    item("function", f"{BUS_WRITE} && wb_adr_i == 3'd2 |=> ctr[7] == $past(wb_dat_i[7])", "EN takes the written value."),
    item("function", "!(wb_cyc_i && wb_stb_i && wb_we_i && wb_adr_i == 3'd2) |=> $stable(ctr)", "ctr only changes on writes at address 2."),
]

ASSERTIONS["sr"] = [
    width("sr", 8),
    item("connectivity", f"{BUS_READ} && wb_adr_i == 3'd4 |=> wb_dat_o == $past(sr)", "A read at address 4 returns sr."),
    item("connectivity", "wb_inta_o |-> $past(sr[0])", "The interrupt output comes from IF."),
    item("connectivity", "wb_inta_o |-> $past(ctr[6])", "The interrupt output is gated by IEN."),
    item("connectivity", "sr[1] == (cr[4] || cr[5])", "TIP is the OR of WR and RD."),
    item("connectivity", "$rose(sr[1]) |-> $past(wb_cyc_i && wb_stb_i && wb_we_i && wb_adr_i == 3'd4)", "TIP rises after a command write."),
    item("connectivity", "$fell(sr[1]) |-> sr[0]", "IF is set when TIP falls."),
    item("connectivity", "$rose(sr[6]) |-> scl_pad_oe", "The master holds SCL low when the bus becomes busy."),
    item("connectivity", "$fell(sr[6]) |-> !sda_pad_oe && !scl_pad_oe", "Both lines are released once the bus is free."),
    item("function", "sr[4:2] == 3'b000", "Reserved status bits are zero.", reset=False),
    item("function", "$rose(wb_rst_i) |=> sr[0] == 1'b0", "Reset clears IF.", reset=False),
    item("function", "sr[0] && !(wb_cyc_i && wb_stb_i && wb_we_i && wb_adr_i == 3'd4 && wb_dat_i[0]) |=> sr[0]", "IF is sticky until IACK."),
    item("function", "$rose(sr[0]) |-> $past(sr[1])", "IF is set at the end of a transfer."),
    item("function", "$rose(wb_rst_i) |=> sr[6:5] == 2'b00", "Reset clears Busy and AL.", reset=False),
    item("function", "$rose(sr[0]) && $past(cr[4]) |-> !sr[7]", "An acknowledged write leaves RxACK low."),
    item("function", "sr[1] |-> bit_cnt <= 3'd7", "The bit counter stays in range during a transfer."),
]

ASSERTIONS["prer"] = [
    width("prer", 16),
    item("function", f"{BUS_WRITE} && wb_adr_i == 3'd0 |=> prer[7:0] == $past(wb_dat_i)", "A write at address 0 loads the low byte."),
    item("function", "$rose(wb_rst_i) |=> prer == 16'h0000", "Reset clears the prescaler.", reset=False),
    item("function", "prer != 16'hffff |-> ctr[7]", "The prescaler is only programmed while the core is enabled."),
]

ASSERTIONS["txr"] = [
    width("txr", 8),
    item("function", f"{BUS_WRITE} && wb_adr_i == 3'd3 |=> txr == $past(wb_dat_i)", "A write at address 3 loads txr."),
]

ASSERTIONS["rxr"] = [
    width("rxr", 8),
    item("function", f"{BUS_READ} && wb_adr_i == 3'd3 |=> wb_dat_o == $past(rxr)", "A read at address 3 returns rxr."),
]

ASSERTIONS["cr"] = [
    width("cr", 8),
    item("function", "cr[2:1] == 2'b00", "Reserved command bits are zero.", reset=False),
]
