"""Turn natural-language hardware specifications into checked SystemVerilog Assertions."""

__version__ = "0.1.0"
