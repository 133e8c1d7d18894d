"""Hypothesis strategies producing ASTs inside the supported assertion subset."""

import random

from hypothesis import strategies as st

from assertflow.sva import ast

NAMES = ("a", "b", "c", "d", "req", "ack", "wb_stb_i", "sr", "prer")
COMPARE = ("==", "!=", "<", "<=", ">", ">=")


def numbers():
    unsized = st.builds(ast.Number, st.integers(0, 4096), st.none())
    sized = st.integers(1, 16).flatmap(
        lambda w: st.builds(ast.Number, st.integers(0, (1 << w) - 1), st.just(w))
    )
    return unsized | sized


def expressions(names=NAMES, max_index=7, with_numbers=True):
    ident = st.sampled_from(names).map(ast.Ident)
    leaves = [ident, st.builds(ast.BitSelect, ident, st.integers(0, max_index))]
    leaves.append(
        st.tuples(ident, st.integers(0, max_index), st.integers(0, max_index)).map(
            lambda t: ast.PartSelect(t[0], max(t[1], t[2]), min(t[1], t[2]))
        )
    )
    if with_numbers:
        leaves.append(numbers())
    atoms = st.one_of(*leaves)

    def extend(inner):
        calls = st.one_of(
            st.builds(lambda e: ast.SysCall("$rose", (e,)), inner),
            st.builds(lambda e: ast.SysCall("$fell", (e,)), inner),
            st.builds(lambda e: ast.SysCall("$stable", (e,)), inner),
            st.builds(lambda e: ast.SysCall("$onehot", (e,)), inner),
            st.builds(lambda e: ast.SysCall("$onehot0", (e,)), inner),
            st.builds(lambda e: ast.SysCall("$past", (e,)), inner),
            st.builds(lambda e, n: ast.SysCall("$past", (e, ast.Number(n))), inner, st.integers(1, 3)),
        )
        return st.one_of(
            st.builds(ast.Unary, st.sampled_from(("!", "~")), inner),
            st.builds(ast.Binary, st.sampled_from(("&&", "||", "&", "|", "^") + COMPARE), inner, inner),
            calls,
        )

    return st.recursive(atoms, extend, max_leaves=6)


def sequences(expr, max_delay=3):
    def extend(inner):
        bounds = st.tuples(st.integers(0, max_delay), st.integers(0, max_delay)).map(sorted)
        return st.one_of(
            st.builds(lambda l, r, lr: ast.Delay(l, lr[0], lr[1], r), inner, inner, bounds),
            st.builds(lambda r, lr: ast.Delay(None, lr[0], lr[1], r), inner, bounds),
            st.builds(ast.Repeat, inner, st.integers(1, 3)),
        )

    return st.recursive(expr, extend, max_leaves=4)


def properties(expr, max_delay=3):
    seq = sequences(expr, max_delay)

    def extend(inner):
        return st.one_of(
            st.builds(ast.Implication, seq, st.booleans(), inner),
            st.builds(ast.Not, inner),
            st.builds(ast.PropAnd, inner, inner),
            st.builds(ast.PropOr, inner, inner),
        )

    return st.recursive(seq, extend, max_leaves=4)


def assertions(names=NAMES):
    expr = expressions(names)
    return st.builds(
        ast.SvaAst,
        st.builds(ast.Clocking, st.sampled_from(("posedge", "negedge")), st.sampled_from(("clk", "wb_clk_i"))),
        properties(expr),
        st.none() | expr,
        st.none() | st.sampled_from(("chk", "a_sr_01", "p0")),
    )


class RandomTrees:
    """Seeded generator of subset ASTs, cheaper than hypothesis for bulk runs."""

    def __init__(self, seed: int, names=NAMES):
        self.rng = random.Random(seed)
        self.names = names

    def expr(self, depth: int = 3):
        r = self.rng
        if depth == 0 or r.random() < 0.3:
            ident = ast.Ident(r.choice(self.names))
            pick = r.randrange(5)
            if pick == 0:
                return ast.BitSelect(ident, r.randrange(8))
            if pick == 1:
                hi = r.randrange(8)
                return ast.PartSelect(ident, hi, r.randrange(hi + 1))
            if pick == 2:
                width = r.choice((None, r.randint(1, 16)))
                return ast.Number(r.randrange(1 << (width or 12)), width)
            return ident
        pick = r.randrange(3)
        if pick == 0:
            return ast.Unary(r.choice("!~"), self.expr(depth - 1))
        if pick == 1:
            op = r.choice(("&&", "||", "&", "|", "^") + COMPARE)
            return ast.Binary(op, self.expr(depth - 1), self.expr(depth - 1))
        name = r.choice(("$rose", "$fell", "$stable", "$onehot", "$onehot0", "$past", "$bits"))
        args = (self.expr(depth - 1),)
        if name == "$past" and r.random() < 0.5:
            args += (ast.Number(r.randint(1, 3)),)
        return ast.SysCall(name, args)

    def seq(self, depth: int = 2):
        r = self.rng
        if depth == 0 or r.random() < 0.4:
            return self.expr()
        lo = r.randrange(4)
        hi = lo + r.randrange(3)
        pick = r.randrange(3)
        if pick == 0:
            return ast.Delay(self.seq(depth - 1), lo, hi, self.seq(depth - 1))
        if pick == 1:
            return ast.Delay(None, lo, hi, self.seq(depth - 1))
        return ast.Repeat(self.seq(depth - 1), r.randint(1, 4))

    def prop(self, depth: int = 2):
        r = self.rng
        if depth == 0 or r.random() < 0.3:
            return self.seq()
        pick = r.randrange(4)
        if pick == 0:
            return ast.Implication(self.seq(), r.random() < 0.5, self.prop(depth - 1))
        if pick == 1:
            return ast.Not(self.prop(depth - 1))
        cls = ast.PropAnd if pick == 2 else ast.PropOr
        return cls(self.prop(depth - 1), self.prop(depth - 1))

    def assertion(self):
        r = self.rng
        return ast.SvaAst(
            ast.Clocking(r.choice(("posedge", "negedge")), r.choice(("clk", "wb_clk_i"))),
            self.prop(),
            self.expr(2) if r.random() < 0.3 else None,
            r.choice((None, None, "chk", "a_sr_01")),
        )
