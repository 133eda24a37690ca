"""Expression grammar for algebra elements, and the inverse renderer.

Grammar (whitespace ignored):

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := rational | atom ['^' int]
    atom   := 'U' | 'S' | atom "'" | '(' expr ')'

"'" is the adjoint mark, so S' and U' are S* and U^-1; rational literals
carry an optional sign and an optional /denominator.  A sign directly in
front of an atom is accepted as a signed factor (the same rule that
admits signed rationals).  Powers are integers; a negative power is only
meaningful on invertible elements (nonzero scalars times a power of U)
and raises NegativeSPower anywhere else, S included.

render() writes an element back in this grammar, one '*'-joined factor
chain per monomial, terms joined by ' + '/' - ' in canonical term order;
parse(render(x)) reproduces x exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraContext, Element, monomial_sort_key
from .errors import ExprSyntaxError, NegativeSPower
from .serialize import rational_str

__all__ = ["parse", "render"]


_SYMBOLS = {"U", "S"}
_PUNCT = {"'", "(", ")", "^", "*", "+", "-", "/"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        c = text[pos]
        if c.isspace():
            pos += 1
            continue
        if c.isdigit():
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            toks.append(("num", text[start:pos], start))
            continue
        if c in _SYMBOLS:
            toks.append(("sym", c, pos))
            pos += 1
            continue
        if c in _PUNCT:
            toks.append((c, c, pos))
            pos += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", pos)
    return toks


class _Parser:
    def __init__(self, text: str, ctx: AlgebraContext):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.at = 0

    # -- token helpers -------------------------------------------------------

    def _peek(self) -> str | None:
        return self.toks[self.at][0] if self.at < len(self.toks) else None

    def _pos(self) -> int:
        if self.at < len(self.toks):
            return self.toks[self.at][2]
        return len(self.text)

    def _take(self, kind: str | None = None) -> tuple[str, str, int]:
        if self.at >= len(self.toks):
            raise ExprSyntaxError("unexpected end of expression", len(self.text))
        tok = self.toks[self.at]
        if kind is not None and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.at += 1
        return tok

    # -- grammar -------------------------------------------------------------

    def parse(self) -> Element:
        x = self.expr()
        if self.at < len(self.toks):
            tok = self.toks[self.at]
            raise ExprSyntaxError(f"trailing input starting at {tok[1]!r}", tok[2])
        return x

    def expr(self) -> Element:
        x = self.term()
        while self._peek() in ("+", "-"):
            op, _, _ = self._take()
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> Element:
        x = self.factor()
        while self._peek() == "*":
            self._take()
            x = x * self.factor()
        return x

    def factor(self) -> Element:
        sign = 1
        if self._peek() in ("+", "-"):
            op, _, pos = self._take()
            if op == "-":
                sign = -1
            if self._peek() is None:
                raise ExprSyntaxError("dangling sign", pos)
        if self._peek() == "num":
            x = Element.monomial(self.ctx, 0, 0, 0, 0, self._rational())
        else:
            x = self.atom()
            if self._peek() == "^":
                _, _, pos = self._take()
                x = self._power(x, self._int(), pos)
        return x if sign == 1 else -x

    def atom(self) -> Element:
        kind = self._peek()
        if kind == "sym":
            _, name, _ = self._take()
            x = (
                Element.monomial(self.ctx, 1, 0, 0, 0)
                if name == "U"
                else Element.monomial(self.ctx, 0, 1, 0, 0)
            )
        elif kind == "(":
            self._take()
            x = self.expr()
            self._take(")")
        else:
            raise ExprSyntaxError("expected U, S, a number, or '('", self._pos())
        while self._peek() == "'":
            self._take()
            x = x.adjoint()
        return x

    # -- literals and powers ---------------------------------------------------

    def _rational(self) -> Fraction:
        _, digits, _ = self._take("num")
        num = int(digits)
        if self._peek() == "/":
            self._take()
            _, dd, dpos = self._take("num")
            den = int(dd)
            if den == 0:
                raise ExprSyntaxError("zero denominator", dpos)
            return Fraction(num, den)
        return Fraction(num)

    def _int(self) -> int:
        sign = 1
        if self._peek() in ("+", "-"):
            op, _, _ = self._take()
            if op == "-":
                sign = -1
        _, digits, _ = self._take("num")
        return sign * int(digits)

    def _power(self, x: Element, e: int, pos: int) -> Element:
        if e >= 0:
            return x**e
        tm = x.term_map()
        if len(tm) == 1:
            (t, c), = tm.items()
            if t.m == 0 and t.n == 0:
                out = Element.monomial(self.ctx, t.i * e, 0, 0, 0, Fraction(1))
                return out * c**e
        raise NegativeSPower(
            "negative powers need an invertible element (a scalar times a power of U); "
            "write adjoints with '",
            pos,
        )


def parse(text: str, ctx: AlgebraContext) -> Element:
    """Evaluate an expression string to an Element (terms kept normalized)."""
    return _Parser(text, ctx).parse()


def _mono_str(t) -> str:
    parts = []
    if t.i:
        parts.append("U" if t.i == 1 else f"U^{t.i}")
    if t.m:
        parts.append("S" if t.m == 1 else f"S^{t.m}")
    if t.n:
        parts.append("S'" if t.n == 1 else f"S'^{t.n}")
    if t.j:
        parts.append("U" if t.j == 1 else f"U^{t.j}")
    return "*".join(parts)


def render(x: Element) -> str:
    """Grammar string for x: canonical term order, ' + '/' - ' joins."""
    items = sorted(x.term_map().items(), key=lambda tc: monomial_sort_key(tc[0]))
    if not items:
        return "0"
    pieces = []
    for idx, (t, c) in enumerate(items):
        mono = _mono_str(t)
        mag = abs(c)
        if not mono:
            body = rational_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{rational_str(mag)}*{mono}"
        if idx == 0:
            if c < 0:
                # leading minus must ride a rational literal to stay in-grammar
                body = f"{rational_str(c)}*{mono}" if mono else rational_str(c)
            pieces.append(body)
        else:
            pieces.append(f"{' + ' if c > 0 else ' - '}{body}")
    return "".join(pieces)
