"""The .frx expression language: tokenizer, parser, canonical printer.

Grammar (whitespace and # comments free):

    EXPR     = cantor(s=INT, beta=SCALAR [, l=SCALAR])
             | cube(n=INT)
             | affine(scale=[SCALAR,...], shift=[SCALAR,...], EXPR)
             | union(EXPR, EXPR, ... [, disjoint=1])
             | iunion(family=NAME(key=value, ...), index=INDEXSET, truncate=INT)
             | product(EXPR, EXPR, ...)
             | prune(EXPR, seed=INT)
             | symmetrize(EXPR)
    SCALAR   = [-] (INT | INT/INT | INT.DIGITS | pow(INT, [-]INT[/INT]))
    INDEXSET = { [INT, ...] [; start=INT] ; period=BITS }

symmetrize() expands at parse time, so printed text never contains it.
Scalars are kept exact: decimals become rationals, pow() with a rational
result is normalized (pow(2,-3) prints back as 1/8).  INDEXSET lists the
explicit members, then the 0/1 block repeated from `start` on (default:
one past the last explicit member).  union's optional `disjoint=1` records
a disjointness certificate so round-trips preserve it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    CapExceeded,
    FractalForgeError,
    FrxSemanticError,
    FrxSyntaxError,
    NoClosedForm,
)
from .expr import (
    AffineAxis,
    CantorPrim,
    CubePrim,
    Product,
    PrunePaths,
    SetExpr,
    UnionFinite,
    UnionIndexed,
    get_family,
    make_union_indexed,
    symmetrize,
)
from .cantor import Geometric, uniform_cantor
from .indexset import IndexSet
from .scalars import (
    Scalar,
    as_pow_form,
    canon_value,
    fmt_exact,
    is_rational,
    make_pow,
)

_SYMBOLS = set("()[]{},;=/-.")
_CONSTRUCTS = (
    "cantor",
    "cube",
    "affine",
    "union",
    "iunion",
    "product",
    "prune",
    "symmetrize",
)


@dataclass(frozen=True)
class Token:
    kind: str  # NAME | INT | SYM | EOF
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class FrxDocument:
    source: str
    expr: SetExpr
    spans: tuple[tuple[str, int, int], ...]


def _tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start = i
            start_col = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            toks.append(Token("INT", text[start:i], line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            start_col = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            toks.append(Token("NAME", text[start:i], line, start_col))
            continue
        if ch in _SYMBOLS:
            toks.append(Token("SYM", ch, line, col))
            i += 1
            col += 1
            continue
        raise FrxSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.spans: list[tuple[str, int, int]] = []

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        got = tok.text or tok.kind
        raise FrxSyntaxError(f"expected {expected}, got {got!r}", tok.line, tok.col)

    def expect_sym(self, sym: str) -> Token:
        tok = self.peek()
        if tok.kind != "SYM" or tok.text != sym:
            self.fail(f"'{sym}'")
        return self.next()

    def expect_name(self, name: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != "NAME" or (name is not None and tok.text != name):
            self.fail(f"'{name}'" if name else "a name")
        return self.next()

    def expect_int(self) -> int:
        neg = False
        if self.peek().kind == "SYM" and self.peek().text == "-":
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind != "INT":
            self.fail("an integer")
        self.next()
        v = int(tok.text)
        return -v if neg else v

    def at_sym(self, sym: str) -> bool:
        tok = self.peek()
        return tok.kind == "SYM" and tok.text == sym

    # -- scalars ----------------------------------------------------------

    def parse_scalar(self) -> Scalar:
        neg = False
        if self.at_sym("-"):
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "pow":
            self.next()
            self.expect_sym("(")
            base_tok = self.peek()
            base = self.expect_int()
            if base < 2:
                raise FrxSemanticError(
                    f"pow base must be >= 2, got {base}", base_tok.line, base_tok.col
                )
            self.expect_sym(",")
            num = self.expect_int()
            if self.at_sym("/"):
                self.next()
                den = self.expect_int()
                exp = Fraction(num, den)
            else:
                exp = Fraction(num)
            self.expect_sym(")")
            value = make_pow(base, exp)
            return canon_value(-value) if neg else value
        if tok.kind != "INT":
            self.fail("a number")
        self.next()
        if self.at_sym("/"):
            self.next()
            den_tok = self.peek()
            den = self.expect_int()
            if den == 0:
                raise FrxSemanticError("zero denominator", den_tok.line, den_tok.col)
            value = Fraction(int(tok.text), den)
        elif self.at_sym("."):
            self.next()
            frac_tok = self.peek()
            if frac_tok.kind != "INT":
                self.fail("decimal digits")
            self.next()
            value = Fraction(f"{tok.text}.{frac_tok.text}")
        else:
            value = Fraction(int(tok.text))
        return -value if neg else value

    def parse_scalar_list(self) -> tuple[Scalar, ...]:
        self.expect_sym("[")
        items = [self.parse_scalar()]
        while self.at_sym(","):
            self.next()
            items.append(self.parse_scalar())
        self.expect_sym("]")
        return tuple(items)

    # -- index sets ---------------------------------------------------------

    def parse_indexset(self) -> IndexSet:
        open_tok = self.expect_sym("{")
        explicit: list[int] = []
        if self.peek().kind == "INT":
            explicit.append(self.expect_int())
            while self.at_sym(","):
                self.next()
                explicit.append(self.expect_int())
        start: Optional[int] = None
        pattern: Optional[str] = None
        while self.at_sym(";"):
            self.next()
            key = self.expect_name()
            self.expect_sym("=")
            if key.text == "start":
                start = self.expect_int()
            elif key.text == "period":
                bits = self.peek()
                if bits.kind != "INT":
                    self.fail("period bits")
                self.next()
                pattern = bits.text
            else:
                self.fail("'start' or 'period'", key)
        self.expect_sym("}")
        if pattern is None:
            raise FrxSyntaxError(
                "index set needs a period clause", open_tok.line, open_tok.col
            )
        if start is None:
            start = (max(explicit) + 1) if explicit else 1
        try:
            return IndexSet(tuple(explicit), start, pattern)
        except FractalForgeError as e:
            raise FrxSemanticError(str(e), open_tok.line, open_tok.col) from e

    # -- named arguments ------------------------------------------------------

    def parse_key(self) -> Token:
        key = self.expect_name()
        self.expect_sym("=")
        return key

    # -- expressions ----------------------------------------------------------

    def parse_expr(self) -> SetExpr:
        tok = self.peek()
        if tok.kind != "NAME" or tok.text not in _CONSTRUCTS:
            self.fail("one of " + ", ".join(_CONSTRUCTS))
        self.next()
        self.spans.append((tok.text, tok.line, tok.col))
        self.expect_sym("(")
        try:
            if tok.text == "cantor":
                node = self._parse_cantor()
            elif tok.text == "cube":
                key = self.parse_key()
                if key.text != "n":
                    self.fail("'n'", key)
                node = CubePrim(self.expect_int())
            elif tok.text == "affine":
                node = self._parse_affine()
            elif tok.text == "union":
                node = self._parse_union()
            elif tok.text == "iunion":
                node = self._parse_iunion()
            elif tok.text == "product":
                children = [self.parse_expr()]
                while self.at_sym(","):
                    self.next()
                    children.append(self.parse_expr())
                node = Product(tuple(children))
            elif tok.text == "prune":
                child = self.parse_expr()
                self.expect_sym(",")
                key = self.parse_key()
                if key.text != "seed":
                    self.fail("'seed'", key)
                node = PrunePaths(child, self.expect_int())
            else:  # symmetrize
                node = symmetrize(self.parse_expr())
        except FrxSyntaxError:
            raise
        except FrxSemanticError as e:
            if e.line is None:  # attach the construct's span when missing
                raise FrxSemanticError(str(e), tok.line, tok.col) from e
            raise
        except CapExceeded:
            raise
        except FractalForgeError as e:
            raise FrxSemanticError(str(e), tok.line, tok.col) from e
        self.expect_sym(")")
        return node

    def _parse_cantor(self) -> SetExpr:
        fields: dict[str, object] = {}
        open_tok = self.peek()
        while True:
            key = self.parse_key()
            if key.text == "s":
                fields["s"] = self.expect_int()
            elif key.text in ("beta", "l"):
                fields[key.text] = self.parse_scalar()
            else:
                self.fail("'s', 'beta' or 'l'", key)
            if not self.at_sym(","):
                break
            self.next()
        if "s" not in fields or "beta" not in fields:
            raise FrxSyntaxError(
                "cantor needs s= and beta=", open_tok.line, open_tok.col
            )
        return CantorPrim(
            uniform_cantor(fields["s"], fields["beta"], fields.get("l", Fraction(0)))
        )

    def _parse_affine(self) -> SetExpr:
        key = self.parse_key()
        if key.text != "scale":
            self.fail("'scale'", key)
        scales = self.parse_scalar_list()
        self.expect_sym(",")
        key = self.parse_key()
        if key.text != "shift":
            self.fail("'shift'", key)
        shifts = self.parse_scalar_list()
        self.expect_sym(",")
        child = self.parse_expr()
        return AffineAxis(scales, shifts, child)

    def _parse_union(self) -> SetExpr:
        children = [self.parse_expr()]
        disjoint: Optional[bool] = None
        while self.at_sym(","):
            self.next()
            tok = self.peek()
            if tok.kind == "NAME" and tok.text == "disjoint":
                self.next()
                self.expect_sym("=")
                flag_tok = self.peek()
                flag = self.expect_int()
                if flag not in (0, 1):
                    raise FrxSemanticError(
                        "disjoint flag must be 0 or 1", flag_tok.line, flag_tok.col
                    )
                disjoint = bool(flag)
                break
            children.append(self.parse_expr())
        return UnionFinite(tuple(children), disjoint)

    def _parse_iunion(self) -> SetExpr:
        key = self.parse_key()
        if key.text != "family":
            self.fail("'family'", key)
        name_tok = self.expect_name()
        try:
            fam = get_family(name_tok.text)
        except FractalForgeError as e:
            raise FrxSemanticError(str(e), name_tok.line, name_tok.col) from e
        args: dict[str, object] = {}
        self.expect_sym("(")
        kinds = dict(fam.params)
        if kinds:
            while True:
                key = self.parse_key()
                if key.text not in kinds:
                    self.fail(
                        "one of " + ", ".join(k for k, _ in fam.params), key
                    )
                kind = kinds[key.text]
                if kind == "int":
                    args[key.text] = self.expect_int()
                elif kind == "scalar":
                    args[key.text] = self.parse_scalar()
                else:
                    args[key.text] = self.parse_indexset()
                if not self.at_sym(","):
                    break
                self.next()
        self.expect_sym(")")
        missing = [k for k, _ in fam.params if k not in args]
        if missing:
            raise FrxSemanticError(
                f"family {fam.name} needs {', '.join(missing)}",
                name_tok.line,
                name_tok.col,
            )
        self.expect_sym(",")
        key = self.parse_key()
        if key.text != "index":
            self.fail("'index'", key)
        index = self.parse_indexset()
        self.expect_sym(",")
        key = self.parse_key()
        if key.text != "truncate":
            self.fail("'truncate'", key)
        truncation = self.expect_int()
        return make_union_indexed(fam.name, args, index, truncation)


def parse_document(text: str) -> FrxDocument:
    parser = _Parser(text)
    expr = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "EOF":
        parser.fail("end of input")
    return FrxDocument(text, expr, tuple(parser.spans))


def parse_frx(text: str) -> SetExpr:
    return parse_document(text).expr


# ---------------------------------------------------------------------------
# canonical printer


def _emit_scalar(x: Scalar) -> str:
    if is_rational(x):
        return fmt_exact(x)
    form = as_pow_form(x)
    if form is not None:
        base, exp = form
        e = str(exp.numerator) if exp.denominator == 1 else f"{exp.numerator}/{exp.denominator}"
        return f"pow({base},{e})"
    raise NoClosedForm(f"no text form for scalar {x}")


def _emit_indexset(idx: IndexSet) -> str:
    body = ",".join(str(k) for k in idx.explicit)
    default_start = (max(idx.explicit) + 1) if idx.explicit else 1
    parts = [body]
    if idx.tail_start != default_start:
        parts.append(f" start={idx.tail_start}")
    parts.append(f" period={idx.pattern}")
    return "{" + ";".join(parts) + "}"


def emit_frx(expr: SetExpr) -> str:
    """Canonical one-line text; parse(emit_frx(e)) is structurally e."""
    if isinstance(expr, CantorPrim):
        fam = expr.spec.family
        if not isinstance(fam, Geometric):
            raise NoClosedForm(
                "only geometric-gap primitives have a text form"
            )
        return (
            f"cantor(s={expr.spec.s}, beta={_emit_scalar(fam.beta)}, "
            f"l={_emit_scalar(fam.l)})"
        )
    if isinstance(expr, CubePrim):
        return f"cube(n={expr.n})"
    if isinstance(expr, AffineAxis):
        scales = ",".join(_emit_scalar(a) for a in expr.scales)
        shifts = ",".join(_emit_scalar(b) for b in expr.shifts)
        return f"affine(scale=[{scales}], shift=[{shifts}], {emit_frx(expr.child)})"
    if isinstance(expr, UnionFinite):
        body = ", ".join(emit_frx(c) for c in expr.children)
        if expr.disjoint is not None:
            body += f", disjoint={int(expr.disjoint)}"
        return f"union({body})"
    if isinstance(expr, UnionIndexed):
        fam = get_family(expr.family)
        args = []
        values = dict(expr.args)
        for key, kind in fam.params:
            v = values[key]
            if kind == "int":
                args.append(f"{key}={v}")
            elif kind == "scalar":
                args.append(f"{key}={_emit_scalar(v)}")
            else:
                args.append(f"{key}={_emit_indexset(v)}")
        return (
            f"iunion(family={expr.family}({', '.join(args)}), "
            f"index={_emit_indexset(expr.index)}, truncate={expr.truncation})"
        )
    if isinstance(expr, Product):
        return "product(" + ", ".join(emit_frx(c) for c in expr.children) + ")"
    if isinstance(expr, PrunePaths):
        return f"prune({emit_frx(expr.child)}, seed={expr.seed})"
    raise NoClosedForm(f"no text form for {type(expr).__name__}")
