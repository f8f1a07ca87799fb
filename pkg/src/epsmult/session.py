"""Line-oriented session language: ring/ideal/filtration bindings and
experiment commands.

Grammar (one statement per line, ``#`` comments)::

    ring NAME = poly(VARS)
    ring NAME = semigroup vars(VARS) gens(TUPLES)
    ideal NAME = (MONOMIALS) | IDEAL_EXPR
    filtration NAME = powers(E) | valfilt((W):A/B, ...) | colonfam(F, E, n=N)
    cmd VERB TARGETS... key=value...

Ideal expressions combine names, ``maxideal``, ``power``, ``colon``,
``saturate``, ``sum``, ``product`` and ``intersect``.  Monomial literals and
``maxideal`` bind to the most recently declared ring.  Parsing validates
names, arities, and dimensions; evaluation happens at run time.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ArityError,
    DimensionMismatch,
    SessionSyntaxError,
    UnknownName,
)
from .rings import Vec

IDEAL_FUNCTIONS = {
    "power": ("ideal", "int"),
    "colon": ("ideal", "ideal"),
    "saturate": ("ideal",),
    "sum": ("ideal", "ideal"),
    "product": ("ideal", "ideal"),
    "intersect": ("ideal", "ideal"),
}

FILTRATION_FUNCTIONS = ("powers", "valfilt", "colonfam")

INT_OPTIONS = {"mmax", "nmax", "r", "rmax", "bound", "seed"}
RATIONAL_OPTIONS = {"threshold"}
TUPLE_OPTIONS = {"c"}

VERB_SPECS: dict[str, tuple[tuple[str, ...], frozenset[str], frozenset[str]]] = {
    "epsilon": (("filtration",), frozenset({"mmax", "bound", "threshold"}), frozenset()),
    "epsilon-colon": (("filtration", "ideal"), frozenset({"nmax", "bound", "threshold"}), frozenset()),
    "amao": (("ideal", "ideal"), frozenset({"mmax", "bound"}), frozenset()),
    "volume-table": (("ideal", "ideal"), frozenset({"nmax", "mmax", "bound"}), frozenset()),
    "spread": (("ideal",), frozenset(), frozenset()),
    "spread-family": (("filtration",), frozenset({"mmax", "bound"}), frozenset()),
    "check-ar": (("filtration",), frozenset({"r", "rmax", "mmax", "bound"}), frozenset()),
    "check-wg": (("filtration",), frozenset({"c", "mmax", "bound"}), frozenset({"c"})),
    "probe-noetherian": (("filtration",), frozenset({"mmax", "bound"}), frozenset()),
    "reproduce-example": ((), frozenset({"mmax", "nmax", "bound"}), frozenset()),
}


@dataclass(frozen=True)
class Name:
    value: str


@dataclass(frozen=True)
class MaxIdeal:
    ring: str


@dataclass(frozen=True)
class IdealLiteral:
    ring: str
    monomials: tuple[Vec, ...]


@dataclass(frozen=True)
class ValSpec:
    weights: Vec
    coeff: Fraction


@dataclass(frozen=True)
class ValFilt:
    ring: str
    specs: tuple[ValSpec, ...]


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class RingDecl:
    name: str
    kind: str
    var_names: tuple[str, ...]
    sgens: tuple[Vec, ...] | None


@dataclass(frozen=True)
class IdealDecl:
    name: str
    expr: object


@dataclass(frozen=True)
class FiltDecl:
    name: str
    expr: object


@dataclass(frozen=True)
class Command:
    verb: str
    targets: tuple
    options: tuple[tuple[str, object], ...]


@dataclass(frozen=True)
class Session:
    decls: tuple
    commands: tuple[Command, ...]


_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<comment>#.*)|(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_\-]*)|(?P<sym>[=(),:^*/])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


class _Lines:
    """Tokenized statement lines with a cursor per line."""

    def __init__(self, text: str):
        self.lines = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            toks = self._scan(raw, lineno)
            if toks:
                self.lines.append(toks)

    @staticmethod
    def _scan(raw: str, lineno: int) -> list[_Tok]:
        toks = []
        pos = 0
        while pos < len(raw):
            m = _TOKEN.match(raw, pos)
            if m is None:
                raise SessionSyntaxError(
                    f"unexpected character {raw[pos]!r}", lineno, pos + 1, raw[pos]
                )
            if m.lastgroup == "num":
                toks.append(_Tok("num", m.group(), lineno, pos + 1))
            elif m.lastgroup == "ident":
                toks.append(_Tok("ident", m.group(), lineno, pos + 1))
            elif m.lastgroup == "sym":
                toks.append(_Tok(m.group(), m.group(), lineno, pos + 1))
            pos = m.end()
        return toks


class _Parser:
    def __init__(self, text: str):
        self.rings: dict[str, tuple[str, ...]] = {}
        self.kinds: dict[str, str] = {}
        self.current_ring: str | None = None
        self.decls: list = []
        self.commands: list[Command] = []
        self.toks: list[_Tok] = []
        self.pos = 0
        self.line = 0
        self._text = text

    def parse(self) -> Session:
        for toks in _Lines(self._text).lines:
            self.toks = toks
            self.pos = 0
            self.line = toks[0].line
            head = self._expect_ident()
            if head == "ring":
                self._ring_decl()
            elif head == "ideal":
                self._ideal_decl()
            elif head == "filtration":
                self._filt_decl()
            elif head == "cmd":
                self._command()
            else:
                self._fail_syntax(f"expected a declaration or cmd, got {head!r}")
            if self.pos != len(self.toks):
                tok = self.toks[self.pos]
                raise SessionSyntaxError(
                    f"trailing input {tok.text!r}", tok.line, tok.col, tok.text
                )
        return Session(tuple(self.decls), tuple(self.commands))

    # token helpers ------------------------------------------------------

    def _peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _next(self) -> _Tok:
        tok = self._peek()
        if tok is None:
            last = self.toks[-1]
            raise SessionSyntaxError(
                "unexpected end of line", last.line, last.col + len(last.text), ""
            )
        self.pos += 1
        return tok

    def _expect(self, kind: str) -> _Tok:
        tok = self._next()
        if tok.kind != kind:
            raise SessionSyntaxError(
                f"expected {kind!r}, got {tok.text!r}", tok.line, tok.col, tok.text
            )
        return tok

    def _expect_ident(self, value: str | None = None) -> str:
        tok = self._expect("ident")
        if value is not None and tok.text != value:
            raise SessionSyntaxError(
                f"expected {value!r}, got {tok.text!r}", tok.line, tok.col, tok.text
            )
        return tok.text

    def _expect_int(self) -> int:
        tok = self._expect("num")
        return int(tok.text)

    def _fail_syntax(self, message: str):
        tok = self.toks[min(self.pos, len(self.toks) - 1)]
        raise SessionSyntaxError(message, tok.line, tok.col, tok.text)

    # declarations -------------------------------------------------------

    def _bind(self, name: str, kind: str, tok: _Tok):
        if name in self.kinds:
            raise UnknownName(f"name {name!r} is already bound", tok.line, tok.col, name)
        self.kinds[name] = kind

    def _ring_decl(self):
        name_tok = self._expect("ident")
        name = name_tok.text
        self._expect("=")
        head = self._expect_ident()
        if head == "poly":
            names = self._name_list()
            decl = RingDecl(name, "poly", names, None)
        elif head == "semigroup":
            self._expect_ident("vars")
            names = self._name_list()
            self._expect_ident("gens")
            gens = self._tuple_list()
            dim = len(names)
            for g in gens:
                if len(g) != dim:
                    raise DimensionMismatch(
                        f"generator {g} does not match the {dim} declared variables",
                        self.line, name_tok.col, name,
                    )
            decl = RingDecl(name, "semigroup", names, gens)
        else:
            self._fail_syntax(f"unknown ring constructor {head!r}")
            return
        self._bind(name, "ring", name_tok)
        self.rings[name] = decl.var_names
        self.current_ring = name
        self.decls.append(decl)

    def _ideal_decl(self):
        name_tok = self._expect("ident")
        self._expect("=")
        expr = self._ideal_expr()
        self._bind(name_tok.text, "ideal", name_tok)
        self.decls.append(IdealDecl(name_tok.text, expr))

    def _filt_decl(self):
        name_tok = self._expect("ident")
        self._expect("=")
        expr = self._filt_expr()
        self._bind(name_tok.text, "filtration", name_tok)
        self.decls.append(FiltDecl(name_tok.text, expr))

    def _name_list(self) -> tuple[str, ...]:
        self._expect("(")
        names = [self._expect_ident()]
        while self._peek() and self._peek().kind == ",":
            self._next()
            names.append(self._expect_ident())
        self._expect(")")
        return tuple(names)

    def _tuple_list(self) -> tuple[Vec, ...]:
        self._expect("(")
        out = [self._tuple_value()]
        while self._peek() and self._peek().kind == ",":
            self._next()
            out.append(self._tuple_value())
        self._expect(")")
        return tuple(out)

    def _tuple_value(self) -> Vec:
        self._expect("(")
        coords = [self._expect_int()]
        while self._peek() and self._peek().kind == ",":
            self._next()
            coords.append(self._expect_int())
        self._expect(")")
        return tuple(coords)

    # expressions --------------------------------------------------------

    def _require_ring(self, tok: _Tok) -> str:
        if self.current_ring is None:
            raise UnknownName("no ring has been declared yet", tok.line, tok.col, tok.text)
        return self.current_ring

    def _ideal_expr(self):
        tok = self._peek()
        if tok is None:
            self._fail_syntax("expected an ideal expression")
        if tok.kind == "(":
            return self._ideal_literal()
        name = self._expect_ident()
        if name == "maxideal":
            return MaxIdeal(self._require_ring(tok))
        if name in IDEAL_FUNCTIONS:
            return self._call(name, tok)
        if name in FILTRATION_FUNCTIONS:
            raise ArityError(
                f"{name!r} builds a filtration, not an ideal", tok.line, tok.col, name
            )
        kind = self.kinds.get(name)
        if kind is None:
            raise UnknownName(f"unknown name {name!r}", tok.line, tok.col, name)
        if kind != "ideal":
            raise ArityError(
                f"{name!r} is a {kind}, expected an ideal", tok.line, tok.col, name
            )
        return Name(name)

    def _call(self, fn: str, tok: _Tok) -> Call:
        sig = IDEAL_FUNCTIONS[fn]
        self._expect("(")
        args = []
        for i, want in enumerate(sig):
            if i:
                nxt = self._peek()
                if nxt is None or nxt.kind == ")":
                    raise ArityError(
                        f"{fn} takes {len(sig)} argument(s)",
                        tok.line, tok.col, fn,
                    )
                self._expect(",")
            if want == "ideal":
                args.append(self._ideal_expr())
            else:
                args.append(self._expect_int())
        close = self._peek()
        if close is not None and close.kind == ",":
            raise ArityError(
                f"{fn} takes {len(sig)} argument(s)", close.line, close.col, close.text
            )
        self._expect(")")
        return Call(fn, tuple(args))

    def _ideal_literal(self) -> IdealLiteral:
        open_tok = self._expect("(")
        ring = self._require_ring(open_tok)
        var_names = self.rings[ring]
        monomials = []
        if self._peek() and self._peek().kind != ")":
            monomials.append(self._monomial(var_names))
            while self._peek() and self._peek().kind == ",":
                self._next()
                monomials.append(self._monomial(var_names))
        self._expect(")")
        return IdealLiteral(ring, tuple(monomials))

    def _monomial(self, var_names: tuple[str, ...]) -> Vec:
        coords = [0] * len(var_names)
        tok = self._peek()
        if tok is not None and tok.kind == "num":
            one = self._next()
            if one.text != "1":
                raise SessionSyntaxError(
                    "a monomial is '1' or variables joined by '*'",
                    one.line, one.col, one.text,
                )
            return tuple(coords)
        while True:
            var_tok = self._expect("ident")
            if var_tok.text not in var_names:
                raise UnknownName(
                    f"unknown variable {var_tok.text!r}",
                    var_tok.line, var_tok.col, var_tok.text,
                )
            exp = 1
            if self._peek() and self._peek().kind == "^":
                self._next()
                exp = self._expect_int()
            coords[var_names.index(var_tok.text)] += exp
            if self._peek() and self._peek().kind == "*":
                self._next()
                continue
            return tuple(coords)

    def _filt_expr(self):
        tok = self._peek()
        if tok is None:
            self._fail_syntax("expected a filtration expression")
        name = self._expect_ident()
        if name == "powers":
            self._expect("(")
            inner = self._ideal_expr()
            self._expect(")")
            return Call("powers", (inner,))
        if name == "valfilt":
            ring = self._require_ring(tok)
            self._expect("(")
            specs = [self._val_spec()]
            while self._peek() and self._peek().kind == ",":
                self._next()
                specs.append(self._val_spec())
            self._expect(")")
            return ValFilt(ring, tuple(specs))
        if name == "colonfam":
            self._expect("(")
            base = self._filt_expr()
            self._expect(",")
            mult = self._ideal_expr()
            self._expect(",")
            key_tok = self._peek()
            if key_tok is None or key_tok.kind != "ident" or key_tok.text != "n":
                where = key_tok if key_tok is not None else tok
                raise ArityError(
                    "colonfam takes its scale as n=N",
                    where.line, where.col, where.text,
                )
            self._next()
            self._expect("=")
            n = self._expect_int()
            self._expect(")")
            return Call("colonfam", (base, mult, n))
        kind = self.kinds.get(name)
        if kind is None:
            raise UnknownName(f"unknown name {name!r}", tok.line, tok.col, name)
        if kind != "filtration":
            raise ArityError(
                f"{name!r} is a {kind}, expected a filtration", tok.line, tok.col, name
            )
        return Name(name)

    def _val_spec(self) -> ValSpec:
        tok = self._peek()
        weights = self._tuple_value()
        if self.current_ring is not None:
            dim = len(self.rings[self.current_ring])
            if len(weights) != dim:
                raise DimensionMismatch(
                    f"weight vector {weights} does not match the ambient dimension {dim}",
                    tok.line, tok.col, tok.text,
                )
        self._expect(":")
        coeff = self._rational()
        try:
            return ValSpec(weights, coeff)
        except ValueError as exc:
            raise SessionSyntaxError(str(exc), tok.line, tok.col, tok.text) from None

    def _rational(self) -> Fraction:
        num = self._expect_int()
        if self._peek() and self._peek().kind == "/":
            self._next()
            den = self._expect_int()
            if den == 0:
                self._fail_syntax("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    # commands -----------------------------------------------------------

    def _command(self):
        verb_tok = self._expect("ident")
        verb = verb_tok.text
        signature = VERB_SPECS.get(verb)
        if signature is None:
            raise UnknownName(f"unknown command verb {verb!r}",
                              verb_tok.line, verb_tok.col, verb)
        target_kinds, allowed, required = signature
        targets = []
        for want in target_kinds:
            tok = self._peek()
            if tok is None or (tok.kind == "ident" and self._is_option_start()):
                raise ArityError(
                    f"{verb} expects {len(target_kinds)} target(s)",
                    verb_tok.line, verb_tok.col, verb,
                )
            targets.append(self._ideal_expr() if want == "ideal" else self._filt_expr())
        options = []
        seen = set()
        while self._peek() is not None:
            key_tok = self._expect("ident")
            key = key_tok.text
            if key not in allowed:
                raise ArityError(
                    f"{verb} does not take option {key!r}",
                    key_tok.line, key_tok.col, key,
                )
            if key in seen:
                raise ArityError(
                    f"duplicate option {key!r}", key_tok.line, key_tok.col, key
                )
            seen.add(key)
            self._expect("=")
            options.append((key, self._option_value(key, key_tok)))
        missing = required - seen
        if missing:
            raise ArityError(
                f"{verb} requires option(s) {sorted(missing)}",
                verb_tok.line, verb_tok.col, verb,
            )
        if verb == "check-ar" and not ({"r", "rmax"} & seen):
            raise ArityError(
                "check-ar requires r=N or rmax=N", verb_tok.line, verb_tok.col, verb
            )
        if verb == "reproduce-example":
            opts = dict(options)
            if opts.get("mmax", 6) < 6 or opts.get("nmax", 4) < 4:
                raise ArityError(
                    "reproduce-example requires mmax >= 6 and nmax >= 4",
                    verb_tok.line, verb_tok.col, verb,
                )
        self.commands.append(Command(verb, tuple(targets), tuple(options)))

    def _is_option_start(self) -> bool:
        nxt = self.toks[self.pos + 1] if self.pos + 1 < len(self.toks) else None
        return nxt is not None and nxt.kind == "="

    def _option_value(self, key: str, tok: _Tok):
        if key in TUPLE_OPTIONS:
            return self._tuple_value()
        if key in RATIONAL_OPTIONS:
            value = self._rational()
            if value <= 0:
                raise ArityError(f"option {key!r} must be positive",
                                 tok.line, tok.col, key)
            return value
        value = self._expect_int()
        if value < 1:
            raise ArityError(f"option {key!r} must be positive",
                             tok.line, tok.col, key)
        return value


def parse_session(text: str) -> Session:
    """Parse and validate session text; errors carry line and column."""
    return _Parser(text).parse()


# canonical printing -----------------------------------------------------


def format_monomial(exps: Vec, var_names: tuple[str, ...]) -> str:
    parts = []
    for name, e in zip(var_names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_ideal_gens(gens, var_names: tuple[str, ...]) -> str:
    return "(" + ", ".join(format_monomial(g, var_names) for g in gens) + ")"


def _format_tuple(v: Vec) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return _format_tuple(v)
    return str(v)


def _format_expr(expr, rings: dict[str, tuple[str, ...]]) -> str:
    if isinstance(expr, Name):
        return expr.value
    if isinstance(expr, MaxIdeal):
        return "maxideal"
    if isinstance(expr, IdealLiteral):
        return format_ideal_gens(expr.monomials, rings[expr.ring])
    if isinstance(expr, ValSpec):
        return f"{_format_tuple(expr.weights)}:{expr.coeff}"
    if isinstance(expr, ValFilt):
        specs = ", ".join(_format_expr(s, rings) for s in expr.specs)
        return f"valfilt({specs})"
    if isinstance(expr, Call):
        if expr.fn == "colonfam":
            base, mult, n = expr.args
            inner = f"{_format_expr(base, rings)}, {_format_expr(mult, rings)}, n={n}"
            return f"colonfam({inner})"
        parts = [
            _format_expr(a, rings) if not isinstance(a, int) else str(a)
            for a in expr.args
        ]
        return f"{expr.fn}(" + ", ".join(parts) + ")"
    raise TypeError(f"cannot format {expr!r}")


def format_session(session: Session) -> str:
    """Canonical text for a session; reparsing yields an equal session."""
    rings: dict[str, tuple[str, ...]] = {}
    lines = []
    for decl in session.decls:
        if isinstance(decl, RingDecl):
            rings[decl.name] = decl.var_names
            if decl.kind == "poly":
                lines.append(f"ring {decl.name} = poly({','.join(decl.var_names)})")
            else:
                gens = ",".join(_format_tuple(g) for g in decl.sgens)
                lines.append(
                    f"ring {decl.name} = semigroup vars({','.join(decl.var_names)}) "
                    f"gens({gens})"
                )
        elif isinstance(decl, IdealDecl):
            lines.append(f"ideal {decl.name} = {_format_expr(decl.expr, rings)}")
        else:
            lines.append(f"filtration {decl.name} = {_format_expr(decl.expr, rings)}")
    for cmd in session.commands:
        parts = [f"cmd {cmd.verb}"]
        parts.extend(_format_expr(t, rings) for t in cmd.targets)
        parts.extend(f"{k}={_format_value(v)}" for k, v in cmd.options)
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")
