"""Line-oriented `.qnd` circuit description language.

Grammar (one statement per line, `#` starts a comment, blank lines ignored):

    modes s, i, t
    opa  NAME s i g=1.5
    bs   NAME a b t=0.5
    phase i phi=pi
    loss s l=0.1
    mod  s eps=0.01 delta=0.01
    homodyne NAME s angle=pi/2 [weight=0.7]
    combine  NAME = HD1 + HD2 - HD3

Angle expressions are a decimal number, `pi`, `N*pi` or `pi/N`.  Element
parameters are range-checked at parse time so users get positioned
diagnostics.  Instance labels on `opa`/`bs` are syntax only (checked for
uniqueness, not stored); `render` regenerates them deterministically, and
`parse(render(circuit))` reproduces the circuit structurally.  Canonical
output is LF-terminated with shortest round-trip decimals; CRLF input is
accepted.
"""

from __future__ import annotations

import math
import re

from .circuit import Circuit, Combine, Homodyne
from .gaussian import (
    BeamSplitter,
    GaussianStateError,
    LossChannel,
    Modulator,
    PhaseShift,
    TwoModeSqueezer,
)

_NUM_RE = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = ("modes", "opa", "bs", "phase", "loss", "mod", "homodyne", "combine")


class ParseError(ValueError):
    """Syntax or validation error with a source position."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"line {line}, col {col}: {message}{hint}")


class _Line:
    """Tokenized source line with column tracking."""

    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.tokens: list[tuple[str, int]] = []
        body = text.split("#", 1)[0]
        for m in re.finditer(r"\S+", body):
            tok = m.group(0)
            col = m.start() + 1
            # commas separate identifiers in `modes`; split them off as tokens
            for part in re.split(r"(,)", tok):
                if part:
                    self.tokens.append((part, col))
                    col += len(part)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self, what: str, expected: tuple[str, ...] = ()):
        if self.pos >= len(self.tokens):
            col = self.tokens[-1][1] + len(self.tokens[-1][0]) if self.tokens else 1
            raise ParseError(f"missing {what}", self.lineno, col, expected)
        tok, col = self.tokens[self.pos]
        self.pos += 1
        return tok, col

    def done(self) -> None:
        if self.pos < len(self.tokens):
            tok, col = self.tokens[self.pos]
            raise ParseError(f"unexpected trailing token {tok!r}", self.lineno, col)


def _parse_number(text: str, line: int, col: int, what: str) -> float:
    if re.fullmatch(_NUM_RE, text):
        return float(text)
    raise ParseError(f"{what} must be a number, got {text!r}", line, col, ("number",))


def _parse_angle(text: str, line: int, col: int, what: str) -> float:
    if text == "pi":
        return math.pi
    m = re.fullmatch(rf"({_NUM_RE})\*pi", text)
    if m:
        return float(m.group(1)) * math.pi
    m = re.fullmatch(rf"pi/({_NUM_RE})", text)
    if m:
        divisor = float(m.group(1))
        if divisor == 0.0:
            raise ParseError("division of pi by zero", line, col)
        return math.pi / divisor
    if re.fullmatch(_NUM_RE, text):
        return float(text)
    raise ParseError(
        f"{what} must be a number or pi expression, got {text!r}",
        line, col, ("number", "pi", "N*pi", "pi/N"),
    )


class _Parser:
    def __init__(self) -> None:
        self.modes: list[str] = []
        self.modes_declared = False
        self.elements: list = []
        self.spans: list[tuple[int, int]] = []
        self.readouts: list = []
        self.labels: set[str] = set()
        self.readout_names: set[str] = set()
        self.homodynes: dict[str, Homodyne] = {}

    def ident(self, line: _Line, what: str) -> tuple[str, int]:
        tok, col = line.next(what, ("identifier",))
        if not _IDENT_RE.match(tok):
            raise ParseError(f"{what} must be an identifier, got {tok!r}", line.lineno, col, ("identifier",))
        return tok, col

    def mode_ref(self, line: _Line, what: str = "mode name") -> int:
        name, col = self.ident(line, what)
        if name not in self.modes:
            raise ParseError(f"undeclared mode {name!r}", line.lineno, col, tuple(self.modes))
        return self.modes.index(name)

    def keyval(self, line: _Line, key: str, parser, what: str) -> tuple[float, int]:
        tok, col = line.next(f"{key}=...", (f"{key}=",))
        if not tok.startswith(key + "="):
            raise ParseError(f"expected {key}=..., got {tok!r}", line.lineno, col, (f"{key}=",))
        value_col = col + len(key) + 1
        return parser(tok[len(key) + 1 :], line.lineno, value_col, what), value_col

    def fresh_label(self, line: _Line, what: str) -> str:
        name, col = self.ident(line, what)
        if name in self.labels:
            raise ParseError(f"duplicate element label {name!r}", line.lineno, col)
        self.labels.add(name)
        return name

    def add_element(self, factory, line: _Line, col: int) -> None:
        try:
            element = factory()
        except GaussianStateError as exc:
            raise ParseError(str(exc), line.lineno, col) from None
        self.elements.append(element)
        self.spans.append((line.lineno, col))

    def statement(self, line: _Line) -> None:
        keyword, col = line.next("statement", _KEYWORDS)
        if keyword != "modes" and not self.modes_declared:
            raise ParseError("'modes' must be declared before any other statement", line.lineno, col, ("modes",))
        handler = getattr(self, f"stmt_{keyword}", None)
        if handler is None:
            raise ParseError(f"unknown statement {keyword!r}", line.lineno, col, _KEYWORDS)
        handler(line, col)
        line.done()

    def stmt_modes(self, line: _Line, col: int) -> None:
        if self.modes_declared:
            raise ParseError("duplicate 'modes' declaration", line.lineno, col)
        self.modes_declared = True
        expect_name = True
        while line.peek() is not None:
            tok, tcol = line.next("mode name", ("identifier",))
            if tok == ",":
                if expect_name:
                    raise ParseError("expected mode name before ','", line.lineno, tcol, ("identifier",))
                expect_name = True
                continue
            if not expect_name:
                raise ParseError(f"expected ',' before {tok!r}", line.lineno, tcol, (",",))
            if not _IDENT_RE.match(tok):
                raise ParseError(f"mode name must be an identifier, got {tok!r}", line.lineno, tcol, ("identifier",))
            if tok in self.modes:
                raise ParseError(f"duplicate mode name {tok!r}", line.lineno, tcol)
            self.modes.append(tok)
            expect_name = False
        if expect_name:
            raise ParseError("expected at least one mode name", line.lineno, col, ("identifier",))

    def stmt_opa(self, line: _Line, col: int) -> None:
        self.fresh_label(line, "opa label")
        a = self.mode_ref(line, "signal mode")
        b = self.mode_ref(line, "idler mode")
        g, gcol = self.keyval(line, "g", _parse_number, "g")
        if g < 0.0:
            raise ParseError(f"g {g} out of range, must be >= 0", line.lineno, gcol)
        self.add_element(lambda: TwoModeSqueezer(g, (a, b)), line, col)

    def stmt_bs(self, line: _Line, col: int) -> None:
        self.fresh_label(line, "bs label")
        a = self.mode_ref(line, "first mode")
        b = self.mode_ref(line, "second mode")
        t, tcol = self.keyval(line, "t", _parse_number, "t")
        if not 0.0 <= t <= 1.0:
            raise ParseError(f"t {t} out of [0, 1]", line.lineno, tcol)
        self.add_element(lambda: BeamSplitter(t, (a, b)), line, col)

    def stmt_phase(self, line: _Line, col: int) -> None:
        m = self.mode_ref(line)
        phi, _ = self.keyval(line, "phi", _parse_angle, "phi")
        self.add_element(lambda: PhaseShift(phi, m), line, col)

    def stmt_loss(self, line: _Line, col: int) -> None:
        m = self.mode_ref(line)
        l, lcol = self.keyval(line, "l", _parse_number, "l")
        if not 0.0 <= l <= 1.0:
            raise ParseError(f"l {l} out of [0, 1]", line.lineno, lcol)
        self.add_element(lambda: LossChannel(l, m), line, col)

    def stmt_mod(self, line: _Line, col: int) -> None:
        m = self.mode_ref(line)
        eps, _ = self.keyval(line, "eps", _parse_number, "eps")
        delta, _ = self.keyval(line, "delta", _parse_number, "delta")
        self.add_element(lambda: Modulator(eps, delta, m), line, col)

    def readout_name(self, line: _Line, what: str) -> str:
        name, col = self.ident(line, what)
        if name in self.readout_names:
            raise ParseError(f"duplicate readout name {name!r}", line.lineno, col)
        self.readout_names.add(name)
        return name

    def stmt_homodyne(self, line: _Line, col: int) -> None:
        name = self.readout_name(line, "homodyne name")
        m = self.mode_ref(line)
        angle, _ = self.keyval(line, "angle", _parse_angle, "angle")
        weight = 1.0
        if line.peek() is not None:
            weight, _ = self.keyval(line, "weight", _parse_number, "weight")
        hd = Homodyne(name, m, angle, weight)
        self.homodynes[name] = hd
        self.readouts.append(hd)

    def stmt_combine(self, line: _Line, col: int) -> None:
        name = self.readout_name(line, "combine name")
        eq, eqcol = line.next("'='", ("=",))
        if eq != "=":
            raise ParseError(f"expected '=', got {eq!r}", line.lineno, eqcol, ("=",))
        parts: list[tuple[float, str]] = []
        sign = 1.0
        if line.peek() in ("+", "-"):
            tok, _ = line.next("sign")
            sign = 1.0 if tok == "+" else -1.0
        while True:
            ref, rcol = self.ident(line, "homodyne reference")
            if ref not in self.homodynes:
                raise ParseError(f"combine references unknown homodyne {ref!r}", line.lineno, rcol,
                                 tuple(self.homodynes))
            parts.append((sign, ref))
            op = line.peek()
            if op is None:
                break
            tok, tcol = line.next("'+' or '-'", ("+", "-"))
            if tok == "+":
                sign = 1.0
            elif tok == "-":
                sign = -1.0
            else:
                raise ParseError(f"expected '+' or '-', got {tok!r}", line.lineno, tcol, ("+", "-"))
        self.readouts.append(Combine(name, tuple(parts)))

    def finish(self) -> Circuit:
        if not self.modes_declared:
            raise ParseError("missing 'modes' declaration", 1, 1, ("modes",))
        return Circuit(tuple(self.modes), tuple(self.elements), tuple(self.readouts), tuple(self.spans))


def parse(text: str) -> Circuit:
    """Parse `.qnd` text into a Circuit; raises ParseError with position info."""
    parser = _Parser()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _Line(raw, lineno)
        if line.peek() is None:
            continue
        parser.statement(line)
    return parser.finish()


def parse_file(path) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _fmt(x: float) -> str:
    return repr(float(x))


def render(circuit: Circuit) -> str:
    """Canonical `.qnd` text; parse(render(c)) equals c structurally."""
    lines = ["modes " + ", ".join(circuit.modes)]
    counters = {"opa": 0, "bs": 0}

    def label(kind: str) -> str:
        counters[kind] += 1
        return f"{kind.upper()}{counters[kind]}"

    for element in circuit.elements:
        if isinstance(element, TwoModeSqueezer):
            a, b = (circuit.modes[m] for m in element.modes)
            lines.append(f"opa {label('opa')} {a} {b} g={_fmt(element.gain)}")
        elif isinstance(element, BeamSplitter):
            a, b = (circuit.modes[m] for m in element.modes)
            lines.append(f"bs {label('bs')} {a} {b} t={_fmt(element.transmissivity)}")
        elif isinstance(element, PhaseShift):
            lines.append(f"phase {circuit.modes[element.mode]} phi={_fmt(element.angle)}")
        elif isinstance(element, LossChannel):
            lines.append(f"loss {circuit.modes[element.mode]} l={_fmt(element.loss)}")
        elif isinstance(element, Modulator):
            lines.append(
                f"mod {circuit.modes[element.mode]} eps={_fmt(element.eps)} delta={_fmt(element.delta)}"
            )
        else:
            raise TypeError(f"cannot render element {element!r}")
    for readout in circuit.readouts:
        if isinstance(readout, Homodyne):
            entry = f"homodyne {readout.name} {circuit.modes[readout.mode]} angle={_fmt(readout.angle)}"
            if readout.weight != 1.0:
                entry += f" weight={_fmt(readout.weight)}"
            lines.append(entry)
        else:
            body = ""
            for j, (sign, ref) in enumerate(readout.parts):
                if j == 0:
                    body = ref if sign >= 0 else f"- {ref}"
                else:
                    body += f" {'+' if sign >= 0 else '-'} {ref}"
            lines.append(f"combine {readout.name} = {body}")
    return "\n".join(lines) + "\n"
