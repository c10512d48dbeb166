"""Parser/renderer tests: grammar coverage, positioned errors, round-trips,
and parity between built-in scheme circuits and the shipped .qnd files."""

import math

import numpy as np
import pytest

from suilab import dsl
from suilab.circuit import Circuit, Combine, Homodyne
from suilab.dsl import ParseError, parse, render
from suilab.gaussian import BeamSplitter, LossChannel, Modulator, PhaseShift, TwoModeSqueezer
from suilab.schemes import (
    QND_DEFAULT_PARAMS,
    QND_DEFAULT_SIGNAL,
    SCHEMES,
    build_circuit,
    evaluate_circuit,
    shipped_circuit_path,
)

FIG6_TEXT = """modes s,i
opa P1 s i g=1.5
phase i phi=pi
opa P2 s i g=5
homodyne HD1 s angle=0
"""


class TestGrammar:
    def test_interferometer_example(self):
        circuit = parse(FIG6_TEXT)
        assert circuit.modes == ("s", "i")
        assert len(circuit.elements) == 3
        assert len(circuit.readouts) == 1
        assert isinstance(circuit.elements[0], TwoModeSqueezer)
        assert circuit.elements[1] == PhaseShift(math.pi, 1)
        assert circuit.elements[2].gain == 5.0

    def test_all_statement_kinds(self):
        text = """# full grammar tour
modes a, b, c

bs SPLIT a b t=0.25
loss c l=0.1
mod a eps=1e-2 delta=-2.5e-3
phase b phi=2*pi
homodyne H1 a angle=pi/4 weight=0.5
homodyne H2 b angle=-0.7
combine D = H1 - H2
"""
        circuit = parse(text)
        assert [type(e) for e in circuit.elements] == [BeamSplitter, LossChannel, Modulator, PhaseShift]
        assert circuit.elements[0].transmissivity == 0.25
        assert circuit.elements[2].delta == -2.5e-3
        assert circuit.elements[3].angle == pytest.approx(2.0 * math.pi)
        h1, h2, comb = circuit.readouts
        assert h1 == Homodyne("H1", 0, math.pi / 4.0, 0.5)
        assert h2.weight == 1.0
        assert comb == Combine("D", ((1.0, "H1"), (-1.0, "H2")))

    def test_crlf_accepted(self):
        circuit = parse(FIG6_TEXT.replace("\n", "\r\n"))
        assert len(circuit.elements) == 3

    def test_spans_recorded(self):
        circuit = parse(FIG6_TEXT)
        assert circuit.spans == ((2, 1), (3, 1), (4, 1))

    def test_spans_do_not_affect_equality(self):
        a = parse(FIG6_TEXT)
        b = Circuit(a.modes, a.elements, a.readouts)
        assert a == b


MALFORMED = [
    ("modes s\nloss s l=1.5", 2, "1.5 out of [0, 1]"),
    ("modes s,i\nbs B s s t=0.5", 2, "distinct"),
    ("opa P s i g=1", 1, "'modes' must be declared"),
    ("modes s, s", 1, "duplicate mode name"),
    ("modes s\nphase x phi=0", 2, "undeclared mode 'x'"),
    ("modes s, i\nopa P1 s i g=abc", 2, "must be a number"),
    ("modes s\nhomodyne H s angle=pi/0", 2, "division of pi by zero"),
    ("modes s\nmod s eps=0.1", 2, "missing eps=... or delta"),
    ("modes s\nhomodyne H s angle=0\ncombine C = H + Q", 3, "unknown homodyne 'Q'"),
    ("modes s\nfrobnicate s", 2, "unknown statement"),
    ("modes s\nloss s l=0.1 oops", 2, "trailing token"),
    ("modes s,i\nopa P1 s i g=1\nopa P1 i s g=2", 3, "duplicate element label"),
]


class TestDiagnostics:
    @pytest.mark.parametrize("text,line,fragment", MALFORMED)
    def test_malformed_inputs_point_at_the_problem(self, text, line, fragment):
        with pytest.raises(ParseError) as err:
            parse(text)
        assert err.value.line == line
        assert err.value.col >= 1
        if "missing" not in fragment:
            assert fragment in str(err.value)

    def test_out_of_range_column_points_at_value(self):
        with pytest.raises(ParseError) as err:
            parse("modes s\nloss s l=1.5")
        # column of the value inside "l=1.5"
        assert err.value.col == len("loss s l=") + 1

    def test_missing_modes_entirely(self):
        with pytest.raises(ParseError) as err:
            parse("# nothing but comments\n")
        assert "missing 'modes'" in str(err.value)


def _random_circuit(rng: np.random.Generator) -> Circuit:
    n_modes = int(rng.integers(1, 5))
    modes = tuple(f"m{k}" for k in range(n_modes))
    elements = []
    for _ in range(int(rng.integers(0, 8))):
        kind = int(rng.integers(0, 5))
        m = int(rng.integers(0, n_modes))
        if kind == 0 and n_modes >= 2:
            a, b = rng.choice(n_modes, size=2, replace=False)
            elements.append(BeamSplitter(float(rng.uniform(0, 1)), (int(a), int(b))))
        elif kind == 1 and n_modes >= 2:
            a, b = rng.choice(n_modes, size=2, replace=False)
            elements.append(TwoModeSqueezer(float(rng.uniform(0, 4)), (int(a), int(b))))
        elif kind == 2:
            elements.append(PhaseShift(float(rng.uniform(-7, 7)), m))
        elif kind == 3:
            elements.append(LossChannel(float(rng.uniform(0, 1)), m))
        else:
            elements.append(Modulator(float(rng.normal(0, 0.01)), float(rng.normal(0, 0.01)), m))
    readouts = []
    hd_names = []
    for k in range(int(rng.integers(0, 4))):
        name = f"H{k}"
        weight = 1.0 if rng.random() < 0.4 else float(rng.uniform(-2, 2))
        readouts.append(Homodyne(name, int(rng.integers(0, n_modes)), float(rng.uniform(-7, 7)), weight))
        hd_names.append(name)
    if hd_names and rng.random() < 0.6:
        size = int(rng.integers(1, len(hd_names) + 1))
        chosen = rng.choice(len(hd_names), size=size, replace=False)
        parts = tuple((1.0 if rng.random() < 0.5 else -1.0, hd_names[int(i)]) for i in chosen)
        readouts.append(Combine("C0", parts))
    return Circuit(modes, tuple(elements), tuple(readouts))


class TestRoundTrip:
    def test_parse_render_identity_on_random_circuits(self, rng):
        for _ in range(200):
            circuit = _random_circuit(rng)
            assert parse(render(circuit)) == circuit

    def test_render_is_canonical_fixed_point(self):
        text = FIG6_TEXT
        once = render(parse(text))
        assert render(parse(once)) == once

    def test_canonical_line_count_for_interferometer(self):
        # modes + opa/mod/phase/opa + two homodynes
        circuit = build_circuit("sui", QND_DEFAULT_PARAMS, QND_DEFAULT_SIGNAL)
        lines = [l for l in render(circuit).splitlines() if l and not l.startswith("#")]
        assert len(lines) == 7

    def test_canonical_output_uses_lf(self):
        assert "\r" not in render(parse(FIG6_TEXT.replace("\n", "\r\n")))


class TestBuiltinParity:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_shipped_circuit_matches_builder(self, scheme):
        shipped = dsl.parse(shipped_circuit_path(scheme).read_text(encoding="utf-8"))
        built = build_circuit(scheme, QND_DEFAULT_PARAMS, QND_DEFAULT_SIGNAL)
        assert shipped == built

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_shipped_circuit_reports_identically(self, scheme):
        shipped = dsl.parse(shipped_circuit_path(scheme).read_text(encoding="utf-8"))
        built = build_circuit(scheme, QND_DEFAULT_PARAMS, QND_DEFAULT_SIGNAL)
        a = evaluate_circuit(shipped, 50.0, scheme)
        b = evaluate_circuit(built, 50.0, scheme)
        assert a == b
