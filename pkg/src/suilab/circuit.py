"""Circuit container: named modes, an ordered element list and a readout plan.

The same structure backs both the built-in scheme builders and circuits
parsed from `.qnd` text.  Elements reference modes by index; the circuit
keeps the declared names for rendering and diagnostics.  Source spans from
the parser are carried along but excluded from structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gaussian import CircuitElement


@dataclass(frozen=True)
class Homodyne:
    """One homodyne detector: measures weight * X(angle) on a mode."""

    name: str
    mode: int
    angle: float
    weight: float = 1.0


@dataclass(frozen=True)
class Combine:
    """Photocurrent sum/difference of previously declared homodynes."""

    name: str
    parts: tuple[tuple[float, str], ...]  # (sign, homodyne name)


Readout = Homodyne | Combine


@dataclass(frozen=True)
class Circuit:
    modes: tuple[str, ...]
    elements: tuple[CircuitElement, ...]
    readouts: tuple[Readout, ...]
    spans: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(set(self.modes)) != len(self.modes):
            raise ValueError("duplicate mode names")
        names = [r.name for r in self.readouts]
        if len(set(names)) != len(names):
            raise ValueError("duplicate readout names")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def mode_index(self, name: str) -> int:
        try:
            return self.modes.index(name)
        except ValueError:
            raise KeyError(f"undeclared mode {name!r}") from None

    def homodyne(self, name: str) -> Homodyne:
        for r in self.readouts:
            if isinstance(r, Homodyne) and r.name == name:
                return r
        raise KeyError(f"no homodyne named {name!r}")

    def readout_terms(self, readout: Readout) -> list[tuple[int, float, float]]:
        """Resolve a readout to (mode, angle, weight) terms for combined_stats."""
        if isinstance(readout, Homodyne):
            return [(readout.mode, readout.angle, readout.weight)]
        terms: list[tuple[int, float, float]] = []
        for sign, hd_name in readout.parts:
            hd = self.homodyne(hd_name)
            terms.append((hd.mode, hd.angle, sign * hd.weight))
        return terms

    def reported_readouts(self) -> list[Readout]:
        """Readouts that appear in reports: combines plus unconsumed homodynes."""
        consumed = {
            hd_name
            for r in self.readouts
            if isinstance(r, Combine)
            for _, hd_name in r.parts
        }
        return [
            r
            for r in self.readouts
            if isinstance(r, Combine) or r.name not in consumed
        ]
