"""Graph-diagonal mixed states as coefficient vectors, plus Pauli noise channels.

A state is a normalized vector of 2^n nonnegative coefficients indexed by the
syndrome integer; the coefficient at index 0 is the fidelity with the target
graph state. Every channel here acts as an XOR shuffle of probability mass
between indices, so trace is preserved exactly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BadDistribution, BadParam, NegativeCoefficient
from .graphs import Graph, syndrome_parts

NEG_SLACK = 1e-15  # coefficients above -NEG_SLACK are clamped, below raise
NORM_TOL = 1e-12


class PauliAxis(Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


@dataclass(frozen=True)
class GDState:
    """A graph-diagonal state: graph reference plus its coefficient vector."""

    graph: Graph
    lam: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.lam, dtype=np.float64)
        if vec.shape != (self.graph.dim,):
            raise BadParam(f"coefficient vector has shape {vec.shape}, expected ({self.graph.dim},)")
        low = vec.min()
        if low < -NEG_SLACK:
            raise NegativeCoefficient(f"coefficient {low} below -{NEG_SLACK}")
        if low < 0.0:
            vec = np.maximum(vec, 0.0)
        object.__setattr__(self, "lam", vec)

    @property
    def fidelity(self) -> float:
        return float(self.lam[0])

    def normalized(self) -> "GDState":
        total = self.lam.sum()
        if total <= 0.0:
            raise BadParam("cannot normalize a zero state")
        return GDState(self.graph, self.lam / total)

    def check_normalized(self) -> None:
        total = self.lam.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise BadParam(f"coefficients sum to {total}, not 1")

    def to_csv(self) -> str:
        """Nonzero coefficients as CSV rows: index, a_part, b_part, lambda."""
        buf = io.StringIO()
        buf.write("index,a_part,b_part,lambda\n")
        for idx in np.nonzero(self.lam)[0]:
            a, b = syndrome_parts(self.graph, int(idx))
            buf.write(f"{int(idx)},{a},{b},{self.lam[idx]:.17g}\n")
        return buf.getvalue()


def pure_target(g: Graph) -> GDState:
    """The pure target state: all weight on syndrome 0."""
    lam = np.zeros(g.dim)
    lam[0] = 1.0
    return GDState(g, lam)


def uniform_state(g: Graph) -> GDState:
    """The completely depolarized state: uniform weight on every syndrome."""
    return GDState(g, np.full(g.dim, 1.0 / g.dim))


def pauli_flip_mask(g: Graph, v: int, axis: PauliAxis) -> int:
    """Syndrome bits toggled by a Pauli on vertex v.

    Z toggles the vertex's own bit, X toggles all neighbor bits, Y both:
    conjugating a graph-basis projector by the Pauli moves index m to
    m ^ mask.
    """
    if not 0 <= v < g.n:
        raise BadParam(f"vertex {v} out of range for n={g.n}")
    if axis is PauliAxis.Z:
        return 1 << v
    if axis is PauliAxis.X:
        return g.neighbor_mask[v]
    return (1 << v) ^ g.neighbor_mask[v]


def _validate_probs(probs) -> tuple[float, float, float, float]:
    if len(probs) != 4:
        raise BadDistribution(f"need 4 probabilities, got {len(probs)}")
    p = tuple(float(x) for x in probs)
    if min(p) < 0.0:
        raise BadDistribution(f"negative probability in {p}")
    if abs(sum(p) - 1.0) > NORM_TOL:
        raise BadDistribution(f"probabilities sum to {sum(p)}, not 1")
    return p


def apply_pauli_channel(s: GDState, v: int, probs) -> GDState:
    """Mix s with its images under single-qubit Paulis on vertex v.

    probs is (p_I, p_X, p_Y, p_Z). Mass at index m moves to m ^ flip_mask
    for each Pauli branch, so the coefficient sum is conserved exactly.
    """
    p_i, p_x, p_y, p_z = _validate_probs(probs)
    idx = np.arange(s.graph.dim)
    lam = p_i * s.lam
    for p, axis in ((p_x, PauliAxis.X), (p_y, PauliAxis.Y), (p_z, PauliAxis.Z)):
        if p != 0.0:
            lam = lam + p * s.lam[idx ^ pauli_flip_mask(s.graph, v, axis)]
    return GDState(s.graph, lam)


def depolarizing_channel(s: GDState, v: int, q: float) -> GDState:
    """Single-qubit depolarizing noise: keep with probability q, else replace
    the qubit by the maximally mixed state. Equals the uniform Pauli mix with
    p_I = q + (1-q)/4."""
    if not 0.0 <= q <= 1.0:
        raise BadParam(f"q={q} outside [0,1]")
    r = (1.0 - q) / 4.0
    return apply_pauli_channel(s, v, (q + r, r, r, r))


def prepared_with_channel_noise(g: Graph, q: float) -> GDState:
    """Target state after sending each particle through a depolarizing channel
    of quality q (the per-particle transmission-noise input family)."""
    if not 0.0 <= q <= 1.0:
        raise BadParam(f"q={q} outside [0,1]")
    s = pure_target(g)
    for v in range(g.n):
        s = depolarizing_channel(s, v, q)
    return s


def global_white(g: Graph, x: float) -> GDState:
    """Mixture of the target state with the completely depolarized state:
    weight x on the target plus (1-x) spread uniformly."""
    if not 0.0 <= x <= 1.0:
        raise BadParam(f"x={x} outside [0,1]")
    lam = np.full(g.dim, (1.0 - x) / g.dim)
    lam[0] += x
    return GDState(g, lam)


def rho_a_family(g: Graph, f: float) -> GDState:
    """One-parameter family supported on pure-B syndromes: weight f at 0 and
    the rest spread evenly over the 2^n_a - 1 other indices with b_part 0."""
    if g.n_a == 0:
        raise BadParam("graph has no A-vertices; the family is degenerate")
    if not 0.0 <= f <= 1.0:
        raise BadParam(f"f={f} outside [0,1]")
    from .transforms import spread_submasks

    a_indices = spread_submasks(g.a_mask)
    lam = np.zeros(g.dim)
    lam[a_indices[1:]] = (1.0 - f) / (len(a_indices) - 1)
    lam[0] = f
    return GDState(g, lam)


def bitflip_b_noise(s: GDState, p: float) -> GDState:
    """Bit-flip noise restricted to the B-vertices: each keeps its state with
    probability (1+p)/2 and suffers an X flip with probability (1-p)/2."""
    if not 0.0 <= p <= 1.0:
        raise BadParam(f"p={p} outside [0,1]")
    flip = (1.0 - p) / 2.0
    out = s
    for v in sorted(s.graph.b_vertices):
        out = apply_pauli_channel(out, v, (1.0 - flip, flip, 0.0, 0.0))
    return out
