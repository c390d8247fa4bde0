"""The two recurrence purification steps and the iteration driver.

Each step consumes two identical copies of the current state. The surviving
copy's coefficient update is an XOR self-convolution over one color class
with coincidence on the other, which the fast path evaluates with
Walsh-Hadamard butterflies over the relevant bit subset. Gate noise
(depolarizing every qubit of both copies before the perfect gate layer) and
classical measurement-outcome flips both become pointwise multipliers in the
transform domain, so a full noisy step costs O(2^n * n).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BadParam, ZeroSuccess
from .graphs import Graph
from .states import GDState, depolarizing_channel
from .transforms import sign_lookup, spread_submasks, wht_bits

REL_NEG_TOL = 1e-12  # transform roundoff guard on unnormalized outputs


class Protocol(Enum):
    P1 = "P1"
    P2 = "P2"


class ConvMode(Enum):
    FAST = "fast"
    NAIVE = "naive"


class Verdict(Enum):
    CONVERGED = "converged"
    STALLED = "stalled"
    DIVERGED = "diverged"
    MAX_ROUNDS = "max-rounds"


@dataclass(frozen=True)
class StepResult:
    state: GDState
    p_succ: float
    protocol_used: Protocol


@dataclass(frozen=True)
class TraceRow:
    round: int
    protocol: str
    f_before: float
    f_after: float
    p_succ: float


@dataclass(frozen=True)
class PurificationTrace:
    rows: tuple[TraceRow, ...]
    verdict: Verdict
    expected_cost: float
    final_state: GDState

    @property
    def final_fidelity(self) -> float:
        return self.final_state.fidelity

    def to_csv(self) -> str:
        lines = ["round,protocol,F_before,F_after,p_succ,cumulative_expected_cost"]
        cost = 1.0
        for row in self.rows:
            cost *= 2.0 / row.p_succ
            lines.append(
                f"{row.round},{row.protocol},{row.f_before:.17g},"
                f"{row.f_after:.17g},{row.p_succ:.17g},{cost:.17g}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StopRule:
    """Loop termination: converged when F >= 1 - eps, stalled when |dF| < tol
    over one full schedule period, diverged when F drops below 2^-n."""

    eps: float = 1e-6
    tol: float = 1e-12
    r_max: int = 200


@lru_cache(maxsize=256)
def _depolarize_multiplier(g: Graph, q: float) -> np.ndarray:
    """Transform-domain multiplier of one depolarizing pass over every vertex.

    The per-vertex kernel transforms to 1 on characters orthogonal to both
    the vertex bit and its neighbor mask, and to q elsewhere, so the composed
    multiplier is q to the number of violated vertices.
    """
    idx = np.arange(g.dim, dtype=np.uint64)
    violated = np.zeros(g.dim, dtype=np.int64)
    for v in range(g.n):
        own = ((idx >> np.uint64(v)) & np.uint64(1)).astype(np.int64)
        nbr = (np.bitwise_count(idx & np.uint64(g.neighbor_mask[v])) & np.uint64(1)).astype(np.int64)
        violated += own | nbr
    return np.float_power(q, violated)


@lru_cache(maxsize=256)
def _measure_flip_multiplier(g: Graph, f_m: float, which: Protocol) -> np.ndarray:
    """Transform-domain multiplier of the recorded-syndrome flip distribution.

    Each measured qubit flips its classical outcome independently with
    probability f_m; a flip on a checked-set vertex toggles its own syndrome
    bit, a flip on the other set toggles the syndrome bits of its neighbors.
    """
    checked = g.a_vertices if which is Protocol.P1 else g.b_vertices
    mult = np.ones(g.dim)
    for v in range(g.n):
        mask = (1 << v) if v in checked else g.neighbor_mask[v]
        mult *= (1.0 - f_m) + f_m * sign_lookup(g.n, mask)
    return mult


def _xor_square(lam: np.ndarray, n: int, conv_mask: int, mode: ConvMode) -> np.ndarray:
    if mode is ConvMode.FAST:
        spectrum = wht_bits(lam, n, conv_mask)
        return wht_bits(spectrum * spectrum, n, conv_mask, inverse=True)
    # NAIVE: evaluate the double sum block by block over the coincidence bits
    full = (1 << n) - 1
    coin_subs = spread_submasks(full ^ conv_mask)
    conv_subs = spread_submasks(conv_mask)
    ranks = np.arange(len(conv_subs))
    out = np.zeros_like(lam)
    for base in coin_subs:
        block = lam[base + conv_subs]
        acc = np.zeros_like(block)
        for i in range(len(conv_subs)):
            acc[ranks ^ i] += block[i] * block
        out[base + conv_subs] = acc
    return out


def _xor_cross_naive(a: np.ndarray, b: np.ndarray, n: int, conv_mask: int) -> np.ndarray:
    """Direct-sum XOR cross-convolution of two vectors over conv_mask bits."""
    full = (1 << n) - 1
    coin_subs = spread_submasks(full ^ conv_mask)
    conv_subs = spread_submasks(conv_mask)
    ranks = np.arange(len(conv_subs))
    out = np.zeros_like(a)
    for base in coin_subs:
        block_a = a[base + conv_subs]
        block_b = b[base + conv_subs]
        acc = np.zeros_like(block_a)
        for i in range(len(conv_subs)):
            acc[ranks ^ i] += block_a[i] * block_b
        out[base + conv_subs] = acc
    return out


def xor_square_over_b(lam: np.ndarray, g: Graph, mode: ConvMode = ConvMode.FAST) -> np.ndarray:
    """Unnormalized coefficient update of a perfect information-extraction
    round: XOR self-convolution over the B bits at fixed A-part."""
    if lam.shape != (g.dim,):
        raise BadParam(f"vector length {lam.shape} does not match n={g.n}")
    return _xor_square(np.asarray(lam, dtype=np.float64), g.n, g.b_mask, mode)


def _protocol_step(s: GDState, which: Protocol, p: float, f_m: float, mode: ConvMode) -> StepResult:
    if not 0.0 <= p <= 1.0:
        raise BadParam(f"gate parameter p={p} outside [0,1]")
    if not 0.0 <= f_m <= 0.5:
        raise BadParam(f"measurement flip probability f_m={f_m} outside [0,1/2]")
    g = s.graph
    n = g.n
    conv_mask = g.b_mask if which is Protocol.P1 else g.a_mask
    coin_mask = g.a_mask if which is Protocol.P1 else g.b_mask

    if mode is ConvMode.NAIVE:
        lam = s.lam
        if p < 1.0:
            noisy = s
            for v in range(n):
                noisy = depolarizing_channel(noisy, v, p)
            lam = noisy.lam
        if f_m == 0.0:
            u = _xor_square(lam, n, conv_mask, mode)
        else:
            u = np.zeros_like(lam)
            idx = np.arange(g.dim)
            for a, w in _flip_weights_by_pattern(g, f_m, which):
                if w == 0.0:
                    continue
                u += w * _xor_cross_naive(lam, lam[idx ^ a], n, conv_mask)
    else:
        full_mask = g.dim - 1
        if p < 1.0 or f_m > 0.0:
            spectrum = wht_bits(s.lam, n, full_mask)
            if p < 1.0:
                spectrum *= _depolarize_multiplier(g, p)
            conv_side = wht_bits(spectrum, n, coin_mask, inverse=True)
            if f_m > 0.0:
                partner = wht_bits(spectrum * _measure_flip_multiplier(g, f_m, which),
                                   n, coin_mask, inverse=True)
            else:
                partner = conv_side
            u = wht_bits(conv_side * partner, n, conv_mask, inverse=True)
        else:
            u = _xor_square(s.lam, n, conv_mask, mode)

    p_succ = float(u.sum())
    if p_succ < 1e-300:
        raise ZeroSuccess(f"acceptance probability {p_succ} vanished")
    floor = -REL_NEG_TOL * max(float(u.max()), 1e-30)
    low = float(u.min())
    if low < floor:
        raise BadParam(f"unnormalized output coefficient {low} below roundoff floor")
    np.maximum(u, 0.0, out=u)
    return StepResult(GDState(g, u / p_succ), p_succ, which)


def _flip_weights_by_pattern(g: Graph, f_m: float, which: Protocol):
    """Explicit (syndrome pattern, weight) pairs for the NAIVE noisy path,
    composed by convolving the per-vertex flip kernels directly."""
    checked = g.a_vertices if which is Protocol.P1 else g.b_vertices
    coin_mask = g.a_mask if which is Protocol.P1 else g.b_mask
    w = np.zeros(g.dim)
    w[0] = 1.0
    idx = np.arange(g.dim)
    for v in range(g.n):
        mask = (1 << v) if v in checked else g.neighbor_mask[v]
        w = (1.0 - f_m) * w + f_m * w[idx ^ mask]
    for a in spread_submasks(coin_mask):
        yield int(a), float(w[a])


def p1_step(s: GDState, p: float = 1.0, f_m: float = 0.0, mode: ConvMode = ConvMode.FAST) -> StepResult:
    """One round of the A-information protocol on two identical copies.

    Returns the normalized surviving state and the acceptance probability.
    p < 1 prepends one depolarizing pass per qubit on both copies; f_m > 0
    flips each recorded measurement outcome independently (a depolarizing
    pass of strength p_m right before a measurement acts the same way with
    f_m = (1 - p_m) / 2).
    """
    return _protocol_step(s, Protocol.P1, p, f_m, mode)


def p2_step(s: GDState, p: float = 1.0, f_m: float = 0.0, mode: ConvMode = ConvMode.FAST) -> StepResult:
    """The mirror round: information about the B syndromes is extracted, with
    the roles of the two color classes interchanged."""
    return _protocol_step(s, Protocol.P2, p, f_m, mode)


StepFn = Callable[[GDState], StepResult]


def standard_steps(schedule: Sequence[Protocol], p: float, f_m: float) -> list[tuple[str, StepFn]]:
    steps: list[tuple[str, StepFn]] = []
    for proto in schedule:
        if proto is Protocol.P1:
            steps.append(("P1", lambda s, _p=p, _f=f_m: p1_step(s, _p, _f)))
        else:
            steps.append(("P2", lambda s, _p=p, _f=f_m: p2_step(s, _p, _f)))
    return steps


def run_schedule(s0: GDState, steps: Sequence[tuple[str, StepFn]], stop: StopRule = StopRule()) -> PurificationTrace:
    """Drive labeled step functions until a stop verdict fires.

    Stall is only tested at whole-schedule boundaries because consecutive
    rounds move different coefficient sectors.
    """
    if not steps:
        raise BadParam("schedule must be nonempty")
    g = s0.graph
    floor = 1.0 / g.dim
    state = s0
    rows: list[TraceRow] = []
    verdict = Verdict.MAX_ROUNDS
    period = len(steps)
    f_last_period = state.fidelity
    if state.fidelity >= 1.0 - stop.eps:
        verdict = Verdict.CONVERGED
    else:
        r = 0
        while r < stop.r_max:
            label, fn = steps[r % period]
            r += 1
            f_before = state.fidelity
            result = fn(state)
            state = result.state
            rows.append(TraceRow(r, label, f_before, state.fidelity, result.p_succ))
            if state.fidelity >= 1.0 - stop.eps:
                verdict = Verdict.CONVERGED
                break
            if state.fidelity < floor:
                verdict = Verdict.DIVERGED
                break
            if r % period == 0:
                if abs(state.fidelity - f_last_period) < stop.tol:
                    verdict = Verdict.STALLED
                    break
                f_last_period = state.fidelity
    cost = 1.0
    for row in rows:
        cost *= 2.0 / row.p_succ
    return PurificationTrace(tuple(rows), verdict, cost, state)


def iterate(
    s0: GDState,
    schedule: Sequence[Protocol] = (Protocol.P1, Protocol.P2),
    p: float = 1.0,
    f_m: float = 0.0,
    stop: StopRule = StopRule(),
) -> PurificationTrace:
    """Iterate sub-protocol rounds on identical copies until convergence,
    stall, divergence or the round budget runs out."""
    return run_schedule(s0, standard_steps(tuple(schedule), p, f_m), stop)
