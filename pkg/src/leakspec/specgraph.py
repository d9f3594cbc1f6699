"""Offline syndrome-pattern classification.

The canonical sub-circuit for a data qubit of pattern arity ``a`` is the
sequence of its ``a`` stabilizer CNOTs within one round, followed by ancilla
measurement. Faults are enumerated against that sub-circuit, weighted by the
noise parameters, and rolled into weighted directed transition graphs whose
nodes are syndrome patterns. Summing incoming leakage vs non-leakage weight
per node and comparing against a threshold yields the flagged-pattern lookup
tables used online.

Bit convention: the first-scheduled adjacent ancilla is the most significant
pattern bit. Two-round keys concatenate the first round's detector pattern
with the cumulative flip pattern at the end of the second round, both relative
to the pre-window reference; the second round's own detector is the XOR of the
two halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .noise import NoiseParams

LEAKAGE = "leakage"
NONLEAKAGE = "nonleakage"

TOOL_VERSION = "leakspec-0.1.0"


@dataclass(frozen=True)
class PatternKey:
    """A syndrome pattern: ``arity`` bits per round, MSB = first ancilla."""

    arity: int
    rounds: int
    bits: int

    def __post_init__(self):
        width = self.arity * self.rounds
        if not 0 <= self.bits < (1 << width):
            raise ValueError(f"bits {self.bits} out of range for width {width}")

    def __str__(self) -> str:
        halves = []
        for r in range(self.rounds):
            shift = self.arity * (self.rounds - 1 - r)
            halves.append(format((self.bits >> shift) & ((1 << self.arity) - 1),
                                 f"0{self.arity}b"))
        return " ".join(halves)

    @classmethod
    def parse(cls, text: str) -> "PatternKey":
        halves = text.split()
        arity = len(halves[0])
        if any(len(h) != arity for h in halves):
            raise ValueError(f"ragged pattern {text!r}")
        bits = int("".join(halves), 2)
        return cls(arity=arity, rounds=len(halves), bits=bits)


@dataclass
class Fault:
    """One enumerated fault location and its syndrome-pattern distribution."""

    description: str
    label: str                      # LEAKAGE or NONLEAKAGE
    outcomes: dict[int, float]      # pattern bits -> probability (sums to 1)
    weight: float
    order: int = 1


@dataclass
class TransitionGraph:
    arity: int
    rounds: int
    # (src, dst, label) -> weight; parallel edges merged by summation
    edges: dict[tuple[int, int, str], float] = field(default_factory=dict)

    @property
    def nodes(self) -> set[int]:
        return set(range(1 << (self.arity * self.rounds)))

    def add_edge(self, src: int, dst: int, label: str, weight: float):
        if weight < 0:
            raise ValueError("negative edge weight")
        key = (src, dst, label)
        self.edges[key] = self.edges.get(key, 0.0) + weight

    def total_weight(self) -> float:
        return sum(self.edges.values())

    def incoming_weight(self, node: int) -> float:
        return sum(w for (_, dst, _), w in self.edges.items() if dst == node)


@dataclass
class PatternTable:
    arity: int
    rounds: int
    flagged: set[int]
    params: dict
    provenance: dict[int, tuple[float, float]]   # node -> (W_L, W_NL)

    def __contains__(self, bits: int) -> bool:
        return bits in self.flagged

    def keys(self) -> list[PatternKey]:
        return [PatternKey(self.arity, self.rounds, b) for b in sorted(self.flagged)]


# ---------------------------------------------------------------------------
# Fault enumeration
# ---------------------------------------------------------------------------

def _bit(arity: int, j: int) -> int:
    """Pattern bit of the j-th scheduled ancilla (1-indexed, MSB first)."""
    return 1 << (arity - j)


def _suffix(arity: int, k: int) -> int:
    """Pattern with ancillas k+1..arity flipped (data error after CNOT k)."""
    return (1 << (arity - k)) - 1


def _uniform_tail(arity: int, k: int) -> dict[int, float]:
    """Leakage before CNOT k: ancillas k..arity flip independently at 1/2."""
    n_free = arity - k + 1
    prob = 1.0 / (1 << n_free)
    return {bits: prob for bits in range(1 << n_free)}


def enumerate_fault_locations(arity: int, noise: NoiseParams,
                              rounds: int = 1) -> list[Fault]:
    """All fault locations of the canonical sub-circuit, with their pattern
    distributions and weights.

    First-order non-leakage faults: a data Pauli arising after CNOT k flips
    every later target; a measurement flip or a previous-round reset error
    flips a single bit. Leakage before CNOT k randomizes every later target at
    1/2 (weight = leak probability per location); leakage after the last CNOT
    defers to the next round. Second-order faults are all unordered pairs of
    first-order non-leakage faults at weight p^2.
    """
    if arity < 1:
        raise ValueError("arity must be >= 1")
    if rounds == 1:
        faults = _first_order_single(arity, noise)
    elif rounds == 2:
        faults = _first_order_double(arity, noise)
    else:
        raise ValueError("rounds must be 1 or 2")
    nl = [f for f in faults if f.label == NONLEAKAGE]
    p2 = noise.p * noise.p
    for fa, fb in combinations(nl, 2):
        outcomes: dict[int, float] = {}
        for pa, qa in fa.outcomes.items():
            for pb, qb in fb.outcomes.items():
                key = pa ^ pb
                outcomes[key] = outcomes.get(key, 0.0) + qa * qb
        faults.append(Fault(f"{fa.description}+{fb.description}", NONLEAKAGE,
                            outcomes, p2, order=2))
    return faults


def _first_order_single(arity: int, noise: NoiseParams) -> list[Fault]:
    pl, p = noise.p_leak, noise.p
    faults = []
    for k in range(1, arity + 1):
        faults.append(Fault(f"leak<cnot{k}", LEAKAGE, _uniform_tail(arity, k), pl))
    faults.append(Fault("leak>last", LEAKAGE, {0: 1.0}, pl))
    for k in range(0, arity + 1):
        faults.append(Fault(f"x>cnot{k}", NONLEAKAGE, {_suffix(arity, k): 1.0}, p))
    for j in range(1, arity + 1):
        faults.append(Fault(f"meas{j}", NONLEAKAGE, {_bit(arity, j): 1.0}, p))
        faults.append(Fault(f"reset{j}", NONLEAKAGE, {_bit(arity, j): 1.0}, p))
    return faults


def _first_order_double(arity: int, noise: NoiseParams) -> list[Fault]:
    pl, p = noise.p_leak, noise.p
    a = arity
    ones = _suffix(a, 0)

    def key(h1: int, h2: int) -> int:
        return (h1 << a) | h2

    faults = []
    # leakage in round 1 persists: fresh coin flips per CNOT of round 2
    for k in range(1, a + 1):
        outcomes = {}
        for h1, p1 in _uniform_tail(a, k).items():
            for h2 in range(1 << a):
                outcomes[key(h1, h2)] = p1 / (1 << a)
        faults.append(Fault(f"r1:leak<cnot{k}", LEAKAGE, outcomes, pl))
    faults.append(Fault("r1:leak>last", LEAKAGE,
                        {key(0, h2): 1.0 / (1 << a) for h2 in range(1 << a)}, pl))
    for k in range(1, a + 1):
        outcomes = {key(0, h2): q for h2, q in _uniform_tail(a, k).items()}
        faults.append(Fault(f"r2:leak<cnot{k}", LEAKAGE, outcomes, pl))
    faults.append(Fault("r2:leak>last", LEAKAGE, {key(0, 0): 1.0}, pl))

    # a data Pauli persists, so its cumulative second-round flips cover all
    # targets; measurement flips are transient, reset errors land next round
    for k in range(0, a + 1):
        faults.append(Fault(f"r1:x>cnot{k}", NONLEAKAGE,
                            {key(_suffix(a, k), ones): 1.0}, p))
        faults.append(Fault(f"r2:x>cnot{k}", NONLEAKAGE,
                            {key(0, _suffix(a, k)): 1.0}, p))
    for j in range(1, a + 1):
        b = _bit(a, j)
        faults.append(Fault(f"r1:meas{j}", NONLEAKAGE, {key(b, 0): 1.0}, p))
        faults.append(Fault(f"r0:reset{j}", NONLEAKAGE, {key(b, 0): 1.0}, p))
        faults.append(Fault(f"r2:meas{j}", NONLEAKAGE, {key(0, b): 1.0}, p))
        faults.append(Fault(f"r1:reset{j}", NONLEAKAGE, {key(0, b): 1.0}, p))
        faults.append(Fault(f"r2:reset{j}", NONLEAKAGE, {key(0, 0): 1.0}, p))
    return faults


# ---------------------------------------------------------------------------
# Graph construction and labeling
# ---------------------------------------------------------------------------

def base_priors(arity: int, noise: NoiseParams, rounds: int = 1) -> dict[int, float]:
    """Prior weight per base node: 1 for the clean pattern, the first-order
    non-leakage weight for patterns one such fault away, 0 otherwise."""
    priors = {0: 1.0}
    for f in enumerate_fault_locations(arity, noise, rounds):
        if f.label == NONLEAKAGE and f.order == 1:
            for bits in f.outcomes:
                priors[bits] = priors.get(bits, 0.0) + f.weight * f.outcomes[bits]
    return priors


def build_graphs(arity: int, noise: NoiseParams,
                 rounds: int = 1) -> tuple[TransitionGraph, TransitionGraph]:
    """Leakage and non-leakage transition graphs over the pattern nodes."""
    faults = enumerate_fault_locations(arity, noise, rounds)
    priors = base_priors(arity, noise, rounds)
    leak = TransitionGraph(arity, rounds)
    nonleak = TransitionGraph(arity, rounds)
    for src, prior in priors.items():
        for f in faults:
            graph = leak if f.label == LEAKAGE else nonleak
            for dst, prob in f.outcomes.items():
                graph.add_edge(src, dst, f.label, prior * f.weight * prob)
    return leak, nonleak


def label_patterns(leak: TransitionGraph, nonleak: TransitionGraph,
                   tau: float) -> PatternTable:
    """Flag nodes whose incoming leakage weight beats non-leakage by tau."""
    if tau <= 0:
        raise ValueError("threshold must be positive")
    if (leak.arity, leak.rounds) != (nonleak.arity, nonleak.rounds):
        raise ValueError("graphs cover different node sets")
    width = leak.arity * leak.rounds
    w_l = [0.0] * (1 << width)
    w_nl = [0.0] * (1 << width)
    for (_, dst, _), w in leak.edges.items():
        w_l[dst] += w
    for (_, dst, _), w in nonleak.edges.items():
        w_nl[dst] += w
    flagged = {node for node in range(1 << width) if w_l[node] > tau * w_nl[node]}
    return PatternTable(
        arity=leak.arity,
        rounds=leak.rounds,
        flagged=flagged,
        params={"tau": tau},
        provenance={n: (w_l[n], w_nl[n]) for n in range(1 << width)},
    )


def build_gladiator_table(arity_set: set[int] | list[int], noise: NoiseParams,
                          tau: float = 1.0) -> dict[int, PatternTable]:
    """Single-round flagged-pattern tables, one per arity."""
    tables = {}
    for arity in sorted(set(arity_set)):
        table = label_patterns(*build_graphs(arity, noise, rounds=1), tau)
        table.params.update(p=noise.p, lr=noise.lr, rounds=1)
        tables[arity] = table
    return tables


def build_gladiator_d_table(arity_set: set[int] | list[int], noise: NoiseParams,
                            tau: float = 1.0) -> dict[int, PatternTable]:
    """Two-round (deferred) flagged-pattern tables, one per arity."""
    tables = {}
    for arity in sorted(set(arity_set)):
        table = label_patterns(*build_graphs(arity, noise, rounds=2), tau)
        table.params.update(p=noise.p, lr=noise.lr, rounds=2)
        tables[arity] = table
    return tables


def build_eraser_table(arity: int, rounds: int = 1) -> PatternTable:
    """Majority-flip rule: flag when at least half the bits flipped; two-round
    tables require each round's detector sub-pattern to satisfy the rule."""
    if arity < 1:
        raise ValueError("arity must be >= 1")
    need = math.ceil(arity / 2)
    mask = (1 << arity) - 1
    if rounds == 1:
        flagged = {bits for bits in range(1 << arity)
                   if bin(bits).count("1") >= need}
    elif rounds == 2:
        flagged = set()
        for bits in range(1 << (2 * arity)):
            h1 = bits >> arity
            d2 = h1 ^ (bits & mask)      # second round's own detector
            if bin(h1).count("1") >= need and bin(d2).count("1") >= need:
                flagged.add(bits)
    else:
        raise ValueError("rounds must be 1 or 2")
    return PatternTable(arity=arity, rounds=rounds, flagged=flagged,
                        params={"rule": f"popcount>={need}", "rounds": rounds},
                        provenance={})


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def save_table(table: PatternTable, path: str | Path, code_kind: str = ""):
    path = Path(path)
    lines = [
        f"# pattern-table {TOOL_VERSION}",
        f"# code={code_kind or 'any'} arity={table.arity} rounds={table.rounds}",
        "# params: " + " ".join(f"{k}={v}" for k, v in sorted(table.params.items())),
        "# columns: pattern W_L W_NL",
    ]
    for bits in sorted(table.flagged):
        key = PatternKey(table.arity, table.rounds, bits)
        wl, wnl = table.provenance.get(bits, (0.0, 0.0))
        lines.append(f"{key} {wl:.12g} {wnl:.12g}")
    path.write_text("\n".join(lines) + "\n")


def load_table(path: str | Path) -> PatternTable:
    path = Path(path)
    arity = rounds = None
    params: dict = {}
    flagged: set[int] = set()
    provenance: dict[int, tuple[float, float]] = {}
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("# ")
            if body.startswith("code="):
                for tok in body.split():
                    k, _, v = tok.partition("=")
                    if k == "arity":
                        arity = int(v)
                    elif k == "rounds":
                        rounds = int(v)
            elif body.startswith("params:"):
                for tok in body.split()[1:]:
                    k, _, v = tok.partition("=")
                    try:
                        params[k] = float(v)
                    except ValueError:
                        params[k] = v
            continue
        parts = line.split()
        n_half = len(parts) - 2
        key = PatternKey.parse(" ".join(parts[:n_half]))
        flagged.add(key.bits)
        provenance[key.bits] = (float(parts[-2]), float(parts[-1]))
    if arity is None or rounds is None:
        raise ValueError(f"{path}: missing table header")
    return PatternTable(arity=arity, rounds=rounds, flagged=flagged,
                        params=params, provenance=provenance)
