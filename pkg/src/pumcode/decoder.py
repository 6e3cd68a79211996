"""Bounded-distance decoder for terminated PUM sequences.

The decoder never searches the full trellis.  It assembles a sparse
trellis from block decodes and runs Viterbi on it:

1. every block is decoded on its own (C0 first, C1 last, C_alpha between)
   and runs of decoded blocks are turned back into (state, info) edges;
2. from each such edge, chains are decoded forwards in C0 and backwards
   in C1 with the known state subtracted;
3. single-block holes between known nodes are closed in C01;
4. one erasure node per depth stands in for everything not found, so a
   path always exists and locally clean blocks still decode correctly.

Edge metrics are true Hamming distances.  Erasure metrics may carry a
1/(ell+1) factor, so the Viterbi works on metrics scaled by ell+1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .blockcodes import BlockDecodeOutcome, RsEvalCode
from .errors import PumError, UsageError
from .linalg import mat_vec
from .pum import PumCode, ReconstructionError

ERASURE_MODES = ("corrected", "printed")
# how t_F / t_B are read when a node has no candidate edge
EMPTY_MINIMUM = ("bound", "zero")

STEP1 = "step1"
STEP2_FORWARD = "step2-forward"
STEP2_BACKWARD = "step2-backward"
STEP3 = "step3"
STEP3_PLACEHOLDER = "step3-placeholder"
ERASURE = "erasure"


class DecoderInternalError(PumError, RuntimeError):
    """The reduced trellis has no complete path (should be impossible)."""


class InvocationCounter:
    """Counts block-decoder calls made during one decode."""

    def __init__(self) -> None:
        self.calls = 0
        self.by_code: dict[str, int] = {}
        self.by_depth: dict[int, int] = {}

    def run(self, name: str, code: RsEvalCode, word: Sequence[int], depth: int) -> BlockDecodeOutcome:
        self.calls += 1
        self.by_code[name] = self.by_code.get(name, 0) + 1
        self.by_depth[depth] = self.by_depth.get(depth, 0) + 1
        return code.bmd_decode(word)


@dataclass(frozen=True)
class Edge:
    block: int
    state: tuple[int, ...]
    info: tuple[int, ...]
    to_state: tuple[int, ...]
    metric: int
    step: str


class ReducedTrellis:
    """Candidate edges per block; depth t is the node layer before block t."""

    def __init__(self, code: PumCode, received: Sequence[Sequence[int]]):
        self.code = code
        self.received = [tuple(r) for r in received]
        self.nblocks = len(received)
        self.edges: list[dict[tuple, Edge]] = [{} for _ in range(self.nblocks)]
        # (from, to) -> metric for node pairs left unconnected by C01
        self.placeholders: list[dict[tuple, int]] = [{} for _ in range(self.nblocks)]
        self.erasure: list[list[tuple]] | None = None
        self.scale = code.ell + 1

    def add(self, block: int, state: Sequence[int], info: Sequence[int], step: str) -> Edge | None:
        """Add an edge unless it is already present; returns the new edge."""
        key = (tuple(state), tuple(info))
        if key in self.edges[block]:
            return None
        code = self.code
        word = code.block(key[0], key[1])
        metric = sum(1 for a, b in zip(word, self.received[block]) if a != b)
        edge = Edge(block, key[0], key[1], key[1][: code.k1], metric, step)
        self.edges[block][key] = edge
        return edge

    def add_placeholder(self, block: int, state: Sequence[int], to_state: Sequence[int], metric: int) -> None:
        """Connect two known nodes whose block could not be decoded."""
        key = (tuple(state), tuple(to_state))
        if any(e.state == key[0] and e.to_state == key[1] for e in self.edges[block].values()):
            return
        self.placeholders[block][key] = metric

    def has(self, block: int, state: Sequence[int], info: Sequence[int]) -> bool:
        return (tuple(state), tuple(info)) in self.edges[block]

    def edges_at(self, block: int) -> list[Edge]:
        return list(self.edges[block].values())

    def left_nodes(self, block: int) -> set[tuple[int, ...]]:
        """Known states at the depth where ``block`` starts."""
        if block == 0:
            return {self.zero}
        return {e.to_state for e in self.edges[block - 1].values()}

    def right_nodes(self, block: int) -> set[tuple[int, ...]]:
        """Known states at the depth where ``block`` ends."""
        if block == self.nblocks - 1:
            return {self.zero}
        return {e.state for e in self.edges[block + 1].values()}

    def nodes(self, depth: int) -> set[tuple[int, ...]]:
        if depth == 0 or depth == self.nblocks:
            return {self.zero}
        out = {e.to_state for e in self.edges[depth - 1].values()}
        out.update(e.state for e in self.edges[depth].values())
        return out

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple([0] * self.code.k1)

    def edge_count(self) -> int:
        return sum(len(e) for e in self.edges)

    def empty_runs(self) -> list[int]:
        """Lengths of maximal runs of blocks that carry no edge."""
        runs, cur = [], 0
        for edges in self.edges:
            if edges:
                if cur:
                    runs.append(cur)
                cur = 0
            else:
                cur += 1
        if cur:
            runs.append(cur)
        return runs


@dataclass
class StepMetrics:
    code: PumCode
    step1: list[int]
    step3: list[int] = field(default_factory=list)
    t_forward: dict[tuple[int, tuple], int] = field(default_factory=dict)
    t_backward: dict[tuple[int, tuple], int] = field(default_factory=dict)
    t_alpha: list[int | None] = field(default_factory=list)

    @property
    def step1_placeholder(self) -> int:
        return (self.code.profile.d_alpha + 1) // 2

    @property
    def step3_placeholder(self) -> int:
        return (self.code.profile.d01 + 1) // 2


@dataclass
class Step1Result:
    outcomes: list[BlockDecodeOutcome]
    reconstructed: dict[int, set[tuple[tuple[int, ...], tuple[int, ...]]]]
    metrics: StepMetrics


@dataclass
class DecodeResult:
    information: list[list[int]]
    metric: Fraction
    provenance: list[str]
    used_erasure: bool
    invocations: int
    trellis: ReducedTrellis
    step_metrics: StepMetrics
    step2_empty_runs: list[int]
    step2_edge_keys: list[frozenset]
    invocations_by_depth: list[int] = field(default_factory=list)

    @property
    def nblocks(self) -> int:
        return self.trellis.nblocks


def _check_received(code: PumCode, received: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    rows = [tuple(int(x) for x in r) for r in received]
    if len(rows) < 2:
        raise UsageError("a terminated sequence has at least two blocks")
    for r in rows:
        if len(r) != code.n:
            raise UsageError(f"received block of length {len(r)}, expected n={code.n}")
        for x in r:
            code.field.check(x)
    return rows


def _runs(flags: Sequence[bool]) -> list[tuple[int, int]]:
    out, start = [], None
    for j, ok in enumerate(flags):
        if ok and start is None:
            start = j
        elif not ok and start is not None:
            out.append((start, j - 1))
            start = None
    if start is not None:
        out.append((start, len(flags) - 1))
    return out


# -- step 1 ---------------------------------------------------------------


def step1(code: PumCode, received: Sequence[Sequence[int]], counter: InvocationCounter | None = None) -> Step1Result:
    """Blockwise decoding plus reconstruction over windows of decoded blocks."""
    rows = _check_received(code, received)
    counter = counter or InvocationCounter()
    nblocks = len(rows)
    outcomes = []
    for j, r in enumerate(rows):
        if j == 0:
            outcomes.append(counter.run("C0", code.c0, r, j))
        elif j == nblocks - 1:
            outcomes.append(counter.run("C1", code.c1, r, j))
        else:
            outcomes.append(counter.run("Calpha", code.calpha, r, j))

    width = code.ell + 1
    found: dict[int, set] = {}
    for a, b in _runs([o.decoded for o in outcomes]):
        length = b - a + 1
        size = min(width, length)
        windows = {(s, size) for s in range(a, b - size + 2)}
        if a == 0:
            windows.update((0, sz) for sz in range(1, size))
        if b == nblocks - 1:
            windows.update((nblocks - sz, sz) for sz in range(1, size))
        for s, sz in sorted(windows):
            blocks = [outcomes[x].codeword for x in range(s, s + sz)]
            try:
                rec = code.reconstruct_information(blocks, s, nblocks)
            except ReconstructionError:
                continue
            for depth, edge in rec.items():
                found.setdefault(depth, set()).add(edge)

    placeholder = (code.profile.d_alpha + 1) // 2
    metrics = []
    for j, o in enumerate(outcomes):
        if o.decoded and found.get(j):
            metrics.append(sum(1 for x, y in zip(o.codeword, rows[j]) if x != y))
        else:
            metrics.append(placeholder)
    return Step1Result(outcomes, found, StepMetrics(code, metrics))


# -- step 2 ---------------------------------------------------------------


def _extension_length(code: PumCode, metrics: Sequence[int], j: int, forward: bool, designed) -> int:
    """Smallest i whose accumulated metric slack reaches designed(i)/2."""
    prof = code.profile
    ell = code.ell
    n = len(metrics)
    acc = Fraction(0)
    limit = n + ell + 2
    for i in range(1, limit + 1):
        h = i - ell if forward else i
        # the sum grows by one term per step once its upper limit reaches 1
        if h >= 1:
            pos = j + h if forward else j - h
            m = metrics[pos] if 0 <= pos < n else 0
            acc += Fraction(prof.d_alpha - m, ell + 1)
        if acc >= designed(i) / 2:
            return i
    return limit


def extension_lengths(code: PumCode, metrics: Sequence[int], j: int) -> tuple[int, int]:
    """(forward, backward) chain lengths from a reconstructed block j."""
    prof = code.profile
    return (
        _extension_length(code, metrics, j, True, prof.dcdes),
        _extension_length(code, metrics, j, False, prof.drcdes),
    )


def compute_LF_LB(code: PumCode, metrics: StepMetrics | Sequence[int], j: int) -> tuple[int, int]:
    """Gap-length bounds after blockwise decoding, using the designed row distance."""
    m = metrics.step1 if isinstance(metrics, StepMetrics) else list(metrics)
    prof = code.profile
    return (
        _extension_length(code, m, j, True, prof.drdes),
        _extension_length(code, m, j, False, prof.drdes),
    )


def _c1_split(code: PumCode, message: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """C1 message (Phi | G01 | B coefficients) -> (previous state, free info part)."""
    phi, free = code.phi, code.k - code.k1
    state = tuple(message[:phi]) + tuple(message[phi + free:])
    return state, tuple(message[phi:phi + free])


def step2(
    code: PumCode,
    received: Sequence[Sequence[int]],
    s1: Step1Result,
    trellis: ReducedTrellis,
    counter: InvocationCounter | None = None,
) -> None:
    """Forward (C0) and backward (C1) chains from every blockwise edge."""
    counter = counter or InvocationCounter()
    f = code.field
    nblocks = trellis.nblocks
    k1 = code.k1
    zero_info = tuple([0] * code.k)
    metrics = s1.metrics.step1
    step1_keys = [set(s1.reconstructed.get(j, ())) for j in range(nblocks)]
    for j in range(nblocks):
        for state, info in sorted(step1_keys[j]):
            lf, lb = extension_lengths(code, metrics, j)

            cur = tuple(info[:k1])
            for u in range(j + 1, min(nblocks, j + lf + 1)):
                word = f.vec_sub(received[u], mat_vec(code.G10, cur))
                out = counter.run("C0", code.c0, word, u)
                if not out.decoded:
                    break
                nxt = tuple(out.message)
                if u == nblocks - 1 and nxt != zero_info:
                    break
                if (cur, nxt) in step1_keys[u]:
                    break
                trellis.add(u, cur, nxt, STEP2_FORWARD)
                cur = nxt[:k1]

            known = tuple(state)  # state at depth u+1 while stepping back
            for u in range(j - 1, max(-1, j - lb - 1), -1):
                word = f.vec_sub(received[u], mat_vec(code.G00, known))
                out = counter.run("C1", code.c1, word, u)
                if not out.decoded:
                    break
                prev, rest = _c1_split(code, out.message)
                if u == 0 and any(prev):
                    break
                inf = known + rest
                if (prev, inf) in step1_keys[u]:
                    break
                trellis.add(u, prev, inf, STEP2_BACKWARD)
                known = prev


# -- step 3 ---------------------------------------------------------------


def step3(
    code: PumCode,
    received: Sequence[Sequence[int]],
    trellis: ReducedTrellis,
    metrics: StepMetrics,
    counter: InvocationCounter | None = None,
) -> None:
    """Close single-block holes between known nodes with C01."""
    counter = counter or InvocationCounter()
    f = code.field
    nblocks = trellis.nblocks
    placeholder = (code.profile.d01 + 1) // 2
    for t in range(nblocks):
        connected = {(e.state, e.to_state) for e in trellis.edges_at(t)}
        lefts = sorted(trellis.left_nodes(t))
        rights = sorted(trellis.right_nodes(t))
        for right in rights:
            base = f.vec_sub(received[t], mat_vec(code.G00, right))
            for left in lefts:
                if (left, right) in connected:
                    continue
                word = f.vec_sub(base, mat_vec(code.G10, left))
                out = counter.run("C01", code.c01, word, t)
                rest = tuple(out.message) if out.decoded else None
                if rest is not None and t == nblocks - 1 and any(rest):
                    rest = None
                if rest is not None:
                    trellis.add(t, left, right + rest, STEP3)
                else:
                    # every block between these nodes is at least this far from r_t
                    trellis.add_placeholder(t, left, right, placeholder)
    metrics.step3 = [
        min((e.metric for e in trellis.edges_at(t)), default=placeholder) for t in range(nblocks)
    ]


# -- erasure nodes --------------------------------------------------------


def _erasure_side(d: int, t: int | None, empty: str) -> int:
    if t is None:
        if empty == "bound":
            return (d + 1) // 2
        t = 0
    return max((d + 1) // 2, d - t)


def wire_erasure_nodes(
    trellis: ReducedTrellis, metrics: StepMetrics, mode: str = "corrected", empty: str = "bound"
) -> ReducedTrellis:
    """Attach one erasure node per inner depth.

    Metrics are stored scaled by ell+1.  In ``printed`` mode all three
    connection metrics carry the 1/(ell+1) factor; in ``corrected`` mode
    only the erasure-to-erasure one does, so that leaving the found part
    of the trellis costs at least half a block-code distance.
    """
    if mode not in ERASURE_MODES:
        raise UsageError(f"unknown erasure mode {mode!r}, expected one of {ERASURE_MODES}")
    if empty not in EMPTY_MINIMUM:
        raise UsageError(f"unknown empty-minimum rule {empty!r}, expected one of {EMPTY_MINIMUM}")
    code = trellis.code
    prof = code.profile
    scale = trellis.scale
    side = 1 if mode == "printed" else scale
    nblocks = trellis.nblocks
    wiring: list[list[tuple]] = [[] for _ in range(nblocks)]
    metrics.t_alpha = []
    for t in range(nblocks):
        edges = trellis.edges_at(t)
        t_alpha = min((e.metric for e in edges), default=None)
        metrics.t_alpha.append(t_alpha)
        # found node at depth t -> EN at depth t+1
        if t + 1 <= nblocks - 1:
            for s in sorted(trellis.nodes(t)):
                t_f = min((e.metric for e in edges if e.state == s), default=None)
                metrics.t_forward[(t, s)] = t_f
                cost = _erasure_side(prof.d0, t_f, empty) * side
                wiring[t].append((s, None, cost))
        if t >= 1:
            # EN at depth t -> found node at depth t+1
            for s in sorted(trellis.nodes(t + 1)):
                t_b = min((e.metric for e in edges if e.to_state == s), default=None)
                metrics.t_backward[(t + 1, s)] = t_b
                cost = _erasure_side(prof.d1, t_b, empty) * side
                wiring[t].append((None, s, cost))
            if t + 1 <= nblocks - 1:
                if t_alpha is not None:
                    cost = max(0, prof.d_alpha - t_alpha)
                else:
                    cost = (prof.d_alpha + 1) // 2
                wiring[t].append((None, None, cost))
    trellis.erasure = wiring
    return trellis


# -- viterbi --------------------------------------------------------------


def viterbi(trellis: ReducedTrellis) -> DecodeResult:
    """Minimum-metric path; ties go to the lexicographically smallest information."""
    code = trellis.code
    nblocks = trellis.nblocks
    scale = trellis.scale
    k, k1 = code.k, code.k1
    pad = tuple([0] * (k - k1))
    zero_info = tuple([0] * k)

    # out[t][node] = list of (sort key, to node, scaled metric, info, step)
    out: list[dict] = [dict() for _ in range(nblocks)]
    for t in range(nblocks):
        for e in trellis.edges_at(t):
            out[t].setdefault(e.state, []).append(((0, e.info), e.to_state, e.metric * scale, e.info, e.step))
        for (frm, to), m in trellis.placeholders[t].items():
            info = to + pad
            out[t].setdefault(frm, []).append(((1, info), to, m * scale, info, STEP3_PLACEHOLDER))
        for frm, to, cost in (trellis.erasure or [[]] * nblocks)[t]:
            if to is None:
                entry = ((2, ()), None, cost, zero_info, ERASURE)
            else:
                info = to + pad
                entry = ((1, info), to, cost, info, ERASURE)
            out[t].setdefault(frm, []).append(entry)

    zero = trellis.zero
    cost_to_go: list[dict] = [dict() for _ in range(nblocks + 1)]
    cost_to_go[nblocks][zero] = 0
    for t in range(nblocks - 1, -1, -1):
        nxt = cost_to_go[t + 1]
        here = cost_to_go[t]
        for node, edges in out[t].items():
            best = None
            for _, to, cost, _, _ in edges:
                if to in nxt:
                    total = cost + nxt[to]
                    if best is None or total < best:
                        best = total
            if best is not None:
                here[node] = best
    if zero not in cost_to_go[0]:
        raise DecoderInternalError("reduced trellis has no terminated path")

    node = zero
    info_out, provenance = [], []
    used_erasure = False
    for t in range(nblocks):
        target = cost_to_go[t][node]
        nxt = cost_to_go[t + 1]
        choices = [e for e in out[t][node] if e[1] in nxt and e[2] + nxt[e[1]] == target]
        key, to, _, info, step = min(choices, key=lambda e: e[0])
        if step in (ERASURE, STEP3_PLACEHOLDER):
            used_erasure = True
        if t < nblocks - 1:
            info_out.append(list(info))
        provenance.append(step)
        node = to
    return DecodeResult(
        information=info_out,
        metric=Fraction(cost_to_go[0][zero], scale),
        provenance=provenance,
        used_erasure=used_erasure,
        invocations=0,
        trellis=trellis,
        step_metrics=None,  # type: ignore[arg-type]
        step2_empty_runs=[],
        step2_edge_keys=[],
    )


# -- composition ----------------------------------------------------------


def decode(
    code: PumCode, received: Sequence[Sequence[int]], erasure_mode: str = "corrected", empty: str = "bound"
) -> DecodeResult:
    rows = _check_received(code, received)
    if erasure_mode not in ERASURE_MODES:
        raise UsageError(f"unknown erasure mode {erasure_mode!r}, expected one of {ERASURE_MODES}")
    counter = InvocationCounter()
    s1 = step1(code, rows, counter)
    trellis = ReducedTrellis(code, rows)
    for j in sorted(s1.reconstructed):
        for state, info in sorted(s1.reconstructed[j]):
            trellis.add(j, state, info, STEP1)
    step2(code, rows, s1, trellis, counter)
    after2 = [frozenset(e) for e in trellis.edges]
    runs2 = trellis.empty_runs()
    step3(code, rows, trellis, s1.metrics, counter)
    wire_erasure_nodes(trellis, s1.metrics, erasure_mode, empty)
    result = viterbi(trellis)
    result.invocations = counter.calls
    result.invocations_by_depth = [counter.by_depth.get(t, 0) for t in range(len(rows))]
    result.step_metrics = s1.metrics
    result.step2_empty_runs = runs2
    result.step2_edge_keys = after2
    return result


def invocation_budget(code: PumCode, constant: int) -> int:
    """Per-block decoder-call budget (ell+1) * d_alpha * constant."""
    return (code.ell + 1) * code.profile.d_alpha * constant
