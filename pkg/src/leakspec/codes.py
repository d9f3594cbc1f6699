"""QEC code layouts: rotated surface code, triangular 6.6.6 color code, and
file-loaded external codes.

A layout fixes everything downstream modules need: qubit roles, per-stabilizer
CNOT order, the derived data->ancilla adjacency (whose order defines syndrome
pattern bit significance), and the parallel CNOT schedule the simulator runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class CodeKind(Enum):
    Surface = "surface"
    Color666 = "color"
    External = "external"


class LayoutError(ValueError):
    pass


@dataclass
class CodeLayout:
    """Immutable-by-convention description of a stabilizer code layout.

    ``stabilizers`` maps each ancilla to its data support in CNOT-schedule
    order: the k-th listed data qubit interacts in schedule step k. Steps are
    compacted per ancilla; when two ancillas would touch the same data qubit in
    the same step, the executor splits the step into deterministic sub-layers
    (ordered by ancilla id), and ``data_adjacency`` reflects that final order.
    The adjacency order is significant: bit 0 of a syndrome pattern is the
    last-listed (least significant) adjacent ancilla.
    """

    data_qubits: list[int]
    ancilla_qubits: list[int]
    ancilla_type: dict[int, str]           # 'X' or 'Z'
    stabilizers: dict[int, list[int]]      # ancilla -> ordered data support
    distance: int
    kind: CodeKind
    name: str = ""
    coords: dict[int, tuple[float, float]] | None = None

    # derived in __post_init__
    data_adjacency: dict[int, list[int]] = field(default_factory=dict)
    schedule_layers: list[list[tuple[int, int]]] = field(default_factory=list)

    def __post_init__(self):
        self._build_schedule()
        self.validate()

    # -- derived structure --------------------------------------------------

    def _build_schedule(self):
        """Compute conflict-free CNOT layers and the temporal data adjacency."""
        max_pos = max((len(s) for s in self.stabilizers.values()), default=0)
        layers: list[list[tuple[int, int]]] = []
        touch_order: dict[int, list[tuple[int, int, int]]] = {q: [] for q in self.data_qubits}
        for pos in range(max_pos):
            pending = [(anc, sup[pos]) for anc, sup in sorted(self.stabilizers.items())
                       if pos < len(sup)]
            # greedy split: no qubit twice within one executed layer
            while pending:
                busy: set[int] = set()
                layer: list[tuple[int, int]] = []
                rest: list[tuple[int, int]] = []
                for anc, dq in pending:
                    if anc in busy or dq in busy:
                        rest.append((anc, dq))
                    else:
                        busy.add(anc)
                        busy.add(dq)
                        layer.append((anc, dq))
                for sub, (anc, dq) in enumerate(layer):
                    touch_order[dq].append((pos, len(layers), anc))
                layers.append(layer)
                pending = rest
        self.schedule_layers = layers
        self.data_adjacency = {
            q: [anc for _, _, anc in sorted(touches)]
            for q, touches in touch_order.items()
        }

    # -- validation ----------------------------------------------------------

    def validate(self):
        ids = set(self.data_qubits) | set(self.ancilla_qubits)
        if len(ids) != len(self.data_qubits) + len(self.ancilla_qubits):
            raise LayoutError("duplicate qubit ids across roles")
        for anc, sup in self.stabilizers.items():
            if anc not in self.ancilla_type:
                raise LayoutError(f"ancilla {anc} missing type tag")
            if len(set(sup)) != len(sup):
                raise LayoutError(f"ancilla {anc} support has repeats")
            for dq in sup:
                if dq not in self.data_adjacency:
                    raise LayoutError(f"ancilla {anc} references unknown data qubit {dq}")
        for q in self.data_qubits:
            if not self.data_adjacency[q]:
                raise LayoutError(f"data qubit {q} appears in no stabilizer")
        # transpose consistency: data_adjacency vs stabilizers
        for q, ancs in self.data_adjacency.items():
            for anc in ancs:
                if q not in self.stabilizers[anc]:
                    raise LayoutError(f"adjacency ({q},{anc}) not mirrored in stabilizers")
        n_pairs = sum(len(s) for s in self.stabilizers.values())
        if n_pairs != sum(len(a) for a in self.data_adjacency.values()):
            raise LayoutError("stabilizers and data_adjacency are not transposes")

    # -- convenience ---------------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return len(self.data_qubits) + len(self.ancilla_qubits)

    def arity(self, data_qubit: int) -> int:
        return len(self.data_adjacency[data_qubit])

    def arity_set(self) -> set[int]:
        return {len(a) for a in self.data_adjacency.values()}

    def neighbor_pairs(self) -> set[tuple[int, int]]:
        """Pairs of qubits considered neighbors for LRC color grouping.

        Surface layouts use the physical chip grid (adjacent or diagonal,
        Chebyshev distance 1 after the 45-degree embedding). Other layouts
        fall back to Tanner-graph proximity: an ancilla neighbors its support,
        and two data qubits neighbor each other when they share a stabilizer.
        """
        pairs: set[tuple[int, int]] = set()
        if self.kind is CodeKind.Surface and self.coords:
            chip = {q: ((x + y) / 2, (x - y) / 2) for q, (x, y) in self.coords.items()}
            qs = sorted(chip)
            for i, q1 in enumerate(qs):
                u1, v1 = chip[q1]
                for q2 in qs[i + 1:]:
                    u2, v2 = chip[q2]
                    if max(abs(u1 - u2), abs(v1 - v2)) <= 1:
                        pairs.add((q1, q2))
            return pairs
        for anc, sup in self.stabilizers.items():
            for dq in sup:
                pairs.add((min(anc, dq), max(anc, dq)))
            for i, q1 in enumerate(sup):
                for q2 in sup[i + 1:]:
                    pairs.add((min(q1, q2), max(q1, q2)))
        return pairs


@dataclass
class ColorGrouping:
    groups: list[set[int]]

    @property
    def group_count(self) -> int:
        return len(self.groups)


# ---------------------------------------------------------------------------
# Rotated surface code
# ---------------------------------------------------------------------------

# Within a stabilizer the four corners are visited in the standard 4-step
# dance. In the 45-degree frame the plaquette corners map to compass points;
# Z checks run N,W,E,S and X checks N,E,W,S so hook errors behave as usual.
_Z_ORDER = ((0, 0), (1, 0), (0, 1), (1, 1))
_X_ORDER = ((0, 0), (0, 1), (1, 0), (1, 1))


def build_surface_code(d: int) -> CodeLayout:
    """Rotated surface code on d^2 data qubits and d^2-1 ancillas."""
    _check_distance(d)
    data_id = {(i, j): i * d + j for i in range(d) for j in range(d)}
    coords = {q: (2.0 * i, 2.0 * j) for (i, j), q in data_id.items()}

    ancilla_type: dict[int, str] = {}
    stabilizers: dict[int, list[int]] = {}
    next_id = d * d
    for i in range(-1, d):
        for j in range(-1, d):
            ztype = (i + j) % 2 == 0
            interior = 0 <= i <= d - 2 and 0 <= j <= d - 2
            if not interior:
                # Z half-plaquettes live on left/right edges, X on top/bottom
                if i in (-1, d - 1) and 0 <= j <= d - 2 and not ztype:
                    pass
                elif j in (-1, d - 1) and 0 <= i <= d - 2 and ztype:
                    pass
                else:
                    continue
            order = _Z_ORDER if ztype else _X_ORDER
            sup = [data_id[(i + di, j + dj)] for di, dj in order
                   if (i + di, j + dj) in data_id]
            anc = next_id
            next_id += 1
            ancilla_type[anc] = "Z" if ztype else "X"
            stabilizers[anc] = sup
            coords[anc] = (2.0 * i + 1, 2.0 * j + 1)

    return CodeLayout(
        data_qubits=sorted(data_id.values()),
        ancilla_qubits=sorted(stabilizers),
        ancilla_type=ancilla_type,
        stabilizers=stabilizers,
        distance=d,
        kind=CodeKind.Surface,
        name=f"surface-d{d}",
        coords=coords,
    )


def surface_logical_supports(layout: CodeLayout) -> tuple[list[int], list[int]]:
    """(logical Z row, logical X column) data-qubit supports.

    Logical Z connects the left/right (Z-check) boundaries, logical X the
    top/bottom ones; the first row/column is used.
    """
    d = layout.distance
    return [j for j in range(d)], [i * d for i in range(d)]


# ---------------------------------------------------------------------------
# Triangular 6.6.6 color code
# ---------------------------------------------------------------------------

def _color_row_lengths(d: int) -> list[int]:
    if d == 3:
        return [3, 2, 1, 1]
    return [d, d - 1, d - 2] + _color_row_lengths(d - 2)


def _color_faces(d: int) -> tuple[dict[tuple[int, int], int], list[list[tuple[int, int]]]]:
    """Vertex map and face supports of the triangular patch of hexagons."""
    rows = _color_row_lengths(d)
    vid = {}
    for r, width in enumerate(rows):
        for c in range(width):
            vid[(r, c)] = len(vid)
    faces = []
    for r in range(len(rows)):
        n_max = (rows[r] - 1) // 2 if r % 3 != 0 else (rows[r] - 2) // 2
        for n in range(n_max + 1):
            if r % 3 == 2:
                cand = [(r, 2 * n), (r, 2 * n + 1), (r + 1, 2 * n), (r + 1, 2 * n + 1),
                        (r - 1, 2 * n), (r - 1, 2 * n + 1)]
            elif r % 3 == 1:
                cand = [(r, 2 * n), (r, 2 * n - 1), (r + 1, 2 * n), (r + 1, 2 * n - 1),
                        (r - 1, 2 * n), (r - 1, 2 * n + 1)]
            else:
                cand = [(r, 2 * n + 1), (r, 2 * n + 2), (r + 1, 2 * n), (r + 1, 2 * n + 1),
                        (r - 1, 2 * n + 1), (r - 1, 2 * n + 2)]
            face = [v for v in cand if v in vid]
            if len(face) >= 3:
                faces.append(sorted(face))
    return vid, faces


def build_color_code(d: int) -> CodeLayout:
    """Triangular 6.6.6 color code with one parity qubit per face.

    The code's (3d^2+1)/4 vertices are the data qubits; every hexagonal (or
    clipped boundary) face carries a single Z-tagged parity qubit. Bulk data
    qubits sit on three faces, boundary ones on two, corners on one, which is
    exactly the 3/2/1-bit syndrome pattern structure.
    """
    _check_distance(d)
    vid, faces = _color_faces(d)
    n_data = len(vid)
    ancilla_type = {}
    stabilizers = {}
    coords = {q: (float(r), 2.0 * c + (r % 3 == 0)) for (r, c), q in vid.items()}
    for k, face in enumerate(faces):
        anc = n_data + k
        ancilla_type[anc] = "Z"
        stabilizers[anc] = [vid[v] for v in face]
        coords[anc] = (sum(v[0] for v in face) / len(face),
                       sum(2.0 * v[1] for v in face) / len(face))
    return CodeLayout(
        data_qubits=list(range(n_data)),
        ancilla_qubits=sorted(stabilizers),
        ancilla_type=ancilla_type,
        stabilizers=stabilizers,
        distance=d,
        kind=CodeKind.Color666,
        name=f"color-d{d}",
        coords=coords,
    )


def _check_distance(d: int):
    if not isinstance(d, int) or d < 3 or d % 2 == 0:
        raise LayoutError(f"distance must be an odd integer >= 3, got {d!r}")


# ---------------------------------------------------------------------------
# External check-list format
# ---------------------------------------------------------------------------

def load_code(path: str | Path) -> CodeLayout:
    """Load a layout from the plain-text check list format.

    Header: ``code <name> <n_data> <n_ancilla>``; then one line per ancilla:
    ``<ancilla_id> <X|Z> <data_id> ...`` with data listed in CNOT-schedule
    order. ``#`` starts a comment.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    header = None
    stabilizers: dict[int, list[int]] = {}
    ancilla_type: dict[int, str] = {}
    name, n_data, n_anc = "external", -1, -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "code" or len(parts) != 4:
                raise LayoutError(f"{path}:{lineno}: expected 'code <name> <n_data> <n_ancilla>'")
            name = parts[1]
            try:
                n_data, n_anc = int(parts[2]), int(parts[3])
            except ValueError:
                raise LayoutError(f"{path}:{lineno}: non-integer qubit counts") from None
            header = parts
            continue
        if len(parts) < 3 or parts[1] not in ("X", "Z"):
            raise LayoutError(f"{path}:{lineno}: expected '<ancilla_id> <X|Z> <data...>'")
        try:
            anc = int(parts[0])
            sup = [int(p) for p in parts[2:]]
        except ValueError:
            raise LayoutError(f"{path}:{lineno}: non-integer qubit id") from None
        if anc in stabilizers:
            raise LayoutError(f"{path}:{lineno}: ancilla {anc} defined twice")
        stabilizers[anc] = sup
        ancilla_type[anc] = parts[1]
    if header is None:
        raise LayoutError(f"{path}: missing header line")
    if len(stabilizers) != n_anc:
        raise LayoutError(f"{path}: header declares {n_anc} ancillas, found {len(stabilizers)}")
    data_ids = sorted({q for sup in stabilizers.values() for q in sup})
    declared = set(range(n_data)) if all(0 <= q < n_data for q in data_ids) else None
    if declared is None or len(data_ids) > n_data:
        bad = [q for q in data_ids if not 0 <= q < n_data]
        raise LayoutError(f"{path}: stabilizers reference data qubits outside 0..{n_data - 1}: {bad}")
    for anc in stabilizers:
        if 0 <= anc < n_data:
            raise LayoutError(f"{path}: ancilla id {anc} collides with data id range")
    try:
        return CodeLayout(
            data_qubits=list(range(n_data)),
            ancilla_qubits=sorted(stabilizers),
            ancilla_type=ancilla_type,
            stabilizers=stabilizers,
            distance=_external_distance(name),
            kind=CodeKind.External,
            name=name,
        )
    except LayoutError as exc:
        raise LayoutError(f"{path}: {exc}") from None


def _external_distance(name: str) -> int:
    # external files carry no distance; a trailing '-d<k>' in the name is honored
    if "-d" in name:
        tail = name.rsplit("-d", 1)[1]
        if tail.isdigit():
            return int(tail)
    return 3


def save_code(layout: CodeLayout, path: str | Path):
    """Serialize a layout to the external check-list format."""
    path = Path(path)
    lines = [f"code {layout.name or 'external'} {len(layout.data_qubits)} "
             f"{len(layout.ancilla_qubits)}"]
    for anc in sorted(layout.stabilizers):
        sup = " ".join(str(q) for q in layout.stabilizers[anc])
        lines.append(f"{anc} {layout.ancilla_type[anc]} {sup}")
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# LRC color grouping
# ---------------------------------------------------------------------------

def color_groups(layout: CodeLayout, n: int) -> ColorGrouping:
    """Greedy n-coloring of the layout's neighbor graph, for staggered LRCs.

    Deterministic: qubits are processed in id order and take the smallest free
    color. For surface layouts with n >= 4 a 2x2 chip tiling is used as a
    fallback when greedy needs more than n colors.
    """
    if n < 1:
        raise LayoutError("group count must be >= 1")
    qubits = sorted(layout.data_qubits + layout.ancilla_qubits)
    adj: dict[int, set[int]] = {q: set() for q in qubits}
    for a, b in layout.neighbor_pairs():
        adj[a].add(b)
        adj[b].add(a)
    color: dict[int, int] = {}
    ok = True
    for q in qubits:
        used = {color[nb] for nb in adj[q] if nb in color}
        c = next((k for k in range(n) if k not in used), None)
        if c is None:
            ok = False
            break
        color[q] = c
    if not ok:
        if layout.kind is CodeKind.Surface and layout.coords and n >= 4:
            color = {}
            for q in qubits:
                x, y = layout.coords[q]
                u, v = int((x + y) / 2), int((x - y) / 2)
                color[q] = (u % 2) * 2 + (v % 2)
        else:
            raise LayoutError(f"greedy coloring with {n} colors infeasible for {layout.name}")
    groups = [set() for _ in range(n)]
    for q, c in color.items():
        groups[c].add(q)
    grouping = ColorGrouping(groups=groups)
    _check_grouping(layout, grouping)
    return grouping


def _check_grouping(layout: CodeLayout, grouping: ColorGrouping):
    seen: set[int] = set()
    for g in grouping.groups:
        if g & seen:
            raise LayoutError("color groups overlap")
        seen |= g
    if seen != set(layout.data_qubits) | set(layout.ancilla_qubits):
        raise LayoutError("color groups do not cover all qubits")
    member = {q: k for k, g in enumerate(grouping.groups) for q in g}
    for a, b in layout.neighbor_pairs():
        if member[a] == member[b]:
            raise LayoutError(f"neighbors {a},{b} share group {member[a]}")
