"""Point-line configuration tables, colorability, and exact geometric sketches.

A configuration table records which points lie on which lines; validity means
every point label occurs in exactly `gamma` columns, every column holds `pi`
distinct labels, and two columns share at most one label.  Tables are compared
up to relabeling of points and lines via a maximal-code canonical form.

A colorable table splits its lines into black, red and green classes so that
every point lies on one line of each color: the combinatorial shadow of a
factor product that is identically one on its black lines.  Sketches go the
other way, from an explicit factor product to exact rational coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .formula import FactorProduct, convert_product
from .plane import (
    Basis,
    DegenerateInputError,
    LinearForm,
    ProjPoint,
    distinguished_lines,
    family_line,
    incident,
    meet,
)


class NotAQPictureError(ValueError):
    """The factor product does not draw a valid triple-point picture."""


class MalformedColoringError(ValueError):
    """A black line's red/green pairing is not a bijection."""


@dataclass(frozen=True)
class ConfigurationTable:
    """Combinatorial (p_gamma l_pi) incidence table; columns hold point labels."""

    columns: tuple[tuple[int, ...], ...]

    def __init__(self, columns):
        cols = tuple(tuple(sorted(int(v) for v in col)) for col in columns)
        object.__setattr__(self, "columns", cols)

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(sorted({v for col in self.columns for v in col}))

    @property
    def p(self) -> int:
        return len(self.points)

    @property
    def l(self) -> int:
        return len(self.columns)

    @property
    def gamma(self) -> int:
        counts = self._occurrences()
        return counts[self.points[0]] if self.points else 0

    @property
    def pi(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    def _occurrences(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for col in self.columns:
            for v in col:
                counts[v] = counts.get(v, 0) + 1
        return counts

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "gamma": self.gamma,
            "pi": self.pi,
            "columns": [list(col) for col in self.columns],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConfigurationTable":
        return cls(obj["columns"])


def validate_table(table: ConfigurationTable) -> list[str]:
    """All invariant violations, named; an empty list means the table is valid."""
    violations = []
    if not table.columns:
        return ["table has no columns"]
    pi = len(table.columns[0])
    for idx, col in enumerate(table.columns):
        if len(set(col)) != len(col):
            violations.append(f"column {idx} repeats a point label")
        if len(col) != pi:
            violations.append(f"column {idx} has {len(col)} labels, expected {pi}")
    counts = table._occurrences()
    gammas = sorted(set(counts.values()))
    if len(gammas) > 1:
        for label, count in sorted(counts.items()):
            if count != gammas[-1]:
                violations.append(
                    f"point {label} lies on {count} lines while others lie on {gammas[-1]}"
                )
    for i, j in itertools.combinations(range(len(table.columns)), 2):
        shared = set(table.columns[i]) & set(table.columns[j])
        if len(shared) > 1:
            violations.append(f"columns {i} and {j} share points {sorted(shared)}")
    if not violations:
        if table.p * table.gamma != table.l * table.pi:
            violations.append(
                f"incidence count mismatch: p*gamma = {table.p * table.gamma}, "
                f"l*pi = {table.l * table.pi}"
            )
    return violations


# --- canonical labeling -------------------------------------------------------


def _canonical_search(columns: list[frozenset[int]], points: list[int]):
    """Point labeling maximizing the level-by-level sorted column-prefix code.

    Classic maximal-code canonicalization: labels are assigned one point at a
    time; after each label every column has a prefix integer (bit t set when
    the column contains the point labeled t, earlier labels more significant)
    and the level code is the descending-sorted prefix tuple.  Assignments are
    compared by the sequence of level codes, which makes branch-and-bound
    exact.  Returns (point order, column order) of the winning labeling.
    """
    npts = len(points)
    membership = {pt: frozenset(i for i, col in enumerate(columns) if pt in col) for pt in points}
    best: dict = {"levels": None, "order": None}

    def dfs(order: list[int], prefixes: list[int], levels: list, better: bool):
        t = len(order)
        if t == npts:
            if better or best["levels"] is None:
                best["levels"] = list(levels)
                best["order"] = list(order)
            return
        used = set(order)
        scored = []
        for pt in points:
            if pt in used:
                continue
            new_prefixes = [
                (pfx << 1) | (1 if idx in membership[pt] else 0)
                for idx, pfx in enumerate(prefixes)
            ]
            code = tuple(sorted(new_prefixes, reverse=True))
            scored.append((code, pt, new_prefixes))
        scored.sort(key=lambda item: item[0], reverse=True)
        seen_codes = set()
        for code, pt, new_prefixes in scored:
            child_better = better
            if not child_better and best["levels"] is not None:
                ref = best["levels"][t]
                if code < ref:
                    continue  # candidates are sorted; all further ones also lose
                if code > ref:
                    child_better = True
            if not child_better and code in seen_codes:
                pass  # equal-code siblings can still differ deeper; explore all
            seen_codes.add(code)
            levels.append(code)
            order.append(pt)
            dfs(order, new_prefixes, levels, child_better)
            order.pop()
            levels.pop()

    dfs([], [0] * len(columns), [], False)
    order = best["order"]
    label_of = {pt: t for t, pt in enumerate(order)}
    relabeled = [tuple(sorted(label_of[pt] for pt in col)) for col in columns]
    col_order = sorted(range(len(columns)), key=lambda i: relabeled[i])
    return order, col_order


def canonical_form(table: ConfigurationTable) -> ConfigurationTable:
    """Canonical representative of the relabeling class; idempotent."""
    canonical, _, _ = _canonicalize(table)
    return canonical


def _canonicalize(table: ConfigurationTable):
    """Canonical table plus the point map (original label -> canonical label)
    and the column order (canonical index -> original index)."""
    columns = [frozenset(col) for col in table.columns]
    points = list(table.points)
    order, col_order = _canonical_search(columns, points)
    label_of = {pt: t for t, pt in enumerate(order)}
    new_columns = [
        tuple(sorted(label_of[pt] for pt in table.columns[orig])) for orig in col_order
    ]
    return ConfigurationTable(new_columns), label_of, tuple(col_order)


def isomorphic(t1: ConfigurationTable, t2: ConfigurationTable) -> bool:
    """Tables are identical up to relabeling points and lines."""
    if (t1.p, t1.l, t1.gamma, t1.pi) != (t2.p, t2.l, t2.gamma, t2.pi):
        return False
    return canonical_form(t1).columns == canonical_form(t2).columns


# --- exhaustive (n_3) enumeration ----------------------------------------------


def enumerate_n3(n: int) -> list[ConfigurationTable]:
    """All (n_3) configuration tables up to isomorphism, by exhaustive
    backtracking with canonical-form deduplication.  Bounded to n <= 10."""
    if n < 1 or n > 10:
        raise ValueError("enumeration is supported for 1 <= n <= 10")
    raw: list[ConfigurationTable] = []
    if n >= 7:
        # Any (n_3) can be relabeled so the three lines through point 0 are
        # these; the lex-sorted line list then starts with them.
        prefix = [(0, 1, 2), (0, 3, 4), (0, 5, 6)]
        raw = _complete_n3(n, prefix)
    else:
        # Three pairwise-intersecting lines through one point already need
        # seven points, so small n have no tables; the plain search confirms.
        raw = _complete_n3(n, [])
    classes: list[ConfigurationTable] = []
    seen: set[tuple] = set()
    for table in raw:
        key = canonical_form(table).columns
        if key not in seen:
            seen.add(key)
            classes.append(ConfigurationTable(key))
    return classes


def _complete_n3(n: int, prefix: list[tuple[int, int, int]]) -> list[ConfigurationTable]:
    degrees = [0] * n
    pair_used = set()
    for line in prefix:
        for v in line:
            degrees[v] += 1
        for a, b in itertools.combinations(line, 2):
            pair_used.add((a, b))
    results: list[ConfigurationTable] = []
    lines = list(prefix)

    def backtrack():
        if len(lines) == n:
            if all(d == 3 for d in degrees):
                results.append(ConfigurationTable(lines))
            return
        deficient = [v for v in range(n) if degrees[v] < 3]
        if not deficient:
            return
        q = deficient[0]
        # every remaining line consists of deficient points and the lex-next
        # line must contain the smallest one
        last = lines[-1] if lines else None
        for a, b in itertools.combinations([v for v in deficient if v > q], 2):
            line = (q, a, b)
            if last is not None and line <= last:
                continue
            if (q, a) in pair_used or (q, b) in pair_used or (a, b) in pair_used:
                continue
            lines.append(line)
            for v in line:
                degrees[v] += 1
            for pair in ((q, a), (q, b), (a, b)):
                pair_used.add(pair)
            backtrack()
            lines.pop()
            for v in line:
                degrees[v] -= 1
            for pair in ((q, a), (q, b), (a, b)):
                pair_used.discard(pair)

    backtrack()
    return results


# --- colorings -----------------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    """Line indices per color; black order is meaningful (it fixes which
    permutation each non-first black line contributes)."""

    black: tuple[int, ...]
    red: tuple[int, ...]
    green: tuple[int, ...]

    def to_json(self) -> dict:
        return {"black": list(self.black), "red": list(self.red), "green": list(self.green)}

    @classmethod
    def from_json(cls, obj: dict) -> "Coloring":
        return cls(tuple(obj["black"]), tuple(obj["red"]), tuple(obj["green"]))


def validate_coloring(table: ConfigurationTable, coloring: Coloring) -> list[str]:
    violations = []
    classes = (coloring.black, coloring.red, coloring.green)
    assigned = [idx for cls in classes for idx in cls]
    if sorted(assigned) != list(range(table.l)):
        violations.append("color classes do not partition the line indices")
        return violations
    if not (len(coloring.black) == len(coloring.red) == len(coloring.green)):
        violations.append("color classes have unequal sizes")
    color_of = {}
    for color, cls in zip("brg", classes):
        for idx in cls:
            color_of[idx] = color
    for pt in table.points:
        colors = sorted(
            color_of[idx] for idx, col in enumerate(table.columns) if pt in col
        )
        if colors != ["b", "g", "r"]:
            violations.append(f"point {pt} does not meet one line of each color")
    return violations


def find_coloring(table: ConfigurationTable) -> Coloring | None:
    """First black/red/green partition in deterministic order, or None.

    The table is canonicalized first so the answer does not depend on the
    input's column order; the classes are then pulled back to the original
    column indices.
    """
    violations = validate_table(table)
    if violations:
        raise ValueError("invalid table: " + "; ".join(violations))
    if table.gamma != 3 or table.l % 3 != 0:
        raise ValueError("coloring needs gamma = 3 and a line count divisible by 3")
    canonical, _, col_order = _canonicalize(table)
    coloring = _color_canonical(canonical)
    if coloring is None:
        return None
    classes = {0: [], 1: [], 2: []}
    for canon_idx, color in enumerate(coloring):
        classes[color].append(col_order[canon_idx])
    return Coloring(
        tuple(sorted(classes[0])), tuple(sorted(classes[1])), tuple(sorted(classes[2]))
    )


def _color_canonical(table: ConfigurationTable) -> list[int] | None:
    """Backtracking proper 3-coloring where lines through a common point get
    distinct colors; first solution in lex order on (line index, color)."""
    l = table.l
    conflicts: list[set[int]] = [set() for _ in range(l)]
    for pt in table.points:
        through = [idx for idx, col in enumerate(table.columns) if pt in col]
        for a, b in itertools.combinations(through, 2):
            conflicts[a].add(b)
            conflicts[b].add(a)
    colors = [-1] * l
    quota = l // 3

    def backtrack(idx: int) -> bool:
        if idx == l:
            return True
        for color in range(3):
            if sum(1 for c in colors if c == color) >= quota:
                continue
            if any(colors[other] == color for other in conflicts[idx]):
                continue
            colors[idx] = color
            if backtrack(idx + 1):
                return True
            colors[idx] = -1
        return False

    return colors if backtrack(0) else None


# --- permutation extraction -----------------------------------------------------


def extract_permutations(table: ConfigurationTable, coloring: Coloring):
    """The red/green pairing permutations carried by the non-first black lines.

    On every black line each point joins one red and one green line; that
    pairing must be a bijection.  Green lines are relabeled so the first
    black line's pairing becomes the identity; the remaining black lines then
    define permutations (s, p) or (s, p, v) in the caller's black order,
    mapping a green index to its red partner.
    """
    violations = validate_coloring(table, coloring)
    if violations:
        raise MalformedColoringError("; ".join(violations))
    red_pos = {idx: i for i, idx in enumerate(coloring.red)}
    green_pos = {idx: i for i, idx in enumerate(coloring.green)}
    red_set, green_set = set(coloring.red), set(coloring.green)
    k = len(coloring.red)
    pairings = []
    for black in coloring.black:
        pairing = {}
        for pt in table.columns[black]:
            through = [idx for idx, col in enumerate(table.columns) if pt in col]
            reds = [idx for idx in through if idx in red_set]
            greens = [idx for idx in through if idx in green_set]
            if len(reds) != 1 or len(greens) != 1:
                raise MalformedColoringError(
                    f"point {pt} on black line {black} lacks a unique red/green pair"
                )
            g, r = green_pos[greens[0]], red_pos[reds[0]]
            if g in pairing:
                raise MalformedColoringError(
                    f"green line {greens[0]} pairs twice on black line {black}"
                )
            pairing[g] = r
        if sorted(pairing) != list(range(k)) or sorted(pairing.values()) != list(range(k)):
            raise MalformedColoringError(f"pairing on black line {black} is not a bijection")
        pairings.append(pairing)
    base = pairings[0]
    # relabel greens so the first black line pairs green i with red i
    perms = []
    for pairing in pairings[1:]:
        perms.append(tuple(pairing[g] for g in _inverse_map(base)))
    return tuple(perms)


def _inverse_map(pairing: dict[int, int]) -> list[int]:
    inv = [0] * len(pairing)
    for g, r in pairing.items():
        inv[r] = g
    return inv


# --- sketches --------------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceSketch:
    """Exact rational realization of a colored picture: every point is the
    meet of one black, one red and one green line, and all recorded
    incidences hold exactly."""

    points: tuple[ProjPoint, ...]
    line_forms: tuple[LinearForm, ...]
    line_colors: tuple[str, ...]
    line_labels: tuple[str, ...]
    table: ConfigurationTable
    coloring: Coloring
    basis: Basis


def sketch_from_q(F: FactorProduct, black_lines) -> IncidenceSketch:
    """Draw the picture of a factor product: numerator factors are red lines,
    denominator factors green, and each given black line must carry exactly
    k points where a red and a green line cross it (one per red and green).
    The configuration table read off the sketch is attached.
    """
    blacks = list(black_lines)
    if not blacks:
        raise ValueError("at least one black line is required")
    basis = blacks[0].basis
    if any(b.basis is not basis for b in blacks):
        raise ValueError("black lines must share a basis")
    F = convert_product(F, basis)
    k = F.k
    if len(blacks) != k:
        raise NotAQPictureError(
            f"a k = {k} product needs {k} black lines, got {len(blacks)}"
        )
    reds = list(F.num)
    greens = list(F.den)
    all_lines = blacks + reds + greens
    for i, j in itertools.combinations(range(len(all_lines)), 2):
        if all_lines[i].same_line(all_lines[j]):
            raise NotAQPictureError(
                f"lines {i} and {j} of the picture are proportional"
            )
    black_points: list[list[ProjPoint]] = []
    owner: dict[ProjPoint, tuple[int, int, int]] = {}
    for b_idx, black in enumerate(blacks):
        hits: dict[int, tuple[int, ProjPoint]] = {}
        greens_seen = set()
        for i, red in enumerate(reds):
            for j, green in enumerate(greens):
                pt = meet(red, green)
                if not incident(pt, black):
                    continue
                if i in hits:
                    raise NotAQPictureError(
                        f"red line {i} crosses black line {b_idx} at two triple points"
                    )
                if j in greens_seen:
                    raise NotAQPictureError(
                        f"green line {j} crosses black line {b_idx} at two triple points"
                    )
                hits[i] = (j, pt)
                greens_seen.add(j)
        if len(hits) != k:
            raise NotAQPictureError(
                f"black line {b_idx} carries {len(hits)} triple points, expected {k}"
            )
        row = []
        for i in range(k):
            j, pt = hits[i]
            if pt in owner:
                raise NotAQPictureError(
                    f"triple point of black line {b_idx} already lies on black line "
                    f"{owner[pt][0]}"
                )
            owner[pt] = (b_idx, i, j)
            row.append(pt)
        black_points.append(row)
    points: list[ProjPoint] = [pt for row in black_points for pt in row]
    label_of = {pt: idx for idx, pt in enumerate(points)}
    columns: list[list[int]] = [[] for _ in range(3 * k)]
    for pt, (b_idx, i, j) in owner.items():
        label = label_of[pt]
        columns[b_idx].append(label)
        columns[k + i].append(label)
        columns[2 * k + j].append(label)
    table = ConfigurationTable(columns)
    coloring = Coloring(
        tuple(range(k)), tuple(range(k, 2 * k)), tuple(range(2 * k, 3 * k))
    )
    for pt, (b_idx, i, j) in owner.items():
        assert incident(pt, blacks[b_idx]) and incident(pt, reds[i]) and incident(pt, greens[j])
    labels = tuple(
        [_black_label(b, idx) for idx, b in enumerate(blacks)]
        + [f"r{i + 1}" for i in range(k)]
        + [f"g{j + 1}" for j in range(k)]
    )
    return IncidenceSketch(
        points=tuple(points),
        line_forms=tuple(all_lines),
        line_colors=tuple(["black"] * k + ["red"] * k + ["green"] * k),
        line_labels=labels,
        table=table,
        coloring=coloring,
        basis=basis,
    )


def _black_label(form: LinearForm, idx: int) -> str:
    for name in ("sl", "so", "sp", "exc"):
        if form.same_line(family_line(name, form.basis)):
            return name
    return f"b{idx + 1}"


# --- SVG emission -----------------------------------------------------------------


_SVG_COLORS = {"black": "#000000", "red": "#c22a2a", "green": "#1f8a3d"}


def _chart_candidates(basis: Basis):
    yield LinearForm((1, 0, 0), basis)
    yield LinearForm((0, 1, 0), basis)
    yield LinearForm((0, 0, 1), basis)
    for q in range(1, 40):
        yield LinearForm((1, q, q * q), basis)


def choose_chart(sketch: IncidenceSketch) -> LinearForm:
    """First chart line (sent to infinity) with no sketch point on it and not
    proportional to any sketch line."""
    for chart in _chart_candidates(sketch.basis):
        if any(incident(pt, chart) for pt in sketch.points):
            continue
        if any(chart.same_line(f) for f in sketch.line_forms):
            continue
        return chart
    raise DegenerateInputError("no usable chart line found")


def _affine_frame(chart: LinearForm):
    """Two coordinate forms completing the chart to a basis of the dual."""
    w = chart.coeffs
    for i, j in ((0, 1), (0, 2), (1, 2)):
        rest = 3 - i - j
        if w[rest] != 0:
            e_i = [Fraction(0)] * 3
            e_j = [Fraction(0)] * 3
            e_i[i] = Fraction(1)
            e_j[j] = Fraction(1)
            return (tuple(e_i), tuple(e_j))
    raise DegenerateInputError("chart form is zero")


def _solve3(a, b, c, target):
    """Coordinates of `target` in the basis (a, b, c) of coefficient triples."""
    from ._linalg import rref

    rows = [
        [a[i], b[i], c[i], target[i]] for i in range(3)
    ]
    mat, pivots = rref([[Fraction(v) for v in row] for row in rows])
    if pivots != [0, 1, 2]:
        raise DegenerateInputError("frame is singular")
    return tuple(mat[i][3] for i in range(3))


def emit_svg(sketch: IncidenceSketch, path=None, size: int = 720) -> str:
    """Render the sketch deterministically; identical inputs give
    byte-identical output.  The default chart sends the first coordinate line
    to infinity and falls back automatically whenever a sketch point would
    land on the chart."""
    chart = choose_chart(sketch)
    e1, e2 = _affine_frame(chart)
    pts_xy = []
    for pt in sketch.points:
        w = sum(c * v for c, v in zip(chart.coeffs, pt.coords))
        x = sum(c * v for c, v in zip(e1, pt.coords)) / w
        y = sum(c * v for c, v in zip(e2, pt.coords)) / w
        pts_xy.append((float(x), float(y)))
    xs = [x for x, _ in pts_xy]
    ys = [y for _, y in pts_xy]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = 0.2 * span
    x0, y0 = min(xs) - pad, min(ys) - pad
    x1, y1 = max(xs) + pad, max(ys) + pad
    scale = size / max(x1 - x0, y1 - y0)

    def to_screen(x, y):
        return ((x - x0) * scale, (y1 - y) * scale)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    for form, color, label in zip(sketch.line_forms, sketch.line_colors, sketch.line_labels):
        lam = _solve3(e1, e2, chart.coeffs, form.coeffs)
        seg = _clip_line(float(lam[0]), float(lam[1]), float(lam[2]), x0, y0, x1, y1)
        if seg is None:
            continue
        (ax, ay), (bx, by) = to_screen(*seg[0]), to_screen(*seg[1])
        stroke = _SVG_COLORS[color]
        parts.append(
            f'<line x1="{ax:.3f}" y1="{ay:.3f}" x2="{bx:.3f}" y2="{by:.3f}" '
            f'stroke="{stroke}" stroke-width="1.4"/>'
        )
        lx, ly = ax * 0.9 + bx * 0.1, ay * 0.9 + by * 0.1
        parts.append(
            f'<text x="{lx:.3f}" y="{ly:.3f}" font-size="13" fill="{stroke}" '
            f'font-family="monospace">{label}</text>'
        )
    for idx, (x, y) in enumerate(pts_xy):
        sx, sy = to_screen(x, y)
        parts.append(f'<circle cx="{sx:.3f}" cy="{sy:.3f}" r="3.2" fill="#000000"/>')
        parts.append(
            f'<text x="{sx + 5:.3f}" y="{sy - 5:.3f}" font-size="11" fill="#444444" '
            f'font-family="monospace">P{idx + 1}</text>'
        )
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text


def _clip_line(a, b, c, x0, y0, x1, y1):
    """Segment of a*x + b*y + c = 0 inside the box, or None."""
    pts = []
    if abs(b) > 1e-12:
        for x in (x0, x1):
            y = -(a * x + c) / b
            if y0 - 1e-9 <= y <= y1 + 1e-9:
                pts.append((x, y))
    if abs(a) > 1e-12:
        for y in (y0, y1):
            x = -(b * y + c) / a
            if x0 - 1e-9 <= x <= x1 + 1e-9:
                pts.append((x, y))
    dedup = []
    for pt in pts:
        if all(abs(pt[0] - q[0]) + abs(pt[1] - q[1]) > 1e-9 for q in dedup):
            dedup.append(pt)
    if len(dedup) < 2:
        return None
    dedup.sort()
    return dedup[0], dedup[-1]


# --- bounded search for the 12-line extension --------------------------------------


@dataclass(frozen=True)
class SearchReport:
    budget: int
    nodes_used: int
    best_depth: int
    depth_candidates: tuple[int, ...]
    found: bool

    def to_json(self) -> dict:
        return {
            "budget": self.budget,
            "nodes_used": self.nodes_used,
            "best_depth": self.best_depth,
            "depth_candidates": list(self.depth_candidates),
            "found": self.found,
        }


def search_144(budget: int, pool_bound: int = 2) -> SearchReport:
    """Bounded backtracking attempt to extend the 12 distinguished lines with
    12 red and 12 green lines so every red/green crossing needed lands on a
    black line.  Candidate lines come from a deterministic small-coefficient
    pool; the report records how deep the search got and how many candidates
    each depth offered.  This is a harness: it never claims completeness.
    """
    blacks = distinguished_lines(Basis.PRIMED)
    for i, j in itertools.combinations(range(len(blacks)), 2):
        assert not blacks[i].same_line(blacks[j]), "distinguished lines must be distinct"
    if budget <= 0:
        return SearchReport(budget, 0, 0, (), False)
    pool = _line_pool(Basis.PRIMED, pool_bound, blacks)
    black_pair_points = {
        meet(blacks[i], blacks[j])
        for i, j in itertools.combinations(range(len(blacks)), 2)
    }
    state = {"nodes": 0, "best": 0, "counts": [], "found": False}

    def candidates(used_red, used_green, triples):
        out = []
        for ri, red in enumerate(pool):
            if ri in used_red or ri in used_green:
                continue
            for gi, green in enumerate(pool):
                if gi in used_red or gi in used_green or gi == ri:
                    continue
                pt = meet(red, green)
                on_black = [b for b in blacks if incident(pt, b)]
                if len(on_black) != 1:
                    continue  # zero: useless pair; two or more: degenerate point
                if pt in black_pair_points or pt in triples:
                    continue
                out.append((ri, gi, pt))
        return out

    def dfs(used_red, used_green, triples, depth):
        if state["nodes"] >= budget or state["found"]:
            return
        state["best"] = max(state["best"], depth)
        if depth == 12:
            state["found"] = True
            return
        cands = candidates(used_red, used_green, triples)
        if len(state["counts"]) <= depth:
            state["counts"].append(len(cands))
        for ri, gi, pt in cands:
            if state["nodes"] >= budget:
                return
            state["nodes"] += 1
            dfs(used_red | {ri}, used_green | {gi}, triples | {pt}, depth + 1)

    dfs(frozenset(), frozenset(), frozenset(), 0)
    return SearchReport(budget, state["nodes"], state["best"], tuple(state["counts"]), state["found"])


def _line_pool(basis: Basis, bound: int, blacks) -> list[LinearForm]:
    pool = []
    seen = set()
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                if (a, b, c) == (0, 0, 0):
                    continue
                form = LinearForm((a, b, c), basis)
                key = form.canonical()
                if key in seen:
                    continue
                seen.add(key)
                if any(form.same_line(bl) for bl in blacks):
                    continue
                pool.append(LinearForm(key, basis))
    return pool
