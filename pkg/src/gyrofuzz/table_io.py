"""Cayley-table files and an exhaustive gyrogroup decision procedure.

File format::

    # comment lines start with '#'
    gyrotable 4
    e a b c
    e a b c
    a b c e
    b c e a
    c e a b

Row r, column c holds the name of ``element_r ⊕ element_c``. Gyration tables
are never read; they are derived from ``⊕`` through the gyrator identity.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path

from .gyro_core import TableGyrogroup, find_inverses

_NAME = re.compile(r"^[A-Za-z0-9_]+$")

GROUP = "group"
GYROGROUP = "gyrogroup-nongroup"
NOT_GYROGROUP = "not-gyrogroup"


class TableParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class CayleyTable:
    names: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise ValueError("a table needs at least one element")
        if len(set(self.names)) != n:
            raise ValueError("element names must be distinct")
        if len(self.cells) != n or any(len(r) != n for r in self.cells):
            raise ValueError("cells must form an n x n matrix")
        if any(not (0 <= v < n) for r in self.cells for v in r):
            raise ValueError("every cell must index an element")

    @property
    def order(self) -> int:
        return len(self.names)

    def op(self, a: int, b: int) -> int:
        return self.cells[a][b]

    def gyrogroup(self, name: str = "table") -> TableGyrogroup:
        return TableGyrogroup(self.cells, self.names, name)

    @classmethod
    def from_function(cls, names, op) -> "CayleyTable":
        n = len(names)
        return cls(tuple(names), tuple(tuple(op(a, b) for b in range(n)) for a in range(n)))


@dataclass(frozen=True)
class Diagnosis:
    verdict: str
    failing_axiom: str | None = None
    witness: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "failing_axiom": self.failing_axiom,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def parse_table(text: str) -> CayleyTable:
    """Parse the ``gyrotable`` text format; errors carry line and column."""
    rows: list[tuple[int, list[tuple[int, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", raw)]
        rows.append((lineno, tokens))
    if not rows:
        raise TableParseError("empty input; expected 'gyrotable <n>'", 1)

    lineno, head = rows[0]
    if len(head) != 2 or head[0][1] != "gyrotable":
        raise TableParseError("malformed header; expected 'gyrotable <n>'", lineno, head[0][0])
    col, count = head[1]
    if not count.isdigit() or int(count) < 1:
        raise TableParseError(f"order must be a positive integer, got {count!r}", lineno, col)
    n = int(count)

    if len(rows) < 2:
        raise TableParseError("missing element-name line", lineno + 1)
    lineno, name_toks = rows[1]
    if len(name_toks) != n:
        raise TableParseError(f"expected {n} names, found {len(name_toks)}", lineno)
    index: dict[str, int] = {}
    for col, name in name_toks:
        if not _NAME.match(name):
            raise TableParseError(f"invalid name {name!r}", lineno, col)
        if name in index:
            raise TableParseError(f"duplicate name {name!r}", lineno, col)
        index[name] = len(index)

    body = rows[2:]
    if len(body) < n:
        last = body[-1][0] if body else lineno
        raise TableParseError(f"expected {n} rows, found {len(body)} (row {len(body) + 1} missing)",
                              last + 1)
    if len(body) > n:
        raise TableParseError(f"expected {n} rows, found {len(body)}; a gyration table is never "
                              "accepted as input", body[n][0])
    cells = []
    for r, (lineno, toks) in enumerate(body, start=1):
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else (toks[-1][0] + len(toks[-1][1]) if toks else 1)
            raise TableParseError(f"row {r}: expected {n} cells, found {len(toks)}", lineno, col)
        row = []
        for col, name in toks:
            if name not in index:
                raise TableParseError(f"unknown name {name!r}", lineno, col)
            row.append(index[name])
        cells.append(tuple(row))
    return CayleyTable(tuple(index), tuple(cells))


def load_table(path) -> CayleyTable:
    return parse_table(Path(path).read_text(encoding="utf-8"))


def serialize_table(t: CayleyTable) -> str:
    out = [f"gyrotable {t.order}", " ".join(t.names)]
    out += [" ".join(t.names[v] for v in row) for row in t.cells]
    return "\n".join(out) + "\n"


def _left_identity(cells) -> int | None:
    n = len(cells)
    for e in range(n):
        if all(cells[e][x] == x for x in range(n)):
            return e
    return None


def prove_gyrogroup(t: CayleyTable) -> Diagnosis:
    """Decide exhaustively whether ``t`` is a gyrogroup, and whether a group.

    Order of checks: identity, inverses, G3, bijectivity of gyrations,
    automorphism property, G4. The witness is the first failing tuple in
    row-major element order.
    """
    cells, n, names = t.cells, t.order, t.names

    def fail(axiom, *idx):
        return Diagnosis(NOT_GYROGROUP, axiom, tuple(names[i] for i in idx))

    e = _left_identity(cells)
    if e is None:
        return fail("G1")
    for x in range(n):
        if cells[x][e] != x:
            return fail("G1-two-sided", e, x)
    inv = find_inverses(cells, e)
    if inv is None:
        for x in range(n):
            if not any(cells[y][x] == e for y in range(n)):
                return fail("G2", x)

    gyr = [[[cells[inv[cells[a][b]]][cells[a][cells[b][c]]] for c in range(n)]
            for b in range(n)] for a in range(n)]

    for a, b, c in itertools.product(range(n), repeat=3):
        if cells[a][cells[b][c]] != cells[cells[a][b]][gyr[a][b][c]]:
            return fail("G3", a, b, c)
    for a, b in itertools.product(range(n), repeat=2):
        if len(set(gyr[a][b])) != n:
            return fail("gyr-bijective", a, b)
    for a, b, c, d in itertools.product(range(n), repeat=4):
        g = gyr[a][b]
        if g[cells[c][d]] != cells[g[c]][g[d]]:
            return fail("gyr-automorphism", a, b, c, d)
    for a, b, c in itertools.product(range(n), repeat=3):
        if gyr[cells[a][b]][b][c] != gyr[a][b][c]:
            return fail("G4", a, b, c)

    trivial = all(gyr[a][b][c] == c for a, b, c in itertools.product(range(n), repeat=3))
    return Diagnosis(GROUP if trivial else GYROGROUP)


# -- bundled tables ------------------------------------------------------------

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def bundled_tables() -> dict[str, Path]:
    """Bundled ``.gt`` files keyed by stem."""
    return {p.stem: p for p in sorted(FIXTURE_DIR.glob("*.gt"))}


def resolve_table_path(path: str) -> Path:
    """Resolve a user path, falling back to the bundled fixtures directory."""
    p = Path(path)
    if p.exists():
        return p
    candidate = FIXTURE_DIR.parent / p
    if candidate.exists():
        return candidate
    candidate = FIXTURE_DIR / p.name
    if candidate.exists():
        return candidate
    raise FileNotFoundError(path)
