"""Read OR-Library "mknap" benchmark files and write experiment result tables.

The mknap layout is a plain whitespace-separated token stream (line breaks
carry no meaning): first the number of problems K, then per problem

    n m optimum
    p_1 ... p_n
    r_11 ... r_1n        (m constraint rows)
    ...
    b_1 ... b_m

An optimum token of 0 means "unknown". Exactly 3 + n + m*n + m tokens are
consumed per problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence, TextIO

from .mkp import MkpInstance

if TYPE_CHECKING:  # pragma: no cover
    from .bench import CellStats


class OrlibFormatError(ValueError):
    """Malformed mknap token stream."""


@dataclass(frozen=True)
class BenchmarkFile:
    problems: tuple[MkpInstance, ...]
    source_path: str = "<string>"


class _Tokens:
    def __init__(self, text: str):
        self.toks = text.split()
        self.pos = 0

    def next(self, what: str) -> str:
        if self.pos >= len(self.toks):
            raise OrlibFormatError(
                f"truncated input: expected {what} at token {self.pos}, "
                f"but the stream has only {len(self.toks)} tokens"
            )
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def number(self, what: str) -> float:
        tok = self.next(what)
        try:
            return float(tok)
        except ValueError:
            raise OrlibFormatError(
                f"non-numeric token {tok!r} for {what} at token {self.pos - 1}"
            ) from None

    def integer(self, what: str) -> int:
        v = self.number(what)
        if v != int(v):
            raise OrlibFormatError(
                f"expected an integer for {what} at token {self.pos - 1}, got {v}"
            )
        return int(v)


def parse_orlib(text: str, source: str = "<string>") -> BenchmarkFile:
    """Parse an mknap-format character stream into instances.

    Raises OrlibFormatError on truncation, non-numeric tokens, negative
    problem dimensions, or trailing tokens.
    """
    tk = _Tokens(text)
    count = tk.integer("problem count")
    if count < 0:
        raise OrlibFormatError(f"negative problem count {count}")
    stem = Path(source).stem if source != "<string>" else "problem"
    problems = []
    for k in range(1, count + 1):
        n = tk.integer(f"n of problem {k}")
        m = tk.integer(f"m of problem {k}")
        if n < 0 or m < 0:
            raise OrlibFormatError(f"negative dimensions (n={n}, m={m}) in problem {k}")
        optimum = tk.number(f"optimum of problem {k}")
        profits = [tk.number(f"profit {j} of problem {k}") for j in range(1, n + 1)]
        weights = [
            [tk.number(f"weight ({i},{j}) of problem {k}") for j in range(1, n + 1)]
            for i in range(1, m + 1)
        ]
        caps = [tk.number(f"capacity {i} of problem {k}") for i in range(1, m + 1)]
        problems.append(
            MkpInstance(
                profits=profits,
                weights=weights,
                capacities=caps,
                known_optimum=optimum if optimum > 0 else None,
                name=f"{stem}-{k}",
            )
        )
    if tk.pos != len(tk.toks):
        raise OrlibFormatError(
            f"unexpected trailing token {tk.toks[tk.pos]!r} at token {tk.pos}"
        )
    return BenchmarkFile(problems=tuple(problems), source_path=source)


def load_orlib(path) -> BenchmarkFile:
    return parse_orlib(Path(path).read_text(encoding="utf-8"), source=str(path))


def _fmt_number(v: float) -> str:
    return str(int(v)) if float(v) == int(v) else repr(float(v))


def format_orlib(bench: BenchmarkFile) -> str:
    """Serialize back to mknap token order; inverse of parse_orlib."""
    lines = [str(len(bench.problems))]
    for inst in bench.problems:
        opt = inst.known_optimum if inst.known_optimum is not None else 0
        lines.append(f"{inst.n} {inst.m} {_fmt_number(opt)}")
        lines.append(" ".join(_fmt_number(v) for v in inst.profits))
        for row in inst.weights:
            lines.append(" ".join(_fmt_number(v) for v in row))
        lines.append(" ".join(_fmt_number(v) for v in inst.capacities))
    return "\n".join(lines) + "\n"


def bundled_mknap1_path() -> Path:
    """Path of the benchmark file shipped with the package."""
    return Path(__file__).parent / "data" / "mknap1.txt"


_CSV_HEADER = "benchmark,coordinator,swarm_size,inner_iters,replications,rpe,cpu_mean_s,best,optimum"


def _cell_order(c: "CellStats"):
    return (c.benchmark, c.coordinator, c.swarm_size, c.inner_iters)


def write_results_csv(cells: Sequence["CellStats"], sink: TextIO) -> None:
    """Emit one CSV row per cell, sorted by (benchmark, coordinator, swarm size).

    RPE is printed with 5 decimal places. Raises ValueError on an empty cell list.
    """
    if not cells:
        raise ValueError("no cells to write")
    sink.write(_CSV_HEADER + "\n")
    for c in sorted(cells, key=_cell_order):
        sink.write(
            f"{c.benchmark},{c.coordinator},{c.swarm_size},{c.inner_iters},"
            f"{c.replications},{c.rpe:.5f},{c.cpu_mean_s:.4f},"
            f"{_fmt_number(c.best_found)},{_fmt_number(c.f_opt)}\n"
        )


def render_table(cells: Iterable["CellStats"]) -> str:
    """Aligned console table: one block per (benchmark, inner iterations),
    one row per swarm size, RPE and CPU columns per coordinator."""
    cells = list(cells)
    if not cells:
        raise ValueError("no cells to render")
    blocks: dict[tuple[str, int], dict[int, dict[str, "CellStats"]]] = {}
    coords: list[str] = []
    for c in cells:
        blocks.setdefault((c.benchmark, c.inner_iters), {}).setdefault(c.swarm_size, {})[
            c.coordinator
        ] = c
        if c.coordinator not in coords:
            coords.append(c.coordinator)
    out = []
    for (bench_name, inner), rows in sorted(blocks.items()):
        out.append(f"{bench_name}  (inner iterations = {inner})")
        header = f"{'size':>6}"
        for name in coords:
            header += f"  {name + ' RPE':>10} {name + ' CPU':>10}"
        out.append(header)
        for size in sorted(rows):
            line = f"{size:>6}"
            for name in coords:
                c = rows[size].get(name)
                if c is None:
                    line += f"  {'-':>10} {'-':>10}"
                else:
                    line += f"  {c.rpe:>10.5f} {c.cpu_mean_s:>10.2f}"
            out.append(line)
        out.append("")
    return "\n".join(out)
