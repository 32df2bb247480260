"""Closed-form rule-count algebra and parameter sweeps.

For a regular graph with C prerequisite links and N leaves per parent, the
one-vs-all classifier needs C * 2**N + 1 rules: a block of 2**N rules per
linked concept plus one default rule for the chain bottom.  The step
operations grow or shrink a known count when N moves by one, which is how
an authoring tool keeps a live estimate without recounting from scratch.

All arithmetic is exact integer arithmetic; there is no overflow to guard.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import List, Tuple

from .errors import EmptyGrid, InconsistentInput, InvalidC, InvalidN, ParseError
from .ontology import OUTCOMES_PER_QUESTION

#: Upper bound on C and N accepted by sweeps; generous but finite so that a
#: typo cannot ask for a grid with 2**1000 in it.
DEFAULT_K_MAX = 64


def estimate_rules(parent_steps: int, leaves_per_parent: int) -> int:
    """Rules needed for C prerequisite links and N leaves per parent."""
    _check_c(parent_steps)
    _check_n(leaves_per_parent)
    return parent_steps * OUTCOMES_PER_QUESTION ** leaves_per_parent + 1


def increment_rules(
    rules: int,
    parent_steps: int,
    n_new: int,
    strict: bool = True,
) -> int:
    """Rule count after raising leaves-per-parent from n_new - 1 to n_new.

    The update adds C * 2**(n_new - 1) to the previous count.  With strict
    checking (the default) the given count must equal the closed form for
    n_new - 1; pass strict=False to apply the raw arithmetic to any R.
    """
    _check_c(parent_steps)
    if n_new < 2:
        raise InvalidN(
            f"cannot step up to N={n_new}; the smallest step target is N=2"
        )
    if strict and rules != estimate_rules(parent_steps, n_new - 1):
        raise InconsistentInput(
            f"R={rules} is not the rule count for C={parent_steps}, "
            f"N={n_new - 1}"
        )
    return rules + parent_steps * OUTCOMES_PER_QUESTION ** (n_new - 1)


def decrement_rules(
    rules: int,
    parent_steps: int,
    n_old: int,
    strict: bool = True,
) -> int:
    """Rule count after lowering leaves-per-parent from n_old to n_old - 1.

    The update removes C * 2**n_old / 2 rules.  N may never reach zero, so
    stepping down from N=1 is refused, as is C=0 (with no prerequisite links
    there is nothing to shrink: the count is pinned at 1).
    """
    if parent_steps == 0:
        raise InvalidC("decrement needs at least one prerequisite link (C >= 1)")
    _check_c(parent_steps)
    if n_old < 2:
        raise InvalidN(
            f"cannot step down from N={n_old}; N may never reach zero"
        )
    if strict and rules != estimate_rules(parent_steps, n_old):
        raise InconsistentInput(
            f"R={rules} is not the rule count for C={parent_steps}, N={n_old}"
        )
    return rules - parent_steps * OUTCOMES_PER_QUESTION ** n_old // 2


def _check_c(parent_steps: int) -> None:
    if parent_steps < 0:
        raise InvalidC(f"C must be non-negative, got {parent_steps}")


def _check_n(leaves_per_parent: int) -> None:
    if leaves_per_parent < 1:
        raise InvalidN(
            f"N must be strictly positive, got {leaves_per_parent}"
        )


# --- sweeps -----------------------------------------------------------------

@dataclass
class SweepRow:
    parent_steps: int
    leaves_per_parent: int
    rules: int


@dataclass
class SweepGrid:
    """Cartesian C x N sweep of the closed form, rows sorted by (C, N)."""

    c_values: List[int]
    n_values: List[int]
    rows: List[SweepRow]

    def rules_by_c(self, parent_steps: int) -> List[int]:
        """The R series for one C across all N, in N order."""
        return [
            row.rules for row in self.rows if row.parent_steps == parent_steps
        ]

    def rules_by_n(self, leaves_per_parent: int) -> List[int]:
        """The R series for one N across all C, in C order."""
        return [
            row.rules
            for row in self.rows
            if row.leaves_per_parent == leaves_per_parent
        ]


def sweep(
    c_range: Tuple[int, int],
    n_range: Tuple[int, int],
    k_max: int = DEFAULT_K_MAX,
) -> SweepGrid:
    """Evaluate the closed form over inclusive C and N intervals."""
    c_lo, c_hi = c_range
    n_lo, n_hi = n_range
    if c_lo > c_hi or n_lo > n_hi:
        raise EmptyGrid(
            f"ranges C={c_lo}..{c_hi}, N={n_lo}..{n_hi} span no grid points"
        )
    if c_lo < 0 or c_hi > k_max:
        raise InvalidC(
            f"C range {c_lo}..{c_hi} must sit inside 0..{k_max}"
        )
    if n_lo < 1 or n_hi > k_max:
        raise InvalidN(
            f"N range {n_lo}..{n_hi} must sit inside 1..{k_max}"
        )
    c_values = list(range(c_lo, c_hi + 1))
    n_values = list(range(n_lo, n_hi + 1))
    rows = [
        SweepRow(c, n, estimate_rules(c, n))
        for c in c_values
        for n in n_values
    ]
    return SweepGrid(c_values=c_values, n_values=n_values, rows=rows)


def emit_dataset_csv(grid: SweepGrid) -> str:
    """Render a grid as `C,N,R` text, one data row per grid row."""
    if not grid.rows:
        raise EmptyGrid("sweep grid has no rows")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["C", "N", "R"])
    for row in grid.rows:
        writer.writerow([row.parent_steps, row.leaves_per_parent, row.rules])
    return out.getvalue()


def parse_dataset_csv(text: str) -> SweepGrid:
    """Inverse of emit_dataset_csv, for round-tripping stored datasets."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("dataset is empty") from None
    if header != ["C", "N", "R"]:
        raise ParseError(f"expected header C,N,R, got {','.join(header)}")
    rows: List[SweepRow] = []
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != 3:
            raise ParseError("expected three fields", line=lineno)
        try:
            c, n, r = (int(field) for field in record)
        except ValueError:
            raise ParseError(
                f"non-integer field in {record!r}", line=lineno
            ) from None
        rows.append(SweepRow(c, n, r))
    if not rows:
        raise EmptyGrid("dataset has a header but no rows")
    c_values = sorted({row.parent_steps for row in rows})
    n_values = sorted({row.leaves_per_parent for row in rows})
    return SweepGrid(c_values=c_values, n_values=n_values, rows=rows)


def iterate_increments(
    parent_steps: int,
    n_start: int,
    n_stop: int,
) -> List[int]:
    """Counts for N = n_start..n_stop computed by repeated increments.

    Starts from the closed form at n_start and then applies increment_rules
    step by step, which doubles as a consistency exercise of the algebra.
    """
    if n_stop < n_start:
        raise InvalidN(f"N range {n_start}..{n_stop} is reversed")
    counts = [estimate_rules(parent_steps, n_start)]
    for n in range(n_start + 1, n_stop + 1):
        counts.append(increment_rules(counts[-1], parent_steps, n))
    return counts
