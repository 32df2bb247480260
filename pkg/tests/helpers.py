"""Shared builders for test graphs, banks, and scripted sessions."""

from __future__ import annotations

from typing import List

from preassess import OntologyGraph, load_ontology


def build_regular_graph(parents: int, leaves: int) -> OntologyGraph:
    """A synthetic chain c0 <- c1 <- ... with uniform leaves per parent."""
    lines: List[str] = []
    for p in range(parents):
        parent = f"c{p}"
        lines.append(f"concept {parent}")
        lines.append(f"hasContent {parent} http://example.org/{parent}")
        for l in range(leaves):
            leaf = f"c{p}_t{l}"
            lines.append(f"hasLeaf {parent} {leaf}")
            lines.append(f"hasContent {leaf} http://example.org/{leaf}")
    for p in range(1, parents):
        lines.append(f"hasPrerequisite c{p} c{p - 1}")
    return load_ontology("\n".join(lines) + "\n")


JOIN_ONTOLOGY = """
concept join
hasContent join http://example.org/join
hasLeaf join outer_join
hasContent outer_join http://example.org/join/outer
hasLeaf join inner_join
hasContent inner_join http://example.org/join/inner

concept union
hasContent union http://example.org/union
hasLeaf union union_all
hasContent union_all http://example.org/union/all
hasLeaf union union_distinct
hasContent union_distinct http://example.org/union/distinct

hasPrerequisite union join
"""

JOIN_BANK = """
{
  "outer_join": {"prompt": "Outer join staff with dept keeping all staff rows.",
                 "accepted": ["select * from staff left join dept on staff.dept_id = dept.id"]},
  "inner_join": {"prompt": "Inner join staff with dept on the dept id.",
                 "accepted": ["select * from staff join dept on staff.dept_id = dept.id"]},
  "union_all": {"prompt": "Combine a and b keeping duplicates.",
                "accepted": ["select * from a union all select * from b"]},
  "union_distinct": {"prompt": "Combine a and b dropping duplicates.",
                     "accepted": ["select * from a union select * from b"]}
}
"""


#: Clock moments for the reference UPDATE replay: ask/answer per attempt of
#: delete_select (33 s and 39 s), then delete_where (153 s and 144 s).
UPDATE_REPLAY_CLOCK = [
    "2015-11-03T11:08:54Z", "2015-11-03T11:09:27Z",
    "2015-11-03T11:11:31Z", "2015-11-03T11:12:10Z",
    "2015-11-03T11:12:10Z", "2015-11-03T11:14:43Z",
    "2015-11-03T11:14:50Z", "2015-11-03T11:17:14Z",
]
