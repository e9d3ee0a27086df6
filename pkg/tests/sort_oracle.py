"""Frozen oracle for one specific interleaving of programs/sort.rpl.

The five-element odd-even sort runs in exactly 79 interleaving identifier
steps (0..78). This module pins one hand-derived schedule of those steps:
which statement consumes each identifier, the identifier stack every
statement ends up with, and the exact columns the reversal store must hold
afterwards. The values were worked out by hand before the engine existed
and must never be regenerated from engine output.

Statements are keyed by the uid their source occurrence receives during
preprocessing (stable: depth-first allocation order over the parse tree).
"""

from typing import Dict, List, Tuple

# uid -> final identifier stack, head (newest) first.
#
# uid map for programs/sort.rpl:
#   0  outer begin              1  arr[5] l declaration
#   2..6  l[0..4] initializers  7  count = 0
#   8  while                    41 count += 1       42 remove arr[5] l
#   9/17/25/33  the four conditionals (pairs 0-1, 2-3, 1-2, 3-4)
#   10/18/26/34 their begin blocks
#   11..15 / 19..23 / 27..31 / 35..39  var temp; three swap moves; remove temp
#   16/24/32/40 the (empty) else arms -- never stacked
STACKS: Dict[int, List[int]] = {
    1: [0],
    2: [1],
    3: [2],
    4: [3],
    5: [4],
    6: [5],
    7: [6],
    8: [77, 67, 57, 32, 7],
    9: [70, 68, 61, 58, 45, 33, 21, 8],
    11: [35, 10],
    12: [36, 12],
    13: [38, 14],
    14: [40, 17],
    15: [42, 18],
    17: [71, 69, 60, 59, 46, 34, 20, 9],
    19: [37, 11],
    20: [39, 13],
    21: [41, 15],
    22: [43, 16],
    23: [44, 19],
    25: [73, 72, 65, 63, 50, 47, 30, 23],
    27: [25],
    28: [26],
    29: [27],
    30: [28],
    31: [29],
    33: [75, 74, 64, 62, 55, 48, 24, 22],
    35: [49],
    36: [51],
    37: [52],
    38: [53],
    39: [54],
    41: [76, 66, 56, 31],
    42: [78],
}


def owner_by_identifier() -> Dict[int, int]:
    """identifier -> uid of the statement that must consume it."""
    owner: Dict[int, int] = {}
    for uid, stack in STACKS.items():
        for ident in stack:
            assert ident not in owner, f"identifier {ident} owned twice"
            owner[ident] = uid
    assert sorted(owner) == list(range(79))
    return owner


# Reversal-store columns after the scripted run, newest entry first.
DELTA_TEMP: List[Tuple[int, int]] = [
    (54, 7), (51, 0), (44, 7), (42, 3), (39, 0), (36, 0),
    (29, 7), (26, 0), (19, 4), (18, 7), (13, 0), (12, 0),
]

DELTA_COUNT: List[Tuple[int, int]] = [(6, 0)]

DELTA_L: List[Tuple[int, int]] = [
    (78, 7), (78, 6), (78, 4), (78, 3), (78, 1),
    (53, 6), (52, 7), (43, 4), (41, 7), (40, 1), (38, 3),
    (28, 1), (27, 7), (17, 3), (16, 1), (15, 4), (14, 7),
    (5, 0), (4, 0), (3, 0), (2, 0), (1, 0),
]

DELTA_W: List[Tuple[int, bool]] = [
    (77, True), (67, True), (57, True), (32, True), (7, False),
]

# One close record per executed conditional: 4 conditionals x 4 sweeps.
DELTA_B: List[Tuple[int, bool]] = [
    (75, False), (73, False), (71, False), (70, False),
    (65, False), (64, False), (61, False), (60, False),
    (55, True), (50, False), (46, True), (45, True),
    (30, True), (24, False), (21, True), (20, True),
]

SORTED_VALUES = [1, 3, 4, 6, 7]
TOTAL_STEPS = 79
