"""Scratch: validate conventions against the published 8-qubit schedule."""
import numpy as np

from qaoabench.graphs import Graph, brute_force_maxcut
from qaoabench.circuit import QaoaParams, build_qaoa_circuit, logical_depth
from qaoabench.scheduler import (GridTopology, parse_pdpt, schedule,
                                 scheduled_depth, validate_schedule, emit_pdpt)

APP_B_EDGES = ((7, 6), (7, 3), (5, 3), (6, 2), (6, 1), (5, 2),
               (7, 4), (3, 0), (1, 0), (4, 1), (5, 4), (2, 0))

APP_B_PDPT = """\
# PDPT: each column is associated to a physical qubit , each row to a clock-cycle
## physical qubit indices ##################################################
        0       1       2       3       4       5       6       7       8
## logical qubit indices ###################################################
        3       6       4       0       1       7       5       2       *
############################################################################
        8       5       7       8       5       7       6       6       0
        -3      -3      -2      9       9       -2      -1      -1      0
        -5      2       2       -5      -4      0       0       -4      0
        0       0       0       4       11      11      4       0       0
        0       3       -8      -6      3       -8      -6      -7      -7
        12      16      0       12      18      -10     -9      -9      -10
        13      23      10      15      23      10      0       1       1
        28      28      17      26      26      14      0       19      20
        0       -11     -12     -13     -11     -12     -13     0       0
        -14     -14     0       0       -15     -15     24      24      0
        -16     29      29      -16     0       22      0       0       22
        -18     -18     0       31      31      36      0       -17     -17
        0       0       -19     38      27      -19     0       27      0
        -20     -21     -21     -20     0       25      0       0       25
        43      43      0       32      30      30      32      21      21
        0       0       0       33      37      34      35      40      39
        -22     0       0       -22     47      45      0       47      45
        48      48      0       46      50      50      46      41      41
        -25     -25     -23     51      51      -23     -24     -24     0
        0       49      49      58      57      0       0       44      44
        0       0       54      71      71      0       0       0       59
        0       -27     0       -28     -27     -26     -28     0       -26
        42      0       65      42      52      65      0       52      0
        56      70      70      60      53      0       0       55      0
        -29     0       0       -29     0       -30     0       0       -30
        67      67      0       68      68      0       0       64      64
        62      77      -31     62      0       -31     66      66      0
        -33     -33     0       63      69      69      63      -32     -32
        0       0       0       76      -34     74      78      -34     0
        0       61      0       0       61      0       0       72      72
        0       80      0       0       79      0       0       73      75
############################################################################
"""

g = Graph(8, APP_B_EDGES)
print("degrees:", g.degrees())
k_max, optima = brute_force_maxcut(g)
print("k_max:", k_max, "n_optima:", len(optima))
print("optima ints:", sorted(a.to_int() for a in optima))

params = QaoaParams((0.1, 0.2, 0.3, 0.4), (0.5, 0.6, 0.7, 0.8))
circ = build_qaoa_circuit(g, params)
print("gate count:", circ.n_gates, "(expect 8 + 4*20 = 88)")
print("logical depth:", logical_depth(circ))

sched = parse_pdpt(APP_B_PDPT)
print("parsed: cycles", sched.n_cycles, "placement", sched.placement)
grid = GridTopology(3, 3)
viol = validate_schedule(sched, circ, grid)
print("violations:", len(viol))
for v in viol[:15]:
    print("  ", v)

# round trip
rt = parse_pdpt(emit_pdpt(sched))
print("round trip ok:", rt == sched)

# our scheduler
for seed in range(8):
    ours = schedule(circ, grid, seed)
    v = validate_schedule(ours, circ, grid)
    n_swaps = sum(1 for row in ours.table for e in row if e < 0) // 2
    print(f"seed {seed}: depth {scheduled_depth(ours)}, swaps {n_swaps}, violations {len(v)}")
    if v:
        for x in v[:5]:
            print("   ", x)
