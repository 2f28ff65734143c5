import numpy as np
import pytest

from qaoabench.graphs import Graph, brute_force_maxcut, cut_value, gen_random_3regular
from qaoabench.maxsat import (CnfFormula, brute_force_max2sat, emit_wcnf,
                              parse_wcnf, reduce_to_max2sat)

from conftest import APP_B_MAXCUT
from oracles import max2sat_by_python_loop

SINGLE_EDGE = Graph(2, ((0, 1),))


def test_reduction_single_edge():
    f = reduce_to_max2sat(SINGLE_EDGE)
    assert f.n_vars == 2
    assert f.clauses == ((1, 2), (-1, -2))
    assert brute_force_max2sat(f) == 2


def test_reduction_k3(k3):
    f = reduce_to_max2sat(k3)
    assert f.n_clauses == 6
    assert brute_force_max2sat(f) == 5        # E + k = 3 + 2
    assert max2sat_by_python_loop(f) == 5


def test_reduction_app_b(app_b_graph):
    f = reduce_to_max2sat(app_b_graph)
    assert f.n_vars == 8
    assert f.n_clauses == 24
    assert brute_force_max2sat(f) == 12 + APP_B_MAXCUT


def test_e_plus_k_identity_random_graphs():
    for n in (4, 6, 8, 10, 12):
        for seed in (0, 1, 2, 3):
            g = gen_random_3regular(n, seed)
            k_max, _ = brute_force_maxcut(g)
            assert brute_force_max2sat(reduce_to_max2sat(g)) == g.n_edges + k_max


def test_per_edge_clause_semantics():
    # both clauses of an edge satisfied <=> the edge is cut
    g = gen_random_3regular(6, 5)
    f = reduce_to_max2sat(g)
    rng = np.random.default_rng(1)
    for _ in range(25):
        bits = rng.integers(0, 2, g.n)
        satisfied = 0
        for clause in f.clauses:
            satisfied += any(
                bits[abs(lit) - 1] == (1 if lit > 0 else 0) for lit in clause)
        from qaoabench.graphs import CutAssignment
        cut = cut_value(g, CutAssignment(tuple(int(b) for b in bits)))
        assert satisfied == g.n_edges + cut  # one per edge always, both iff cut
        assert satisfied >= g.n_edges


def test_wcnf_exact_text():
    assert emit_wcnf(reduce_to_max2sat(SINGLE_EDGE)) == \
        "p wcnf 2 2 3\n1 1 2 0\n1 -1 -2 0\n"


def test_wcnf_header_k3(k3):
    assert emit_wcnf(reduce_to_max2sat(k3)).splitlines()[0] == "p wcnf 3 6 7"


def test_wcnf_round_trip(app_b_graph):
    f = reduce_to_max2sat(app_b_graph)
    assert parse_wcnf(emit_wcnf(f)) == f


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, 3),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((0,),))


def test_brute_force_cap():
    with pytest.raises(ValueError):
        brute_force_max2sat(CnfFormula(29, ()))


def test_parse_wcnf_rejects_malformed():
    with pytest.raises(ValueError):
        parse_wcnf("1 1 2 0\n")                      # clause before header
    with pytest.raises(ValueError):
        parse_wcnf("p wcnf 2 1\n1 1 2 0\n")          # short header
    with pytest.raises(ValueError):
        parse_wcnf("p wcnf 2 1 2\n1 1 2\n")          # missing terminator
