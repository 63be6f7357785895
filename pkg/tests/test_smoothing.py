import itertools
import random

import numpy as np
import pytest

from nodalcy.errors import BadPrime, OutOfBudget
from nodalcy.exactfield import CyclotomicNumber, default_primes, totient
from nodalcy.hypersurface import random_nodal_model
from nodalcy.linalg import Subspace, exact_rank, rank, rank_mod_p, reduce_matrix_mod_p
from nodalcy.polyring import monomial_basis
from nodalcy.smoothing import (
    analyze,
    check_power_containment,
    check_power_spans,
    check_smoothable,
    evaluation_matrix,
    modular_evaluation_matrix,
    power_map,
    space_I,
    space_K,
)

Z = CyclotomicNumber.zeta
ORDER = 5


def q(v):
    return CyclotomicNumber.from_rational(ORDER, v)


def sub(rows, dim=None):
    dim = dim or len(rows[0])
    return Subspace.span(rows, dim, ORDER)


def rand_elt(rng, bound=2, sparse=0.0):
    if rng.random() < sparse:
        return CyclotomicNumber.zero(ORDER)
    return CyclotomicNumber(ORDER, [rng.randint(-bound, bound) for _ in range(totient(ORDER))])


# --- evaluation matrices --------------------------------------------------

def test_schoen_evaluation_matrix(schoen3):
    M = evaluation_matrix(schoen3, 5)
    assert M.shape == (126, 125)
    r = M.monomials.index((5, 0, 0, 0, 0))
    c = schoen3.nodes.index(schoen3.nodes[0])
    assert schoen3.nodes[0].coords == tuple(q(1) for _ in range(5))
    assert M.rows[r][c] == q(1)
    coeff = [schoen3.f.coefficient(e) for e in M.monomials]
    for col in range(125):
        acc = CyclotomicNumber.zero(ORDER)
        for row, cf in zip(M.rows, coeff):
            if cf:
                acc = acc + cf * row[col]
        assert acc.is_zero()


def test_modular_matrix_matches_reduced_exact_matrix(schoen3):
    M = evaluation_matrix(schoen3, 5)
    for p in (11, 31):
        a = reduce_matrix_mod_p(M.rows, p, ORDER)
        b = modular_evaluation_matrix(schoen3, 5, p)
        assert np.array_equal(a % p, b % p)


def test_schoen3_ranks(schoen3, schoen3_I):
    assert schoen3_I.dim == 101
    assert 125 - schoen3_I.dim == 24
    for p in (11, 31):
        assert rank_mod_p(modular_evaluation_matrix(schoen3, 5, p), p) == 101


def test_one_node_model():
    model = random_nodal_model(1, seed=5)
    assert space_I(model).dim == 1


# --- power map and the synthetic examples -----------------------------------

def test_power_map_examples():
    assert power_map((q(1), q(-1), Z(5)), 2) == (q(1), q(1), Z(5, 2))
    assert power_map((q(0), q(3)), 3) == (q(0), q(27))


def test_containment_synthetic():
    one4 = sub([[1, 1, 1, 1]])
    assert check_power_containment(one4, one4, 2) == (True, None)
    neg = sub([[1, -1]])
    ok, witness = check_power_containment(neg, neg, 2)
    assert not ok and witness == (q(1), q(1))


def test_spans_synthetic():
    e = sub([[1, 0], [0, 1]])
    assert check_power_spans(e, e, 2).spans
    diag = sub([[1, 1]])
    assert not check_power_spans(diag, Subspace.full(2, ORDER), 2).spans


def test_spans_budget():
    I = Subspace.full(6, ORDER)
    with pytest.raises(OutOfBudget) as exc:
        check_power_spans(I, I, 3, budget=2)
    assert exc.value.partial_dimension <= 2


def test_smoothable_synthetic():
    ok, per = check_smoothable(sub([[1, 0]]))
    assert not ok and per == (True, False)
    assert check_smoothable(sub([[1, 1], [0, 1]]))[0]


def test_schoen3_containment_and_spans(schoen3_I):
    K = schoen3_I
    assert check_power_containment(schoen3_I, K, 1)[0]
    assert check_power_spans(schoen3_I, K, 1).spans
    assert check_smoothable(K)[0]


@pytest.mark.parametrize("seed", range(5))
def test_random_models_containment(seed):
    model = random_nodal_model(8 - seed % 3, seed=seed)
    I, K = space_I(model), space_K(model)
    assert I == K
    assert check_power_containment(I, K, model.m, seed=seed)[0]


# --- brute-force smoothability oracle ---------------------------------------

GRID7 = [q(0), q(1), q(-1), q(2), q(-2), Z(5), Z(5, 2)]


def brute_force_smoothable(basis):
    # a product of at most 6 linear forms cannot vanish on a 7-point grid in every direction
    if not basis:
        return False
    dim = len(basis[0])
    for coeffs in itertools.product(GRID7, repeat=len(basis)):
        v = [sum((c * b[i] for c, b in zip(coeffs, basis)), CyclotomicNumber.zero(ORDER)) for i in range(dim)]
        if all(v):
            return True
    return False


def test_brute_force_smoothability_oracle():
    rng = random.Random(20)
    agree = 0
    for trial in range(60):
        dim = rng.randint(1, 6)
        r = rng.randint(1, min(3, dim))
        rows = [[rand_elt(rng, 1, sparse=0.55) for _ in range(dim)] for _ in range(r)]
        S = Subspace.span(rows, dim, ORDER)
        expected = brute_force_smoothable([list(b) for b in S.basis])
        assert check_smoothable(S)[0] == expected
        agree += 1
    assert agree == 60


# --- rank metamorphic tests ---------------------------------------------------

def random_matrix(rng, r, c, rank_cap=None):
    if rank_cap is None:
        return [[rand_elt(rng, 2, sparse=0.3) for _ in range(c)] for _ in range(r)]
    left = random_matrix(rng, r, rank_cap)
    right = random_matrix(rng, rank_cap, c)
    return [[sum((left[i][k] * right[k][j] for k in range(rank_cap)), CyclotomicNumber.zero(ORDER))
             for j in range(c)] for i in range(r)]


def test_identity_rank():
    I5 = [[q(int(i == j)) for j in range(5)] for i in range(5)]
    assert rank(I5) == 5
    assert rank(I5, "modular", primes=[11]) == 5
    with pytest.raises(BadPrime):
        rank(I5, "modular")
    with pytest.raises(BadPrime):
        rank(I5, "modular", primes=[13])


@pytest.mark.parametrize("seed", range(8))
def test_rank_invariances(seed):
    rng = random.Random(seed)
    r, c = rng.randint(2, 6), rng.randint(2, 6)
    M = random_matrix(rng, r, c, rank_cap=rng.randint(1, min(r, c)))
    base = exact_rank(M, ORDER)
    T = [list(col) for col in zip(*M)]
    assert exact_rank(T, ORDER) == base
    perm = M[:]
    rng.shuffle(perm)
    assert exact_rank(perm, ORDER) == base
    scaled = [[x * Z(5, i + 1) * (i + 2) for x in row] for i, row in enumerate(M)]
    assert exact_rank(scaled, ORDER) == base
    mixed = [row[:] for row in M]
    k = rand_elt(rng)
    mixed[0] = [a + k * b for a, b in zip(mixed[0], mixed[-1])]
    assert exact_rank(mixed, ORDER) == base
    padded = M + [[CyclotomicNumber.zero(ORDER)] * c]
    assert exact_rank(padded, ORDER) == base
    for p in default_primes(ORDER, 3, start=11):
        assert rank(M, "modular", primes=[p]) <= base


def test_canonical_subspace_stable_under_monomial_order():
    model = random_nodal_model(8, seed=11)
    mons = monomial_basis(5, 5)
    M = evaluation_matrix(model, 5)
    rng = random.Random(4)
    for _ in range(3):
        order = list(range(len(mons)))
        rng.shuffle(order)
        S = Subspace.span([M.rows[i] for i in order], len(model.nodes), ORDER)
        assert S == space_I(model)


def test_canonical_subspace_stable_on_schoen(schoen3, schoen3_I):
    M = evaluation_matrix(schoen3, 5)
    rows = list(reversed(M.rows))
    assert Subspace.span(rows, 125, ORDER) == schoen3_I


# --- the full analysis -----------------------------------------------------------

def test_analyze_small_random_model():
    model = random_nodal_model(7, seed=2)
    rep = analyze(model, power_check=True, primes=[11, 31])
    js = rep.to_json()
    assert js["partial"] is False
    assert js["smoothable"] and js["power_map_contained"] and js["power_map_spans"]
    assert js["modular_agrees"]
    assert js["span_dimension"] == 7 - js["dim_K"]


def test_analyze_partial_mode():
    model = random_nodal_model(8, seed=1)
    rep = analyze(model, exact=False, primes=[11], subsample=5)
    js = rep.to_json()
    assert js["partial"] is True and js["method"] == "modular"
    assert js["smoothable"] is None and js["span_dimension"] is None
    assert js["node_sample_size"] == 5
