"""Evaluation at nodes: the spaces I and K, the power map, and smoothability.

For a nodal hypersurface X = {f = 0} of degree n+2 in P^(n+1) with
m = (n-1)/2:

* I is the image of degree n+2 forms in the node-coordinate space, i.e.
  the row space of the evaluation matrix in degree n+2;
* K is the row space of the evaluation matrix in degree m(n+2), the
  relations among the A_i - B_i classes.

Neither space needs a quotient by <f> or by the vector-field image, since
both vanish at every node.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .errors import OutOfBudget
from .exactfield import CyclotomicNumber, find_root_of_unity, reduce_mod_p_int
from .hypersurface import NodalHypersurface, verify_nodes
from .linalg import RowReducer, Subspace, rank_mod_p
from .polyring import monomial_basis

__all__ = [
    "EvalMatrix",
    "evaluation_matrix",
    "modular_evaluation_matrix",
    "space_I",
    "space_K",
    "power_map",
    "check_power_containment",
    "check_power_spans",
    "check_smoothable",
    "SmoothingReport",
    "analyze",
    "EXACT_ENTRY_LIMIT",
    "verify_sample",
]

# exact elimination beyond this many matrix entries is out of desk scale
EXACT_ENTRY_LIMIT = 400_000


@dataclass
class EvalMatrix:
    """Values of every degree-d monomial (rows) at every node (columns)."""

    degree: int
    monomials: list[tuple[int, ...]]
    order: int
    rows: list[tuple[CyclotomicNumber, ...]]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.monomials), len(self.rows[0]) if self.rows else 0


def _node_power_tables(model: NodalHypersurface, d: int) -> list[list[list[CyclotomicNumber]]]:
    tables = []
    for p in model.nodes:
        per_var = []
        for c in p.coords:
            row = [CyclotomicNumber.one(model.field_order)]
            for _ in range(d):
                row.append(row[-1] * c)
            per_var.append(row)
        tables.append(per_var)
    return tables


def iter_evaluation_rows(model: NodalHypersurface, d: int,
                         monomials: Sequence[tuple[int, ...]] | None = None) -> Iterator[tuple[CyclotomicNumber, ...]]:
    """Lazily yield evaluation rows, one monomial at a time."""
    if monomials is None:
        monomials = monomial_basis(model.num_vars, d)
    tables = _node_power_tables(model, d)
    one = CyclotomicNumber.one(model.field_order)
    for e in monomials:
        support = [(i, k) for i, k in enumerate(e) if k]
        row = []
        for t in tables:
            val = one
            for i, k in support:
                val = val * t[i][k]
            row.append(val)
        yield tuple(row)


def evaluation_matrix(model: NodalHypersurface, d: int) -> EvalMatrix:
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    mons = monomial_basis(model.num_vars, d)
    return EvalMatrix(d, mons, model.field_order, list(iter_evaluation_rows(model, d, mons)))


def modular_evaluation_matrix(model: NodalHypersurface, d: int, p: int,
                              node_indices: Sequence[int] | None = None) -> np.ndarray:
    """Evaluation matrix reduced mod p, shape (#monomials, #selected nodes).

    Node coordinates are reduced first and the monomials evaluated in GF(p);
    by the homomorphism property this equals reducing the exact matrix.
    """
    N = model.field_order
    z = find_root_of_unity(N, p).value
    idx = range(len(model.nodes)) if node_indices is None else node_indices
    coords = np.array(
        [[reduce_mod_p_int(c, p, z) for c in model.nodes[i].coords] for i in idx], dtype=np.int64
    )
    exps = np.array(monomial_basis(model.num_vars, d), dtype=np.int64)
    s, k = coords.shape
    out = np.ones((exps.shape[0], s), dtype=np.int64)
    for var in range(k):
        pw = np.ones((s, d + 1), dtype=np.int64)
        for e in range(1, d + 1):
            pw[:, e] = pw[:, e - 1] * coords[:, var] % p
        out = out * pw[:, exps[:, var]].T % p
    return out


def _space(model: NodalHypersurface, d: int) -> Subspace:
    red = RowReducer(len(model.nodes), model.field_order)
    for row in iter_evaluation_rows(model, d):
        red.add(row)
        if red.rank == len(model.nodes):
            break
    return Subspace(len(model.nodes), model.field_order, red.basis())


def space_I(model: NodalHypersurface) -> Subspace:
    """Local smoothing parameters realised by global first order deformations."""
    return _space(model, model.n + 2)


def space_K(model: NodalHypersurface) -> Subspace:
    """Coefficient vectors (delta_i) of relations sum delta_i (A_i - B_i) = 0."""
    return _space(model, model.m * (model.n + 2))


def power_map(epsilon: Sequence, m: int) -> tuple:
    """Coordinatewise m-th power in the product algebra of the nodes."""
    return tuple(x ** m for x in epsilon)


def _coordinatewise_product(vectors: Sequence[Sequence[CyclotomicNumber]]) -> tuple[CyclotomicNumber, ...]:
    out = list(vectors[0])
    for v in vectors[1:]:
        out = [a * b if a and b else a.__class__.zero(a.order) for a, b in zip(out, v)]
    return tuple(out)


def _random_element(rng: random.Random, order: int, bound: int = 3) -> CyclotomicNumber:
    from .exactfield import totient

    return CyclotomicNumber(order, [rng.randint(-bound, bound) for _ in range(totient(order))])


def check_power_containment(I: Subspace, K: Subspace, m: int, random_combinations: int = 50,
                            seed: int = 0) -> tuple[bool, tuple | None]:
    """Test power_map(v, m) in K for the basis of I and random combinations.

    Returns (True, None) or (False, witness) with the first offending image.
    """
    red = K.reducer()
    candidates = list(I.basis)
    rng = random.Random(seed)
    zero = CyclotomicNumber.zero(I.order)
    for _ in range(random_combinations if I.dim else 0):
        v = [zero] * I.ambient_dim
        for b in I.basis:
            c = _random_element(rng, I.order)
            v = [x + c * y for x, y in zip(v, b)]
        candidates.append(tuple(v))
    for v in candidates:
        w = power_map(v, m)
        if not red.contains(w):
            return False, w
    return True, None


@dataclass
class SpanResult:
    spans: bool
    span_dimension: int
    products_used: int
    products_total: int


def check_power_spans(I: Subspace, K: Subspace, m: int, budget: int = 10**6) -> SpanResult:
    """Does the span of all m-fold coordinatewise products of I equal K?

    Products of basis vectors span the image of S^m I.  Enumeration stops
    as soon as the span reaches dim K.  Raises OutOfBudget, carrying the
    span dimension reached, if more than ``budget`` products are needed.
    """
    total = comb(I.dim + m - 1, m) if I.dim else 0
    red = RowReducer(I.ambient_dim, I.order)
    used = 0
    for combo in combinations_with_replacement(range(I.dim), m):
        if red.rank >= K.dim:
            break
        if used >= budget:
            raise OutOfBudget(
                f"S^m spanning set needs {total} products, budget is {budget}",
                partial_dimension=red.rank, products_total=total,
            )
        red.add(_coordinatewise_product([I.basis[i] for i in combo]))
        used += 1
    span = Subspace(I.ambient_dim, I.order, red.basis())
    return SpanResult(span == K, span.dim, used, total)


def check_smoothable(K: Subspace) -> tuple[bool, tuple[bool, ...]]:
    """Whether K has a vector with every coordinate nonzero.

    Over an infinite field a subspace is never a finite union of proper
    subspaces, so this holds iff K lies in no coordinate hyperplane.
    """
    support = K.coordinate_support()
    return all(support), support


@dataclass
class SmoothingReport:
    dim_I: int
    dim_K: int
    span_dimension: int | None
    smoothable: bool | None
    power_map_contained: bool | None
    power_map_spans: bool | None
    per_node_smoothable: list[bool] | None
    method: str
    primes: list[int] = field(default_factory=list)
    partial: bool = False
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "dim_I": self.dim_I,
            "dim_K": self.dim_K,
            "method": self.method,
            "partial": self.partial,
            "per_node_smoothable": self.per_node_smoothable,
            "power_map_contained": self.power_map_contained,
            "power_map_spans": self.power_map_spans,
            "primes": self.primes,
            "smoothable": self.smoothable,
            "span_dimension": self.span_dimension,
        }
        out.update(self.extras)
        return dict(sorted(out.items()))


def _shapes(model: NodalHypersurface) -> dict:
    k = model.num_vars
    dI, dK = model.n + 2, model.m * (model.n + 2)
    return {
        "I": [comb(dI + k - 1, k - 1), len(model.nodes)],
        "K": [comb(dK + k - 1, k - 1), len(model.nodes)],
    }


def _modular_ranks(model: NodalHypersurface, primes: Sequence[int], node_indices=None) -> dict:
    def ranks(d):
        return [rank_mod_p(modular_evaluation_matrix(model, d, p, node_indices), p) for p in primes]

    rI = ranks(model.n + 2)
    rK = rI if model.m == 1 else ranks(model.m * (model.n + 2))
    return {"I": rI, "K": list(rK)}


def analyze(model: NodalHypersurface, *, power_check: bool = False, primes: Sequence[int] = (),
            budget: int = 10**6, exact: bool | None = None, subsample: int = 120,
            seed: int = 0, random_combinations: int = 50) -> SmoothingReport:
    """Full smoothing analysis of a model.

    Exact mode computes I and K over Q(zeta_N).  When the K matrix exceeds
    EXACT_ENTRY_LIMIT entries (and ``exact`` is not forced) the analysis
    falls back to a partial run: modular ranks on a seeded node subsample,
    which are lower bounds on the dimensions of the projections of I and K.
    """
    shapes = _shapes(model)
    timings: dict[str, float] = {}
    assumptions = {
        "h1_OX_mX_vanishes": True,
        "node_list_complete_verified": model.node_list_complete_verified,
        "sign_convention": "delta vectors are defined up to a sign per node",
    }
    if exact is None:
        exact = shapes["K"][0] * shapes["K"][1] <= EXACT_ENTRY_LIMIT
    extras = {"assumptions": assumptions, "matrix_shapes": shapes, "timings": timings}

    if not exact:
        if not primes:
            from .exactfield import default_primes
            primes = default_primes(model.field_order, 2)
        rng = random.Random(seed)
        n_nodes = len(model.nodes)
        sample = sorted(rng.sample(range(n_nodes), min(subsample, n_nodes)))
        t0 = time.perf_counter()
        ranks = _modular_ranks(model, primes, sample)
        timings["modular_ranks"] = time.perf_counter() - t0
        dim_I, dim_K = max(ranks["I"]), max(ranks["K"])
        extras.update({
            "modular_ranks": ranks,
            "node_sample": sample,
            "node_sample_size": len(sample),
            # dim K >= its projection, so the defect is at most this
            "span_dimension_upper_bound": n_nodes - dim_K,
            "note": "partial: dimensions are modular lower bounds for the projections of I and K "
                    "onto the sampled node coordinates; the full exact rank is out of desk scale",
        })
        return SmoothingReport(
            dim_I=dim_I, dim_K=dim_K, span_dimension=None,
            smoothable=None, power_map_contained=None, power_map_spans=None,
            per_node_smoothable=None, method="modular", primes=list(primes), partial=True, extras=extras,
        )

    t0 = time.perf_counter()
    I = space_I(model)
    timings["space_I"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    K = I if model.m == 1 else space_K(model)
    timings["space_K"] = time.perf_counter() - t0
    smooth, per_node = check_smoothable(K)
    contained = spans = None
    if power_check:
        t0 = time.perf_counter()
        contained, witness = check_power_containment(I, K, model.m, random_combinations, seed)
        timings["power_containment"] = time.perf_counter() - t0
        if witness is not None:
            extras["power_containment_witness"] = [x.to_json() for x in witness]
        t0 = time.perf_counter()
        try:
            sr = check_power_spans(I, K, model.m, budget)
            spans = sr.spans
            extras["power_span"] = {"products_total": sr.products_total, "products_used": sr.products_used,
                                    "span_dimension": sr.span_dimension}
        except OutOfBudget as exc:
            extras["power_span"] = {"out_of_budget": True, "partial_dimension": exc.partial_dimension}
            timings["power_spans"] = time.perf_counter() - t0
            raise
        timings["power_spans"] = time.perf_counter() - t0
    method = "exact"
    if primes:
        t0 = time.perf_counter()
        ranks = _modular_ranks(model, primes)
        timings["modular_ranks"] = time.perf_counter() - t0
        extras["modular_ranks"] = ranks
        extras["modular_agrees"] = all(r == I.dim for r in ranks["I"]) and all(r == K.dim for r in ranks["K"])
    return SmoothingReport(
        dim_I=I.dim, dim_K=K.dim, span_dimension=len(model.nodes) - K.dim,
        smoothable=smooth, power_map_contained=contained, power_map_spans=spans,
        per_node_smoothable=list(per_node), method=method, primes=list(primes), partial=False, extras=extras,
    )


def verify_sample(model: NodalHypersurface, size: int, seed: int = 0) -> dict:
    """Exact ODP verification of a seeded node sample (for models too big to check fully)."""
    rng = random.Random(seed)
    idx = sorted(rng.sample(range(len(model.nodes)), min(size, len(model.nodes))))
    recs = verify_nodes(model.f, [model.nodes[i] for i in idx])
    return {
        "all_odp": all(r.is_odp for r in recs),
        "hessian_ranks": sorted({r.hessian_rank for r in recs}),
        "indices": idx,
        "sample_size": len(idx),
    }
