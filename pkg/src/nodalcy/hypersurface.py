"""Nodal Calabi-Yau hypersurfaces: node verification, the Schoen family, JSON I/O."""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DegreeMismatch,
    DuplicateNode,
    InvalidDimension,
    NotANode,
    NotOrdinary,
    SchemaError,
)
from .exactfield import CyclotomicNumber, parse_cyclotomic
from .linalg import exact_rank
from .polyring import MultiPoly, ProjectivePoint, evaluate, gradient, hessian_matrix, monomial_basis

__all__ = [
    "OdpRecord",
    "NodalHypersurface",
    "verify_odp",
    "verify_nodes",
    "schoen_polynomial",
    "schoen_family",
    "ingest",
    "serialize",
    "worker_count",
    "require_odps",
    "random_nodal_model",
]


@dataclass(frozen=True)
class OdpRecord:
    on_hypersurface: bool
    critical: bool
    hessian_rank: int
    is_odp: bool

    def to_json(self) -> dict:
        return {
            "critical": self.critical,
            "hessian_rank": self.hessian_rank,
            "is_odp": self.is_odp,
            "on_hypersurface": self.on_hypersurface,
        }


def verify_odp(f: MultiPoly, p: ProjectivePoint, chart: int | None = None) -> OdpRecord:
    """Check that ``p`` is an ordinary double point of {f = 0}.

    Failures are reported in the record rather than raised.  The Hessian is
    taken in one affine chart (last nonzero coordinate by default); at a
    critical point its rank does not depend on the chart.
    """
    on = evaluate(f, p).is_zero()
    crit = all(evaluate(g, p).is_zero() for g in gradient(f))
    H = hessian_matrix(f, p, chart)
    r = exact_rank(H, f.field_order) if H else 0
    return OdpRecord(on, crit, r, on and crit and r == f.num_vars - 1)


def worker_count() -> int:
    raw = os.environ.get("NODALCY_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _verify_one(args):
    f, p = args
    return verify_odp(f, p)


def verify_nodes(f: MultiPoly, nodes: Sequence[ProjectivePoint], workers: int | None = None) -> list[OdpRecord]:
    """``verify_odp`` over a node list; results come back in node order."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(nodes) < 2 * workers:
        return [verify_odp(f, p) for p in nodes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_verify_one, ((f, p) for p in nodes), chunksize=32))


@dataclass
class NodalHypersurface:
    """X = {f = 0} in P^(n+1) with its ordered node list.

    The node order is part of the model's identity: every subspace of the
    node-coordinate space is indexed by it.
    """

    n: int
    field_order: int
    f: MultiPoly
    nodes: list[ProjectivePoint]
    name: str = "custom"
    node_exponents: list[tuple[int, ...]] | None = field(default=None, repr=False, compare=False)
    node_list_complete_verified: bool = False

    @property
    def m(self) -> int:
        return (self.n - 1) // 2

    @property
    def num_vars(self) -> int:
        return self.n + 2

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, NodalHypersurface):
            return NotImplemented
        return (self.n, self.field_order, self.f, self.nodes) == (other.n, other.field_order, other.f, other.nodes)

    def summary(self) -> dict:
        return {
            "cyclotomic_order": self.field_order,
            "m": self.m,
            "n": self.n,
            "name": self.name,
            "node_count": len(self.nodes),
            "node_list_complete_verified": self.node_list_complete_verified,
        }


def require_odps(records: Sequence[OdpRecord], n: int) -> None:
    """Raise NotANode / NotOrdinary for the first failing record."""
    for idx, rec in enumerate(records):
        if not (rec.on_hypersurface and rec.critical):
            raise NotANode(f"node {idx} is not a singular point of X", index=idx, record=rec.to_json())
        if not rec.is_odp:
            raise NotOrdinary(
                f"node {idx} has Hessian rank {rec.hessian_rank} < {n + 1}", index=idx, record=rec.to_json()
            )


def _check_dimension(n) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 3 or n % 2 == 0:
        raise InvalidDimension(f"dimension must be an odd integer >= 3, got {n!r}")


def schoen_polynomial(n: int) -> MultiPoly:
    """x_0^(n+2) + ... + x_(n+1)^(n+2) - (n+2) x_0 ... x_(n+1) over Q(zeta_(n+2))."""
    k = n + 2
    terms = []
    for i in range(k):
        e = [0] * k
        e[i] = k
        terms.append((e, 1))
    terms.append(([1] * k, -k))
    return MultiPoly(k, k, terms)


def schoen_exponents(n: int) -> list[tuple[int, ...]]:
    """Exponent tuples (a_0, ..., a_n) with sum = 0 mod n+2, in lex order."""
    N = n + 2
    out = []
    for head in itertools.product(range(N), repeat=n):
        out.append(head + ((-sum(head)) % N,))
    return out


def schoen_family(n: int) -> NodalHypersurface:
    """Schoen's hypersurface with its (n+2)^n nodes [z^a_0 : ... : z^a_n : 1].

    Nodes are built but not verified here; use :func:`verify_nodes`.
    """
    _check_dimension(n)
    N = n + 2
    zetas = [CyclotomicNumber.zeta(N, k) for k in range(N)]
    one = zetas[0]
    exps = schoen_exponents(n)
    nodes = []
    for a in exps:
        # first coordinate is a root of unity, so rescaling by zeta^-a_0 keeps coords roots of unity
        shift = a[0]
        coords = [zetas[(x - shift) % N] for x in a] + [zetas[(-shift) % N]]
        node = ProjectivePoint.__new__(ProjectivePoint)
        node.coords = tuple(coords)
        node.order = N
        nodes.append(node)
    assert all(p.coords[0] == one for p in nodes[:1])
    return NodalHypersurface(n, N, schoen_polynomial(n), nodes, name=f"schoen-{n}", node_exponents=exps)


def _coord_json(c: CyclotomicNumber, roots: dict) -> object:
    if c in roots:
        return roots[c]
    return c.to_json()


def serialize(model: NodalHypersurface) -> dict:
    """Model JSON.  Root-of-unity coordinates use the "z^k" shorthand."""
    N = model.field_order
    roots = {CyclotomicNumber.zeta(N, k): f"z^{k}" for k in range(N)}
    return {
        "cyclotomic_order": N,
        "f": model.f.to_json(),
        "n": model.n,
        "name": model.name,
        "nodes": [[_coord_json(c, roots) for c in p.coords] for p in model.nodes],
    }


def ingest(description: Mapping, verify: bool = True, workers: int | None = None) -> NodalHypersurface:
    """Build and validate a model from its JSON description.

    Raises SchemaError, InvalidDimension, DegreeMismatch, DuplicateNode,
    NotANode or NotOrdinary.
    """
    if not isinstance(description, Mapping):
        raise SchemaError("model description must be a JSON object")
    for key in ("n", "cyclotomic_order", "f", "nodes"):
        if key not in description:
            raise SchemaError(f"model JSON missing field {key!r}")
    n = description["n"]
    _check_dimension(n)
    N = description["cyclotomic_order"]
    if not isinstance(N, int) or N < 1:
        raise SchemaError("cyclotomic_order must be a positive integer")
    f = MultiPoly.from_json(description["f"])
    if f.field_order != N:
        raise SchemaError(f"polynomial cyclotomic_order {f.field_order} differs from model order {N}")
    if f.num_vars != n + 2:
        raise DegreeMismatch(f"a {n}-fold hypersurface needs {n + 2} variables, f has {f.num_vars}")
    if f.is_zero() or not f.is_homogeneous(n + 2):
        raise DegreeMismatch(f"f must be homogeneous of degree n+2 = {n + 2}")
    raw_nodes = description["nodes"]
    if not isinstance(raw_nodes, list):
        raise SchemaError("'nodes' must be a list")
    nodes = []
    seen = {}
    for idx, raw in enumerate(raw_nodes):
        if not isinstance(raw, list) or len(raw) != n + 2:
            raise SchemaError(f"node {idx} must be a list of {n + 2} coordinates")
        try:
            p = ProjectivePoint([parse_cyclotomic(c, N) for c in raw])
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"node {idx}: {exc}") from exc
        if p in seen:
            raise DuplicateNode(f"node {idx} repeats node {seen[p]}", index=idx, first=seen[p])
        seen[p] = idx
        nodes.append(p)
    if verify:
        require_odps(verify_nodes(f, nodes, workers), n)
    name = description.get("name", "custom")
    return NodalHypersurface(n, N, f, nodes, name=str(name))


def _nullspace_vector(rows: list[list[Fraction]], ncols: int, rng: random.Random) -> list[Fraction]:
    """A random integer-weighted vector in the kernel of ``rows``."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    x = [Fraction(0)] * ncols
    pivot_set = set(pivots)
    for c in range(ncols):
        if c not in pivot_set:
            x[c] = Fraction(rng.randint(-5, 5))
    for i, c in enumerate(pivots):
        x[c] = -sum(rows[i][j] * x[j] for j in range(ncols) if j not in pivot_set)
    return x


def random_nodal_model(num_nodes: int, seed: int = 0, n: int = 3, coord_range: int = 3,
                       max_tries: int = 20) -> NodalHypersurface:
    """A random degree-(n+2) hypersurface singular at ``num_nodes`` random rational points.

    The coefficients are a random kernel vector of the linear conditions
    "all partials vanish at every point" (which imply f = 0 there by Euler).
    Every listed point is checked to be an ODP; unlucky draws are retried.
    Further singular points are not excluded, so the node list is not
    claimed to be complete.
    """
    _check_dimension(n)
    k, d = n + 2, n + 2
    basis = monomial_basis(k, d)
    rng = random.Random(seed)
    for _ in range(max_tries):
        points: list[tuple[int, ...]] = []
        seen = set()
        while len(points) < num_nodes:
            v = tuple(rng.randint(-coord_range, coord_range) for _ in range(k))
            if not any(v):
                continue
            p = ProjectivePoint.from_values(k, v)
            if p in seen:
                continue
            seen.add(p)
            points.append(v)
        rows = []
        for v in points:
            for j in range(k):
                row = []
                for e in basis:
                    if e[j] == 0:
                        row.append(Fraction(0))
                        continue
                    val = e[j]
                    for i, ei in enumerate(e):
                        val *= v[i] ** (ei - (i == j))
                    row.append(Fraction(val))
                rows.append(row)
        coeffs = _nullspace_vector(rows, len(basis), rng)
        if not any(coeffs):
            continue
        f = MultiPoly(k, k, [(e, c) for e, c in zip(basis, coeffs) if c])
        nodes = [ProjectivePoint.from_values(k, v) for v in points]
        if all(r.is_odp for r in verify_nodes(f, nodes, 1)):
            return NodalHypersurface(n, k, f, nodes, name=f"random-{num_nodes}-{seed}")
    raise RuntimeError(f"no nodal model with {num_nodes} ODPs after {max_tries} tries")
