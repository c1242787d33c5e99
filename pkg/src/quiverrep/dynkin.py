"""Dynkin-specific machinery: positive roots, certified indecomposables,
Hom-matrix decomposition, and generic representations."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import FieldSpec, Matrix, QQ
from .quiver import (
    DimVector,
    Quiver,
    check_dimvector,
    dim_leq,
    dim_sub,
    euler_form,
    quiver_from_json,
    quiver_to_json,
    require_dynkin,
)
from .rep import (
    Representation,
    direct_sum,
    hom_basis,
    hom_dim,
    is_injective_morphism,
    random_representation,
    rep_from_json,
    rep_to_json,
    zero_representation,
)

ROOT_ENTRY_BOUND = 6  # entries of ADE positive roots never exceed 6


def positive_roots(q: Quiver) -> list[DimVector]:
    """All d > 0 with <d, d> = 1, by bounded brute force; requires Dynkin."""
    require_dynkin(q)
    n = q.vertex_count
    roots = []
    for d in itertools.product(range(ROOT_ENTRY_BOUND + 1), repeat=n):
        if any(d) and euler_form(q, d, d) == 1:
            roots.append(d)
    return sorted(roots)


def indecomposable(
    q: Quiver,
    root: DimVector,
    field: FieldSpec,
    seed: int = 0,
    retries: int = 32,
    reduction_orders: tuple[int, ...] = (),
) -> Representation:
    """The indecomposable of a real root, by certified random sampling.

    A sample certifies as the indecomposable when dim End = 1 (which for a
    root dimension vector forces Ext(X, X) = 0 as well).  The coefficient
    box over Q escalates across retries.

    Over Q, `reduction_orders` additionally requires the sample to stay
    End-dimension 1 after reduction into each listed finite field, so the
    result can feed finite-field point counts.
    """
    root = check_dimvector(q, root)
    if euler_form(q, root, root) != 1 or not any(root):
        raise ValueError(f"{root} is not a positive root")
    for attempt in range(retries):
        box = 2 if (reduction_orders and attempt < retries // 2) else 10 * (2**min(attempt, 10))
        x = random_representation(q, root, field, seed=seed + 7919 * attempt, box=box)
        if hom_dim(x, x) != 1:
            continue
        if reduction_orders and field.is_rationals:
            try:
                reduced = [x.change_field(FieldSpec.of_order(o)) for o in reduction_orders]
            except ValueError:
                continue
            if any(hom_dim(r, r) != 1 for r in reduced):
                continue
        return x
    raise RuntimeError(
        f"could not certify an indecomposable of dimension vector {root} "
        f"over {field} within {retries} attempts"
    )


@dataclass(frozen=True)
class IndecomposableTable:
    """All indecomposables of a Dynkin quiver plus their Hom matrix.

    hom_matrix[u][v] = dim Hom(reps[u], reps[v]); invertible over Q by
    Auslander nondegeneracy.  Roots are kept in lexicographic order.
    """

    quiver: Quiver
    field: FieldSpec
    roots: tuple[DimVector, ...]
    reps: tuple[Representation, ...]
    hom_matrix: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.roots)

    def root_index(self, root: DimVector) -> int:
        return self.roots.index(tuple(root))

    def ext_entry(self, u: int, v: int) -> int:
        return self.hom_matrix[u][v] - euler_form(self.quiver, self.roots[u], self.roots[v])

    def projective_root_indices(self) -> tuple[int, ...]:
        from .rep import build_projective

        dims = {
            build_projective(self.quiver, v, self.field).dims
            for v in range(self.quiver.vertex_count)
        }
        return tuple(i for i, r in enumerate(self.roots) if r in dims)

    def injective_root_indices(self) -> tuple[int, ...]:
        from .rep import build_injective

        dims = {
            build_injective(self.quiver, v, self.field).dims
            for v in range(self.quiver.vertex_count)
        }
        return tuple(i for i, r in enumerate(self.roots) if r in dims)


def build_table(
    q: Quiver,
    field: FieldSpec,
    seed: int = 0,
    retries: int = 256,
    reduction_orders: tuple[int, ...] = (),
) -> IndecomposableTable:
    require_dynkin(q)
    roots = tuple(positive_roots(q))
    reps = tuple(
        indecomposable(
            q, r, field, seed=seed + 104729 * i, retries=retries, reduction_orders=reduction_orders
        )
        for i, r in enumerate(roots)
    )
    hom = tuple(tuple(hom_dim(u, v) for v in reps) for u in reps)
    table = IndecomposableTable(q, field, roots, reps, hom)
    _validate_table(table)
    return table


def _validate_table(table: IndecomposableTable) -> None:
    for i in range(table.size):
        if table.hom_matrix[i][i] != 1:
            raise RuntimeError("table invalid: an entry has End dimension != 1")
        if table.ext_entry(i, i) != 0:
            raise RuntimeError("table invalid: an entry has self-extensions")
    hq = Matrix(QQ, [[Fraction(x) for x in row] for row in table.hom_matrix])
    if hq.rank() != table.size:
        raise RuntimeError("table invalid: Hom matrix is singular")


def decompose(x: Representation, table: IndecomposableTable) -> dict[DimVector, int]:
    """Multiplicities of the indecomposables in x, via the Hom matrix.

    Solves hom_matrix . m = ([U, x])_U exactly; non-integral or negative
    solutions are hard errors (they signal a corrupted table or an input
    that is not a representation of the table's quiver).
    """
    if x.quiver != table.quiver:
        raise ValueError("representation is not over the table's quiver")
    if x.field != table.field:
        raise ValueError("representation is not over the table's field")
    homvec = [hom_dim(u, x) for u in table.reps]
    hq = Matrix(QQ, [[Fraction(v) for v in row] for row in table.hom_matrix])
    sol = hq.solve([Fraction(h) for h in homvec])
    if sol is None:
        raise RuntimeError("decomposition system inconsistent")
    mults: dict[DimVector, int] = {}
    for root, value in zip(table.roots, sol):
        if value.denominator != 1 or value < 0:
            raise RuntimeError(f"non-integral or negative multiplicity {value} at root {root}")
        if value:
            mults[root] = int(value)
    total = [0] * x.quiver.vertex_count
    for root, m in mults.items():
        for i, ri in enumerate(root):
            total[i] += m * ri
    if tuple(total) != x.dims:
        raise RuntimeError("decomposition does not reconstruct the dimension vector")
    return mults


def assemble(table: IndecomposableTable, mults: dict[DimVector, int]) -> Representation:
    """Direct sum of table indecomposables with the given multiplicities,
    summands ordered by root."""
    parts = []
    for root in table.roots:
        m = mults.get(tuple(root), 0)
        parts.extend([table.reps[table.root_index(root)]] * m)
    if not parts:
        return zero_representation(table.quiver, table.field)
    return direct_sum(parts)


def canonical_decomposition(
    q: Quiver,
    e: DimVector,
    table: IndecomposableTable,
    seed: int = 0,
    retries: int = 64,
) -> dict[DimVector, int]:
    """The decomposition of the generic representation G_e.

    Samples a representation of dimension vector e, decomposes it, and
    certifies the result exactly: Ext must vanish between all pairs of
    summands (the Dynkin rigidity certificate for Ext(G_e, G_e) = 0).
    Retries with fresh samples if certification fails.
    """
    e = check_dimvector(q, e)
    if q != table.quiver:
        raise ValueError("table is for a different quiver")
    if not any(e):
        return {}
    last = None
    for attempt in range(retries):
        x = random_representation(q, e, table.field, seed=seed + 15485863 * attempt, box=100)
        mults = decompose(x, table)
        if _pairwise_ext_vanishes(table, mults):
            return mults
        last = mults
    raise RuntimeError(
        f"no self-extension-free decomposition certified for {e} after {retries} samples; "
        f"last candidate {last}"
    )


def _pairwise_ext_vanishes(table: IndecomposableTable, mults: dict[DimVector, int]) -> bool:
    idx = [table.root_index(r) for r in mults]
    for u in idx:
        for v in idx:
            if table.ext_entry(u, v) != 0:
                return False
    return True


def generic_rep(
    q: Quiver,
    e: DimVector,
    field: FieldSpec,
    table: IndecomposableTable,
    seed: int = 0,
) -> Representation:
    """The generic representation G_e as an explicit direct sum."""
    if field != table.field:
        raise ValueError("generic_rep requires a table over the requested field")
    mults = canonical_decomposition(q, e, table, seed=seed)
    return assemble(table, mults)


def check_generic_embedding(
    q: Quiver,
    e: DimVector,
    d: DimVector,
    table: IndecomposableTable,
    witness: bool = False,
    seed: int = 0,
    trials: int = 256,
):
    """Whether G_e embeds into G_d, i.e. Ext(G_e, G_{d-e}) = 0.

    With witness=True also searches for an explicit injective morphism
    G_e -> G_d; returns (holds, morphism-or-None), otherwise just holds.
    """
    e = check_dimvector(q, e)
    d = check_dimvector(q, d)
    if not dim_leq(e, d):
        raise ValueError(f"e = {e} is not coordinatewise below d = {d}")
    me = canonical_decomposition(q, e, table, seed=seed)
    md = canonical_decomposition(q, dim_sub(d, e), table, seed=seed + 1)
    ext = 0
    for ru, mu in me.items():
        for rv, mv in md.items():
            ext += mu * mv * table.ext_entry(table.root_index(ru), table.root_index(rv))
    holds = ext == 0
    if not witness:
        return holds
    if not holds:
        return holds, None
    ge = assemble(table, me)
    gd = assemble(table, canonical_decomposition(q, d, table, seed=seed + 2))
    mor = _search_injective(ge, gd, seed=seed, trials=trials)
    return holds, mor


def _search_injective(n: Representation, m: Representation, seed: int, trials: int):
    """Sample Hom(n, m) for an injective element; None if none found."""
    import random

    basis = hom_basis(n, m)
    if n.total_dim == 0:
        return basis.combination([n.field.zero] * basis.dim)
    if basis.dim == 0:
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        mor = basis.combination([n.field.random(rng, 50) for _ in range(basis.dim)])
        if is_injective_morphism(mor):
            return mor
    return None


# ----------------------------------------------------------------------
# Table caching


def table_to_json(table: IndecomposableTable) -> dict:
    return {
        "quiver": quiver_to_json(table.quiver),
        "field": table.field.name,
        "roots": [list(r) for r in table.roots],
        "reps": [rep_to_json(r) for r in table.reps],
        "hom_matrix": [list(r) for r in table.hom_matrix],
    }


def table_from_json(data: dict) -> IndecomposableTable:
    q = quiver_from_json(data["quiver"])
    field = FieldSpec.parse(data["field"])
    roots = tuple(tuple(int(x) for x in r) for r in data["roots"])
    reps = tuple(rep_from_json(r) for r in data["reps"])
    hom = tuple(tuple(int(x) for x in r) for r in data["hom_matrix"])
    table = IndecomposableTable(q, field, roots, reps, hom)
    _validate_table(table)
    for rep, root in zip(reps, roots):
        if rep.dims != root or rep.quiver != q or rep.field != field:
            raise ValueError("cached table entry disagrees with its root")
    return table


def save_table(table: IndecomposableTable, path) -> None:
    with open(path, "w") as fh:
        json.dump(table_to_json(table), fh, indent=1)


def load_table(path) -> IndecomposableTable:
    with open(path) as fh:
        return table_from_json(json.load(fh))


_TABLE_CACHE: dict = {}


def cached_table(q: Quiver, field: FieldSpec, seed: int = 0) -> IndecomposableTable:
    """Process-local memoization of table construction."""
    key = (q, field, seed)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = build_table(q, field, seed=seed)
    return _TABLE_CACHE[key]
