"""The embedding and Grassmannian criteria, each returning a Verdict with a
recomputable witness and a full inequality ledger."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from . import gflin
from .dynkin import IndecomposableTable, assemble, decompose
from .exactlin import Matrix
from .grassmannian import SubrepOracle, DEFAULT_BUDGET
from .quiver import (
    DimVector,
    Quiver,
    check_dimvector,
    dim_leq,
    dim_sub,
    euler_form,
    functional,
    require_dynkin,
)
from .rep import (
    HomBasis,
    Morphism,
    Representation,
    dual,
    hom_basis,
    hom_dim,
    identity_morphism,
    is_injective_morphism,
    power,
    quotient,
    random_representation,
    socle_at,
)


@dataclass
class Verdict:
    """Outcome of a criterion check.

    holds=False always comes with a witness whose payload suffices to
    recompute the violated inequality.  `details` is the per-inequality
    ledger; `context` records mode, field, and any derived quantities.
    """

    holds: bool
    witness: dict | None = None
    details: list = dc_field(default_factory=list)
    context: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict must carry a witness")

    @property
    def conclusive(self) -> bool:
        return self.context.get("conclusive", True)

    def to_json(self) -> dict:
        from .rep import Morphism, morphism_to_json

        def sanitize(obj):
            if isinstance(obj, Morphism):
                return morphism_to_json(obj)
            if isinstance(obj, dict):
                return {k: sanitize(v) for k, v in obj.items()}
            if isinstance(obj, (list, tuple)):
                return [sanitize(x) for x in obj]
            return obj

        return {
            "holds": self.holds,
            "witness": sanitize(self.witness),
            "details": sanitize(self.details),
            "context": sanitize(self.context),
        }


def _require_table_match(x: Representation, table: IndecomposableTable):
    if x.quiver != table.quiver:
        raise ValueError("representation and table quivers differ")
    if x.field != table.field:
        raise ValueError("representation and table fields differ")


# ----------------------------------------------------------------------
# Quiver Grassmannian criteria


class GrassmannianChecker:
    """Criterion evaluator for one representation against a table.

    The Hom dimensions [U, m] and [m, U] do not depend on the queried e,
    so they are computed once here; checking a given e is then pure
    integer arithmetic.
    """

    def __init__(self, m: Representation, table: IndecomposableTable):
        require_dynkin(m.quiver)
        _require_table_match(m, table)
        self.m = m
        self.table = table
        self.hom_into_m = tuple(hom_dim(u, m) for u in table.reps)
        self.hom_from_m = tuple(hom_dim(m, u) for u in table.reps)
        self.injective = set(table.injective_root_indices())
        self.projective = set(table.projective_root_indices())

    def nonempty(self, e: DimVector) -> Verdict:
        m, table = self.m, self.table
        e = check_dimvector(m.quiver, e)
        context = {"criterion": "grassmannian-nonempty", "field": m.field.name, "e": list(e)}
        if not dim_leq(e, m.dims):
            # trivially false; the theorem still guarantees a violated
            # inequality, which the scan below surfaces as the witness
            context["dimension_count_failed"] = True
        details = []
        witness = None
        for u, root in enumerate(table.roots):
            lhs = self.hom_into_m[u]
            rhs = euler_form(m.quiver, root, e)
            ok = lhs >= rhs
            details.append({"root": list(root), "hom": lhs, "euler": rhs, "ok": ok})
            if not ok and witness is None:
                witness = {"kind": "indecomposable", "root": list(root), "hom": lhs, "euler": rhs}
        if witness is None and context.get("dimension_count_failed"):
            # cannot happen for a valid table; keep a safe fallback witness
            witness = {"kind": "dimension-count", "e": list(e), "dims": list(m.dims)}
        return Verdict(holds=witness is None, witness=witness, details=details, context=context)

    def irreducible(self, e: DimVector) -> Verdict:
        m, table = self.m, self.table
        e = check_dimvector(m.quiver, e)
        if not dim_leq(e, m.dims):
            raise ValueError(f"e = {e} is not below dim m = {m.dims}")
        rest = dim_sub(m.dims, e)
        details = []
        witness = None
        for u, root in enumerate(table.roots):
            if u not in self.injective:
                lhs = self.hom_from_m[u]
                rhs = euler_form(m.quiver, e, root)
                ok = lhs <= rhs
                details.append(
                    {"family": 1, "root": list(root), "hom": lhs, "euler": rhs, "ok": ok}
                )
                if not ok and witness is None:
                    witness = {
                        "kind": "non-injective",
                        "root": list(root),
                        "hom": lhs,
                        "euler": rhs,
                    }
        for u, root in enumerate(table.roots):
            if u not in self.projective:
                lhs = self.hom_into_m[u]
                rhs = euler_form(m.quiver, root, rest)
                ok = lhs <= rhs
                details.append(
                    {"family": 2, "root": list(root), "hom": lhs, "euler": rhs, "ok": ok}
                )
                if not ok and witness is None:
                    witness = {
                        "kind": "non-projective",
                        "root": list(root),
                        "hom": lhs,
                        "euler": rhs,
                    }
        holds = witness is None
        context = {
            "criterion": "grassmannian-irreducible",
            "sufficient_only": True,
            "field": m.field.name,
            "e": list(e),
        }
        if holds:
            context["dimension"] = euler_form(m.quiver, e, rest)
        return Verdict(holds=holds, witness=witness, details=details, context=context)


def check_grassmannian_nonempty(
    m: Representation, e: DimVector, table: IndecomposableTable
) -> Verdict:
    """Subrepresentation of dimension vector e exists iff
    [U, m] >= <dim U, e> for every indecomposable U."""
    return GrassmannianChecker(m, table).nonempty(e)


def check_grassmannian_irreducible(
    m: Representation, e: DimVector, table: IndecomposableTable
) -> Verdict:
    """Sufficient criterion for irreducibility of Gr_e(m); on success the
    context carries the dimension <e, dim m - e>.  A failing verdict
    carries no irreducibility conclusion."""
    return GrassmannianChecker(m, table).irreducible(e)


# ----------------------------------------------------------------------
# The quotient estimate (nc2)


@dataclass
class CheckConfig:
    """Knobs for the quotient-estimate checkers.

    mode: "auto" picks "subspaces" over a finite field and "sampling" over
    Q.  "subspaces" and "vectors" are both exhaustive and equivalent;
    "vectors" enumerates socle vectors of n^k up to scalar literally, while
    "subspaces" dedups them by their span, which the brackets only depend
    on.
    """

    mode: str = "auto"
    trials: int = 256
    seed: int = 0
    box: int = 100
    class_budget: int = 200000

    def resolve_mode(self, n: Representation) -> str:
        if self.mode != "auto":
            return self.mode
        return "subspaces" if n.field.is_finite else "sampling"


def _socle_action_matrices(basis: HomBasis, soc: Matrix, vertex: int) -> list[Matrix]:
    """For each hom-basis element phi, the matrix phi_vertex @ soc."""
    return [mor.vertex_mats[vertex] @ soc for mor in basis.morphisms]


def _bracket_payload(i, k, vec, hom_nn, hom_nm, zn, zm):
    return {
        "vertex": i,
        "k": k,
        "socle_vector": vec,
        "brackets": {
            "[n^k,n]": k * hom_nn,
            "[n^k/S,n]": k * hom_nn - zn,
            "[n^k,m]": k * hom_nm,
            "[n^k/S,m]": k * hom_nm - zm,
        },
        "lhs": zn,
        "rhs": zm,
    }


def check_nc2(n: Representation, m: Representation, config: CheckConfig | None = None) -> Verdict:
    """Theorem-level quotient estimate on all quotients n^k -> n^k/S with S
    a simple subrepresentation and k <= [S, n]:

        [n^k, n] - [n^k/S, n] <= [n^k, m] - [n^k/S, m].

    Exhaustive over finite fields; sampled (evidence only) over Q.
    """
    if n.quiver != m.quiver:
        raise ValueError("representations live over different quivers")
    if n.field != m.field:
        raise ValueError("representations live over different fields")
    config = config or CheckConfig()
    mode = config.resolve_mode(n)
    if mode in ("subspaces", "vectors") and not n.field.is_finite:
        raise ValueError("exhaustive modes require a finite ground field")
    if mode == "subspaces":
        return _check_nc2_subspaces(n, m, config)
    if mode == "vectors":
        return _check_nc2_vectors(n, m, config)
    if mode == "sampling":
        return _check_nc2_sampling(n, m, config)
    raise ValueError(f"unknown mode {config.mode!r}")


def _socle_rank_fn(field, acts: list[Matrix], s_i: int):
    """rank of span{A_b u : u in U} as a function of the RREF rows of U.

    Prime fields get a vectorized integer path; extension fields fall back
    to exact Matrix stacking.
    """
    if not acts or acts[0].nrows == 0:
        return lambda coeffs: 0
    if field.is_prime_field:
        import numpy as np

        from .exactlin import _rref_mod_p

        p = field.characteristic
        stack = np.array(
            [[list(r) for r in a.rows] for a in acts], dtype=np.int64
        ).reshape(len(acts), acts[0].nrows, s_i)

        def rank_np(coeffs) -> int:
            r = np.array(coeffs, dtype=np.int64)  # l x s_i
            prods = (stack @ r.T) % p  # h x y_i x l
            flat = prods.transpose(0, 2, 1).reshape(-1, stack.shape[1])
            return len(_rref_mod_p(p, flat)[1])

        return rank_np

    def rank_exact(coeffs) -> int:
        rt = Matrix.from_cols(field, [list(r) for r in coeffs], nrows=s_i)
        return Matrix.hstack([a @ rt for a in acts]).rank()

    return rank_exact


def _check_nc2_subspaces(n: Representation, m: Representation, config: CheckConfig) -> Verdict:
    """Exhaustive check, deduplicating socle vectors by their span.

    A socle vector of n^k at vertex i is a k-tuple (u_1, ..., u_k) of
    socle vectors of n; the four brackets only depend on U = span(u_t),
    through dim Z_y(U) = [n^k, y] - [n^k/S, y] where Z_y is the action of
    Hom(n, y) on the socle.  Enumerating subspaces U of the socle (all
    dims up to [S_i, n]) therefore covers exactly the spec'd family.
    """
    f = n.field
    gf = gflin.gfq(f.order)
    basis_nn = hom_basis(n, n)
    basis_nm = hom_basis(n, m)
    hom_nn, hom_nm = basis_nn.dim, basis_nm.dim
    details = []
    witness = None
    checked = 0
    for i in range(n.quiver.vertex_count):
        soc = socle_at(n, i)
        s_i = soc.ncols
        if s_i == 0:
            continue
        acts_n = _socle_action_matrices(basis_nn, soc, i)
        acts_m = _socle_action_matrices(basis_nm, soc, i)
        rank_n = _socle_rank_fn(f, acts_n, s_i)
        rank_m = _socle_rank_fn(f, acts_m, s_i)
        budget = sum(gflin.gaussian_binomial(s_i, l, gf.q) for l in range(1, s_i + 1))
        if budget > config.class_budget:
            raise ValueError(
                f"socle subspace count {budget} at vertex {i} exceeds the class budget"
            )
        for l in range(1, s_i + 1):
            for coeffs in gflin.enumerate_rref(gf, s_i, l):
                zn = rank_n(coeffs)
                zm = rank_m(coeffs)
                ok = zn <= zm
                vec = [list(r) for r in coeffs]
                entry = _bracket_payload(i, l, vec, hom_nn, hom_nm, zn, zm)
                entry["ok"] = ok
                details.append(entry)
                checked += 1
                if not ok and witness is None:
                    witness = entry | {"kind": "quotient"}
    context = {
        "criterion": "nc2",
        "mode": "subspaces",
        "field": f.name,
        "conclusive": True,
        "checked": checked,
    }
    return Verdict(holds=witness is None, witness=witness, details=details, context=context)


def _simple_sub_quotient(nk: Representation, vertex: int, vec) -> Representation:
    """Quotient of nk by the simple subrepresentation spanned by `vec` at
    `vertex` (vec must lie in the socle there)."""
    f = nk.field
    sub = []
    for v in range(nk.quiver.vertex_count):
        if v == vertex:
            sub.append(Matrix.column(f, vec))
        else:
            sub.append(Matrix.zeros(f, nk.dims[v], 0))
    return quotient(nk, sub)[0]


def _check_nc2_vectors(n: Representation, m: Representation, config: CheckConfig) -> Verdict:
    """Literal exhaustive check: socle vectors of n^k up to scalar, for
    every k up to [S_i, n]; duplicate quotients are memoized by the
    canonical (projectively normalized) coefficient vector."""
    f = n.field
    q = f.order
    details = []
    witness = None
    memo: dict = {}
    checked = 0
    # quick class count for the budget guard
    total = 0
    socles = {}
    for i in range(n.quiver.vertex_count):
        soc = socle_at(n, i)
        if soc.ncols:
            socles[i] = soc
            for k in range(1, soc.ncols + 1):
                total += (q ** (k * soc.ncols) - 1) // (q - 1)
    if total > config.class_budget:
        raise ValueError(f"exhaustive vector mode needs {total} classes, over the budget")
    for i, soc in socles.items():
        s_i = soc.ncols
        for k in range(1, s_i + 1):
            nk = power(n, k)
            soc_k = socle_at(nk, i)
            hom_nk_n = hom_dim(nk, n)
            hom_nk_m = hom_dim(nk, m)
            dim_sock = soc_k.ncols
            for coeffs in _projective_vectors(f, dim_sock):
                key = (i, k, coeffs)
                if key in memo:
                    continue
                memo[key] = True
                vec = soc_k.apply(coeffs)
                quot = _simple_sub_quotient(nk, i, vec)
                lhs = hom_nk_n - hom_dim(quot, n)
                rhs = hom_nk_m - hom_dim(quot, m)
                ok = lhs <= rhs
                entry = {
                    "vertex": i,
                    "k": k,
                    "socle_vector": list(coeffs),
                    "brackets": {
                        "[n^k,n]": hom_nk_n,
                        "[n^k/S,n]": hom_nk_n - lhs,
                        "[n^k,m]": hom_nk_m,
                        "[n^k/S,m]": hom_nk_m - rhs,
                    },
                    "lhs": lhs,
                    "rhs": rhs,
                    "ok": ok,
                }
                details.append(entry)
                checked += 1
                if not ok and witness is None:
                    witness = entry | {"kind": "quotient"}
    context = {
        "criterion": "nc2",
        "mode": "vectors",
        "field": f.name,
        "conclusive": True,
        "checked": checked,
    }
    return Verdict(holds=witness is None, witness=witness, details=details, context=context)


def _projective_vectors(field, dim):
    """Nonzero vectors of F_q^dim with first nonzero coordinate 1, in
    lexicographic order of the full coefficient tuple."""
    q = field.order
    for first in range(dim):
        prefix = (0,) * first + (1,)
        for rest in itertools.product(range(q), repeat=dim - first - 1):
            yield prefix + rest


def _check_nc2_sampling(n: Representation, m: Representation, config: CheckConfig) -> Verdict:
    f = n.field
    rng = random.Random(config.seed)
    socles = {
        i: socle_at(n, i) for i in range(n.quiver.vertex_count) if socle_at(n, i).ncols
    }
    details = []
    witness = None
    if socles:
        verts = sorted(socles)
        for _ in range(config.trials):
            i = verts[rng.randrange(len(verts))]
            s_i = socles[i].ncols
            k = rng.randint(1, s_i)
            nk = power(n, k)
            soc_k = socle_at(nk, i)
            coeffs = [f.random(rng, config.box) for _ in range(soc_k.ncols)]
            if all(c == f.zero for c in coeffs):
                coeffs[0] = f.one
            vec = soc_k.apply(coeffs)
            quot = _simple_sub_quotient(nk, i, vec)
            hom_nk_n = hom_dim(nk, n)
            hom_nk_m = hom_dim(nk, m)
            lhs = hom_nk_n - hom_dim(quot, n)
            rhs = hom_nk_m - hom_dim(quot, m)
            ok = lhs <= rhs
            entry = {
                "vertex": i,
                "k": k,
                "socle_vector": [str(c) for c in coeffs],
                "lhs": lhs,
                "rhs": rhs,
                "ok": ok,
            }
            details.append(entry)
            if not ok and witness is None:
                witness = entry | {"kind": "quotient"}
                break
    context = {
        "criterion": "nc2",
        "mode": "sampling",
        "field": f.name,
        "conclusive": witness is not None,
        "trials": config.trials,
    }
    return Verdict(holds=witness is None, witness=witness, details=details, context=context)


# ----------------------------------------------------------------------
# Random surjections


def _random_stable_subspaces(u: Representation, rng) -> list[Matrix]:
    """Seeded random arrow-stable family: random generators per vertex,
    closed under the arrow action."""
    f = u.field
    spans = []
    for v in range(u.quiver.vertex_count):
        d = u.dims[v]
        count = rng.randint(0, d)
        cols = [[f.random(rng, 5) for _ in range(d)] for _ in range(count)]
        mat = Matrix.from_cols(f, cols, nrows=d)
        spans.append(_column_space_basis(mat))
    changed = True
    while changed:
        changed = False
        for (s, t), mat in zip(u.quiver.arrows, u.arrow_mats):
            image = mat @ spans[s]
            if image.ncols == 0:
                continue
            stacked = Matrix.hstack([spans[t], image])
            basis = _column_space_basis(stacked)
            if basis.ncols != spans[t].ncols:
                spans[t] = basis
                changed = True
    return spans


def _column_space_basis(mat: Matrix) -> Matrix:
    pivots = mat.rref()[1]
    return mat.submatrix(range(mat.nrows), pivots)


def check_nc2_random_surjections(
    n: Representation, m: Representation, trials: int = 256, seed: int = 0, dim_bound: int = 3
) -> Verdict:
    """Spot-check the estimate on random surjections u -> v.

    A violation is a certified counterexample to the surjection form of
    the estimate; absence of violations is evidence only.
    """
    if n.quiver != m.quiver or n.field != m.field:
        raise ValueError("representations must share a quiver and a field")
    rng = random.Random(seed)
    q = n.quiver
    details = []
    witness = None
    for t in range(trials):
        dims = tuple(rng.randint(0, dim_bound) for _ in range(q.vertex_count))
        u = random_representation(q, dims, n.field, seed=rng.randrange(2**32))
        sub = _random_stable_subspaces(u, rng)
        v, _ = quotient(u, sub)
        lhs = hom_dim(u, n) - hom_dim(v, n)
        rhs = hom_dim(u, m) - hom_dim(v, m)
        ok = lhs <= rhs
        entry = {
            "trial": t,
            "u_dims": list(u.dims),
            "v_dims": list(v.dims),
            "lhs": lhs,
            "rhs": rhs,
            "ok": ok,
        }
        details.append(entry)
        if not ok:
            witness = entry | {"kind": "surjection"}
            break
    context = {
        "criterion": "nc2-random-surjections",
        "field": n.field.name,
        "conclusive": witness is not None,
        "trials": trials,
        "seed": seed,
    }
    return Verdict(holds=witness is None, witness=witness, details=details, context=context)


# ----------------------------------------------------------------------
# Equioriented type A


def path_order(q: Quiver):
    """Vertices of an equioriented A_n quiver in path order, or None."""
    n = q.vertex_count
    if n == 0:
        return None
    if q.arrow_count != n - 1:
        return None
    outs = {}
    indeg = [0] * n
    for s, t in q.arrows:
        if s in outs:
            return None
        outs[s] = t
        indeg[t] += 1
    if any(d > 1 for d in indeg):
        return None
    starts = [v for v in range(n) if indeg[v] == 0]
    if len(starts) != 1:
        return None
    order = [starts[0]]
    while order[-1] in outs:
        order.append(outs[order[-1]])
    if len(order) != n:
        return None
    return tuple(order)


def _roots_as_intervals(table: IndecomposableTable, order) -> dict[int, tuple[int, int]]:
    """Map root index -> (i, j), 1-based interval along the path order."""
    position = {v: p + 1 for p, v in enumerate(order)}
    out = {}
    for idx, root in enumerate(table.roots):
        support = sorted(position[v] for v, x in enumerate(root) if x)
        if any(x > 1 for x in root) or support != list(range(support[0], support[-1] + 1)):
            raise RuntimeError("type A root is not an interval; table corrupted")
        out[idx] = (support[0], support[-1])
    return out


def an_criterion(
    n: Representation,
    m: Representation,
    table: IndecomposableTable,
    seed: int = 0,
    build_embedding: bool = True,
) -> Verdict:
    """Prefix-sum criterion for an embedding n -> m over equioriented A_n,
    with an explicit certified embedding on success."""
    order = path_order(n.quiver)
    if order is None:
        raise ValueError("an_criterion requires an equioriented type A quiver")
    if n.quiver != m.quiver or n.field != m.field:
        raise ValueError("representations must share a quiver and a field")
    _require_table_match(n, table)
    intervals = _roots_as_intervals(table, order)
    n_mults = decompose(n, table)
    m_mults = decompose(m, table)
    nv = len(order)
    n_ij = {}
    m_ij = {}
    for idx, (i, j) in intervals.items():
        root = table.roots[idx]
        n_ij[(i, j)] = n_mults.get(root, 0)
        m_ij[(i, j)] = m_mults.get(root, 0)
    details = []
    witness = None
    for j in range(1, nv + 1):
        for i in range(1, j + 1):
            lhs = sum(n_ij.get((k, j), 0) for k in range(1, i + 1))
            rhs = sum(m_ij.get((k, j), 0) for k in range(1, i + 1))
            ok = lhs <= rhs
            details.append({"i": i, "j": j, "lhs": lhs, "rhs": rhs, "ok": ok})
            if not ok and witness is None:
                witness = {"kind": "prefix-sum", "i": i, "j": j, "lhs": lhs, "rhs": rhs}
    holds = witness is None
    context = {
        "criterion": "an-embedding",
        "field": n.field.name,
        "n_multiplicities": {str(k): v for k, v in sorted(n_ij.items()) if v},
        "m_multiplicities": {str(k): v for k, v in sorted(m_ij.items()) if v},
    }
    verdict = Verdict(holds=holds, witness=witness, details=details, context=context)
    if holds and build_embedding:
        emb = _build_an_embedding(n, m, table, intervals, n_mults, m_mults, seed)
        if not is_injective_morphism(emb):
            raise RuntimeError("constructed type A embedding failed its injectivity certificate")
        verdict.context["embedding"] = emb
    return verdict


def _assignment_from_prefix(n_starts, m_starts):
    """Greedy matching: each n-interval start gets the largest unused
    m-interval start below it.  Succeeds exactly under the prefix sums."""
    pool = sorted(m_starts)
    assignment = []
    for i in sorted(n_starts):
        cands = [x for x in pool if x <= i]
        if not cands:
            return None
        pick = cands[-1]
        pool.remove(pick)
        assignment.append((i, pick))
    return assignment


def _find_iso(a: Representation, b: Representation, seed: int, trials: int = 128) -> Morphism:
    """An isomorphism a -> b found by sampling Hom(a, b); requires a ~ b."""
    if a == b:
        return identity_morphism(a)
    basis = hom_basis(a, b)
    rng = random.Random(seed)
    for _ in range(trials):
        mor = basis.combination([a.field.random(rng, 50) for _ in range(basis.dim)])
        if all(mat.nrows == mat.ncols and mat.rank() == mat.nrows for mat in mor.vertex_mats):
            return mor
    raise RuntimeError("no isomorphism found by sampling; inputs may not be isomorphic")


def _invert_iso(f: Morphism) -> Morphism:
    mats = []
    for mat in f.vertex_mats:
        inv = mat.solve_matrix(Matrix.identity(mat.field, mat.nrows))
        if inv is None:
            raise RuntimeError("vertex matrix not invertible")
        mats.append(inv)
    return Morphism(f.target, f.source, mats, validate=False)


def _build_an_embedding(n, m, table, intervals, n_mults, m_mults, seed) -> Morphism:
    # summand slots in table-root order, with multiplicity
    n_slots = []
    m_slots = []
    for idx, root in enumerate(table.roots):
        n_slots.extend([idx] * n_mults.get(root, 0))
        m_slots.extend([idx] * m_mults.get(root, 0))
    # match per right endpoint j
    target_of = {}
    for j in sorted(set(ij[1] for ij in intervals.values())):
        n_list = [(intervals[idx][0], pos) for pos, idx in enumerate(n_slots) if intervals[idx][1] == j]
        m_list = [(intervals[idx][0], pos) for pos, idx in enumerate(m_slots) if intervals[idx][1] == j]
        n_list.sort()
        pool = sorted(m_list)
        for i, npos in n_list:
            cands = [(i2, mpos) for i2, mpos in pool if i2 <= i]
            if not cands:
                raise RuntimeError("greedy interval matching failed despite prefix sums")
            pick = cands[-1]
            pool.remove(pick)
            target_of[npos] = pick[1]
    n0 = assemble(table, n_mults)
    m0 = assemble(table, m_mults)
    f = n.field
    # block morphism N0 -> M0
    blocks = {}
    for npos, mpos in target_of.items():
        src = table.reps[n_slots[npos]]
        tgt = table.reps[m_slots[mpos]]
        hb = hom_basis(src, tgt)
        emb = None
        for mor in hb.morphisms:
            if is_injective_morphism(mor):
                emb = mor
                break
        if emb is None:
            raise RuntimeError("no injective interval embedding found")
        blocks[(mpos, npos)] = emb
    n_off = _slot_offsets(table, n_slots)
    m_off = _slot_offsets(table, m_slots)
    mats = []
    for v in range(n.quiver.vertex_count):
        big = [[f.zero] * n0.dims[v] for _ in range(m0.dims[v])]
        for (mpos, npos), emb in blocks.items():
            sub = emb.vertex_mats[v]
            r0 = m_off[mpos][v]
            c0 = n_off[npos][v]
            for i, row in enumerate(sub.rows):
                for j, x in enumerate(row):
                    big[r0 + i][c0 + j] = x
        mats.append(Matrix(f, tuple(tuple(r) for r in big), validate=False, ncols=n0.dims[v]))
    e0 = Morphism(n0, m0, mats)
    alpha = _find_iso(n0, n, seed=seed + 11)
    beta = _find_iso(m0, m, seed=seed + 13)
    return beta.compose(e0).compose(_invert_iso(alpha))


def _slot_offsets(table, slots):
    """Per-slot, per-vertex offsets into the assembled direct sum."""
    offsets = []
    acc = [0] * table.quiver.vertex_count
    for idx in slots:
        offsets.append(tuple(acc))
        for v, x in enumerate(table.roots[idx]):
            acc[v] += x
    return offsets


# ----------------------------------------------------------------------
# Dual surjection criterion


def check_dual_surjection(
    u: Representation, v: Representation, config: CheckConfig | None = None
) -> Verdict:
    """Criterion for surjections u^r -> v^r: the quotient estimate applied
    to the dual representations over the opposite quiver."""
    verdict = check_nc2(dual(v), dual(u), config)
    verdict.context = dict(verdict.context)
    verdict.context["criterion"] = "dual-surjection"
    verdict.context["interpretation"] = "holds iff u^r surjects onto v^r for large r"
    return verdict


# ----------------------------------------------------------------------
# Semistability


def realizable_subdims(
    m: Representation,
    q_enum: int | None = None,
    table: IndecomposableTable | None = None,
    budget: int = DEFAULT_BUDGET,
):
    """All dimension vectors of subrepresentations of m.

    Dynkin route (table given): the Hom inequalities decide realizability.
    Otherwise m must live over the finite field of order q_enum and
    enumeration decides.
    """
    dims = m.dims
    out = []
    if table is not None:
        _require_table_match(m, table)
        homvec = [hom_dim(u, m) for u in table.reps]
        for f_vec in itertools.product(*(range(d + 1) for d in dims)):
            if all(
                hv >= euler_form(m.quiver, root, f_vec)
                for hv, root in zip(homvec, table.roots)
            ):
                out.append(f_vec)
        return out
    if not m.field.is_finite or (q_enum is not None and m.field.order != q_enum):
        raise ValueError("exhaustive semistability requires m over F_{q_enum}")
    oracle = SubrepOracle(m, budget)
    for f_vec in itertools.product(*(range(d + 1) for d in dims)):
        if oracle.nonempty(f_vec):
            out.append(f_vec)
    return out


def min_slope(
    m: Representation,
    e: DimVector,
    q_enum: int | None = None,
    table: IndecomposableTable | None = None,
    budget: int = DEFAULT_BUDGET,
):
    """min over subrepresentations N of e(N) = <dim N, e>, with an argmin."""
    e = check_dimvector(m.quiver, e)
    best = None
    best_f = None
    for f_vec in realizable_subdims(m, q_enum=q_enum, table=table, budget=budget):
        val = functional(m.quiver, e, f_vec)
        if best is None or val < best or (val == best and f_vec < best_f):
            best, best_f = val, f_vec
    return best, best_f


def is_semistable(
    m: Representation,
    e: DimVector,
    q_enum: int | None = None,
    table: IndecomposableTable | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Verdict:
    """e-semistability: e(m) = 0 and e(N) >= 0 for all subrepresentations."""
    e = check_dimvector(m.quiver, e)
    total = functional(m.quiver, e, m.dims)
    slope, arg = min_slope(m, e, q_enum=q_enum, table=table, budget=budget)
    method = "dynkin-criterion" if table is not None else f"enumeration over F_{m.field.order}"
    context = {
        "criterion": "semistable",
        "e": list(e),
        "e(m)": total,
        "min_slope": slope,
        "min_slope_at": list(arg),
        "method": method,
        "field": m.field.name,
    }
    details = [{"e(m)": total, "min_slope": slope}]
    if total != 0:
        return Verdict(
            holds=False,
            witness={"kind": "total", "e(m)": total},
            details=details,
            context=context,
        )
    if slope < 0:
        return Verdict(
            holds=False,
            witness={"kind": "subrep", "dims": list(arg), "e(N)": slope},
            details=details,
            context=context,
        )
    return Verdict(holds=True, details=details, context=context)
