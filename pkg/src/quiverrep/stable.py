"""Stable embeddings N^r -> M^r, the block-matrix lemma, and the generic
hom stabilization theorem."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from . import gflin
from .criteria import Verdict, min_slope
from .exactlin import FieldSpec, Matrix
from .grassmannian import DEFAULT_BUDGET
from .quiver import DimVector, check_dimvector, dim_scale, functional, kronecker
from .rep import (
    HomBasis,
    Morphism,
    Representation,
    hom_basis,
    hom_dim,
    is_injective_morphism,
    power,
    random_representation,
)

EXHAUSTIVE_LIMIT = 200000


@dataclass(frozen=True)
class ZSpace:
    """A subspace Z of Hom(V, W) spanned by explicit matrices."""

    field: FieldSpec
    v_dim: int
    w_dim: int
    basis: tuple[Matrix, ...]

    def __post_init__(self):
        for b in self.basis:
            if b.field != self.field or b.shape != (self.w_dim, self.v_dim):
                raise ValueError("Z-space basis matrix of the wrong shape or field")
        if self.basis:
            flat = Matrix(self.field, [list(b.flatten()) for b in self.basis], validate=False)
            if flat.rank() != len(self.basis):
                raise ValueError("Z-space basis is linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> Matrix:
        f = self.field
        acc = Matrix.zeros(f, self.w_dim, self.v_dim)
        for c, b in zip(coeffs, self.basis):
            c = f.coerce(c)
            if c != f.zero:
                acc = acc + b.scale(c)
        return acc


def z_to_kronecker(z: ZSpace) -> Representation:
    """The representation of the k-arrow Kronecker quiver spanned by the
    Z-space basis maps V -> W."""
    q = kronecker(z.dim)
    return Representation(q, z.field, (z.v_dim, z.w_dim), list(z.basis))


@dataclass
class StableSearchReport:
    """Result of a randomized search for an injective block map."""

    found: bool
    r: int | None
    block_matrix: object | None  # Matrix (lemma level) or Morphism (representation level)
    trials_used: int
    seed: int
    per_r: list = dc_field(default_factory=list)
    reason: str | None = None

    def to_json(self) -> dict:
        from .rep import morphism_to_json

        block = self.block_matrix
        if isinstance(block, Morphism):
            block = morphism_to_json(block)
        elif isinstance(block, Matrix):
            block = [[str(x) for x in row] for row in block.rows]
        return {
            "found": self.found,
            "r": self.r,
            "trials_used": self.trials_used,
            "seed": self.seed,
            "per_r": self.per_r,
            "reason": self.reason,
            "block_matrix": block,
        }


@dataclass
class GenericHomEstimate:
    """Sampled upper bound for the generic hom dimension hom(m, r.e).

    The estimate is a minimum over samples, hence an upper bound for the
    true generic (minimal) value, nonincreasing as samples grow.
    """

    e: DimVector
    r: int
    estimate: int
    samples: int


# ----------------------------------------------------------------------
# The lemma hypothesis


def check_z_hypothesis(z: ZSpace, q_enum: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """dim Z(U) >= dim U for every subspace U of V, checked two ways:
    directly over the subspace lattice of V, and through the Kronecker
    representation's subrepresentation slopes.  The routes must agree."""
    if not z.field.is_finite or z.field.order != q_enum:
        raise ValueError("hypothesis check enumerates subspaces over F_{q_enum}")
    gf = gflin.gfq(q_enum)
    total = sum(gflin.gaussian_binomial(z.v_dim, d, q_enum) for d in range(z.v_dim + 1))
    if total > budget:
        raise ValueError(f"subspace lattice of size {total} exceeds the budget")
    details = []
    witness = None
    for d in range(1, z.v_dim + 1):
        for rows in gflin.enumerate_rref(gf, z.v_dim, d):
            basis_cols = Matrix.from_cols(z.field, [list(r) for r in rows], nrows=z.v_dim)
            if z.dim:
                image = Matrix.hstack([b @ basis_cols for b in z.basis])
                zdim = image.rank()
            else:
                zdim = 0
            ok = zdim >= d
            details.append({"U": [list(r) for r in rows], "dim_U": d, "dim_ZU": zdim, "ok": ok})
            if not ok and witness is None:
                witness = {
                    "kind": "subspace",
                    "U": [list(r) for r in rows],
                    "dim_U": d,
                    "dim_ZU": zdim,
                }
    direct_holds = witness is None

    # Kronecker route: e = (k-1, 1) has e(N) = dim N_2 - dim N_1, and the
    # hypothesis is exactly min-slope nonnegativity over subrepresentations.
    if z.dim:
        mk = z_to_kronecker(z)
        e = (z.dim - 1, 1)
        slope, arg = min_slope(mk, e, q_enum=q_enum, budget=budget)
        kron_holds = slope >= 0
    else:
        slope, arg, kron_holds = 0, (0, 0), True
    if kron_holds != direct_holds:
        raise RuntimeError(
            "internal disagreement: subspace route and Kronecker route differ "
            f"({direct_holds} vs {kron_holds})"
        )
    context = {
        "criterion": "z-hypothesis",
        "field": z.field.name,
        "kronecker_min_slope": slope,
        "kronecker_min_slope_at": list(arg),
        "routes_agree": True,
    }
    return Verdict(holds=direct_holds, witness=witness, details=details, context=context)


# ----------------------------------------------------------------------
# Injective block matrices with entries in Z


def _random_coeff_grid(field: FieldSpec, rng, r: int, k: int, box: int):
    return [[[field.random(rng, box) for _ in range(k)] for _ in range(r)] for _ in range(r)]


def _assemble_block(z: ZSpace, coeffs, r: int) -> Matrix:
    blocks = []
    for s in range(r):
        row = [z.element(coeffs[s][t]) for t in range(r)]
        blocks.append(Matrix.hstack(row))
    return Matrix.vstack(blocks)


def find_injective_block(
    z: ZSpace, r_max: int = 8, trials: int = 256, seed: int = 0, box: int = 100
) -> StableSearchReport:
    """Search for F in M_{r x r}(Z) injective as a map V^r -> W^r.

    Samples coefficients for each r = 1..r_max; a returned matrix is
    certified by exact rank.  Exhaustion without a find is inconclusive,
    never a disproof.
    """
    rng = random.Random(seed)
    used = 0
    per_r = []
    if z.v_dim == 0:
        return StableSearchReport(True, 1, _assemble_block(z, [[[0] * z.dim]], 1), 0, seed, [])
    if z.w_dim < z.v_dim or z.dim == 0:
        return StableSearchReport(
            False, None, None, 0, seed, [], reason="no injective map can exist at any r"
        )
    for r in range(1, r_max + 1):
        space = None
        if z.field.is_finite:
            space = z.field.order ** (z.dim * r * r)
        if space is not None and space <= min(trials, EXHAUSTIVE_LIMIT):
            found_here = False
            for flat in itertools.product(z.field.elements(), repeat=z.dim * r * r):
                used += 1
                coeffs = [
                    [list(flat[(s * r + t) * z.dim : (s * r + t + 1) * z.dim]) for t in range(r)]
                    for s in range(r)
                ]
                f_mat = _assemble_block(z, coeffs, r)
                if f_mat.rank() == r * z.v_dim:
                    return StableSearchReport(True, r, f_mat, used, seed, per_r)
            per_r.append({"r": r, "status": "impossible (exhausted)"})
            continue
        for _ in range(trials):
            used += 1
            coeffs = _random_coeff_grid(z.field, rng, r, z.dim, box)
            f_mat = _assemble_block(z, coeffs, r)
            if f_mat.rank() == r * z.v_dim:
                return StableSearchReport(True, r, f_mat, used, seed, per_r)
        per_r.append({"r": r, "status": "not found (sampled)"})
    return StableSearchReport(False, None, None, used, seed, per_r, reason="budget exhausted")


# ----------------------------------------------------------------------
# Representation-level stable embeddings


def _power_morphism(basis: HomBasis, coeffs, r: int) -> Morphism:
    """Morphism n^r -> m^r with r x r blocks of Hom-basis combinations."""
    n, m = basis.source, basis.target
    f = n.field
    nr, mr = power(n, r), power(m, r)
    mats = []
    for v in range(n.quiver.vertex_count):
        rows_n, cols_n = m.dims[v], n.dims[v]
        big = [[f.zero] * (r * cols_n) for _ in range(r * rows_n)]
        for s in range(r):
            for t in range(r):
                block = None
                for c, mor in zip(coeffs[s][t], basis.morphisms):
                    c = f.coerce(c)
                    if c != f.zero:
                        scaled = mor.vertex_mats[v].scale(c)
                        block = scaled if block is None else block + scaled
                if block is None:
                    continue
                for i, row in enumerate(block.rows):
                    for j, x in enumerate(row):
                        big[s * rows_n + i][t * cols_n + j] = x
        mats.append(Matrix(f, tuple(tuple(r_) for r_ in big), validate=False, ncols=r * cols_n))
    return Morphism(nr, mr, mats, validate=False)


def _grid_certificate_no_injective(basis: HomBasis, limit: int = 2_000_000) -> bool:
    """Over Q: certify that no element of Hom(n, m) is injective.

    Looks for a vertex where every maximal minor of the generic vertex
    matrix (entries linear in the Hom coordinates) vanishes identically,
    which is decided exactly by evaluating on the integer grid
    {0..s}^h, s = minor size: a polynomial of per-variable degree <= s
    vanishing there is zero.  Returns False when no single vertex carries
    the obstruction or the grid would exceed `limit` evaluations.
    """
    n, m = basis.source, basis.target
    h = basis.dim
    if n.total_dim == 0:
        return False
    for v in range(n.quiver.vertex_count):
        s_dim = n.dims[v]
        t_dim = m.dims[v]
        if s_dim == 0:
            continue
        if t_dim < s_dim:
            return True  # rank can never reach the column count
        minor_size = s_dim
        grid_points = (minor_size + 1) ** h
        n_minors = _binom(t_dim, minor_size)
        if grid_points * n_minors > limit:
            continue
        vertex_mats = [mor.vertex_mats[v] for mor in basis.morphisms]
        all_vanish = True
        for point in itertools.product(range(minor_size + 1), repeat=h):
            mat = Matrix.zeros(n.field, t_dim, s_dim)
            for c, bm in zip(point, vertex_mats):
                if c:
                    mat = mat + bm.scale(n.field.from_int(c))
            if mat.rank() == s_dim:
                all_vanish = False
                break
        if all_vanish:
            return True
    return False


def _binom(n: int, k: int) -> int:
    import math

    return math.comb(n, k)


def search_stable_embedding(
    n: Representation,
    m: Representation,
    r_max: int = 8,
    trials: int = 256,
    seed: int = 0,
    box: int = 100,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> StableSearchReport:
    """Search for an injective morphism n^r -> m^r, r = 1..r_max.

    Small finite coefficient spaces are scanned exhaustively (so a miss at
    that r is a certified impossibility); otherwise seeded sampling.  At
    r = 1 over Q a determinant-identity grid test can also certify
    impossibility.  A not-found report after the budget is inconclusive.
    """
    if n.quiver != m.quiver or n.field != m.field:
        raise ValueError("representations must share a quiver and a field")
    basis = hom_basis(n, m)
    h = basis.dim
    rng = random.Random(seed)
    per_r = []
    used = 0
    if n.total_dim == 0:
        zero = _power_morphism(basis, [[[n.field.zero] * h]], 1)
        return StableSearchReport(True, 1, zero, 0, seed, [])
    if h == 0:
        return StableSearchReport(False, None, None, 0, seed, [], reason="Hom(n, m) = 0")
    for r in range(1, r_max + 1):
        if n.field.is_finite:
            space = n.field.order ** (h * r * r)
            if space <= exhaustive_limit:
                hit = None
                for flat in itertools.product(n.field.elements(), repeat=h * r * r):
                    used += 1
                    coeffs = [
                        [list(flat[(s * r + t) * h : (s * r + t + 1) * h]) for t in range(r)]
                        for s in range(r)
                    ]
                    mor = _power_morphism(basis, coeffs, r)
                    if is_injective_morphism(mor):
                        hit = mor
                        break
                if hit is not None:
                    per_r.append({"r": r, "status": "found (exhaustive)"})
                    return StableSearchReport(True, r, hit, used, seed, per_r)
                per_r.append({"r": r, "status": "impossible (exhaustive)", "classes": space})
                continue
        if r == 1 and n.field.is_rationals:
            if _grid_certificate_no_injective(basis):
                per_r.append({"r": 1, "status": "impossible (determinant identity)"})
                continue
        found = None
        for _ in range(trials):
            used += 1
            coeffs = _random_coeff_grid(n.field, rng, r, h, box)
            mor = _power_morphism(basis, coeffs, r)
            if is_injective_morphism(mor):
                found = mor
                break
        if found is not None:
            per_r.append({"r": r, "status": "found (sampled)"})
            return StableSearchReport(True, r, found, used, seed, per_r)
        per_r.append({"r": r, "status": "not found (sampled)"})
    return StableSearchReport(False, None, None, used, seed, per_r, reason="budget exhausted")


def search_stable_surjection(
    u: Representation, v: Representation, r_max: int = 8, trials: int = 256, seed: int = 0
) -> StableSearchReport:
    """Search for a surjection u^r -> v^r by dualizing the embedding search."""
    from .rep import dual, dual_morphism

    report = search_stable_embedding(dual(v), dual(u), r_max=r_max, trials=trials, seed=seed)
    if report.found and isinstance(report.block_matrix, Morphism):
        report.block_matrix = dual_morphism(report.block_matrix)
    return report


# ----------------------------------------------------------------------
# Generic hom dimensions


def generic_hom(
    m: Representation,
    e: DimVector,
    r: int,
    samples: int = 64,
    seed: int = 0,
    box: int = 100,
) -> GenericHomEstimate:
    """min over sampled X of dim vector r.e of dim Hom(m, X): an upper
    bound for the generic hom dimension hom(m, r.e)."""
    e = check_dimvector(m.quiver, e)
    target = dim_scale(r, e)
    best = None
    for t in range(samples):
        x = random_representation(m.quiver, target, m.field, seed=seed + 31 * t, box=box)
        d = hom_dim(m, x)
        best = d if best is None else min(best, d)
        if best == max(0, functional(m.quiver, e, m.dims) * r):
            break  # cannot go below the Euler lower bound
    if best is None:
        best = 0
    return GenericHomEstimate(e, r, best, samples)


def generic_rank_vector(
    m: Representation, e: DimVector, samples: int = 64, seed: int = 0, box: int = 100
) -> DimVector:
    """Coordinatewise-maximal vertex rank vector of sampled maps from m to
    sampled representations of dimension vector e."""
    e = check_dimvector(m.quiver, e)
    rng = random.Random(seed)
    best = [0] * m.quiver.vertex_count
    for t in range(samples):
        x = random_representation(m.quiver, e, m.field, seed=seed + 127 * t, box=box)
        basis = hom_basis(m, x)
        if basis.dim == 0:
            continue
        mor = basis.combination([m.field.random(rng, box) for _ in range(basis.dim)])
        for v, mat in enumerate(mor.vertex_mats):
            best[v] = max(best[v], mat.rank())
    return tuple(best)


@dataclass
class StabilizationReport:
    e: DimVector
    e_of_m: int
    entries: list  # (r, estimate, target)
    threshold: int | None
    hypothesis_checked: bool
    hypothesis_field: str | None
    inconclusive: bool

    def to_json(self) -> dict:
        return {
            "e": list(self.e),
            "e(m)": self.e_of_m,
            "entries": [list(x) for x in self.entries],
            "threshold": self.threshold,
            "hypothesis_checked": self.hypothesis_checked,
            "hypothesis_field": self.hypothesis_field,
            "inconclusive": self.inconclusive,
        }


def check_stabilization(
    m: Representation,
    e: DimVector,
    r_range=range(1, 9),
    samples: int = 64,
    q_enum: int = 5,
    seed: int = 0,
    assume_hypothesis: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> StabilizationReport:
    """Observe hom(m, r.e) = r.e(m) for large r, under the hypothesis
    e(N) >= 0 for all subrepresentations N of m.

    The hypothesis is verified by exhaustive min-slope over F_{q_enum}
    (reducing m if it is given over Q); with assume_hypothesis=True an
    unverifiable hypothesis is assumed and flagged.  Estimates below the
    target are impossible under the hypothesis and raise.
    """
    e = check_dimvector(m.quiver, e)
    hypothesis_checked = False
    hypothesis_field = None
    if m.field.is_finite:
        m_check = m
    else:
        try:
            m_check = m.change_field(FieldSpec.of_order(q_enum))
            if hom_dim(m_check, m_check) != hom_dim(m, m):
                m_check = None
        except ValueError:
            m_check = None
    if m_check is not None:
        slope, arg = min_slope(m_check, e, q_enum=m_check.field.order, budget=budget)
        hypothesis_checked = True
        hypothesis_field = m_check.field.name
        if slope < 0:
            raise ValueError(
                f"hypothesis violated: subrepresentation of dims {arg} has e(N) = {slope} < 0"
            )
    elif not assume_hypothesis:
        raise ValueError(
            "cannot verify the hypothesis over the requested field; "
            "pass assume_hypothesis=True to proceed flagged"
        )
    e_of_m = functional(m.quiver, e, m.dims)
    entries = []
    for r in r_range:
        est = generic_hom(m, e, r, samples=samples, seed=seed + 1009 * r).estimate
        target = r * e_of_m
        if est < target:
            raise RuntimeError(
                f"estimate {est} below r*e(m) = {target} at r = {r}: impossible under the "
                "hypothesis; this signals a bug"
            )
        entries.append((r, est, target))
    threshold = None
    for r, est, target in reversed(entries):
        if est == target:
            threshold = r
        else:
            break
    inconclusive = threshold is None or entries[-1][1] != entries[-1][2]
    return StabilizationReport(
        e, e_of_m, entries, threshold, hypothesis_checked, hypothesis_field, inconclusive
    )
