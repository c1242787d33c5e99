import json
import random

import pytest

from quiverrep.exactlin import GF, QQ, Matrix
from quiverrep.quiver import a_n, d4_subspace, euler_form, kronecker, opposite
from quiverrep.rep import (
    Morphism,
    Representation,
    build_injective,
    build_projective,
    direct_sum,
    dual,
    dual_morphism,
    ext_dim,
    hom_basis,
    hom_dim,
    identity_morphism,
    is_injective_morphism,
    is_surjective_morphism,
    load_rep,
    morphism_from_json,
    morphism_to_json,
    power,
    quotient,
    random_representation,
    rep_from_json,
    rep_to_json,
    save_rep,
    simple,
    socle_at,
)

F5 = GF(5)
A2 = a_n(2)
A3 = a_n(3)
K3 = kronecker(3)


def interval(q, i, j, field):
    """Equioriented interval module on path positions i..j (1-based)."""
    dims = tuple(1 if i <= v + 1 <= j else 0 for v in range(q.vertex_count))
    mats = []
    for s, t in q.arrows:
        if dims[s] and dims[t]:
            mats.append(Matrix.identity(field, 1))
        else:
            mats.append(Matrix.zeros(field, dims[t], dims[s]))
    return Representation(q, field, dims, mats)


def test_hom_simple_self():
    s = simple(A2, F5, 0)
    assert hom_dim(s, s) == 1


def test_hom_between_intervals_on_a3():
    u12 = interval(A3, 1, 2, F5)
    u23 = interval(A3, 2, 3, F5)
    assert hom_dim(u12, u23) == 0
    assert hom_dim(u23, u12) == 1
    basis = hom_basis(u23, u12)
    assert basis.dim == 1
    assert basis.morphisms[0].intertwines()


def test_hom_from_projective_is_vertex_dimension():
    rng = random.Random(0)
    for q in (A3, K3, d4_subspace()):
        for i in range(q.vertex_count):
            p = build_projective(q, i, F5)
            dims = tuple(rng.randint(0, 3) for _ in range(q.vertex_count))
            x = random_representation(q, dims, F5, seed=rng.randrange(10**6))
            assert hom_dim(p, x) == dims[i]


def test_hom_into_injective_is_vertex_dimension():
    rng = random.Random(1)
    for q in (A3, d4_subspace()):
        for i in range(q.vertex_count):
            inj = build_injective(q, i, F5)
            dims = tuple(rng.randint(0, 3) for _ in range(q.vertex_count))
            x = random_representation(q, dims, F5, seed=rng.randrange(10**6))
            assert hom_dim(x, inj) == dims[i]


def test_ext_examples():
    s1, s2 = simple(A2, F5, 0), simple(A2, F5, 1)
    # S_2 sits at the sink and is projective; the nonsplit extension is on
    # the other side
    assert ext_dim(s2, s1, cross_check=True) == 0
    assert ext_dim(s1, s2, cross_check=True) == 1
    p = build_projective(A3, 0, F5)
    x = random_representation(A3, (2, 1, 2), F5, seed=3)
    assert ext_dim(p, x, cross_check=True) == 0


def test_euler_identity_on_random_pairs():
    rng = random.Random(2)
    for q in (A2, A3, K3, d4_subspace()):
        n = q.vertex_count
        for field in (QQ, F5):
            for _ in range(10):
                dx = tuple(rng.randint(0, 3) for _ in range(n))
                dy = tuple(rng.randint(0, 3) for _ in range(n))
                x = random_representation(q, dx, field, seed=rng.randrange(10**6), box=5)
                y = random_representation(q, dy, field, seed=rng.randrange(10**6), box=5)
                assert hom_dim(x, y) - ext_dim(x, y, cross_check=True) == euler_form(q, dx, dy)


def test_ext_requires_acyclic():
    cyc = __import__("quiverrep.quiver", fromlist=["Quiver"]).Quiver(2, ((0, 1), (1, 0)))
    x = random_representation(cyc, (1, 1), F5, seed=0)
    with pytest.raises(ValueError):
        ext_dim(x, x)


def test_socle_examples():
    s1 = simple(A2, F5, 0)
    assert socle_at(s1, 0).ncols == 1
    u12 = interval(A2, 1, 2, F5)
    assert socle_at(u12, 0).ncols == 0
    assert socle_at(u12, 1).ncols == 1
    # P_i of K_3: the three arrow maps are jointly injective at the source
    p = build_projective(K3, 0, F5)
    assert socle_at(p, 0).ncols == 0
    assert socle_at(p, 1).ncols == 3


def test_socle_matches_hom_from_simple():
    rng = random.Random(3)
    for q in (A3, K3):
        for _ in range(10):
            dims = tuple(rng.randint(0, 3) for _ in range(q.vertex_count))
            x = random_representation(q, dims, F5, seed=rng.randrange(10**6))
            for i in range(q.vertex_count):
                assert socle_at(x, i).ncols == hom_dim(simple(q, F5, i), x)


def test_socle_additive_over_sums():
    rng = random.Random(4)
    for _ in range(5):
        dims = tuple(rng.randint(0, 3) for _ in range(3))
        x = random_representation(A3, dims, F5, seed=rng.randrange(10**6))
        y = random_representation(A3, dims, F5, seed=rng.randrange(10**6))
        s = direct_sum([x, y])
        for i in range(3):
            assert socle_at(s, i).ncols == socle_at(x, i).ncols + socle_at(y, i).ncols


def test_quotient_by_zero_is_isomorphic_copy():
    x = random_representation(A3, (2, 2, 1), F5, seed=7)
    zero_sub = [Matrix.zeros(F5, d, 0) for d in x.dims]
    q, proj = quotient(x, zero_sub)
    assert q.dims == x.dims
    assert is_injective_morphism(proj) and is_surjective_morphism(proj)


def test_quotient_by_socle_drops_dimension():
    x = random_representation(A3, (2, 2, 2), F5, seed=8)
    i = 2
    soc = socle_at(x, i)
    sub = [soc if v == i else Matrix.zeros(F5, x.dims[v], 0) for v in range(3)]
    q, proj = quotient(x, sub)
    assert q.dims[i] == x.dims[i] - soc.ncols
    assert is_surjective_morphism(proj)
    # kernel of the projection is exactly the subspace
    assert proj.vertex_mats[i].kernel_basis().ncols == soc.ncols
    assert (proj.vertex_mats[i] @ soc).is_zero()


def test_quotient_rejects_unstable_subspace():
    u12 = interval(A2, 1, 2, F5)
    sub = [Matrix.identity(F5, 1), Matrix.zeros(F5, 1, 0)]  # source line, not stable
    with pytest.raises(ValueError):
        quotient(u12, sub)


def test_quotient_left_exactness_inequality():
    rng = random.Random(5)
    from quiverrep.criteria import _random_stable_subspaces

    for _ in range(10):
        dims = tuple(rng.randint(1, 3) for _ in range(3))
        u = random_representation(A3, dims, F5, seed=rng.randrange(10**6))
        sub = _random_stable_subspaces(u, rng)
        v, _ = quotient(u, sub)
        dw = tuple(rng.randint(0, 2) for _ in range(3))
        w = random_representation(A3, dw, F5, seed=rng.randrange(10**6))
        assert hom_dim(v, w) <= hom_dim(u, w)


def test_direct_sum_and_power():
    p = build_projective(K3, 0, F5)
    assert power(p, 1) is p
    p2 = power(p, 2)
    assert p2.dims == (2, 6)
    assert power(p, 0).dims == (0, 0)
    x = random_representation(A2, (1, 2), F5, seed=11)
    y = random_representation(A2, (2, 1), F5, seed=12)
    assert hom_dim(power(x, 2), power(y, 2)) == 4 * hom_dim(x, y)


def test_morphism_validation_and_composition():
    u12 = interval(A2, 1, 2, F5)
    s2 = simple(A2, F5, 1)
    # inclusion of the sink simple
    inc = Morphism(s2, u12, [Matrix.zeros(F5, 1, 0), Matrix.identity(F5, 1)])
    assert is_injective_morphism(inc)
    assert not is_surjective_morphism(inc)
    ident = identity_morphism(u12)
    assert ident.compose(inc).vertex_mats == inc.vertex_mats
    with pytest.raises(ValueError):
        Morphism(simple(A2, F5, 0), u12, [Matrix.identity(F5, 1), Matrix.zeros(F5, 1, 0)])


def test_intertwining_rejects_bad_matrices():
    x = random_representation(A2, (2, 2), F5, seed=13)
    y = random_representation(A2, (2, 2), F5, seed=14)
    bad = [Matrix.identity(F5, 2), Matrix.identity(F5, 2)]
    if hom_dim(x, y) == 0:
        with pytest.raises(ValueError):
            Morphism(x, y, bad)


def test_random_representation_deterministic():
    a = random_representation(A3, (2, 2, 2), F5, seed=42)
    b = random_representation(A3, (2, 2, 2), F5, seed=42)
    assert a == b
    assert random_representation(A3, (0, 0, 0), F5, seed=0).total_dim == 0


def test_generic_a2_rep_is_indecomposable_mostly():
    hits = 0
    for seed in range(40):
        x = random_representation(A2, (1, 1), F5, seed=seed)
        if hom_dim(x, x) == 1:
            hits += 1
    assert hits > 20


def test_projective_dimensions():
    assert build_projective(K3, 0, F5).dims == (1, 3)
    assert build_projective(d4_subspace(), 0, F5).dims == (1, 1, 1, 1)
    assert build_projective(A3, 0, F5).dims == (1, 1, 1)
    with pytest.raises(ValueError):
        build_projective(__import__("quiverrep.quiver", fromlist=["Quiver"]).Quiver(1, ((0, 0),)), 0, F5)


def test_injective_dimensions():
    assert build_injective(K3, 1, F5).dims == (3, 1)
    assert build_injective(d4_subspace(), 1, F5).dims == (1, 1, 0, 0)


def test_dual_involution():
    x = random_representation(d4_subspace(), (2, 1, 2, 1), F5, seed=21)
    assert dual(dual(x)) == x
    assert dual(x).quiver == opposite(d4_subspace())


def test_dual_morphism_swaps_inj_surj():
    u12 = interval(A2, 1, 2, F5)
    s2 = simple(A2, F5, 1)
    inc = Morphism(s2, u12, [Matrix.zeros(F5, 1, 0), Matrix.identity(F5, 1)])
    d = dual_morphism(inc)
    assert is_surjective_morphism(d)
    assert not is_injective_morphism(d)


def test_composition_preserves_intertwining():
    rng = random.Random(6)
    for _ in range(5):
        x = random_representation(A3, (2, 2, 1), F5, seed=rng.randrange(10**6))
        y = random_representation(A3, (1, 2, 2), F5, seed=rng.randrange(10**6))
        z = random_representation(A3, (2, 1, 2), F5, seed=rng.randrange(10**6))
        bxy = hom_basis(x, y)
        byz = hom_basis(y, z)
        if bxy.dim and byz.dim:
            f = bxy.combination([F5.random(rng) for _ in range(bxy.dim)])
            g = byz.combination([F5.random(rng) for _ in range(byz.dim)])
            assert g.compose(f).intertwines()


def test_rep_json_roundtrip(tmp_path):
    for field in (QQ, F5, GF(4)):
        x = random_representation(K3, (2, 3), field, seed=33, box=7)
        data = json.loads(json.dumps(rep_to_json(x)))
        assert rep_from_json(data) == x
    x = random_representation(A3, (1, 0, 2), QQ, seed=34)
    path = tmp_path / "rep.json"
    save_rep(x, path)
    assert load_rep(path) == x


def test_morphism_json_roundtrip(tmp_path):
    u12 = interval(A2, 1, 2, F5)
    s2 = simple(A2, F5, 1)
    inc = Morphism(s2, u12, [Matrix.zeros(F5, 1, 0), Matrix.identity(F5, 1)])
    data = json.loads(json.dumps(morphism_to_json(inc)))
    assert morphism_from_json(data) == inc


def test_rep_json_rejects_bad_shapes():
    x = random_representation(A2, (1, 1), F5, seed=1)
    data = rep_to_json(x)
    data["dims"] = [1, 2]
    with pytest.raises(ValueError):
        rep_from_json(data)
