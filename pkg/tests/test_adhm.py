from fractions import Fraction
from random import Random

import pytest

from adhm_blowup_kit.adhm import (
    AdhmConfig,
    GroupElement,
    act,
    assemble_a,
    assemble_qA,
    constraint_residual,
    derive_bA,
    dim_group,
    gauge_fix,
    sample_config,
    stabilizer_dim,
    tangent_dims,
    verify_equivalence,
)
from adhm_blowup_kit.errors import (
    FramingViolationError,
    InfeasibleParametersError,
    NonGenericStratumError,
    SamplingFailureError,
)
from adhm_blowup_kit.lattice import monad_dims
from adhm_blowup_kit.linalg import Matrix
from adhm_blowup_kit.sections import BlowupPoints
from util import rand_config, rand_group_element, rand_invertible, rand_matrix


def _commutator(x, y):
    return x * y - y * x


def test_assemble_a_n0_is_corner():
    rng = Random(0)
    cfg = rand_config(rng, 1, [], 2)
    assert assemble_a(cfg) == cfg.a00


def test_assemble_a_arrowhead_zeros():
    rng = Random(1)
    cfg = rand_config(rng, 1, [0, 0], 1)
    a = assemble_a(cfg)
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    assert a.shape == (sum(ld), sum(kd))
    # blocks (1,2) and (2,1) vanish
    r1, c1 = ld[0], kd[0]
    assert a.submatrix(r1, r1 + ld[1], c1 + kd[1], c1 + kd[1] + kd[2]).is_zero()
    assert a.submatrix(r1 + ld[1], r1 + ld[1] + ld[2], c1, c1 + kd[1]).is_zero()


def test_derive_bA_n0_formula():
    rng = Random(2)
    cfg = rand_config(rng, 2, [], 2)
    b = derive_bA(cfg)
    inv = cfg.a00.inverse()
    assert b[0] == cfg.aA00[0] * inv
    assert b[1] == cfg.aA00[1] * inv


def test_derive_bA_solves_linear_system():
    rng = Random(3)
    for trial in range(20):
        r = rng.choice((1, 2))
        shape = rng.choice(([1], [0], [1, 0], []))
        k = rng.randint(0 if shape else 1, 2)
        try:
            monad_dims(r, shape, k)
        except InfeasibleParametersError:
            continue
        cfg = rand_config(rng, r, shape, k, with_cai=bool(trial % 2),
                          normalized=False)
        b = derive_bA(cfg)
        a = assemble_a(cfg)
        kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
        n = cfg.n
        for a_idx in (0, 1):
            lhs = b[a_idx] * a
            from adhm_blowup_kit.linalg import block_matrix
            p_blocks = [Matrix.zeros(kd[0], kd[0])] + [
                Matrix.identity(kd[i + 1]).scale(cfg.point_coord(i + 1, a_idx))
                for i in range(n)
            ]
            a0dot = block_matrix([[cfg.a00] + list(cfg.a0i)], [ld[0]], list(kd))
            pmat = block_matrix(
                [[p_blocks[i] if i == j else Matrix.zeros(kd[i], kd[j])
                  for j in range(n + 1)] for i in range(n + 1)],
                list(kd), list(kd))
            rhs = block_matrix(
                [[cfg.aA00[a_idx]] + [Matrix.zeros(ld[0], kd[i + 1])
                                      for i in range(n)]], [ld[0]], list(kd))
            resid = lhs + a0dot * pmat - rhs
            if cfg.cAi is not None:
                c_row = block_matrix([[pair[a_idx] for pair in cfg.cAi]],
                                     [cfg.r], list(kd))
                resid = resid + cfg.d * c_row
            assert resid.is_zero(), trial


def test_derive_bA_singular_raises():
    cfg = AdhmConfig(1, [], 1, BlowupPoints(()),
                     a00=Matrix.zeros(1, 1), a0i=(), ai0=(), aii=(),
                     aA00=(Matrix([[1]]), Matrix([[2]])),
                     c=Matrix([[1]]), d=Matrix([[0]]))
    with pytest.raises(FramingViolationError):
        derive_bA(cfg)


def test_assemble_qA_corner_n0():
    rng = Random(4)
    cfg = rand_config(rng, 1, [], 2)
    q = assemble_qA(cfg)
    assert q[0] == -cfg.aA00[0]
    assert q[1] == -cfg.aA00[1]


def test_assemble_qA_zero_point_shape():
    # with the single centre at the origin every p-scaled block dies
    rng = Random(5)
    while True:
        cfg = rand_config(rng, 1, [0], 1)
        break
    cfg = cfg.replace(points=BlowupPoints([(0, 0)]))
    q = assemble_qA(cfg)
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    for a_idx in (0, 1):
        assert q[a_idx].submatrix(0, ld[0], 0, kd[0]) == -cfg.aA00[a_idx]
        rest = q[a_idx].submatrix(ld[0], sum(ld), 0, sum(kd))
        assert rest.is_zero()
        assert q[a_idx].submatrix(0, ld[0], kd[0], sum(kd)).is_zero()


def test_constraint_residual_commuting_and_perturbed():
    rng = Random(6)
    k = 3
    a0 = Matrix.from_function(k, k, lambda i, j: (i + 1) if i == j else 0)
    a1 = Matrix.from_function(k, k, lambda i, j: (i - 5) if i == j else 0)
    cfg = AdhmConfig(2, [], k, BlowupPoints(()),
                     a00=Matrix.identity(k), a0i=(), ai0=(), aii=(),
                     aA00=(a0, a1), c=rand_matrix(rng, 2, k),
                     d=Matrix.zeros(k, 2))
    res = constraint_residual(cfg)
    assert res.raw_is_zero() and res.compact_is_zero()
    # classical commutator form at a00 = Id
    assert res.compact == _commutator(a1, a0) + cfg.d * cfg.c
    perturbed = cfg.replace(d=rand_matrix(rng, k, 2))
    res2 = constraint_residual(perturbed)
    assert not res2.compact_is_zero()
    assert not res2.raw_is_zero()


def test_constraint_residual_empty_spaces():
    cfg = AdhmConfig(2, [], 0, BlowupPoints(()),
                     a00=Matrix([], ncols=0), a0i=(), ai0=(), aii=(),
                     aA00=(Matrix([], ncols=0), Matrix([], ncols=0)),
                     c=Matrix([[], []], ncols=0), d=Matrix([], ncols=2))
    res = constraint_residual(cfg)
    assert res.raw_is_zero() and res.compact_is_zero()


def test_gauge_fix_idempotent_and_roundtrip():
    base = sample_config(2, [1], 1, seed=21)
    assert gauge_fix(base) == base
    rng = Random(7)
    m = rand_invertible(rng, base.dims.dim_l[1])
    pre = base.replace(ai0=(m,), aii=(m * base.aii[0],))
    assert gauge_fix(pre) == base


def test_gauge_fix_preserves_fiber_data():
    from adhm_blowup_kit.monad import SurfacePoint, build_monad, fiber_data
    base = sample_config(2, [1], 1, seed=21)
    rng = Random(77)
    kd = base.dims.dim_k
    m_blk = rand_invertible(rng, base.dims.dim_l[1])
    cai = tuple((rand_matrix(rng, 2, kd[j]), rand_matrix(rng, 2, kd[j]))
                for j in range(2))
    pre = base.replace(ai0=(m_blk,), aii=(m_blk * base.aii[0],), cAi=cai)
    fixed = gauge_fix(pre)
    assert fixed.is_normalized()
    m_pre, m_fix = build_monad(pre), build_monad(fixed)
    pts = [SurfacePoint.generic(1, 5, 0), SurfacePoint.exceptional(1, 1, 3),
           SurfacePoint.exceptional(1, 0, 1)]
    while len(pts) < 10:
        x0 = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
        x1 = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
        if (x0, x1) not in base.points.points:
            pts.append(SurfacePoint.generic(x0, x1, 1))
    for pt in pts:
        f1, f2 = fiber_data(m_pre, pt), fiber_data(m_fix, pt)
        assert (f1.rank_alpha, f1.fiber_dim) == (f2.rank_alpha, f2.fiber_dim)


def test_gauge_fix_singular_block_raises():
    base = sample_config(2, [1], 1, seed=21)
    pre = base.replace(ai0=(Matrix.zeros(*base.ai0[0].shape),))
    with pytest.raises(NonGenericStratumError):
        gauge_fix(pre)


def test_act_identity_and_scaling():
    cfg = sample_config(2, [], 2, seed=1)
    ident = GroupElement.identity(cfg.dims)
    assert act(ident, cfg) == cfg
    mu = Fraction(3, 2)
    scale = GroupElement(
        g00=Matrix.identity(cfg.dims.dim_l[0]).scale(mu),
        g0i=(), h00=Matrix.identity(cfg.dims.dim_k[0]), hii=())
    moved = act(scale, cfg)
    assert moved.d == cfg.d.scale(mu)
    assert moved.c == cfg.c * scale.h00


def test_act_group_law():
    cfg = sample_config(2, [1], 1, seed=5)
    rng = Random(8)
    for trial in range(20):
        e1 = rand_group_element(rng, cfg.dims)
        e2 = rand_group_element(rng, cfg.dims)
        assert act(e2, act(e1, cfg)) == act(e2.compose(e1), cfg), trial


def test_act_preserves_validity_and_det():
    rng = Random(9)
    cfgs = [sample_config(2, [1], 1, seed=5),
            sample_config(1, [], 2, seed=3),
            sample_config(1, [-1], 0, seed=3)]
    for trial in range(50):
        cfg = cfgs[trial % len(cfgs)]
        el = rand_group_element(rng, cfg.dims)
        moved = act(el, cfg)
        assert assemble_a(moved).det() != 0
        assert constraint_residual(moved).raw_is_zero()
    # and a group move on an invalid configuration keeps it invalid
    bad = cfgs[1].replace(d=rand_matrix(rng, cfgs[1].dims.dim_l[0], cfgs[1].r))
    if not constraint_residual(bad).raw_is_zero():
        el = rand_group_element(rng, bad.dims)
        assert not constraint_residual(act(el, bad)).raw_is_zero()


def test_act_inverse_and_verify_equivalence():
    cfg = sample_config(2, [1], 1, seed=5)
    rng = Random(10)
    el = rand_group_element(rng, cfg.dims)
    moved = act(el, cfg)
    assert verify_equivalence(cfg, moved, el)
    assert act(el.inverse(), moved) == cfg
    other = rand_group_element(rng, cfg.dims)
    assert not verify_equivalence(cfg, moved, other)
    assert verify_equivalence(cfg, cfg, GroupElement.identity(cfg.dims))


def test_stabilizer_trivial_on_samples():
    for cfg in (sample_config(1, [], 1, seed=2),
                sample_config(2, [], 2, seed=2),
                sample_config(1, [-1], 0, seed=2),
                sample_config(2, [1], 1, seed=2)):
        assert stabilizer_dim(cfg) == 0


def test_stabilizer_empty_spaces():
    for r in (1, 2, 3):
        cfg = sample_config(r, [], 0, seed=0)
        assert stabilizer_dim(cfg) == 0
        assert dim_group(cfg.dims) == 0


def test_stabilizer_positive_on_degenerate():
    nilpotent = Matrix([[0, 1], [0, 0]])
    cfg = AdhmConfig(1, [], 2, BlowupPoints(()),
                     a00=Matrix.identity(2), a0i=(), ai0=(), aii=(),
                     aA00=(nilpotent, nilpotent),
                     c=Matrix.zeros(1, 2), d=Matrix.zeros(2, 1))
    assert constraint_residual(cfg).raw_is_zero()
    assert stabilizer_dim(cfg) > 0


def test_sample_deterministic():
    a = sample_config(2, [1], 1, seed=42)
    b = sample_config(2, [1], 1, seed=42)
    assert a == b
    c = sample_config(2, [1], 1, seed=43)
    assert a != c


def test_sample_line_bundle_dims():
    cfg = sample_config(1, [-1], 0, seed=7, strategy="line-bundle")
    assert cfg.dims.dim_k == (0, 1)
    assert cfg.dims.dim_l == (1, 0)
    assert cfg.dims.rank_w == 3
    assert constraint_residual(cfg).raw_is_zero()


def test_sample_commuting_r_equals_k():
    cfg = sample_config(3, [], 3, seed=11, strategy="commuting")
    assert constraint_residual(cfg).raw_is_zero()
    assert assemble_a(cfg).det() != 0


def test_sample_infeasible_raises():
    with pytest.raises(InfeasibleParametersError):
        sample_config(1, [], -1, seed=0)


def test_sample_failure_is_reported():
    # dim K_0 = 2 > r = 1 with dim L_0 = 3 > 0: the row space of c cannot
    # contain the target, so the solver must give up and say so
    with pytest.raises(SamplingFailureError):
        sample_config(1, [-1], 2, seed=0, tries=8)


def test_tangent_examples():
    assert tangent_dims(sample_config(1, [], 1, seed=2)).empirical_moduli_dim == 2
    rep = tangent_dims(sample_config(2, [], 1, seed=2))
    assert rep.empirical_moduli_dim == 4
    assert rep.stabilizer_dim == 0
    assert tangent_dims(sample_config(1, [1], 0, seed=2)).empirical_moduli_dim == 0


def test_tangent_constant_across_samples():
    values = {
        tangent_dims(sample_config(1, [], 2, seed=s)).empirical_moduli_dim
        for s in range(5)
    }
    assert values == {4}
