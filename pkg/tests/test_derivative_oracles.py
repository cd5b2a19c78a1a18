"""Independent oracles for the two hand-derived linearisations.

Both the constraint Jacobian and the stabilizer system are differentiated by
hand inside ``adhm``.  Here the same derivatives are recomputed by symbolic
differentiation with sympy (building the perturbed data in Q[t], inverting,
and taking d/dt at t = 0) and compared entry by entry.
"""

from fractions import Fraction
from random import Random

import sympy as sp

from adhm_blowup_kit.adhm import (
    action_derivative,
    compact_derivative,
    sample_config,
)
from adhm_blowup_kit.linalg import Matrix
from util import rand_matrix

T = sp.Symbol("t")


def _sym(mat: Matrix) -> sp.Matrix:
    return sp.Matrix(mat.nrows, mat.ncols,
                     lambda i, j: sp.Rational(mat[i, j].numerator,
                                              mat[i, j].denominator))


def _deriv_at_zero(expr_mat: sp.Matrix) -> Matrix:
    d = sp.diff(expr_mat, T).subs(T, 0)
    rows = [[Fraction(sp.nsimplify(d[i, j]).p, sp.nsimplify(d[i, j]).q)
             for j in range(d.cols)] for i in range(d.rows)]
    return Matrix(rows, ncols=d.cols)


def _sym_compact(cfg, blocks):
    """Compact constraint of an n=1 configuration from perturbed sympy blocks."""
    a00, a01, a11, aA0, aA1, c, d = blocks
    k0 = a00.cols
    p0 = sp.Rational(cfg.point_coord(1, 0).numerator,
                     cfg.point_coord(1, 0).denominator)
    p1 = sp.Rational(cfg.point_coord(1, 1).numerator,
                     cfg.point_coord(1, 1).denominator)
    ident = sp.eye(k0)
    a = sp.Matrix.vstack(sp.Matrix.hstack(a00, a01),
                         sp.Matrix.hstack(ident, a11))
    def q(aA, p):
        return sp.Matrix.vstack(
            sp.Matrix.hstack(-aA, p * a01),
            sp.Matrix.hstack(p * ident, p * a11))
    q0, q1 = q(aA0, p0), q(aA1, p1)
    ainv = a.inv()
    s = q1 * ainv * q0 - q0 * ainv * q1
    l0 = a00.rows
    return sp.simplify(s[:l0, :k0] + d * c)


def test_compact_derivative_matches_symbolic():
    cfg = sample_config(2, [1], 1, seed=5)
    base = {
        "a00": _sym(cfg.a00), "a0i": _sym(cfg.a0i[0]), "aii": _sym(cfg.aii[0]),
        "aA0": _sym(cfg.aA00[0]), "aA1": _sym(cfg.aA00[1]),
        "c": _sym(cfg.c), "d": _sym(cfg.d),
    }
    rng = Random(31)
    kinds = [("a00", -1, cfg.a00.shape), ("a0i", 0, cfg.a0i[0].shape),
             ("aii", 0, cfg.aii[0].shape), ("aA0", -1, cfg.aA00[0].shape),
             ("aA1", -1, cfg.aA00[1].shape), ("c", -1, cfg.c.shape),
             ("d", -1, cfg.d.shape)]
    for kind, idx, shape in kinds:
        unit = rand_matrix(rng, *shape)  # general direction, not just a unit
        perturbed = dict(base)
        key = {"a0i": "a0i", "aii": "aii"}.get(kind, kind)
        perturbed[key] = base[key] + T * _sym(unit)
        sym_val = _sym_compact(cfg, (perturbed["a00"], perturbed["a0i"],
                                     perturbed["aii"], perturbed["aA0"],
                                     perturbed["aA1"], perturbed["c"],
                                     perturbed["d"]))
        expected = _deriv_at_zero(sym_val)
        got = compact_derivative(cfg, kind, idx, unit)
        assert got == expected, kind


def test_action_derivative_matches_symbolic():
    # the fully symbolic route: act over Q(t) via sympy, then d/dt at 0
    cfg = sample_config(2, [1], 1, seed=5)
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    rng = Random(41)
    g0 = rand_matrix(rng, ld[0], ld[0])
    gam = [rand_matrix(rng, ld[0], ld[1])]
    h0 = rand_matrix(rng, kd[0], kd[0])
    hi = [rand_matrix(rng, kd[1], kd[1])]
    got = action_derivative(cfg, g0, gam, h0, hi)

    g00_t = sp.eye(ld[0]) + T * _sym(g0)
    g0i_t = T * _sym(gam[0])
    h00_t = sp.eye(kd[0]) + T * _sym(h0)
    hii_t = sp.eye(kd[1]) + T * _sym(hi[0])
    h00_inv = h00_t.inv()
    p = [sp.Rational(cfg.point_coord(1, a).numerator,
                     cfg.point_coord(1, a).denominator) for a in (0, 1)]
    a00, a01, a11 = _sym(cfg.a00), _sym(cfg.a0i[0]), _sym(cfg.aii[0])
    aA = [_sym(cfg.aA00[0]), _sym(cfg.aA00[1])]
    c, d = _sym(cfg.c), _sym(cfg.d)
    sym_blocks = [
        (g00_t * a00 + g0i_t) * h00_t,
        (g00_t * aA[0] - p[0] * g0i_t) * h00_t,
        (g00_t * aA[1] - p[1] * g0i_t) * h00_t,
        (g00_t * a01 + g0i_t * a11) * hii_t,
        h00_inv * a11 * hii_t,
        c * h00_t,
        g00_t * d,
    ]
    for sym_blk, exact in zip(sym_blocks, got):
        assert _deriv_at_zero(sym_blk) == exact
