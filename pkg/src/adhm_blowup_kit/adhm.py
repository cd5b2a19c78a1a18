"""ADHM configurations for monads on the blown-up plane.

A configuration is the finite matrix data from which the two monad maps are
assembled.  With ``K_0 .. K_n`` and ``L_0 .. L_n`` the end-term summands
(dimensions from :func:`adhm_blowup_kit.lattice.monad_dims`), the data consists
of blocks

* ``a00 : K_0 -> L_0``, ``a0i : K_i -> L_0``, ``ai0 : K_0 -> L_i``,
  ``aii : K_i -> L_i`` (the arrowhead matrix ``a``),
* the pair ``aA00 : K_0 -> L_0`` (A = 0, 1),
* ``c : K_0 -> C^r`` and ``d : C^r -> L_0`` (the framing row and column),
* optionally, pre-gauge rows ``cAi : K_i -> C^r`` that a change of basis of
  the middle term eliminates.

The row ``b^A = (b^A_00, ..., b^A_0n)`` is never free data: it is derived from
the linear part of the monad condition, ``b^A a + a_{0.} p^A + d c^A = a^A``,
whenever ``a`` is invertible.  With ``b^A`` so derived the whole quadratic
condition collapses to a single block, equal to ``(q^A a^{-1} q_A)^{00} + dc``
(the compact constraint; the sign convention is calibrated against the
symbolic expansion of the monad in the test suite).

Gauge normalisation sets ``cAi = 0`` and ``ai0 = Id``; the residual symmetry
group and its action on normalised configurations, the tangent computation,
and deterministic samplers for valid configurations all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

from .errors import (
    DimensionMismatchError,
    FramingViolationError,
    InternalConsistencyError,
    NonGenericStratumError,
    SamplingFailureError,
)
from .lattice import MonadDims, monad_dims
from .linalg import Matrix, block_matrix
from .sections import BlowupPoints

#: Global sign of the compact constraint relative to the (z2)^2 coefficient of
#: the (L0, K0) block of beta compose alpha.  Build-time constant; the
#: calibration property in the test suite pins it.
COMPACT_SIGN = 1

MatrixPair = tuple[Matrix, Matrix]


def contract_pairs(x: MatrixPair, y: MatrixPair) -> Matrix:
    """Penrose contraction ``sum_A x^A y_A = x^1 y^0 - x^0 y^1`` of matrix pairs."""
    return x[1] * y[0] - x[0] * y[1]


@dataclass(frozen=True)
class AdhmConfig:
    """Matrix data of one monad, tied to a choice of blow-up points."""

    r: int
    a_vec: tuple[int, ...]
    k: int
    dims: MonadDims
    points: BlowupPoints
    a00: Matrix
    a0i: tuple[Matrix, ...]
    ai0: tuple[Matrix, ...]
    aii: tuple[Matrix, ...]
    aA00: MatrixPair
    c: Matrix
    d: Matrix
    cAi: tuple[MatrixPair, ...] | None = None

    def __init__(self, r, a_vec, k, points, a00, a0i, ai0, aii, aA00, c, d, cAi=None):
        dims = monad_dims(r, a_vec, k)
        n = dims.n
        if points.n != n:
            raise DimensionMismatchError(
                f"{points.n} blow-up points for {n} exceptional classes"
            )
        kd, ld = dims.dim_k, dims.dim_l
        shapes = [
            ("a00", a00, (ld[0], kd[0])),
            ("c", c, (r, kd[0])),
            ("d", d, (ld[0], r)),
            ("aA00[0]", aA00[0], (ld[0], kd[0])),
            ("aA00[1]", aA00[1], (ld[0], kd[0])),
        ]
        a0i = tuple(a0i)
        ai0 = tuple(ai0)
        aii = tuple(aii)
        if not len(a0i) == len(ai0) == len(aii) == n:
            raise DimensionMismatchError("off-arrow block lists must have length n")
        for i in range(n):
            shapes.append((f"a0i[{i}]", a0i[i], (ld[0], kd[i + 1])))
            shapes.append((f"ai0[{i}]", ai0[i], (ld[i + 1], kd[0])))
            shapes.append((f"aii[{i}]", aii[i], (ld[i + 1], kd[i + 1])))
        if cAi is not None:
            cAi = tuple((pair[0], pair[1]) for pair in cAi)
            if len(cAi) != n + 1:
                raise DimensionMismatchError("cAi must cover blocks 0..n")
            for j, pair in enumerate(cAi):
                shapes.append((f"cAi[{j}][0]", pair[0], (r, kd[j])))
                shapes.append((f"cAi[{j}][1]", pair[1], (r, kd[j])))
        for name, mat, want in shapes:
            if mat.shape != want:
                raise DimensionMismatchError(f"{name} is {mat.shape}, expected {want}")
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "a_vec", tuple(int(x) for x in a_vec))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "a00", a00)
        object.__setattr__(self, "a0i", a0i)
        object.__setattr__(self, "ai0", ai0)
        object.__setattr__(self, "aii", aii)
        object.__setattr__(self, "aA00", (aA00[0], aA00[1]))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "cAi", cAi)

    @property
    def n(self) -> int:
        return self.dims.n

    def replace(self, **changes) -> AdhmConfig:
        kwargs = {
            "r": self.r, "a_vec": self.a_vec, "k": self.k, "points": self.points,
            "a00": self.a00, "a0i": self.a0i, "ai0": self.ai0, "aii": self.aii,
            "aA00": self.aA00, "c": self.c, "d": self.d, "cAi": self.cAi,
        }
        kwargs.update(changes)
        return AdhmConfig(**kwargs)

    def point_coord(self, i: int, a: int) -> Fraction:
        return self.points.coordinate(i, a)

    def is_normalized(self) -> bool:
        if self.cAi is not None:
            return False
        return all(m == Matrix.identity(m.nrows) for m in self.ai0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdhmConfig):
            return NotImplemented
        return (
            (self.r, self.a_vec, self.k) == (other.r, other.a_vec, other.k)
            and self.points == other.points
            and self.a00 == other.a00
            and self.a0i == other.a0i
            and self.ai0 == other.ai0
            and self.aii == other.aii
            and self.aA00 == other.aA00
            and self.c == other.c
            and self.d == other.d
            and self.cAi == other.cAi
        )


def assemble_a(cfg: AdhmConfig) -> Matrix:
    """The arrowhead matrix ``a``: row 0 and column 0 full, diagonal, zeros elsewhere."""
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    blocks: list[list[Matrix]] = []
    row0 = [cfg.a00] + [cfg.a0i[j] for j in range(n)]
    blocks.append(row0)
    for i in range(n):
        row = [cfg.ai0[i]]
        for j in range(n):
            row.append(cfg.aii[i] if i == j else Matrix.zeros(ld[i + 1], kd[j + 1]))
        blocks.append(row)
    return block_matrix(blocks, list(ld), list(kd))


def assemble_qA(cfg: AdhmConfig) -> MatrixPair:
    """The pair ``q^A`` with corner ``-a^A_00`` and ``p_i^A``-scaled arrow blocks."""
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    out = []
    for a in (0, 1):
        blocks: list[list[Matrix]] = []
        row0 = [-cfg.aA00[a]] + [
            cfg.a0i[j].scale(cfg.point_coord(j + 1, a)) for j in range(n)
        ]
        blocks.append(row0)
        for i in range(n):
            p = cfg.point_coord(i + 1, a)
            row = [cfg.ai0[i].scale(p)]
            for j in range(n):
                row.append(
                    cfg.aii[i].scale(p) if i == j
                    else Matrix.zeros(ld[i + 1], kd[j + 1])
                )
            blocks.append(row)
        out.append(block_matrix(blocks, list(ld), list(kd)))
    return (out[0], out[1])


def _a_inverse(cfg: AdhmConfig) -> Matrix:
    a = assemble_a(cfg)
    try:
        return a.inverse()
    except ZeroDivisionError:
        raise FramingViolationError("assembled matrix a is singular") from None


def derive_bA(cfg: AdhmConfig) -> MatrixPair:
    """Solve ``b^A a + a_{0.} p^A + d c^A = a^A`` for the full rows ``b^A``.

    Returns two ``dim L_0 x sum(dim L)`` matrices; block ``j`` of ``b^A`` maps
    ``L_j`` to ``L_0``.  Raises if ``a`` is singular (no framing).
    """
    ainv = _a_inverse(cfg)
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    out = []
    for a in (0, 1):
        rhs_blocks = [cfg.aA00[a]]
        for j in range(n):
            rhs_blocks.append(-cfg.a0i[j].scale(cfg.point_coord(j + 1, a)))
        rhs = block_matrix([rhs_blocks], [ld[0]], list(kd))
        if cfg.cAi is not None:
            c_row = block_matrix([[pair[a] for pair in cfg.cAi]], [cfg.r], list(kd))
            rhs = rhs - cfg.d * c_row
        out.append(rhs * ainv)
    return (out[0], out[1])


def b_block(cfg: AdhmConfig, b: Matrix, j: int) -> Matrix:
    """Block ``b^A_0j`` of a derived row ``b^A``."""
    ld = cfg.dims.dim_l
    start = sum(ld[: j + 1]) - ld[j]
    return b.submatrix(0, b.nrows, start, start + ld[j])


@dataclass(frozen=True)
class ConstraintResidual:
    """Residuals of the monad condition: labelled blocks plus the compact form."""

    compact: Matrix
    raw: tuple[tuple[str, Matrix], ...]

    def raw_is_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.raw)

    def compact_is_zero(self) -> bool:
        return self.compact.is_zero()


def constraint_residual(cfg: AdhmConfig) -> ConstraintResidual:
    """All coefficient blocks of the monad condition, with ``b^A`` derived.

    The linear blocks vanish identically because ``b^A`` solves them; the
    single quadratic block (the (z2)^2 coefficient of the (L0, K0) entry of
    the composite) is also returned in its compact ``(q^A a^{-1} q_A)^{00} + dc``
    form, and the two must agree.
    """
    bA = derive_bA(cfg)
    n = cfg.n
    raw: list[tuple[str, Matrix]] = []
    b00 = (b_block(cfg, bA[0], 0), b_block(cfg, bA[1], 0))
    for a in (0, 1):
        r1 = -cfg.aA00[a] + b00[a] * cfg.a00
        for i in range(n):
            r1 = r1 + b_block(cfg, bA[a], i + 1) * cfg.ai0[i]
        if cfg.cAi is not None:
            r1 = r1 + cfg.d * cfg.cAi[0][a]
        raw.append((f"linear[{a}]", r1))
    r2 = contract_pairs(b00, cfg.aA00) + cfg.d * cfg.c
    for i in range(n):
        bi = (b_block(cfg, bA[0], i + 1), b_block(cfg, bA[1], i + 1))
        p0, p1 = cfg.point_coord(i + 1, 0), cfg.point_coord(i + 1, 1)
        r2 = r2 - (bi[1].scale(p0) - bi[0].scale(p1)) * cfg.ai0[i]
    raw.append(("quadratic", r2))
    for i in range(n):
        for a in (0, 1):
            p = cfg.point_coord(i + 1, a)
            r3 = (
                cfg.a0i[i].scale(p)
                + b00[a] * cfg.a0i[i]
                + b_block(cfg, bA[a], i + 1) * cfg.aii[i]
            )
            if cfg.cAi is not None:
                r3 = r3 + cfg.d * cfg.cAi[i + 1][a]
            raw.append((f"linear[{a}]@{i + 1}", r3))

    ainv = _a_inverse(cfg)
    q = assemble_qA(cfg)
    s = q[1] * ainv * q[0] - q[0] * ainv * q[1]
    l0 = cfg.dims.dim_l[0]
    k0 = cfg.dims.dim_k[0]
    compact = s.submatrix(0, l0, 0, k0).scale(COMPACT_SIGN) + cfg.d * cfg.c
    if compact != r2:
        raise InternalConsistencyError(
            "compact constraint disagrees with the expanded quadratic block"
        )
    return ConstraintResidual(compact=compact, raw=tuple(raw))


def gauge_fix(cfg: AdhmConfig) -> AdhmConfig:
    """Normalise: eliminate the ``cAi`` rows, then set every ``ai0`` to the identity.

    The first step is a change of basis of the middle term, the second an
    isomorphism of the end terms; neither changes the cohomology.  Fails with
    :class:`NonGenericStratumError` if some ``ai0`` is singular.
    """
    if cfg.cAi is not None:
        ainv = _a_inverse(cfg)
        n = cfg.n
        kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
        correction = Matrix.zeros(cfg.r, kd[0])
        for a in (0, 1):
            low0 = -cfg.aA00[1] if a == 0 else cfg.aA00[0]
            v_blocks = [low0]
            for i in range(n):
                p_low = -cfg.point_coord(i + 1, 1) if a == 0 else cfg.point_coord(i + 1, 0)
                v_blocks.append(cfg.ai0[i].scale(-p_low))
            v = block_matrix([[blk] for blk in v_blocks], list(ld), [kd[0]])
            c_row = block_matrix([[pair[a] for pair in cfg.cAi]], [cfg.r], list(kd))
            correction = correction + c_row * ainv * v
        cfg = cfg.replace(c=cfg.c - correction, cAi=None)
    new_ai0 = []
    new_aii = []
    for i in range(cfg.n):
        blk = cfg.ai0[i]
        if blk.nrows == 0:
            new_ai0.append(blk)
            new_aii.append(cfg.aii[i])
            continue
        try:
            inv = blk.inverse()
        except ZeroDivisionError:
            raise NonGenericStratumError(
                f"ai0[{i + 1}] is singular; configuration is not normalisable"
            ) from None
        new_ai0.append(Matrix.identity(blk.nrows))
        new_aii.append(inv * cfg.aii[i])
    return cfg.replace(ai0=tuple(new_ai0), aii=tuple(new_aii))


# -- residual symmetry group ----------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """Residual symmetry of a normalised configuration.

    Free blocks: ``g00`` on ``L_0``, ``g0i : L_i -> L_0``, ``h00`` on ``K_0``
    and ``hii`` on ``K_i``.  The diagonal blocks on ``L_i`` are slaved to
    ``h00^{-1}`` (this is what keeps ``ai0 = Id``), and the lower ``h`` blocks
    are fixed to zero, which is a cross-section of the transformations acting
    trivially on every configuration.
    """

    g00: Matrix
    g0i: tuple[Matrix, ...]
    h00: Matrix
    hii: tuple[Matrix, ...]

    def __post_init__(self):
        for name, m in (("g00", self.g00), ("h00", self.h00)):
            if m.nrows != m.ncols:
                raise DimensionMismatchError(f"{name} must be square")
        object.__setattr__(self, "g0i", tuple(self.g0i))
        object.__setattr__(self, "hii", tuple(self.hii))

    @classmethod
    def identity(cls, dims: MonadDims) -> GroupElement:
        kd, ld = dims.dim_k, dims.dim_l
        return cls(
            g00=Matrix.identity(ld[0]),
            g0i=tuple(Matrix.zeros(ld[0], ld[i + 1]) for i in range(dims.n)),
            h00=Matrix.identity(kd[0]),
            hii=tuple(Matrix.identity(kd[i + 1]) for i in range(dims.n)),
        )

    def compose(self, other: GroupElement) -> GroupElement:
        """Element acting as ``other`` first, then ``self``."""
        h00_other_inv = other.h00.inverse()
        return GroupElement(
            g00=self.g00 * other.g00,
            g0i=tuple(
                self.g00 * other.g0i[i] + self.g0i[i] * h00_other_inv
                for i in range(len(self.g0i))
            ),
            h00=other.h00 * self.h00,
            hii=tuple(other.hii[i] * self.hii[i] for i in range(len(self.hii))),
        )

    def inverse(self) -> GroupElement:
        g00_inv = self.g00.inverse()
        return GroupElement(
            g00=g00_inv,
            g0i=tuple(-(g00_inv * g) * self.h00 for g in self.g0i),
            h00=self.h00.inverse(),
            hii=tuple(h.inverse() for h in self.hii),
        )


def dim_group(dims: MonadDims) -> int:
    """Dimension of the residual symmetry group in this parametrisation."""
    kd, ld = dims.dim_k, dims.dim_l
    return (
        ld[0] ** 2
        + kd[0] ** 2
        + sum(ld[0] * ld[i + 1] for i in range(dims.n))
        + sum(kd[i + 1] ** 2 for i in range(dims.n))
    )


def act(el: GroupElement, cfg: AdhmConfig) -> AdhmConfig:
    """Transform a normalised configuration; preserves the constraint locus."""
    if not cfg.is_normalized():
        raise ValueError("group action is defined on gauge-normalised configurations")
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    if el.g00.shape != (ld[0], ld[0]) or el.h00.shape != (kd[0], kd[0]):
        raise DimensionMismatchError("group element does not match configuration dims")
    for i in range(n):
        if el.g0i[i].shape != (ld[0], ld[i + 1]):
            raise DimensionMismatchError(f"g0i[{i}] shape mismatch")
        if el.hii[i].shape != (kd[i + 1], kd[i + 1]):
            raise DimensionMismatchError(f"hii[{i}] shape mismatch")
    try:
        h00_inv = el.h00.inverse()
        for m in (el.g00, *el.hii):
            m.inverse()
    except ZeroDivisionError:
        raise ValueError("group element has a singular diagonal block") from None
    g_sum = Matrix.zeros(ld[0], kd[0])
    for g in el.g0i:
        g_sum = g_sum + g
    new_a00 = (el.g00 * cfg.a00 + g_sum) * el.h00
    new_aA = []
    for a in (0, 1):
        acc = el.g00 * cfg.aA00[a]
        for i in range(n):
            acc = acc - el.g0i[i].scale(cfg.point_coord(i + 1, a))
        new_aA.append(acc * el.h00)
    new_a0i = tuple(
        (el.g00 * cfg.a0i[i] + el.g0i[i] * cfg.aii[i]) * el.hii[i] for i in range(n)
    )
    new_aii = tuple(h00_inv * cfg.aii[i] * el.hii[i] for i in range(n))
    return cfg.replace(
        a00=new_a00,
        aA00=(new_aA[0], new_aA[1]),
        a0i=new_a0i,
        aii=new_aii,
        c=cfg.c * el.h00,
        d=el.g00 * cfg.d,
    )


def verify_equivalence(c1: AdhmConfig, c2: AdhmConfig, witness: GroupElement) -> bool:
    """True iff the witness maps ``c1`` to ``c2`` entrywise."""
    if not (c1.is_normalized() and c2.is_normalized()):
        raise ValueError("equivalence is checked on gauge-normalised configurations")
    return act(witness, c1) == c2


def action_derivative(cfg: AdhmConfig, g0: Matrix, gam: Sequence[Matrix],
                      h0: Matrix, hi: Sequence[Matrix]) -> list[Matrix]:
    """Derivative of the group action at the identity along a Lie direction.

    Returns the first-order changes of (a00, aA00[0], aA00[1], a0i..., aii...,
    c, d) under ``(g00, g0i, h00, hii) = (1 + t g0, t gam, 1 + t h0, 1 + t hi)``.
    """
    n = cfg.n
    out = []
    d_a00 = g0 * cfg.a00 + cfg.a00 * h0
    for i in range(n):
        d_a00 = d_a00 + gam[i]
    out.append(d_a00)
    for a in (0, 1):
        acc = g0 * cfg.aA00[a] + cfg.aA00[a] * h0
        for i in range(n):
            acc = acc - gam[i].scale(cfg.point_coord(i + 1, a))
        out.append(acc)
    for i in range(n):
        out.append(g0 * cfg.a0i[i] + gam[i] * cfg.aii[i] + cfg.a0i[i] * hi[i])
    for i in range(n):
        # g_ii = h00^{-1} is slaved, so delta(g_ii) = -h0
        out.append(-(h0 * cfg.aii[i]) + cfg.aii[i] * hi[i])
    out.append(cfg.c * h0)
    out.append(g0 * cfg.d)
    return out


def _stabilizer_system(cfg: AdhmConfig) -> Matrix:
    """Linearised fixed-point equations at the identity, as one big matrix."""
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    params: list[tuple[str, int, int, int]] = []
    params.append(("G0", -1, ld[0], ld[0]))
    for i in range(n):
        params.append(("Gam", i, ld[0], ld[i + 1]))
    params.append(("H0", -1, kd[0], kd[0]))
    for i in range(n):
        params.append(("Hi", i, kd[i + 1], kd[i + 1]))

    def deltas(kind, idx, unit):
        g0 = unit if kind == "G0" else Matrix.zeros(ld[0], ld[0])
        h0 = unit if kind == "H0" else Matrix.zeros(kd[0], kd[0])
        gam = [Matrix.zeros(ld[0], ld[i + 1]) for i in range(n)]
        hi = [Matrix.zeros(kd[i + 1], kd[i + 1]) for i in range(n)]
        if kind == "Gam":
            gam[idx] = unit
        if kind == "Hi":
            hi[idx] = unit
        return action_derivative(cfg, g0, gam, h0, hi)

    columns = []
    for kind, idx, m, w in params:
        for i in range(m):
            for j in range(w):
                unit = Matrix.from_function(
                    m, w, lambda r_, c_: 1 if (r_, c_) == (i, j) else 0
                )
                col = []
                for blk in deltas(kind, idx, unit):
                    col.extend(x for row in blk.rows for x in row)
                columns.append(col)
    if not columns:
        return Matrix([], ncols=0)
    nrows = len(columns[0])
    return Matrix(
        [[columns[j][i] for j in range(len(columns))] for i in range(nrows)],
        ncols=len(columns),
    )


def stabilizer_dim(cfg: AdhmConfig) -> int:
    """Dimension of the isotropy algebra at ``cfg``; expected 0 on valid data."""
    if not cfg.is_normalized():
        raise ValueError("stabilizer is computed on gauge-normalised configurations")
    system = _stabilizer_system(cfg)
    return system.nullity()


# -- tangent computation ----------------------------------------------------------


@dataclass(frozen=True)
class TangentReport:
    dim_ker_jacobian: int
    dim_group: int
    stabilizer_dim: int
    dim_orbit: int
    empirical_moduli_dim: int


def _free_directions(cfg: AdhmConfig):
    """Unit directions of the free entries of a normalised configuration."""
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    specs = [("a00", -1, ld[0], kd[0])]
    for i in range(n):
        specs.append(("a0i", i, ld[0], kd[i + 1]))
    for i in range(n):
        specs.append(("aii", i, ld[i + 1], kd[i + 1]))
    specs.append(("aA0", -1, ld[0], kd[0]))
    specs.append(("aA1", -1, ld[0], kd[0]))
    specs.append(("c", -1, cfg.r, kd[0]))
    specs.append(("d", -1, ld[0], cfg.r))
    for kind, idx, m, w in specs:
        for i in range(m):
            for j in range(w):
                unit = Matrix.from_function(
                    m, w, lambda r_, c_: 1 if (r_, c_) == (i, j) else 0
                )
                yield kind, idx, unit


def _delta_arrow(cfg: AdhmConfig, kind: str, idx: int, unit: Matrix) -> Matrix:
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    blocks = [[Matrix.zeros(ld[i], kd[j]) for j in range(n + 1)] for i in range(n + 1)]
    if kind == "a00":
        blocks[0][0] = unit
    elif kind == "a0i":
        blocks[0][idx + 1] = unit
    elif kind == "aii":
        blocks[idx + 1][idx + 1] = unit
    return block_matrix(blocks, list(ld), list(kd))


def _delta_q(cfg: AdhmConfig, kind: str, idx: int, unit: Matrix, a: int) -> Matrix:
    n = cfg.n
    kd, ld = cfg.dims.dim_k, cfg.dims.dim_l
    blocks = [[Matrix.zeros(ld[i], kd[j]) for j in range(n + 1)] for i in range(n + 1)]
    if kind == f"aA{a}":
        blocks[0][0] = -unit
    elif kind == "a0i":
        blocks[0][idx + 1] = unit.scale(cfg.point_coord(idx + 1, a))
    elif kind == "aii":
        blocks[idx + 1][idx + 1] = unit.scale(cfg.point_coord(idx + 1, a))
    return block_matrix(blocks, list(ld), list(kd))


def compact_derivative(cfg: AdhmConfig, kind: str, idx: int, unit: Matrix,
                       _cache=None) -> Matrix:
    """Directional derivative of the compact constraint along one free entry."""
    if _cache is None:
        ainv = _a_inverse(cfg)
        q = assemble_qA(cfg)
        _cache = ((ainv * q[0], ainv * q[1]), (q[0] * ainv, q[1] * ainv))
    aq, qa = _cache
    l0, k0 = cfg.dims.dim_l[0], cfg.dims.dim_k[0]
    da = _delta_arrow(cfg, kind, idx, unit)
    dq = (_delta_q(cfg, kind, idx, unit, 0), _delta_q(cfg, kind, idx, unit, 1))
    ds = (
        dq[1] * aq[0]
        - qa[1] * da * aq[0]
        + qa[1] * dq[0]
        - dq[0] * aq[1]
        + qa[0] * da * aq[1]
        - qa[0] * dq[1]
    )
    delta = ds.submatrix(0, l0, 0, k0).scale(COMPACT_SIGN)
    if kind == "c":
        delta = delta + cfg.d * unit
    elif kind == "d":
        delta = delta + unit * cfg.c
    return delta


def tangent_dims(cfg: AdhmConfig) -> TangentReport:
    """Exact tangent bookkeeping at a valid, normalised configuration.

    The Jacobian is that of the full residual system with respect to the free
    entries; with ``b^A`` derived, only the quadratic block contributes.  The
    orbit dimension is the group dimension minus the isotropy dimension, and
    the empirical moduli dimension is their difference.
    """
    if not cfg.is_normalized():
        raise ValueError("tangent data is computed on gauge-normalised configurations")
    ainv = _a_inverse(cfg)
    q = assemble_qA(cfg)
    l0, k0 = cfg.dims.dim_l[0], cfg.dims.dim_k[0]
    cache = ((ainv * q[0], ainv * q[1]), (q[0] * ainv, q[1] * ainv))

    columns = []
    for kind, idx, unit in _free_directions(cfg):
        delta = compact_derivative(cfg, kind, idx, unit, _cache=cache)
        columns.append([x for row in delta.rows for x in row])
    if columns:
        jac = Matrix(
            [[columns[j][i] for j in range(len(columns))] for i in range(l0 * k0)],
            ncols=len(columns),
        )
        dim_ker = jac.nullity()
    else:
        dim_ker = 0
    dg = dim_group(cfg.dims)
    stab = stabilizer_dim(cfg)
    orbit = dg - stab
    return TangentReport(
        dim_ker_jacobian=dim_ker,
        dim_group=dg,
        stabilizer_dim=stab,
        dim_orbit=orbit,
        empirical_moduli_dim=dim_ker - orbit,
    )


# -- deterministic samplers --------------------------------------------------------


def _rand_fraction(rng: Random, lo: int = -4, hi: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2)))


def _rand_matrix(rng: Random, m: int, n: int) -> Matrix:
    return Matrix.from_function(m, n, lambda i, j: _rand_fraction(rng))


def _rand_points(rng: Random, n: int) -> BlowupPoints:
    pts: list[tuple[Fraction, Fraction]] = []
    while len(pts) < n:
        cand = (_rand_fraction(rng, -3, 3), _rand_fraction(rng, -3, 3))
        if cand not in pts:
            pts.append(cand)
    return BlowupPoints(pts)


def _sample_commuting(r, a_vec, k, rng: Random) -> AdhmConfig:
    """n = 0: identity corner, commuting diagonal pair, d = 0, generic c."""
    if len(a_vec) != 0:
        raise SamplingFailureError("commuting strategy requires n = 0")
    while True:
        diag0 = [_rand_fraction(rng) for _ in range(k)]
        diag1 = [_rand_fraction(rng) for _ in range(k)]
        pairs = list(zip(diag0, diag1))
        if len(set(pairs)) == k:
            break
    aA = tuple(
        Matrix.from_function(k, k, lambda i, j, dd=dd: dd[i] if i == j else 0)
        for dd in (diag0, diag1)
    )
    # first row of c strictly nonzero, so no joint eigenvector dies on c
    rows = []
    for i in range(r):
        if i == 0:
            rows.append([Fraction(rng.choice((1, 2, 3))) for _ in range(k)])
        else:
            rows.append([_rand_fraction(rng) for _ in range(k)])
    c = Matrix(rows, ncols=k)
    return AdhmConfig(
        r, (), k, BlowupPoints(()),
        a00=Matrix.identity(k),
        a0i=(), ai0=(), aii=(),
        aA00=(aA[0], aA[1]),
        c=c,
        d=Matrix.zeros(k, r),
    )


def _sample_line_bundle(r, a_vec, k, rng: Random) -> AdhmConfig:
    """The twist-by-one-exceptional-class shape: k = 0, r = 1, a = -e_i."""
    a_vec = tuple(a_vec)
    if r != 1 or k != 0 or sorted(a_vec) != [-1] + [0] * (len(a_vec) - 1):
        raise SamplingFailureError(
            "line-bundle strategy needs r=1, k=0 and a single a_i = -1"
        )
    dims = monad_dims(r, a_vec, k)
    n = dims.n
    points = _rand_points(rng, n)
    kd, ld = dims.dim_k, dims.dim_l
    i0 = a_vec.index(-1)
    a0i = []
    for i in range(n):
        if i == i0:
            val = Fraction(0)
            while val == 0:
                val = _rand_fraction(rng)
            a0i.append(Matrix([[val]]))
        else:
            a0i.append(Matrix.zeros(ld[0], kd[i + 1]))
    dval = Fraction(0)
    while dval == 0:
        dval = _rand_fraction(rng)
    return AdhmConfig(
        r, a_vec, k, points,
        a00=Matrix.zeros(ld[0], kd[0]),
        a0i=tuple(a0i),
        ai0=tuple(Matrix.zeros(ld[i + 1], kd[0]) for i in range(n)),
        aii=tuple(Matrix.zeros(ld[i + 1], kd[i + 1]) for i in range(n)),
        aA00=(Matrix.zeros(ld[0], kd[0]), Matrix.zeros(ld[0], kd[0])),
        c=Matrix.zeros(r, kd[0]),
        d=Matrix([[dval]]),
    )


def _sample_solve_d(r, a_vec, k, rng: Random, tries: int) -> AdhmConfig:
    """Random blocks; solve ``d c = -(q^A a^{-1} q_A)^{00}`` for ``d`` exactly."""
    dims = monad_dims(r, a_vec, k)
    n = dims.n
    kd, ld = dims.dim_k, dims.dim_l
    log: list[str] = []
    for attempt in range(tries):
        points = _rand_points(rng, n)
        cfg = AdhmConfig(
            r, a_vec, k, points,
            a00=_rand_matrix(rng, ld[0], kd[0]),
            a0i=tuple(_rand_matrix(rng, ld[0], kd[i + 1]) for i in range(n)),
            ai0=tuple(Matrix.identity(kd[0]) for _ in range(n)),
            aii=tuple(_rand_matrix(rng, ld[i + 1], kd[i + 1]) for i in range(n)),
            aA00=(_rand_matrix(rng, ld[0], kd[0]), _rand_matrix(rng, ld[0], kd[0])),
            c=_rand_matrix(rng, r, kd[0]),
            d=Matrix.zeros(ld[0], r),
        )
        a = assemble_a(cfg)
        if a.det() == 0:
            log.append(f"attempt {attempt}: singular a")
            continue
        ainv = a.inverse()
        q = assemble_qA(cfg)
        s = q[1] * ainv * q[0] - q[0] * ainv * q[1]
        target = -s.submatrix(0, ld[0], 0, kd[0]).scale(COMPACT_SIGN)
        # d c = target  <=>  c^T d^T = target^T
        sol = cfg.c.transpose().solve(target.transpose())
        if sol is None:
            log.append(f"attempt {attempt}: target row space not spanned by c")
            continue
        cfg = cfg.replace(d=sol.transpose())
        residual = constraint_residual(cfg)
        if not residual.raw_is_zero():
            raise InternalConsistencyError("solved d does not kill the residual")
        if stabilizer_dim(cfg) != 0:
            log.append(f"attempt {attempt}: positive-dimensional stabilizer")
            continue
        return cfg
    raise SamplingFailureError(
        f"solve-d exhausted {tries} attempts for (r={r}, a={tuple(a_vec)}, k={k}): "
        + "; ".join(log[-5:])
    )


def sample_config(r: int, a_vec: Sequence[int], k: int, seed: int,
                  strategy: str = "auto", tries: int = 60) -> AdhmConfig:
    """Deterministically sample a gauge-normalised, constraint-valid configuration.

    Strategies: ``commuting`` (n = 0), ``line-bundle`` (r = 1, k = 0, one
    ``a_i = -1``), ``solve-d`` (general), or ``auto`` to pick by shape.
    Raises :class:`SamplingFailureError` when the retry budget runs out;
    raising is a reported outcome, not a bug, since solvability of the
    quadratic constraint is not guaranteed for every parameter set.
    """
    a_vec = tuple(int(x) for x in a_vec)
    dims = monad_dims(r, a_vec, k)  # validates feasibility
    rng = Random(seed)
    if strategy == "auto":
        if dims.n == 0:
            strategy = "commuting"
        elif r == 1 and k == 0 and sorted(a_vec) == [-1] + [0] * (dims.n - 1):
            strategy = "line-bundle"
        else:
            strategy = "solve-d"
    if strategy == "commuting":
        cfg = _sample_commuting(r, a_vec, k, rng)
    elif strategy == "line-bundle":
        cfg = _sample_line_bundle(r, a_vec, k, rng)
    elif strategy == "solve-d":
        cfg = _sample_solve_d(r, a_vec, k, rng, tries)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    residual = constraint_residual(cfg)
    if not residual.raw_is_zero():
        raise InternalConsistencyError("sampler produced an invalid configuration")
    return cfg
