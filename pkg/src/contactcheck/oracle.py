"""Independent floating-point validation of the symbolic tables.

The coordinate-basis metric is rebuilt numerically from the frame data,
Christoffel symbols come from central differences, and curvature from
nested differencing, so the comparison never reuses the symbolic
connection path it is checking.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .manifold import to_frame_components
from .scalars import DomainPole


class SamplingExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplePoint:
    values: dict  # coord name -> Fraction
    float_values: dict  # coord name -> float

    def as_floats(self):
        return dict(self.float_values)


@dataclass(frozen=True)
class NumericReport:
    tensor: str
    max_abs_deviation: float
    max_rel_deviation: float
    points_tested: int
    step: float
    tolerance: float
    passed: bool
    worst_component: tuple | None = None


def _input_scalars(spec):
    out = [s for f in spec.frame for s in f.components]
    out += [s for row in spec.metric for s in row]
    out += [s for row in spec.phi for s in row]
    out += list(spec.xi)
    return out


def sample_points(spec, n, seed, max_rejections=1000):
    """Deterministic rejection sampling of half-integer-offset lattice
    points in [-5, 5]^dim, avoiding denominator zeros and points where
    the metric is not positive definite."""
    if n < 1:
        raise ValueError("need at least one sample point")
    rng = random.Random(seed)
    scalars = _input_scalars(spec)
    points = []
    rejections = 0
    while len(points) < n:
        if rejections > max_rejections:
            raise SamplingExhausted(
                f"gave up after {rejections} rejected candidate points"
            )
        values = {
            name: Fraction(rng.randint(-5, 4)) + Fraction(1, 2)
            for name in spec.coords
        }
        ok = True
        for s in scalars:
            try:
                s.float_eval({k: float(v) for k, v in values.items()})
            except DomainPole:
                ok = False
                break
        if ok:
            try:
                g = coordinate_metric(spec, {k: float(v) for k, v in values.items()})
                np.linalg.cholesky(g)
            except (DomainPole, np.linalg.LinAlgError):
                ok = False
        if not ok:
            rejections += 1
            continue
        points.append(
            SamplePoint(values=values, float_values={k: float(v) for k, v in values.items()})
        )
    return points


def frame_matrix_at(spec, fpoint):
    n = spec.dim
    return np.array(
        [[spec.frame[i].components[a].float_eval(fpoint) for a in range(n)] for i in range(n)]
    )


def coordinate_metric(spec, fpoint):
    """g in the coordinate basis: solve the frame expansion numerically."""
    n = spec.dim
    A = frame_matrix_at(spec, fpoint)
    gf = np.array(
        [[spec.metric[i][j].float_eval(fpoint) for j in range(n)] for i in range(n)]
    )
    Ainv = np.linalg.inv(A)
    # rows of A hold frame components: g_frame = A g_coord A^T
    return Ainv @ gf @ Ainv.T


def fd_connection(spec, point, step):
    """Coordinate-basis Christoffels from central differences of the
    coordinate metric."""
    n = spec.dim
    fpoint = point.as_floats() if isinstance(point, SamplePoint) else dict(point)
    g0 = coordinate_metric(spec, fpoint)
    ginv = np.linalg.inv(g0)
    dg = np.zeros((n, n, n))  # dg[k][i][j] = d_k g_ij
    for k, name in enumerate(spec.coords):
        plus = dict(fpoint)
        minus = dict(fpoint)
        plus[name] += step
        minus[name] -= step
        dg[k] = (coordinate_metric(spec, plus) - coordinate_metric(spec, minus)) / (
            2.0 * step
        )
    gamma = np.zeros((n, n, n))  # gamma[k][i][j] = Gamma^k_ij
    for k in range(n):
        for i in range(n):
            for j in range(n):
                total = 0.0
                for l in range(n):
                    total += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])
                gamma[k][i][j] = 0.5 * total
    return gamma


def fd_curvature(spec, point, step, outer_step=None):
    """R^l_ijk in the coordinate basis by nested differencing of the
    finite-difference Christoffels."""
    n = spec.dim
    fpoint = point.as_floats() if isinstance(point, SamplePoint) else dict(point)
    h = outer_step if outer_step is not None else 100.0 * step
    gamma0 = fd_connection(spec, fpoint, step)
    dgamma = np.zeros((n, n, n, n))  # dgamma[a][k][i][j] = d_a Gamma^k_ij
    for a, name in enumerate(spec.coords):
        plus = dict(fpoint)
        minus = dict(fpoint)
        plus[name] += h
        minus[name] -= h
        dgamma[a] = (fd_connection(spec, plus, step) - fd_connection(spec, minus, step)) / (
            2.0 * h
        )
    R = np.zeros((n, n, n, n))  # R[l][i][j][k]: R(d_i, d_j) d_k on d_l
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    val = dgamma[i][l][j][k] - dgamma[j][l][i][k]
                    for m in range(n):
                        val += gamma0[l][i][m] * gamma0[m][j][k]
                        val -= gamma0[l][j][m] * gamma0[m][i][k]
                    R[l][i][j][k] = val
    return R


def symbolic_coordinate_connection(spec, conn):
    """Symbolic coordinate-basis Christoffels, exact.

    nabla_{d_a} d_b expanded through the frame and converted back to the
    coordinate basis."""
    from .manifold import frame_to_coordinates
    from .riemann import covariant_derivative

    n = spec.dim
    inv = spec.frame_matrix_inverse()
    table = [[None] * n for _ in range(n)]
    for a in range(n):
        da = tuple(inv[a][i] for i in range(n))
        for b in range(n):
            db = tuple(inv[b][i] for i in range(n))
            res = covariant_derivative(spec, conn, da, db)
            table[a][b] = frame_to_coordinates(res, spec)
    # table[a][b][c] = Gamma^c_ab
    return table


def symbolic_coordinate_curvature(spec, curv):
    """R(d_a, d_b) d_c in coordinate components, exact."""
    from .manifold import frame_to_coordinates
    from .riemann import apply_curvature

    n = spec.dim
    inv = spec.frame_matrix_inverse()
    basis = [tuple(inv[a][i] for i in range(n)) for a in range(n)]
    table = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                res = apply_curvature(spec, curv, basis[a], basis[b], basis[c])
                table[a][b][c] = frame_to_coordinates(res, spec)
    return table


def _deviations(sym_values, num_values):
    max_abs = 0.0
    max_rel = 0.0
    worst = None
    for idx in sym_values:
        sv = sym_values[idx]
        nv = num_values[idx]
        dev = abs(sv - nv)
        rel = dev / max(1.0, abs(sv))
        if rel > max_rel:
            max_rel = rel
            worst = idx
        max_abs = max(max_abs, dev)
    return max_abs, max_rel, worst


def cross_validate_connection(spec, conn, points, step=1e-5, tol=1e-6):
    n = spec.dim
    table = symbolic_coordinate_connection(spec, conn)
    max_abs = 0.0
    max_rel = 0.0
    worst = None
    for p in points:
        fpoint = p.as_floats()
        fd = fd_connection(spec, p, step)
        sym = {}
        num = {}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    sym[(c, a, b)] = table[a][b][c].float_eval(fpoint)
                    num[(c, a, b)] = fd[c][a][b]
        ab, rel, w = _deviations(sym, num)
        max_abs = max(max_abs, ab)
        if rel > max_rel:
            max_rel = rel
            worst = w
    return NumericReport(
        tensor="connection",
        max_abs_deviation=max_abs,
        max_rel_deviation=max_rel,
        points_tested=len(points),
        step=step,
        tolerance=tol,
        passed=max_rel <= tol,
        worst_component=worst,
    )


def cross_validate_curvature(spec, curv, points, step=1e-5, tol=1e-4):
    n = spec.dim
    table = symbolic_coordinate_curvature(spec, curv)
    max_abs = 0.0
    max_rel = 0.0
    worst = None
    for p in points:
        fpoint = p.as_floats()
        fd = fd_curvature(spec, p, step)
        sym = {}
        num = {}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for l in range(n):
                        sym[(l, a, b, c)] = table[a][b][c][l].float_eval(fpoint)
                        num[(l, a, b, c)] = fd[l][a][b][c]
        ab, rel, w = _deviations(sym, num)
        max_abs = max(max_abs, ab)
        if rel > max_rel:
            max_rel = rel
            worst = w
    return NumericReport(
        tensor="curvature",
        max_abs_deviation=max_abs,
        max_rel_deviation=max_rel,
        points_tested=len(points),
        step=step,
        tolerance=tol,
        passed=max_rel <= tol,
        worst_component=worst,
    )


def residual_check(name, residuals, points, tol=1e-9):
    """Evaluate symbolic residuals at the sample points; algebraic
    identities must vanish to within tolerance."""
    max_abs = 0.0
    worst = None
    for p in points:
        fpoint = p.as_floats()
        for idx, scalar in residuals:
            v = abs(scalar.float_eval(fpoint))
            if v > max_abs:
                max_abs = v
                worst = idx
    return NumericReport(
        tensor=name,
        max_abs_deviation=max_abs,
        max_rel_deviation=max_abs,
        points_tested=len(points),
        step=0.0,
        tolerance=tol,
        passed=max_abs <= tol,
        worst_component=worst,
    )
