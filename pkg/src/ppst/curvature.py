"""Levi-Civita connection, curvature, Ricci and star-Ricci data.

Conventions (fixed throughout the package):

* Koszul:  2 g(nabla_X Y, Z) = X g(Y,Z) + Y g(X,Z) - Z g(X,Y)
           + g([X,Y],Z) + g([Z,X],Y) + g([Z,Y],X)
* Curvature: R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]; on basis fields
  R(e_i, e_j) e_k = R^l_kij e_l.
* Ricci: S(X,Y) = trace of Z -> R(Z,X)Y, i.e. S_jk = sum_i R^i_kij; the
  scalar r = g^{jk} S_jk.  In an orthonormal frame this equals the
  epsilon-weighted sum over the frame.
* Star-Ricci: S*(X,Y) = sum_i eps_i g(R(e_i,X) phi Y, phi e_i) over an
  orthonormal frame; computed basis-free as -trace(Z -> phi R(Z,X) phi Y),
  which agrees whenever phi is g-skew-adjoint (a consequence of the
  structure axioms); r* = g^{ab} S*_ab.

Connection coefficients are stored as coeffs[i][j][k] = Gamma^k_ij with
nabla_{e_i} e_j = Gamma^k_ij e_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import linalg
from .expr import RationalExpr
from .models import (
    DegenerateMetricError,
    GeometryError,
    ManifoldModel,
    TensorField,
    Vec,
)

Coeffs = tuple[tuple[Vec, ...], ...]


@dataclass
class ConnectionData:
    """Levi-Civita connection coefficients plus the metric pair used."""

    model: ManifoldModel
    coeffs: Coeffs
    metric: TensorField
    metric_inverse: tuple[tuple[RationalExpr, ...], ...]

    def nabla_basis(self, i: int, j: int) -> Vec:
        """Components of nabla_{e_i} e_j."""
        return self.coeffs[i][j]

    def gamma(self, k: int, i: int, j: int) -> RationalExpr:
        """Gamma^k_ij."""
        return self.coeffs[i][j][k]


@dataclass
class CurvatureData:
    """Riemann components and (once computed) their traces.

    ``riemann`` has valence (1,3) with index order (l, k, i, j) so that
    R(e_i, e_j) e_k = riemann[l,k,i,j] e_l.
    """

    connection: ConnectionData
    riemann: TensorField
    ricci: TensorField | None = None
    scalar: RationalExpr | None = None
    star_ricci: TensorField | None = None
    star_scalar: RationalExpr | None = None
    _nested: tuple = field(default=(), repr=False)

    @property
    def model(self) -> ManifoldModel:
        return self.connection.model

    def apply(self, i: int, j: int, k: int) -> Vec:
        """Components of R(e_i, e_j) e_k."""
        return self._nested[i][j][k]


def metric_inverse(g: TensorField) -> tuple[tuple[RationalExpr, ...], ...]:
    rows = g.rows()
    d = g.model.dim
    for i in range(d):
        for j in range(d):
            if not (rows[i][j] - rows[j][i]).is_zero:
                raise GeometryError("metric must be symmetric")
    det = linalg.determinant(rows)
    if det.is_zero:
        raise DegenerateMetricError("metric determinant is identically zero")
    return linalg.invert_matrix(rows, g.model.one)


def levi_civita(g: TensorField, model: ManifoldModel | None = None) -> ConnectionData:
    """The unique torsion-free metric connection of an exact metric."""
    model = model or g.model
    if g.valence != (0, 2):
        raise GeometryError("metric must have valence (0,2)")
    d = model.dim
    grows = g.rows()
    ginv = metric_inverse(g)
    half = Fraction(1, 2)

    def g_of(v: Vec, l: int) -> RationalExpr:
        acc = model.zero
        for m in range(d):
            if not v[m].is_zero:
                acc = acc + v[m] * grows[m][l]
        return acc

    coeffs = []
    for i in range(d):
        row = []
        for j in range(d):
            cij = model.bracket_vector(i, j)
            rhs = []
            for l in range(d):
                cil = model.bracket_vector(i, l)
                cjl = model.bracket_vector(j, l)
                val = (model.diff(i, grows[j][l]) + model.diff(j, grows[i][l])
                       - model.diff(l, grows[i][j])
                       + g_of(cij, l) - g_of(cil, j) - g_of(cjl, i))
                rhs.append(val * half)
            gamma = []
            for k in range(d):
                acc = model.zero
                for l in range(d):
                    if not rhs[l].is_zero:
                        acc = acc + ginv[k][l] * rhs[l]
                gamma.append(acc)
            row.append(tuple(gamma))
        coeffs.append(tuple(row))
    return ConnectionData(model, tuple(coeffs), g, ginv)


def nabla_field(conn: ConnectionData, X: Vec, Y: Vec) -> Vec:
    """Components of nabla_X Y for arbitrary vector fields (not tensorial in Y)."""
    model = conn.model
    d = model.dim
    out = []
    for k in range(d):
        acc = model.zero
        for i in range(d):
            if X[i].is_zero:
                continue
            term = model.diff(i, Y[k])
            for j in range(d):
                if not Y[j].is_zero:
                    term = term + conn.coeffs[i][j][k] * Y[j]
            acc = acc + X[i] * term
        out.append(acc)
    return tuple(out)


def covariant_derivative(T: TensorField, conn: ConnectionData) -> TensorField:
    """nabla T with the direction as the first lower slot.

    For valence (r, s) input the output has valence (r, s+1) and index
    order (uppers..., direction, lowers...).
    """
    model = conn.model
    if T.model is not model:
        raise GeometryError("tensor and connection live on different models")
    d = model.dim
    r, s = T.valence
    entries = {}
    for uppers in product(range(d), repeat=r):
        for k in range(d):
            for lowers in product(range(d), repeat=s):
                val = model.diff(k, T[uppers + lowers])
                for p in range(r):
                    for m in range(d):
                        gm = conn.coeffs[k][m][uppers[p]]
                        if not gm.is_zero:
                            idx = uppers[:p] + (m,) + uppers[p + 1:] + lowers
                            val = val + gm * T[idx]
                for q in range(s):
                    for m in range(d):
                        gm = conn.coeffs[k][lowers[q]][m]
                        if not gm.is_zero:
                            idx = uppers + lowers[:q] + (m,) + lowers[q + 1:]
                            val = val - gm * T[idx]
                entries[uppers + (k,) + lowers] = val
    return TensorField.from_entries(model, (r, s + 1), entries)


def riemann(conn: ConnectionData) -> CurvatureData:
    """Curvature of the connection, R(X,Y) = [nabla_X,nabla_Y] - nabla_[X,Y]."""
    model = conn.model
    d = model.dim
    G = conn.coeffs
    nested = []
    for i in range(d):
        plane = []
        for j in range(d):
            line = []
            cij = model.bracket_vector(i, j)
            for k in range(d):
                vec = []
                for l in range(d):
                    val = model.diff(i, G[j][k][l]) - model.diff(j, G[i][k][l])
                    for m in range(d):
                        val = val + G[j][k][m] * G[i][m][l] - G[i][k][m] * G[j][m][l]
                        if not cij[m].is_zero:
                            val = val - cij[m] * G[m][k][l]
                    vec.append(val)
                line.append(tuple(vec))
            plane.append(tuple(line))
        nested.append(tuple(plane))
    nested = tuple(nested)
    entries = {}
    for i, j, k, l in product(range(d), repeat=4):
        entries[(l, k, i, j)] = nested[i][j][k][l]
    rie = TensorField.from_entries(model, (1, 3), entries)
    return CurvatureData(connection=conn, riemann=rie, _nested=nested)


def ricci_scalar(curv: CurvatureData, g: TensorField) -> tuple[TensorField, RationalExpr]:
    """(Ricci tensor, scalar curvature); also cached on the CurvatureData."""
    model = curv.model
    d = model.dim
    entries = {}
    for j in range(d):
        for k in range(d):
            acc = model.zero
            for a in range(d):
                acc = acc + curv._nested[a][j][k][a]
            entries[(j, k)] = acc
    S = TensorField.from_entries(model, (0, 2), entries)
    ginv = curv.connection.metric_inverse if g is curv.connection.metric \
        else metric_inverse(g)
    r = model.zero
    for j in range(d):
        for k in range(d):
            if not S[(j, k)].is_zero:
                r = r + ginv[j][k] * S[(j, k)]
    curv.ricci, curv.scalar = S, r
    return S, r


def star_ricci_scalar(curv: CurvatureData, g: TensorField, phi: TensorField,
                      ) -> tuple[TensorField, RationalExpr]:
    """(star-Ricci tensor, star scalar); assumes phi is g-skew-adjoint."""
    model = curv.model
    d = model.dim
    ph = phi.rows()
    entries = {}
    for a in range(d):
        for b in range(d):
            acc = model.zero
            for m, l, p in product(range(d), repeat=3):
                f1 = ph[m][l]
                f2 = ph[p][b]
                if f1.is_zero or f2.is_zero:
                    continue
                rml = curv._nested[m][a][p][l]
                if not rml.is_zero:
                    acc = acc + f1 * rml * f2
            entries[(a, b)] = -acc
    S = TensorField.from_entries(model, (0, 2), entries)
    ginv = curv.connection.metric_inverse if g is curv.connection.metric \
        else metric_inverse(g)
    r = model.zero
    for a in range(d):
        for b in range(d):
            if not S[(a, b)].is_zero:
                r = r + ginv[a][b] * S[(a, b)]
    curv.star_ricci, curv.star_scalar = S, r
    return S, r


# ---------------------------------------------------------------------------
# residuals for the structural invariants (all identically zero when exact)

def torsion_residual(conn: ConnectionData) -> TensorField:
    model = conn.model
    d = model.dim
    entries = {}
    for i, j in product(range(d), repeat=2):
        cij = model.bracket_vector(i, j)
        for k in range(d):
            entries[(k, i, j)] = conn.coeffs[i][j][k] - conn.coeffs[j][i][k] - cij[k]
    return TensorField.from_entries(model, (1, 2), entries)


def metric_compatibility_residual(conn: ConnectionData, g: TensorField) -> TensorField:
    return covariant_derivative(g, conn)


def curvature_antisymmetry_residual(curv: CurvatureData) -> TensorField:
    model = curv.model
    d = model.dim
    entries = {}
    for i, j, k, l in product(range(d), repeat=4):
        entries[(l, k, i, j)] = curv._nested[i][j][k][l] + curv._nested[j][i][k][l]
    return TensorField.from_entries(model, (1, 3), entries)


def first_bianchi_residual(curv: CurvatureData) -> TensorField:
    model = curv.model
    d = model.dim
    entries = {}
    for i, j, k, l in product(range(d), repeat=4):
        entries[(l, k, i, j)] = (curv._nested[i][j][k][l] + curv._nested[j][k][i][l]
                                 + curv._nested[k][i][j][l])
    return TensorField.from_entries(model, (1, 3), entries)


def ricci_symmetry_residual(curv: CurvatureData, g: TensorField) -> TensorField:
    S, _ = (curv.ricci, curv.scalar) if curv.ricci is not None \
        else ricci_scalar(curv, g)
    model = curv.model
    d = model.dim
    entries = {(j, k): S[(j, k)] - S[(k, j)] for j, k in product(range(d), repeat=2)}
    return TensorField.from_entries(model, (0, 2), entries)
