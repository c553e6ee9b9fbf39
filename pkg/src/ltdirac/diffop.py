"""Differential operators, Newton polygons, and connection matrices.

Sign convention, fixed globally: the rank-one module attached to a polar
form w is (L((t)), d + dw), whose horizontal sections are proportional
to exp(-w).  Consequently x^2*D - 1, which annihilates exp(-1/x),
carries the form w = 1/x.

Slope convention: the polygon of sum a_i D^i is the lower hull of the
points (i, ord(a_i) - i); an edge of geometric slope s > 0 corresponds
to exponential parts of x-degree s, and the slope-0 mass (the abscissa
of the rightmost minimal vertex) is the regular rank.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionTooLow, RamificationMismatch
from .exactalg import UniPoly
from .puiseux import ExpForm
from .series import LaurentSeries


class DiffOperator:
    """Sum a_i * D^i with Laurent-polynomial coefficients; D = d/dvar.

    ``ram`` records how the operator's variable relates to x: var^ram = x
    (ram = 1 for operators over K((x)) themselves).
    """

    __slots__ = ("field", "coeffs", "var", "ram")

    def __init__(self, field, coeffs, var="x", ram=1):
        coeffs = [c if isinstance(c, LaurentSeries)
                  else LaurentSeries(field, {0: c}) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = coeffs
        self.var = var
        self.ram = ram

    @staticmethod
    def zero(field, var="x", ram=1):
        return DiffOperator(field, [], var, ram)

    @staticmethod
    def identity(field, var="x", ram=1):
        return DiffOperator(field, [LaurentSeries.one(field)], var, ram)

    @staticmethod
    def derivation(field, var="x", ram=1):
        return DiffOperator(field, [LaurentSeries.zero(field),
                                    LaurentSeries.one(field)], var, ram)

    def order(self):
        return len(self.coeffs) - 1  # -1 for the zero operator

    def is_zero(self):
        return not self.coeffs

    def map_to(self, field):
        return DiffOperator(field, [c.map_to(field) for c in self.coeffs],
                            self.var, self.ram)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = LaurentSeries.zero(self.field)
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return DiffOperator(self.field, [x + y for x, y in zip(a, b)],
                            self.var, self.ram)

    def __neg__(self):
        return DiffOperator(self.field, [-c for c in self.coeffs],
                            self.var, self.ram)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, series):
        """Left multiplication by a Laurent polynomial."""
        return DiffOperator(self.field, [series * c for c in self.coeffs],
                            self.var, self.ram)

    def compose(self, other):
        """Operator product self * other (apply other first)."""
        result = DiffOperator.zero(self.field, self.var, self.ram)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            # a * D^i * other
            term = other
            for _ in range(i):
                term = term._left_derivation()
            result = result + term._left_multiply(a)
        return result

    def _left_derivation(self):
        """D * self as an operator (product rule on coefficients)."""
        z = LaurentSeries.zero(self.field)
        shifted = [z] + list(self.coeffs)
        out = []
        for j in range(len(shifted)):
            c = shifted[j]
            if j < len(self.coeffs):
                c = c + self.coeffs[j].derivative()
            out.append(c)
        return DiffOperator(self.field, out, self.var, self.ram)

    def _left_multiply(self, series):
        return DiffOperator(self.field, [series * c for c in self.coeffs],
                            self.var, self.ram)

    def __pow__(self, n):
        out = DiffOperator.identity(self.field, self.var, self.ram)
        for _ in range(n):
            out = out.compose(self)
        return out

    def gauge_shift(self, shift):
        """Substitute D -> D + shift, for a Laurent polynomial shift.

        If L annihilates y and y = exp(phi) * u with phi' = shift, the
        result annihilates u.
        """
        field = self.field
        out = DiffOperator.zero(field, self.var, self.ram)
        # powers of (D + shift), built iteratively
        power = DiffOperator.identity(field, self.var, self.ram)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                out = out + power._left_multiply(a)
            if i < len(self.coeffs) - 1:
                power = power._next_gauge_power(shift)
        return out

    def _next_gauge_power(self, shift):
        """(D + shift) * self."""
        return self._left_derivation() + self._left_multiply(shift)

    def ramify(self, n):
        """Substitute var = u^n (u the new variable); D_var = u^(1-n)/n D_u."""
        if n == 1:
            return self
        field = self.field
        inv_n = field.element(Fraction(1, n))
        d_sub = DiffOperator(field, [LaurentSeries.zero(field),
                                     LaurentSeries.monomial(field, inv_n, 1 - n)],
                             "t", self.ram * n)
        out = DiffOperator.zero(field, "t", self.ram * n)
        power = DiffOperator.identity(field, "t", self.ram * n)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                out = out + power._left_multiply(a.substitute_power(n))
            if i < len(self.coeffs) - 1:
                power = d_sub.compose(power)
        return out

    def normalize(self):
        """Clear a common monomial factor t^k (slopes are unaffected)."""
        if self.is_zero():
            return self
        shift = min(c.order() for c in self.coeffs if not c.is_zero())
        if shift == 0:
            return self
        return DiffOperator(self.field,
                            [c.shift(-shift) for c in self.coeffs],
                            self.var, self.ram)

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (self.field == other.field and self.coeffs == other.coeffs
                and self.var == other.var and self.ram == other.ram)

    def __repr__(self):
        return f"DiffOperator({self.render()})"

    def render(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = c.render(self.var)
            if i == 0:
                parts.append(cs)
            else:
                dpow = "D" if i == 1 else f"D^{i}"
                if cs == "1":
                    parts.append(dpow)
                elif cs == "-1":
                    parts.append(f"-{dpow}")
                elif "+" in cs[1:] or "-" in cs[1:]:
                    parts.append(f"({cs})*{dpow}")
                else:
                    parts.append(f"{cs}*{dpow}")
        body = parts[0]
        for p in parts[1:]:
            body += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return body


class NewtonPolygon:
    """Lower hull of {(i, ord(a_i) - i)} plus slope data.

    ``edges`` lists (slope, length, edge_poly) for the slope-0 edge (when
    the regular mass is positive) and every positive-slope hull edge, in
    increasing slope order.  The slope-0 edge polynomial collects the
    coefficients of the support points at minimal height.
    """

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices, edges):
        self.vertices = vertices
        self.edges = edges

    def slopes(self):
        return [(slope, length) for slope, length, _ in self.edges]

    def irregularity(self):
        return sum(slope * length for slope, length, _ in self.edges)

    def regular_length(self):
        for slope, length, _ in self.edges:
            if slope == 0:
                return length
        return 0


def _lower_hull(points):
    points = sorted(points)
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above segment hull[-2]..p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(operator):
    """Polygon of a nonzero operator, in the operator's own variable."""
    if operator.is_zero():
        raise ValueError("newton polygon of the zero operator")
    points = {}
    for i, a in enumerate(operator.coeffs):
        if a.is_zero():
            continue
        points[i] = a.order() - i
    hull = _lower_hull(points.items())
    ymin = min(y for _, y in hull)
    # rightmost support point at minimal height marks the regular mass
    i0 = max(i for i, y in points.items() if y == ymin)
    edges = []
    if i0 > 0:
        low = min(i for i, y in points.items() if y == ymin)
        coeffs = []
        for i in range(low, i0 + 1):
            if points.get(i) == ymin:
                coeffs.append(operator.coeffs[i].coeff(ymin + i))
            else:
                coeffs.append(operator.field.zero)
        poly = UniPoly(operator.field, list(reversed(coeffs)))
        edges.append((Fraction(0), i0, poly))
    chain = [(i, y) for i, y in hull if i >= i0 and y >= ymin]
    chain.sort()
    for (xa, ya), (xb, yb) in zip(chain, chain[1:]):
        slope = Fraction(yb - ya, xb - xa)
        if slope <= 0:
            continue
        coeffs = []
        for i in range(xa, xb + 1):
            target = ya + slope * (i - xa)
            if target.denominator == 1 and points.get(i) == target:
                coeffs.append(operator.coeffs[i].coeff(int(target) + i))
            else:
                coeffs.append(operator.field.zero)
        poly = UniPoly(operator.field, list(reversed(coeffs)))
        edges.append((slope, xb - xa, poly))
    return NewtonPolygon([tuple(p) for p in hull], edges)


def slopes(operator):
    """Multiset of (slope, multiplicity); includes the slope-0 mass."""
    poly = newton_polygon(operator)
    out = {}
    for slope, length in poly.slopes():
        out[slope] = out.get(slope, 0) + length
    return sorted(out.items())


# -- connection matrices ---------------------------------------------


class ConnectionMatrix:
    """Matrix of the derivation in a chosen basis, row convention:
    the derivation sends e_i to sum_j mat[i][j] e_j (plus the naive
    derivative on coordinates).  ``ram`` as for DiffOperator.
    """

    __slots__ = ("field", "size", "rows", "var", "ram")

    def __init__(self, field, rows, var="x", ram=1):
        self.field = field
        self.size = len(rows)
        self.rows = [[e if isinstance(e, LaurentSeries)
                      else LaurentSeries(field, {0: e}) for e in row]
                     for row in rows]
        self.var = var
        self.ram = ram

    @staticmethod
    def zero(field, size, var="x", ram=1, prec=None):
        z = LaurentSeries.zero(field, prec)
        return ConnectionMatrix(field, [[z] * size for _ in range(size)],
                                var, ram)

    def truncation_order(self):
        precs = [e.prec for row in self.rows for e in row if e.prec is not None]
        return min(precs) if precs else None

    def map_to(self, field):
        return ConnectionMatrix(field,
                                [[e.map_to(field) for e in row]
                                 for row in self.rows], self.var, self.ram)

    def truncate(self, prec):
        return ConnectionMatrix(self.field,
                                [[e.truncate(prec) for e in row]
                                 for row in self.rows], self.var, self.ram)

    def __eq__(self, other):
        if not isinstance(other, ConnectionMatrix):
            return NotImplemented
        return (self.size == other.size and self.ram == other.ram
                and all(a == b for ra, rb in zip(self.rows, other.rows)
                        for a, b in zip(ra, rb)))

    def eq_to_precision(self, other):
        return (self.size == other.size and self.ram == other.ram
                and all(a.eq_to_precision(b)
                        for ra, rb in zip(self.rows, other.rows)
                        for a, b in zip(ra, rb)))

    def __repr__(self):
        return f"ConnectionMatrix(size={self.size}, ram={self.ram})"


def ramify(matrix, n):
    """Pull back along the n-th power map: A(x) dx -> A(t^n) n t^(n-1) dt."""
    if n == 1:
        return matrix
    field = matrix.field
    factor = LaurentSeries.monomial(field, field.element(n), n - 1)
    rows = [[factor * e.substitute_power(n) for e in row]
            for row in matrix.rows]
    return ConnectionMatrix(field, rows, "t", matrix.ram * n)


def twist(matrix, form):
    """Tensor by the rank-one module of the form: A -> A + dw * Id."""
    field = matrix.field
    if form.is_zero():
        return matrix
    if matrix.ram % form.m:
        raise RamificationMismatch(
            f"form needs t^{form.m} = x but the matrix variable has "
            f"t^{matrix.ram} = x")
    support = form.scaled_support(matrix.ram)
    dw = LaurentSeries(field, {-j - 1: field.embed(c) * (-j)
                               for j, c in support.items()})
    rows = [list(row) for row in matrix.rows]
    for i in range(matrix.size):
        rows[i][i] = rows[i][i] + dw
    return ConnectionMatrix(field, rows, matrix.var, matrix.ram)


def minimal_precision(order):
    """Smallest truncation order accepted when building companions."""
    return 2 * max(order, 1)


def companion(operator, precision):
    """Companion matrix of L/a_d, truncated to the given precision."""
    d = operator.order()
    if d < 1:
        if d == 0:
            return ConnectionMatrix(operator.field, [], operator.var,
                                    operator.ram)
        raise ValueError("companion of the zero operator")
    if precision < minimal_precision(d):
        raise PrecisionTooLow(
            f"precision {precision} below minimal working precision "
            f"{minimal_precision(d)}")
    field = operator.field
    lead = operator.coeffs[d]
    z = LaurentSeries.zero(field, precision)
    rows = [[z] * d for _ in range(d)]
    one = LaurentSeries.one(field, precision)
    for k in range(d - 1):
        rows[k][k + 1] = one
    inv_lead = lead.inverse(prec=precision - (lead.order() or 0))
    for j in range(d):
        a = operator.coeffs[j]
        if not a.is_zero():
            rows[d - 1][j] = rows[d - 1][j] - (a * inv_lead).truncate(precision)
    return ConnectionMatrix(field, rows, operator.var, operator.ram)


# -- module constructors (catalog building blocks) -------------------


def regular_module(field, rank, var="x", ram=1):
    """Regular module of the given rank with the trivial connection."""
    return ConnectionMatrix.zero(field, rank, var, ram)


def direct_sum(*matrices):
    first = matrices[0]
    field = first.field
    ram = first.ram
    for m in matrices[1:]:
        if m.ram != ram:
            raise RamificationMismatch("direct summands use different variables")
    size = sum(m.size for m in matrices)
    z = LaurentSeries.zero(field)
    rows = [[z] * size for _ in range(size)]
    offset = 0
    for m in matrices:
        for i in range(m.size):
            for j in range(m.size):
                rows[offset + i][offset + j] = m.rows[i][j]
        offset += m.size
    return ConnectionMatrix(field, rows, first.var, ram)


def push_forward(matrix, n):
    """Direct image along t -> t^n = x: restriction of scalars from
    K((t)) to K((x)) on the basis t^j e_i, j = 0..n-1."""
    if n == 1:
        return matrix
    field = matrix.field
    ell = matrix.size
    size = ell * n
    inv_n = field.element(Fraction(1, n))
    z = LaurentSeries.zero(field)
    rows = [[z] * size for _ in range(size)]

    def idx(i, j):
        return i * n + j

    for i in range(ell):
        for j in range(n):
            # (j/n) x^-1 on the diagonal
            if j:
                rows[idx(i, j)][idx(i, j)] = rows[idx(i, j)][idx(i, j)] + \
                    LaurentSeries.monomial(field, field.element(Fraction(j, n)), -1)
            for k in range(ell):
                entry = matrix.rows[i][k]
                if entry.is_zero():
                    continue
                shifted = entry.shift(1 - n + j)
                for s, c in shifted.coeffs.items():
                    u = s % n
                    q = (s - u) // n
                    rows[idx(i, j)][idx(k, u)] = rows[idx(i, j)][idx(k, u)] + \
                        LaurentSeries.monomial(field, c * inv_n, q)
                if shifted.prec is not None:
                    for u in range(n):
                        cell = rows[idx(i, j)][idx(k, u)]
                        rows[idx(i, j)][idx(k, u)] = \
                            cell.truncate(shifted.prec // n)
    if matrix.ram % n:
        raise RamificationMismatch("push-forward index must divide ram")
    return ConnectionMatrix(field, rows, "x" if matrix.ram == n else "t",
                            matrix.ram // n)


def restrict_scalars(matrix, base):
    """Restriction of scalars along a field extension down to Q."""
    field = matrix.field
    if not base.is_rationals():
        raise NotImplementedError("restriction of scalars targets Q")
    deg = field.absolute_degree()
    if deg == 1:
        rows = [[LaurentSeries(base,
                               {e: base.element(c.as_fraction())
                                for e, c in entry.coeffs.items()}, entry.prec)
                 for entry in row] for row in matrix.rows]
        return ConnectionMatrix(base, rows, matrix.var, matrix.ram)
    ell = matrix.size
    size = ell * deg

    # coordinates in the absolute power basis, descending
    def coords(elem):
        vals = [Fraction(int(c.numerator), int(c.denominator))
                for c in elem.rep.to_list()]
        return [Fraction(0)] * (deg - len(vals)) + vals

    alpha = _abs_generator(field)
    z = LaurentSeries.zero(base)
    rows = [[z] * size for _ in range(size)]

    def idx(i, a):
        return i * deg + a

    for i in range(ell):
        for a in range(deg):
            power = alpha ** a
            for k in range(ell):
                entry = matrix.rows[i][k]
                for e, c in entry.coeffs.items():
                    vec = coords(power * c)  # descending in alpha
                    for b in range(deg):
                        coeff = vec[deg - 1 - b]
                        if coeff:
                            cell = rows[idx(i, a)][idx(k, b)]
                            rows[idx(i, a)][idx(k, b)] = cell + \
                                LaurentSeries.monomial(base,
                                                       base.element(coeff), e)
                if entry.prec is not None:
                    for b in range(deg):
                        cell = rows[idx(i, a)][idx(k, b)]
                        rows[idx(i, a)][idx(k, b)] = cell.truncate(entry.prec)
    return ConnectionMatrix(base, rows, matrix.var, matrix.ram)


def _abs_generator(field):
    from sympy import QQ
    from sympy.polys.polyclasses import ANP

    from .exactalg import AlgElem
    return AlgElem(field, ANP([QQ(1), QQ(0)], field.abs_mod, QQ))


def exp_module(form, rank, base_field):
    """The base_field((x))-module obtained from the rank-one module of
    the form tensored with a trivial regular part of the given rank,
    pushed down through the ramification and the coefficient field.

    twist peels its form (twisting this module by ``form`` gives back
    the regular module), so the construction twists by the negative.
    """
    field = form.field
    m = form.m
    mat = ConnectionMatrix.zero(field, rank, "t" if m > 1 else "x", m)
    mat = twist(mat, -form)
    if m > 1:
        mat = push_forward(mat, m)
    if not (field is base_field or field == base_field):
        if base_field.is_rationals():
            mat = restrict_scalars(mat, base_field)
        else:
            raise NotImplementedError(
                "coefficient descent implemented only down to Q")
    return mat
