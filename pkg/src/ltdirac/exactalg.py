"""Exact arithmetic over towers of number fields.

Every field is stored both as a tower (base field, monic irreducible
defining polynomial, generator name) and as a flattened absolute field
Q[z]/(g) with g monic with integer coefficients.  Elements live in the
absolute representation (sympy ``ANP`` values), which keeps arithmetic,
zero tests and hashing cheap.  Tower extension uses Trager's trick:
shift the adjoined root by an integer multiple of the old primitive
generator until the norm (a resultant over Q) is squarefree; the norm is
then the new absolute defining polynomial.

Factorization over Q and over absolute number fields is delegated to
sympy; the tower plumbing (flattening, embeddings, relative minimal
polynomials) is done here.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from sympy import QQ
from sympy.polys.polyclasses import ANP

from .errors import DegreeCapExceeded, NotASubfield, ZeroPolynomial

_Z = sp.Symbol("z")
_Y = sp.Symbol("y")

DEFAULT_DEGREE_CAP = 16

#: cap used for scratch fields built during conjugacy tests; these are
#: internal and transient, so the user-facing cap does not apply
INTERNAL_CAP = 4096


def _qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, sp.Rational):
        return QQ(value.p, value.q)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def _anp(coeffs, mod):
    return ANP(list(coeffs), list(mod), QQ)


def _anp_key(rep, degree):
    """Deterministic sort key: descending coefficient vector, left-padded."""
    lst = rep.to_list()
    pad = [QQ(0)] * (degree - len(lst))
    return tuple(Fraction(int(c.numerator), int(c.denominator)) for c in pad + lst)


class FieldHandle:
    """A number field given as a tower over Q.

    Immutable.  ``abs_mod`` is the defining polynomial of the flattened
    field as a descending list of QQ coefficients (monic, integer).
    ``gen_abs`` is the top tower generator written in the absolute
    generator; ``base_gen_abs`` is the image of the base field's
    absolute generator.
    """

    __slots__ = (
        "kind", "base", "defining_poly", "gen_name", "degree_cap",
        "abs_mod", "abs_degree", "gen_abs", "base_gen_abs",
        "_domain", "_root_expr",
    )

    def __init__(self, kind, base, defining_poly, gen_name, degree_cap,
                 abs_mod, gen_abs, base_gen_abs):
        self.kind = kind
        self.base = base
        self.defining_poly = defining_poly
        self.gen_name = gen_name
        self.degree_cap = degree_cap
        self.abs_mod = abs_mod
        self.abs_degree = len(abs_mod) - 1
        self.gen_abs = gen_abs
        self.base_gen_abs = base_gen_abs
        self._domain = None
        self._root_expr = None

    # -- construction ------------------------------------------------

    @staticmethod
    def rationals(degree_cap=DEFAULT_DEGREE_CAP):
        mod = [QQ(1), QQ(0)]  # z, so the absolute generator is 0
        zero = _anp([], mod)
        return FieldHandle("rationals", None, None, "", degree_cap,
                           mod, zero, zero)

    def extend(self, defining_poly, gen_name, _trusted=False):
        """Adjoin a root of ``defining_poly`` (monic irreducible over self)."""
        f = defining_poly
        if f.field is not self and f.field != self:
            f = f.map_to(self)
        if f.is_zero():
            raise ZeroPolynomial("defining polynomial is zero")
        f = f.monic()
        d = f.degree()
        if d < 1:
            raise ZeroPolynomial("defining polynomial must be nonconstant")
        new_abs_degree = self.abs_degree * d
        if new_abs_degree > self.degree_cap:
            raise DegreeCapExceeded(
                f"absolute degree {new_abs_degree} exceeds cap {self.degree_cap}")
        if not _trusted:
            factors = poly_factor(f)
            if len(factors) != 1 or factors[0][1] != 1:
                raise ValueError("defining polynomial is not irreducible")

        if d == 1:
            # trivial extension: same absolute field, generator is -f(0)
            root = -f.coeffs[-1]
            return FieldHandle("extension", self, f, gen_name, self.degree_cap,
                               self.abs_mod, root.rep,
                               _anp([QQ(1), QQ(0)], self.abs_mod))

        g_poly = sp.Poly([sp.Rational(int(c.numerator), int(c.denominator))
                          for c in self.abs_mod], _Z, domain="QQ")
        # H(z, y): defining polynomial with base elements written in z
        h_expr = sp.Integer(0)
        for i, c in enumerate(f.coeffs):
            deg = f.degree() - i
            c_expr = _anp_to_expr(c.rep, _Z)
            h_expr += c_expr * _Y ** deg

        for s in _shift_candidates():
            shifted = h_expr.subs(_Y, _Y - s * _Z, simultaneous=True)
            norm = sp.Poly(sp.resultant(g_poly.as_expr(), sp.expand(shifted), _Z),
                           _Y, domain="QQ")
            if norm.degree() != new_abs_degree:
                continue
            if sp.gcd(norm, norm.diff(_Y)).degree() == 0:
                break
        else:  # pragma: no cover - finitely many bad shifts
            raise RuntimeError("no squarefree shift found")

        norm = norm.monic()
        abs_mod, scale = _integralize(norm)
        new = FieldHandle("extension", self, f, gen_name, self.degree_cap,
                          abs_mod, None, None)
        gamma = _anp([QQ(1, scale), QQ(0)], abs_mod)  # root of the norm
        theta = _old_generator_image(self, h_expr, s, gamma, new)
        beta = gamma - _anp([_qq(s)], abs_mod) * theta
        new.base_gen_abs = theta
        new.gen_abs = beta
        # insurance: the adjoined generator must satisfy its defining poly
        assert _eval_tower_poly(f, new).is_zero, \
            "internal error: generator does not satisfy defining polynomial"
        return new

    def gen_abs_of_base(self):
        return self.base_gen_abs

    # -- basic structure ---------------------------------------------

    def is_rationals(self):
        return self.kind == "rationals"

    def tower_chain(self):
        """self, base, base.base, ... down to Q."""
        chain = [self]
        while chain[-1].base is not None:
            chain.append(chain[-1].base)
        return chain

    def absolute_degree(self):
        return self.abs_degree

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldHandle):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.is_rationals():
            return True
        return (self.gen_name == other.gen_name
                and self.abs_mod == other.abs_mod
                and self.gen_abs == other.gen_abs
                and self.base == other.base)

    def __hash__(self):
        if self.is_rationals():
            return hash("Q")
        return hash((self.gen_name, tuple(str(c) for c in self.abs_mod)))

    def __repr__(self):
        if self.is_rationals():
            return "Q"
        return f"{self.base!r}({self.gen_name})"

    def describe(self):
        if self.is_rationals():
            return "Q"
        return (f"{self.base.describe()}"
                f"[{self.gen_name}: {self.defining_poly.render(self.gen_name)} = 0]")

    # -- elements ----------------------------------------------------

    @property
    def zero(self):
        return AlgElem(self, _anp([], self.abs_mod))

    @property
    def one(self):
        return AlgElem(self, _anp([QQ(1)], self.abs_mod))

    def element(self, value):
        """Coerce a rational number into this field."""
        if isinstance(value, AlgElem):
            return self.embed(value)
        q = _qq(value)
        return AlgElem(self, _anp([q] if q else [], self.abs_mod))

    def gen(self):
        return AlgElem(self, self.gen_abs)

    def embed(self, elem):
        """Map an element of a field lower in this tower into this field."""
        if elem.field is self or elem.field == self:
            return AlgElem(self, _anp(elem.rep.to_list(), self.abs_mod))
        chain = self.tower_chain()
        for idx, fld in enumerate(chain):
            if fld is elem.field or fld == elem.field:
                rep = elem.rep
                for target in reversed(chain[:idx]):
                    rep = _anp_compose(rep, target.base_gen_abs, target.abs_mod)
                return AlgElem(self, rep)
        raise NotASubfield(f"{elem.field!r} is not a subfield of {self!r}")

    def contains_field(self, other):
        return any(fld is other or fld == other for fld in self.tower_chain())

    # -- sympy boundary ----------------------------------------------

    def sympy_domain(self):
        if self.is_rationals():
            return QQ
        if self._domain is None:
            expr = sp.Poly([sp.Rational(int(c.numerator), int(c.denominator))
                            for c in self.abs_mod], _Z, domain="QQ").as_expr()
            self._root_expr = sp.CRootOf(expr, 0)
            self._domain = QQ.algebraic_field(self._root_expr)
            assert self._domain.mod.to_list() == self.abs_mod, \
                "internal error: sympy minimal polynomial disagrees"
        return self._domain


def _shift_candidates():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _integralize(monic_poly):
    """Rescale the root by an integer c so the monic polynomial has
    integer coefficients; returns (descending QQ list, c)."""
    coeffs = monic_poly.all_coeffs()
    denoms = [sp.Rational(c).q for c in coeffs]
    c = 1
    for d in denoms:
        c = sp.ilcm(c, d)
    c = int(c)
    n = len(coeffs) - 1
    out = []
    for i, a in enumerate(coeffs):
        a = sp.Rational(a) * sp.Integer(c) ** i
        out.append(QQ(a.p, a.q))
    assert all(int(q.denominator) == 1 for q in out)
    return out, c


def _anp_to_expr(rep, var):
    expr = sp.Integer(0)
    for c in rep.to_list():
        expr = expr * var + sp.Rational(int(c.numerator), int(c.denominator))
    return sp.expand(expr)


def _anp_compose(rep, value_anp, target_mod):
    """Evaluate the polynomial ``rep`` (over Q) at an ANP of the target field."""
    result = _anp([], target_mod)
    for c in rep.to_list():
        result = result * value_anp + _anp([c] if c else [], target_mod)
    return result


def _old_generator_image(base, h_expr, s, gamma, new_field):
    """Trager back-solve: gcd(g(z), H(z, gamma - s z)) is linear z - theta."""
    mod = new_field.abs_mod
    g_coeffs = [_anp([c] if c else [], mod) for c in base.abs_mod]
    # H(z, gamma - s*z) as a polynomial in z with ANP coefficients
    poly_h = sp.Poly(sp.expand(h_expr.subs(_Y, _Y - s * _Z, simultaneous=True)),
                     _Z, _Y, domain="QQ")
    h_coeffs = {}
    for (dz, dy), coeff in poly_h.terms():
        q = _qq(coeff)
        val = _anp([q] if q else [], mod) * gamma ** dy
        h_coeffs[dz] = h_coeffs.get(dz, _anp([], mod)) + val
    max_dz = max(h_coeffs) if h_coeffs else 0
    h_list = [h_coeffs.get(d, _anp([], mod)) for d in range(max_dz, -1, -1)]
    lin = _anp_poly_gcd(g_coeffs, h_list, mod)
    assert len(lin) == 2, "internal error: Trager gcd is not linear"
    return -(lin[1] / lin[0])


def _anp_poly_trim(coeffs):
    i = 0
    while i < len(coeffs) and coeffs[i].is_zero:
        i += 1
    return coeffs[i:]


def _anp_poly_rem(a, b):
    """Remainder of dense descending ANP coefficient lists; b nonzero."""
    a = list(a)
    db, lb = len(b) - 1, b[0]
    while len(a) - 1 >= db and a:
        if a[0].is_zero:
            a.pop(0)
            continue
        factor = a[0] / lb
        for i in range(db + 1):
            a[i] = a[i] - factor * b[i]
        a.pop(0)
    return _anp_poly_trim(a)


def _anp_poly_gcd(a, b, mod):
    a = _anp_poly_trim(a)
    b = _anp_poly_trim(b)
    while b:
        a, b = b, _anp_poly_rem(a, b)
    lead = a[0]
    return [c / lead for c in a]


def _eval_tower_poly(f, ext_field):
    """Evaluate a UniPoly over ext_field.base at the new generator."""
    acc = _anp([], ext_field.abs_mod)
    gen = ext_field.gen_abs
    for c in f.coeffs:
        cc = ext_field.embed(c)
        acc = acc * gen + cc.rep
    return acc


class AlgElem:
    """An element of a FieldHandle, stored in the absolute representation."""

    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep

    # -- arithmetic --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgElem):
            if other.field is self.field or other.field == self.field:
                return other
            if self.field.contains_field(other.field):
                return self.field.embed(other)
            raise NotASubfield("elements of unrelated fields")
        return self.field.element(other)

    def __add__(self, other):
        other = self._coerce(other)
        return AlgElem(self.field, self.rep + other.rep)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return AlgElem(self.field, self.rep - other.rep)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return AlgElem(self.field, self.rep * other.rep)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgElem(self.field, -self.rep)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return AlgElem(self.field, self.rep ** n)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        one = _anp([QQ(1)], self.field.abs_mod)
        return AlgElem(self.field, one / self.rep)

    def is_zero(self):
        return self.rep.is_zero

    def is_rational(self):
        return len(self.rep.to_list()) <= 1

    def as_fraction(self):
        """The element as a Fraction; only valid when is_rational()."""
        lst = self.rep.to_list()
        if not lst:
            return Fraction(0)
        if len(lst) > 1:
            raise ValueError("element is not rational")
        return Fraction(int(lst[0].numerator), int(lst[0].denominator))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element(other)
        if not isinstance(other, AlgElem):
            return NotImplemented
        try:
            other = self._coerce(other)
        except NotASubfield:
            return False
        return self.rep == other.rep

    def __hash__(self):
        return hash(_anp_key(self.rep, self.field.abs_degree))

    def key(self):
        """Deterministic sort key within a fixed field."""
        return _anp_key(self.rep, self.field.abs_degree)

    def __repr__(self):
        return f"AlgElem({self.render()})"

    def render(self):
        """Human/CLI rendering in terms of the tower generator."""
        if self.is_rational():
            return _render_fraction(self.as_fraction())
        name = _display_gen_name(self.field)
        lst = self.rep.to_list()
        deg = len(lst) - 1
        terms = []
        for i, c in enumerate(lst):
            if not c:
                continue
            power = deg - i
            frac = Fraction(int(c.numerator), int(c.denominator))
            terms.append(_render_term(frac, name, power))
        return _join_terms(terms)


def _display_gen_name(field):
    # depth-one integral towers keep the user's generator name; otherwise
    # fall back to a neutral symbol for the primitive generator
    gen_is_abs = field.gen_abs.to_list() == [QQ(1), QQ(0)]
    if field.base is not None and field.base.is_rationals() and gen_is_abs:
        return field.gen_name or "w"
    return "w"


def _render_fraction(frac):
    return str(frac.numerator) if frac.denominator == 1 else \
        f"{frac.numerator}/{frac.denominator}"


def _render_term(coeff, name, power):
    if power == 0:
        return _render_fraction(coeff)
    if power == 1:
        head = name
    else:
        head = f"{name}^{power}"
    if coeff == 1:
        return head
    if coeff == -1:
        return f"-{head}"
    return f"{_render_fraction(coeff)}*{head}"


def _join_terms(terms):
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f"-{t[1:]}" if t.startswith("-") else f"+{t}"
    return out


class UniPoly:
    """Univariate polynomial over a FieldHandle; descending coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [c if isinstance(c, AlgElem) else field.element(c)
                  for c in coeffs]
        i = 0
        while i < len(coeffs) and coeffs[i].is_zero():
            i += 1
        self.field = field
        self.coeffs = coeffs[i:]

    @staticmethod
    def from_roots(field, roots):
        p = UniPoly(field, [1])
        for r in roots:
            p = p * UniPoly(field, [1, -field.element(r)])
        return p

    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[0]

    def monic(self):
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        lead = self.leading()
        if lead == self.field.one:
            return self
        inv = lead.inverse()
        return UniPoly(self.field, [c * inv for c in self.coeffs])

    def map_to(self, field):
        return UniPoly(field, [field.embed(c) for c in self.coeffs])

    def evaluate(self, value):
        """Horner evaluation; value may live in an extension of the field."""
        target = value.field
        acc = target.zero
        for c in self.coeffs:
            acc = acc * value + target.embed(c)
        return acc

    def derivative(self):
        d = self.degree()
        return UniPoly(self.field,
                       [c * (d - i) for i, c in enumerate(self.coeffs[:-1])])

    def compose_scaled(self, scale):
        """p(scale * y) for a field element scale."""
        d = self.degree()
        s = self.field.embed(scale) if isinstance(scale, AlgElem) \
            else self.field.element(scale)
        return UniPoly(self.field,
                       [c * s ** (d - i) for i, c in enumerate(self.coeffs)])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = [self.field.zero] * (n - len(a)) + a
        b = [self.field.zero] * (n - len(b)) + b
        return UniPoly(self.field, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            return UniPoly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly(self.field, [])
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out)

    def __pow__(self, n):
        out = UniPoly(self.field, [1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((len(self.coeffs),) + tuple(c.key() for c in self.coeffs))

    def key(self):
        return (self.degree(), tuple(c.key() for c in self.coeffs))

    def __repr__(self):
        return f"UniPoly({self.render('y')})"

    def render(self, var="y"):
        if self.is_zero():
            return "0"
        d = self.degree()
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            power = d - i
            if c.is_rational():
                terms.append(_render_term(c.as_fraction(), var, power))
            else:
                body = c.render()
                if power == 0:
                    terms.append(f"({body})")
                elif power == 1:
                    terms.append(f"({body})*{var}")
                else:
                    terms.append(f"({body})*{var}^{power}")
        return _join_terms(terms)


# -- factorization and minimal polynomials ---------------------------


def poly_factor(f):
    """Monic irreducible factors with multiplicities, canonically sorted."""
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    field = f.field
    if f.degree() == 0:
        return []
    if field.is_rationals():
        expr = sp.Poly([sp.Rational(c.as_fraction().numerator,
                                    c.as_fraction().denominator)
                        for c in f.coeffs], _Y, domain="QQ")
        _, factors = expr.factor_list()
        out = []
        for fac, mult in factors:
            mono = fac.monic()
            coeffs = [field.element(Fraction(sp.Rational(c).p, sp.Rational(c).q))
                      for c in mono.all_coeffs()]
            out.append((UniPoly(field, coeffs), mult))
        out.sort(key=lambda fm: fm[0].key())
        return out

    dom = field.sympy_domain()
    mod = field.abs_mod
    sym_coeffs = [ANP(c.rep.to_list(), mod, QQ) for c in f.coeffs]
    poly = sp.Poly(sym_coeffs, _Y, domain=dom)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = fac.rep.to_list()
        elems = [AlgElem(field, _anp(_as_anp_list(c), mod)) for c in coeffs]
        out.append((UniPoly(field, elems).monic(), mult))
    out.sort(key=lambda fm: fm[0].key())
    return out


def _as_anp_list(c):
    if isinstance(c, ANP):
        return c.to_list()
    return [QQ.convert(c)] if c else []


def minimal_poly(a, over=None):
    """Monic minimal polynomial of ``a`` over a subfield of its tower."""
    field = a.field
    if over is None:
        over = FieldHandle.rationals(field.degree_cap)
    if not field.contains_field(over):
        raise NotASubfield(f"{over!r} does not occur in the tower of {field!r}")

    mu_q = _absolute_minpoly(a)
    if over.is_rationals():
        return mu_q.map_to(over)

    lifted = UniPoly(over, [over.element(c.as_fraction()) for c in mu_q.coeffs])
    for fac, _ in poly_factor(lifted):
        if fac.evaluate(a).is_zero():
            return fac
    raise AssertionError("internal error: no factor annihilates the element")


def _absolute_minpoly(a):
    """Minimal polynomial over Q via the norm resultant, squarefree part."""
    rationals = FieldHandle.rationals(a.field.degree_cap)
    if a.is_rational():
        return UniPoly(rationals, [1, -a.as_fraction()])
    g = sp.Poly([sp.Rational(int(c.numerator), int(c.denominator))
                 for c in a.field.abs_mod], _Z, domain="QQ")
    p_expr = _anp_to_expr(a.rep, _Z)
    norm = sp.Poly(sp.resultant(g.as_expr(), _Y - p_expr, _Z), _Y, domain="QQ")
    sqfree = sp.quo(norm, sp.gcd(norm, norm.diff(_Y)))
    sqfree = sqfree.monic()
    return UniPoly(rationals, [_qq(c) for c in sqfree.all_coeffs()])


def primitive_element(field):
    """Flatten a tower into Q[z]/(g) with mutually inverse embeddings.

    Returns (poly over Q, simple_field, to_simple, from_simple).  The
    element maps are the identity on absolute representations, so the
    round trip is exact by construction.
    """
    rationals = FieldHandle.rationals(field.degree_cap)
    if field.is_rationals():
        g = UniPoly(rationals, [1, 0])
        identity = lambda e: e  # noqa: E731
        return g, field, identity, identity
    g = UniPoly(rationals, [Fraction(int(c.numerator), int(c.denominator))
                            for c in field.abs_mod])
    if field.base is not None and field.base.is_rationals() \
            and field.gen_abs.to_list() == [QQ(1), QQ(0)]:
        simple = field
    else:
        simple = rationals.extend(g, "w", _trusted=True)
    to_simple = lambda e: AlgElem(simple, _anp(e.rep.to_list(), simple.abs_mod))  # noqa: E731
    from_simple = lambda e: AlgElem(field, _anp(e.rep.to_list(), field.abs_mod))  # noqa: E731
    return g, simple, to_simple, from_simple


# -- embeddings and roots (used by orbit bookkeeping) ----------------


def roots_in_field(f):
    """All roots of a UniPoly that lie in its own coefficient field."""
    roots = []
    for fac, mult in poly_factor(f):
        if fac.degree() == 1:
            roots.extend([-fac.coeffs[-1]] * mult)
    return roots


def k_embeddings(src, over, target):
    """Embeddings of src into target over the common subfield ``over``,
    as callables on AlgElem; only embeddings with image inside target."""
    alpha = AlgElem(src, _anp([QQ(1), QQ(0)], src.abs_mod)) \
        if src.abs_degree > 1 else src.zero
    mu = minimal_poly(alpha, over)
    lifted = mu.map_to(target)
    maps = []
    for rho in sorted(roots_in_field(lifted), key=lambda e: e.key()):
        def emb(elem, rho=rho):
            acc = target.zero
            for c in elem.rep.to_list():
                acc = acc * rho + target.element(
                    Fraction(int(c.numerator), int(c.denominator)))
            return acc
        maps.append(emb)
    return maps


def adjoin_factor_root(field, poly, gen_name):
    """Extend by a root of the canonically-first irreducible factor."""
    factors = poly_factor(poly.map_to(field))
    fac = factors[0][0]
    if fac.degree() == 1:
        return field, -fac.coeffs[-1]
    ext = field.extend(fac, gen_name, _trusted=True)
    return ext, ext.gen()


def with_root_of_unity(field, m):
    """A field over ``field`` containing a primitive m-th root of unity."""
    if m <= 2:
        zeta = field.element(1 if m == 1 else -1)
        return field, zeta
    rationals = FieldHandle.rationals(INTERNAL_CAP)
    cyc = sp.Poly(sp.cyclotomic_poly(m, _Y), _Y, domain="QQ")
    cyc_poly = UniPoly(rationals, [_qq(c) for c in cyc.all_coeffs()])
    scratch = _with_cap(field, INTERNAL_CAP)
    ext, zeta = adjoin_factor_root(scratch, cyc_poly.map_to(scratch), "zeta")
    return ext, zeta


def _with_cap(field, cap):
    """A copy of the field tower with a different degree cap."""
    if field.degree_cap >= cap:
        return field
    clone = FieldHandle(field.kind, field.base, field.defining_poly,
                        field.gen_name, cap, field.abs_mod,
                        field.gen_abs, field.base_gen_abs)
    return clone
