"""Polar exponential forms in a ramified variable t with t^m = x.

An ExpForm is a finite sum of terms c_j * t^(-j) with j >= 1 and c_j a
nonzero element of a number field.  The representation is normalized so
that the ramification index m is minimal: if every stored j shares a
common factor with m it is divided out.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DegreeMismatch, NotRootOfUnity
from .exactalg import AlgElem, FieldHandle, minimal_poly


def _as_fraction(r):
    if isinstance(r, Fraction):
        return r
    if isinstance(r, int):
        return Fraction(r)
    return Fraction(r)


class ExpForm:
    """Sum of c_j * t^(-j) over a field, with ramification index m."""

    __slots__ = ("field", "m", "coeffs")

    def __init__(self, field, m, coeffs):
        if m < 1:
            raise ValueError("ramification index must be positive")
        clean = {}
        for j, c in coeffs.items():
            if j < 1:
                raise ValueError("only strictly polar terms are allowed")
            if not isinstance(c, AlgElem):
                c = field.element(c)
            if not c.is_zero():
                clean[int(j)] = c
        m = int(m)
        if clean:
            g = m
            for j in clean:
                g = gcd(g, j)
            if g > 1:
                clean = {j // g: c for j, c in clean.items()}
                m //= g
        else:
            m = 1
        self.field = field
        self.m = m
        self.coeffs = clean

    @staticmethod
    def zero(field):
        return ExpForm(field, 1, {})

    @staticmethod
    def monomial(field, coeff, x_degree, m=None):
        """The form c * x^(-r) written with the minimal usable m."""
        r = _as_fraction(x_degree)
        mm = r.denominator if m is None else m
        j = r * mm
        if j.denominator != 1:
            raise ValueError("x-degree incompatible with ramification index")
        return ExpForm(field, mm, {int(j): coeff})

    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs, reverse=True)

    def scaled_support(self, m):
        """Coefficient map in the variable u with u^m = x (m a multiple
        of the canonical index); the constructor would re-normalize, so
        this returns the raw dict."""
        if m % self.m:
            raise ValueError("new ramification index must be a multiple")
        k = m // self.m
        return {j * k: c for j, c in self.coeffs.items()}

    def map_to(self, field):
        return ExpForm(field, self.m,
                       {j: field.embed(c) for j, c in self.coeffs.items()})

    def __add__(self, other):
        if self.field != other.field:
            other = other.map_to(self.field)
        m = self.m * other.m // gcd(self.m, other.m)
        out = self.scaled_support(m)
        for j, c in other.scaled_support(m).items():
            s = out.get(j, self.field.zero) + c
            if s.is_zero():
                out.pop(j, None)
            else:
                out[j] = s
        return ExpForm(self.field, m, out)

    def __neg__(self):
        return ExpForm(self.field, self.m,
                       {j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ExpForm):
            return NotImplemented
        if self.m != other.m or set(self.coeffs) != set(other.coeffs):
            return False
        return all(self.coeffs[j] == other.coeffs[j] for j in self.coeffs)

    def __hash__(self):
        return hash((self.m, tuple(sorted(self.coeffs))))

    def key(self):
        """Deterministic ordering key (the global term ordering)."""
        terms = []
        for j in self.support():
            c = self.coeffs[j]
            mu = minimal_poly(c)
            terms.append((j, mu.degree(),
                          tuple(x.as_fraction() for x in mu.coeffs), c.key()))
        return (self.m, tuple(terms))

    def __repr__(self):
        return f"ExpForm({self.render()})"

    def render(self):
        if self.is_zero():
            return "0 ; m=1"
        var = "t" if self.m > 1 else "x"
        parts = []
        for j in self.support():
            c = self.coeffs[j]
            if c.is_rational():
                frac = c.as_fraction()
                body = "" if frac == 1 else ("-" if frac == -1 else None)
                if body is None:
                    parts.append(f"{frac.numerator}/{frac.denominator}*{var}^-{j}"
                                 if frac.denominator != 1 else f"{frac}*{var}^-{j}")
                else:
                    parts.append(f"{body}{var}^-{j}")
            else:
                parts.append(f"({c.render()})*{var}^-{j}")
        joined = parts[0]
        for p in parts[1:]:
            joined += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return f"{joined} ; m={self.m}"


class XDegree:
    """Degree in x of a form: a nonnegative rational, or None for zero."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __eq__(self, other):
        if isinstance(other, XDegree):
            return self.value == other.value
        return self.value == other

    def __repr__(self):
        return f"XDegree({self.value})"


def deg_x(form):
    """Largest j/m over the support; None for the zero form."""
    if form.is_zero():
        return XDegree(None)
    return XDegree(Fraction(max(form.coeffs), form.m))


def t_r(form, r):
    """The unique term of x-degree r, as a (monomial) form; else zero."""
    r = _as_fraction(r)
    j = r * form.m
    if j.denominator != 1 or int(j) not in form.coeffs:
        return ExpForm.zero(form.field)
    return ExpForm(form.field, form.m, {int(j): form.coeffs[int(j)]})


def c_r(form, r):
    """Coefficient of the term of x-degree r (zero when absent)."""
    r = _as_fraction(r)
    j = r * form.m
    if j.denominator != 1:
        return form.field.zero
    return form.coeffs.get(int(j), form.field.zero)


def subst_zeta(form, zeta):
    """The form after t -> zeta * t, for zeta with zeta^m = 1."""
    target = zeta.field
    if not (zeta ** form.m == target.one):
        raise NotRootOfUnity("zeta^m must equal 1 exactly")
    out = {}
    for j, c in form.coeffs.items():
        out[j] = target.embed(c) * zeta ** (-j)
    return ExpForm(target, form.m, out)


# -- text round trip -------------------------------------------------


def parse_form(text, field=None):
    """Parse the rendering produced by ExpForm.render (rational coeffs)."""
    if field is None:
        field = FieldHandle.rationals()
    body, _, mpart = text.partition(";")
    m = 1
    mpart = mpart.strip()
    if mpart:
        if not mpart.startswith("m="):
            raise ValueError(f"bad ramification clause: {mpart!r}")
        m = int(mpart[2:])
    body = body.strip()
    if body == "0":
        return ExpForm.zero(field)
    terms = {}
    chunk = body.replace(" - ", " + -").split(" + ")
    for part in chunk:
        part = part.strip()
        sign = 1
        if part.startswith("-"):
            sign = -1
            part = part[1:]
        coeff, _, tail = part.rpartition("*")
        var, _, exp = tail.partition("^")
        if var not in ("t", "x"):
            raise ValueError(f"bad term: {part!r}")
        j = -int(exp)
        c = Fraction(coeff) if coeff else Fraction(1)
        terms[j] = field.element(sign * c)
    return ExpForm(field, m, terms)


def require_degree(form, r):
    """Assert deg_x(form) == r, raising DegreeMismatch otherwise."""
    if deg_x(form) != _as_fraction(r):
        raise DegreeMismatch(
            f"form has x-degree {deg_x(form).value}, expected {r}")
