"""Exact scalar arithmetic on a chart.

Scalars are multivariate rational functions over Q in the chart
coordinates, optionally extended by per-coordinate sin/cos generators
subject to sin^2 + cos^2 = 1.  Every value is kept in a canonical form
(numerator and denominator coprime, cos-exponents reduced below 2), so
zero-testing and equality are exact and decidable.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex


class DivisionByZeroFunction(ZeroDivisionError):
    """Division by a scalar that is identically zero."""


class DomainPole(ArithmeticError):
    """Evaluation at a point where a denominator vanishes."""


class ExprSyntaxError(ValueError):
    """Malformed expression text."""


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos and text[pos:].strip():
            raise ExprSyntaxError(f"unexpected character {text[pos]!r} at column {pos}")
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3)))
        pos = m.end()
        if m.lastindex is None:
            break
    return tokens


class Chart:
    """A coordinate chart: owns the coefficient field for its scalars."""

    def __init__(self, coords, trig=False):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise ValueError("duplicate coordinate names")
        self.coords = coords
        self.trig = bool(trig)
        names = list(coords)
        # trig generators come after the coordinates in the monomial order
        self._sin_pos = {}
        self._cos_pos = {}
        if trig:
            for c in coords:
                self._sin_pos[c] = len(names)
                names.append(f"s_{c}")
                self._cos_pos[c] = len(names)
                names.append(f"c_{c}")
        self._field, *gens = field(names, QQ, order=grlex)
        self._gens = tuple(gens)
        self._ring = self._field.ring
        # cos generator index -> matching sin generator index
        self._cos_to_sin = {self._cos_pos[c]: self._sin_pos[c] for c in self._cos_pos}
        self.zero = Scalar(self, self._field.zero)
        self.one = Scalar(self, self._field.one)

    def coord_index(self, name):
        return self.coords.index(name)

    def coord(self, name):
        if name not in self.coords:
            raise ValueError(f"unknown coordinate {name!r}")
        return Scalar(self, self._gens[self.coords.index(name)])

    def sin(self, name):
        if not self.trig:
            raise ValueError("trig extension is not enabled for this chart")
        return Scalar(self, self._gens[self._sin_pos[name]])

    def cos(self, name):
        if not self.trig:
            raise ValueError("trig extension is not enabled for this chart")
        return Scalar(self, self._gens[self._cos_pos[name]])

    def from_rational(self, value):
        q = Fraction(value)
        return Scalar(self, self._field.ground_new(QQ(q.numerator, q.denominator)))

    def parse(self, text):
        """Parse expression text into a canonical Scalar."""
        tokens = _tokenize(text)
        if not tokens:
            raise ExprSyntaxError("empty expression")
        expr, rest = self._parse_sum(tokens)
        if rest:
            raise ExprSyntaxError(f"trailing input near {rest[0][1]!r}")
        return expr

    # recursive-descent parser: sum -> product -> unary -> power -> atom
    def _parse_sum(self, toks):
        value, toks = self._parse_product(toks)
        while toks and toks[0] == ("op", "+") or toks and toks[0] == ("op", "-"):
            op = toks[0][1]
            rhs, toks = self._parse_product(toks[1:])
            value = value + rhs if op == "+" else value - rhs
        return value, toks

    def _parse_product(self, toks):
        value, toks = self._parse_unary(toks)
        while toks and toks[0][0] == "op" and toks[0][1] in "*/":
            op = toks[0][1]
            rhs, toks = self._parse_unary(toks[1:])
            value = value * rhs if op == "*" else value / rhs
        return value, toks

    def _parse_unary(self, toks):
        if toks and toks[0] == ("op", "-"):
            value, toks = self._parse_unary(toks[1:])
            return -value, toks
        return self._parse_power(toks)

    def _parse_power(self, toks):
        base, toks = self._parse_atom(toks)
        if toks and toks[0] == ("op", "^"):
            if len(toks) < 2 or toks[1][0] != "int":
                raise ExprSyntaxError("exponent must be a nonnegative integer")
            return base ** toks[1][1], toks[2:]
        return base, toks

    def _parse_atom(self, toks):
        if not toks:
            raise ExprSyntaxError("unexpected end of expression")
        kind, val = toks[0]
        if kind == "int":
            return self.from_rational(val), toks[1:]
        if kind == "name":
            if val in ("sin", "cos"):
                if (
                    len(toks) < 4
                    or toks[1] != ("op", "(")
                    or toks[2][0] != "name"
                    or toks[3] != ("op", ")")
                ):
                    raise ExprSyntaxError(f"{val} must be applied to a bare coordinate")
                coord = toks[2][1]
                if coord not in self.coords:
                    raise ExprSyntaxError(f"unknown coordinate {coord!r}")
                fn = self.sin if val == "sin" else self.cos
                try:
                    return fn(coord), toks[4:]
                except ValueError as exc:
                    raise ExprSyntaxError(str(exc)) from exc
            if val in self.coords:
                return self.coord(val), toks[1:]
            raise ExprSyntaxError(f"unknown identifier {val!r}")
        if (kind, val) == ("op", "("):
            inner, rest = self._parse_sum(toks[1:])
            if not rest or rest[0] != ("op", ")"):
                raise ExprSyntaxError("unbalanced parenthesis")
            return inner, rest[1:]
        raise ExprSyntaxError(f"unexpected token {val!r}")

    def _reduce_trig_poly(self, p):
        """Rewrite every cos-exponent >= 2 via cos^2 = 1 - sin^2."""
        R = self._ring
        out = R.zero
        for monom, coeff in p.terms():
            term = R.ground_new(coeff)
            for gi, e in enumerate(monom):
                if e == 0:
                    continue
                si = self._cos_to_sin.get(gi)
                if si is not None and e >= 2:
                    s = R.gens[si]
                    term = term * (R.one - s * s) ** (e // 2) * R.gens[gi] ** (e % 2)
                else:
                    term = term * R.gens[gi] ** e
            out = out + term
        return out

    def _normalize(self, frac):
        if self.trig:
            num = self._reduce_trig_poly(frac.numer)
            den = self._reduce_trig_poly(frac.denom)
            if not den:
                raise DivisionByZeroFunction("denominator is identically zero")
            frac = self._field.new(num, den)
        return frac


class Scalar:
    """An exact scalar function on a chart, immutable and canonical."""

    __slots__ = ("chart", "_frac")

    def __init__(self, chart, frac):
        self.chart = chart
        self._frac = chart._normalize(frac)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.chart is not self.chart:
                raise ValueError("scalars belong to different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.chart.from_rational(other)
        return NotImplemented

    @property
    def is_zero(self):
        return not self._frac.numer

    def is_constant(self):
        return self._frac.numer.is_ground and self._frac.denom.is_ground

    def as_rational(self):
        if not self.is_constant():
            raise ValueError("scalar is not constant")
        num = self._frac.numer.LC if self._frac.numer else QQ(0)
        den = self._frac.denom.LC
        q = num / den
        return Fraction(int(q.numerator), int(q.denominator))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.chart, self._frac + other._frac)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.chart, self._frac - other._frac)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.chart, other._frac - self._frac)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.chart, self._frac * other._frac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZeroFunction("division by the zero function")
        return Scalar(self.chart, self._frac / other._frac)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return Scalar(self.chart, -self._frac)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return Scalar(self.chart, self._frac ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.chart is other.chart and self._frac == other._frac

    def __hash__(self):
        return hash(self._frac)

    def __bool__(self):
        return not self.is_zero

    def diff(self, coord):
        """Exact partial derivative with respect to a chart coordinate."""
        chart = self.chart
        d = self._frac.diff(chart._gens[chart.coord_index(coord)])
        if chart.trig:
            s = chart._gens[chart._sin_pos[coord]]
            c = chart._gens[chart._cos_pos[coord]]
            d = d + c * self._frac.diff(s) - s * self._frac.diff(c)
        return Scalar(chart, d)

    def _subs_list(self, point, trig_values=None):
        chart = self.chart
        subs = []
        for i, name in enumerate(chart.coords):
            if name not in point:
                raise ValueError(f"no value for coordinate {name!r}")
            q = Fraction(point[name])
            subs.append((chart._ring.gens[i], QQ(q.numerator, q.denominator)))
        if chart.trig:
            trig_values = trig_values or {}
            for name in chart.coords:
                for key, pos in (("sin", chart._sin_pos[name]), ("cos", chart._cos_pos[name])):
                    gen = chart._ring.gens[pos]
                    if (key, name) in trig_values:
                        q = Fraction(trig_values[(key, name)])
                        subs.append((gen, QQ(q.numerator, q.denominator)))
                    elif self._uses_gen(pos):
                        raise ValueError(
                            f"exact evaluation needs a value for {key}({name})"
                        )
                    else:
                        subs.append((gen, QQ(0)))
        return subs

    def _uses_gen(self, pos):
        for poly in (self._frac.numer, self._frac.denom):
            for monom in poly.monoms():
                if monom[pos]:
                    return True
        return False

    def eval(self, point, trig_values=None):
        """Exact evaluation at a rational point; raises DomainPole at poles."""
        subs = self._subs_list(point, trig_values)
        den = self._frac.denom.evaluate(subs)
        if den == 0:
            raise DomainPole(f"denominator vanishes at {point}")
        num = self._frac.numer.evaluate(subs)
        q = num / den
        return Fraction(int(q.numerator), int(q.denominator))

    def float_eval(self, point):
        """Floating-point evaluation; sin/cos generators use math.sin/cos."""
        chart = self.chart
        vals = [float(point[name]) for name in chart.coords]
        if chart.trig:
            for name in chart.coords:
                x = float(point[name])
                vals.append(math.sin(x))
                vals.append(math.cos(x))

        def poly_val(p):
            total = 0.0
            for monom, coeff in p.terms():
                t = float(coeff.numerator) / float(coeff.denominator)
                for gi, e in enumerate(monom):
                    if e:
                        t *= vals[gi] ** e
                total += t
            return total

        den = poly_val(self._frac.denom)
        if den == 0.0:
            raise DomainPole(f"denominator vanishes at {point}")
        return poly_val(self._frac.numer) / den

    def denominator_poly(self):
        """The canonical denominator as a Scalar (monic leading coefficient)."""
        den = self._frac.denom
        lc = den.LC
        return Scalar(self.chart, self.chart._field(den) / self.chart._field.ground_new(lc))

    def render(self):
        """Canonical text: expanded numerator, '/' and expanded denominator."""
        num, den = self._frac.numer, self._frac.denom
        lc = den.LC
        if lc != QQ(1):
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        num_s = self._poly_str(num)
        if den == self.chart._ring.one:
            return num_s
        return f"({num_s})/({self._poly_str(den)})"

    def _poly_str(self, p):
        chart = self.chart
        if not p:
            return "0"
        names = list(chart.coords)
        if chart.trig:
            for c in chart.coords:
                names.append(f"sin({c})")
                names.append(f"cos({c})")
        pieces = []
        for monom, coeff in p.terms():
            q = Fraction(int(coeff.numerator), int(coeff.denominator))
            factors = []
            for gi, e in enumerate(monom):
                if e == 1:
                    factors.append(names[gi])
                elif e > 1:
                    factors.append(f"{names[gi]}^{e}")
            mag = abs(q)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            pieces.append(("-" if q < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Scalar({self.render()})"
