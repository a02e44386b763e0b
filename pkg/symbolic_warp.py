"""
Closed family of exp-polynomial expressions used for warping functions and
reduced potentials.

A SymbolicWarp is a finite sum of terms coeff * x^q * exp(r*x) in a single
variable x (normally "t", or "r" after the change of coordinates for steep
ends).  Exponents q and r are kept as exact fractions so that negative and
rational powers (the r-coordinate potentials) live in the same family.
Coefficients are fractions whenever the inputs are, and fall back to floats
only when a rational power has no exact root.

The family is closed under sums, products, differentiation, division by a
single term and rational powers of a single term, which is everything the
reduced-operator brackets need.
"""

import math
from fractions import Fraction

import numpy

__version__ = '0.1'
__all__ = ['exact', 'rational_power', 'SymbolicWarp']


def exact(value):
    """
    Convert an int, Fraction, decimal string or float into a Fraction.  Floats
    go through their shortest repr so that -0.5 becomes -1/2 exactly.
    """

    if isinstance(value, bool):
        raise TypeError("boolean is not a number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _coefficient(value):
    if isinstance(value, (bool,)):
        raise TypeError("boolean is not a number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, (float, numpy.floating)):
        return float(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"unsupported coefficient {value!r}")


def _integer_root(value, degree):
    if value < 0:
        return None
    guess = int(round(float(value) ** (1.0 / degree)))
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate**degree == value:
            return candidate
    return None


def rational_power(base, exponent):
    """
    Raise base to a rational exponent, exactly when base is a Fraction with
    an exact root and as a float otherwise.
    """

    exponent = exact(exponent)
    if isinstance(base, (int, Fraction)):
        base = Fraction(base)
        if exponent.denominator == 1:
            return base ** exponent.numerator
        if base < 0:
            raise ValueError(f"negative base {base} to fractional power {exponent}")
        num = _integer_root(base.numerator, exponent.denominator)
        den = _integer_root(base.denominator, exponent.denominator)
        if num is not None and den is not None:
            return Fraction(num, den) ** exponent.numerator
    if base < 0 and exponent.denominator != 1:
        raise ValueError(f"negative base {base} to fractional power {exponent}")
    return float(base) ** float(exponent)


def _format_number(value):
    if isinstance(value, Fraction):
        return str(value)
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.12g}"


def _format_rate(rate, var):
    if rate == 1:
        return var
    if rate == -1:
        return f"-{var}"
    if rate.denominator == 1:
        return f"{rate.numerator}{var}"
    sign = '-' if rate < 0 else ''
    return f"{sign}({abs(rate)}){var}"


class SymbolicWarp(object):
    """
    Sum of terms coeff * x^power * exp(rate*x) in the variable named by var.
    Instances are immutable; every operation returns a new expression.
    """

    def __init__(self, terms=None, var='t'):
        self.var = var
        collected = {}
        if terms is not None:
            if isinstance(terms, dict):
                items = [(coeff, power, rate) for (power, rate), coeff in terms.items()]
            else:
                items = list(terms)
            for coeff, power, rate in items:
                key = (exact(power), exact(rate))
                collected[key] = collected.get(key, 0) + _coefficient(coeff)
        self._terms = {key: coeff for key, coeff in collected.items() if coeff != 0}

    @classmethod
    def constant(cls, value, var='t'):
        return cls([(value, 0, 0)], var=var)

    @classmethod
    def monomial(cls, coeff=1, power=0, rate=0, var='t'):
        """Single term coeff * x^power * exp(rate*x)."""

        return cls([(coeff, power, rate)], var=var)

    @property
    def terms(self):
        """
        Terms as (coeff, power, rate) tuples, the constant term first and the
        rest ordered from fastest to slowest growth.
        """

        keys = sorted(self._terms, key=lambda k: (k != (0, 0), -k[1], -k[0]))
        return [(self._terms[k], k[0], k[1]) for k in keys]

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def is_single_term(self):
        return len(self._terms) == 1

    def is_constant(self):
        return all(key == (0, 0) for key in self._terms)

    def constant_term(self):
        return self._terms.get((Fraction(0), Fraction(0)), Fraction(0))

    def coefficient(self, power=0, rate=0):
        return self._terms.get((exact(power), exact(rate)), Fraction(0))

    def _promote(self, other):
        if isinstance(other, SymbolicWarp):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise ValueError(f"cannot combine expressions in '{self.var}' and '{other.var}'")
            return other
        return SymbolicWarp.constant(other, var=self.var)

    def _result_var(self, other):
        if self.is_constant() and isinstance(other, SymbolicWarp) and not other.is_constant():
            return other.var
        return self.var

    def __add__(self, other):
        other = self._promote(other)
        terms = [(c, q, r) for c, q, r in self.terms] + [(c, q, r) for c, q, r in other.terms]
        return SymbolicWarp(terms, var=self._result_var(other))

    __radd__ = __add__

    def __neg__(self):
        return SymbolicWarp([(-c, q, r) for c, q, r in self.terms], var=self.var)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def __mul__(self, other):
        other = self._promote(other)
        terms = []
        for c1, q1, r1 in self.terms:
            for c2, q2, r2 in other.terms:
                terms.append((c1 * c2, q1 + q2, r1 + r2))
        return SymbolicWarp(terms, var=self._result_var(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, SymbolicWarp):
            other = _coefficient(other)
            if other == 0:
                raise ZeroDivisionError("division of a warp expression by zero")
            inverse = 1 / other
            return SymbolicWarp([(c * inverse, q, r) for c, q, r in self.terms], var=self.var)
        return self * other**-1

    def __rtruediv__(self, other):
        return self._promote(other) * self**-1

    def __pow__(self, exponent):
        exponent = exact(exponent)
        if exponent == 0:
            return SymbolicWarp.constant(1, var=self.var)
        if self.is_single_term():
            (coeff, power, rate), = self.terms
            return SymbolicWarp([(rational_power(coeff, exponent), power * exponent, rate * exponent)],
                                var=self.var)
        if exponent.denominator == 1 and exponent > 0:
            result = self
            for _ in range(exponent.numerator - 1):
                result = result * self
            return result
        raise ValueError(f"power {exponent} of a {len(self)}-term expression is outside the family")

    def derivative(self):
        """d/dx of the expression."""

        terms = []
        for coeff, power, rate in self.terms:
            if power != 0:
                terms.append((coeff * power, power - 1, rate))
            if rate != 0:
                terms.append((coeff * rate, power, rate))
        return SymbolicWarp(terms, var=self.var)

    def __call__(self, x):
        """
        Evaluate at x (scalar or numpy array).  Floating point errors are
        governed by the caller's numpy.errstate.
        """

        x = numpy.asarray(x, dtype=numpy.float64)
        total = numpy.zeros_like(x)
        for coeff, power, rate in self.terms:
            value = numpy.full_like(x, float(coeff))
            if power != 0:
                value = value * numpy.power(x, float(power))
            if rate != 0:
                value = value * numpy.exp(float(rate) * x)
            total = total + value
        if total.ndim == 0:
            return float(total)
        return total

    def dominant_term(self):
        """Term that dominates as x -> +infinity, or None for the zero expression."""

        if not self._terms:
            return None
        key = max(self._terms, key=lambda k: (k[1], k[0]))
        return (self._terms[key], key[0], key[1])

    def limit(self):
        """
        Limit at +infinity: +/-inf when a growing term dominates, the
        constant term when everything else decays, 0 for a decaying sum.
        """

        dominant = self.dominant_term()
        if dominant is None:
            return Fraction(0)
        coeff, power, rate = dominant
        if (rate, power) > (0, 0):
            return math.inf if coeff > 0 else -math.inf
        if (rate, power) == (0, 0):
            return coeff
        return Fraction(0)

    def grows(self):
        """True when the expression tends to +infinity."""

        return self.limit() == math.inf

    def integrable_at_infinity(self):
        """True when the integral over (c, +infinity) converges."""

        dominant = self.dominant_term()
        if dominant is None:
            return True
        _, power, rate = dominant
        return rate < 0 or (rate == 0 and power < -1)

    def positive_single_term(self):
        return self.is_single_term() and self.terms[0][0] > 0

    def decay_lengths(self, left=1.0):
        """
        Length scales over which the terms vary near x = left: 1/|rate| for
        exponentials and left/|power| for pure powers.
        """

        lengths = []
        for _, power, rate in self.terms:
            if rate != 0:
                lengths.append(1.0 / abs(float(rate)))
            elif power != 0:
                lengths.append(abs(float(left)) / abs(float(power)))
        return lengths

    def with_var(self, var):
        return SymbolicWarp(self.terms, var=var)

    def approx_equal(self, other, tol=1e-14):
        other = self._promote(other)
        keys = set(self._terms) | set(other._terms)
        for key in keys:
            c1 = self._terms.get(key, 0)
            c2 = other._terms.get(key, 0)
            if abs(float(c1) - float(c2)) > tol * max(1.0, abs(float(c1)), abs(float(c2))):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, SymbolicWarp):
            if isinstance(other, (int, float, Fraction)):
                other = SymbolicWarp.constant(other, var=self.var)
            else:
                return NotImplemented
        if not (self.is_constant() and other.is_constant()) and self.var != other.var:
            return False
        return self._terms == other._terms

    def __hash__(self):
        var = None if self.is_constant() else self.var
        return hash((var, frozenset(self._terms.items())))

    def _format_term(self, magnitude, power, rate):
        factors = []
        if power != 0:
            if power == 1:
                factors.append(self.var)
            elif power.denominator == 1:
                factors.append(f"{self.var}^{power}")
            else:
                factors.append(f"{self.var}^({power})")
        if rate != 0:
            factors.append(f"exp({_format_rate(rate, self.var)})")
        return '·'.join([_format_number(magnitude)] + factors)

    def __str__(self):
        if not self._terms:
            return '0'
        output = ''
        for i, (coeff, power, rate) in enumerate(self.terms):
            negative = coeff < 0
            body = self._format_term(-coeff if negative else coeff, power, rate)
            if i == 0:
                output = f"-{body}" if negative else body
            else:
                output += f" - {body}" if negative else f" + {body}"
        return output

    def __repr__(self):
        return f"SymbolicWarp({self.terms!r}, var={self.var!r})"
