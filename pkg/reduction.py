"""
Reduced one-dimensional operators on the end (c, +infinity) x N.

Expanding a p-form in eigenforms of the cross section splits the Hodge
Laplacian into three families of Sturm-Liouville problems:

  * type I   - coclosed tangential forms, scalar operator per eigenvalue of
               the coclosed p-forms of N
  * type II  - closed forms wedge dt, scalar operator per eigenvalue of the
               (p-1)-forms of N
  * type III - the exact/coexact pair, a symmetric 2x2 system per nonzero
               eigenvalue of the coclosed (p-1)-forms of N

After a unitary rescaling every scalar problem takes the form
-(1/f w')' + V w.  For the exponential family with a = -1 the principal part
is -w''; for a < -1 the same happens after the change of variables
r = exp(-(a+1)t)/|a+1|.
"""

import math
from fractions import Fraction
from dataclasses import dataclass

import numpy

from symbolic_warp import SymbolicWarp, exact, rational_power
from spectral_model import DegreePair, GENERAL

__version__ = '0.1'
__all__ = ['ScalarPotential', 'CoupledOperator', 'PreTransformOperator',
           'build_type1', 'build_type2', 'build_type3', 'build_pretransform',
           'r_coordinate', 't_coordinate', 'k_constants', 'r_warps',
           'bump', 'conjugation_check', 'conjugation_order']


@dataclass(frozen=True)
class ScalarPotential(object):
    """
    Scalar problem -(principal_weight w')' + potential w on (left, +inf).  The
    variable is the one carried by principal_weight ("t" or "r").
    """

    potential: SymbolicWarp
    principal_weight: SymbolicWarp
    left: float
    kind: int = 1
    lam: Fraction = Fraction(0)

    @property
    def var(self):
        return self.principal_weight.var

    @property
    def terms(self):
        return self.potential

    @property
    def is_schrodinger(self):
        """True when the principal part is exactly -w''."""

        return self.principal_weight == SymbolicWarp.constant(1)

    def __call__(self, x):
        return self.potential(x)

    def __str__(self):
        if self.is_schrodinger:
            return f"V({self.var}) = {self.potential}"
        return f"V({self.var}) = {self.potential}  [principal weight {self.principal_weight}]"


@dataclass(frozen=True)
class CoupledOperator(object):
    """Symmetric 2x2 system with diagonal potentials v1, v2 and coupling W."""

    v1: ScalarPotential
    v2: ScalarPotential
    coupling: ScalarPotential
    lam: Fraction = Fraction(0)

    @property
    def var(self):
        return self.v1.var

    @property
    def left(self):
        return self.v1.left

    @property
    def principal_weight(self):
        return self.v1.principal_weight

    def entries(self):
        """Off-diagonal entries of rows one and two (the same expression)."""

        return self.coupling.potential, self.coupling.potential

    def __str__(self):
        return '\n'.join([f"V1({self.var}) = {self.v1.potential}",
                          f"V2({self.var}) = {self.v2.potential}",
                          f"W({self.var}) = {self.coupling.potential}"])


def _check_lambda(lam, strict=False):
    lam = exact(lam)
    if lam < 0:
        raise ValueError(f"boundary eigenvalue must be nonnegative, got {lam}")
    if strict and lam == 0:
        raise ValueError("type III needs a nonzero boundary eigenvalue: the coupled basis is "
                         "normalized by 1/sqrt(lambda)")
    return lam


def _steep(metric):
    return metric.is_exponential and metric.a < -1


def r_coordinate(metric, t):
    """
    Coordinate r(t) = exp(-(a+1)t)/|a+1| in which a steep end (a < -1)
    becomes dr^2 + g dtheta^2.
    """

    if not _steep(metric):
        raise ValueError(f"change of variables needs a < -1 in the exponential family, got a = {metric.a}")
    rate = float(-(metric.a + 1))
    scale = float(abs(metric.a + 1))
    value = numpy.exp(rate*numpy.asarray(t, dtype=numpy.float64)) / scale
    if value.ndim == 0:
        return float(value)
    return value


def t_coordinate(metric, r):
    """Inverse of r_coordinate."""

    if not _steep(metric):
        raise ValueError(f"change of variables needs a < -1 in the exponential family, got a = {metric.a}")
    rate = float(-(metric.a + 1))
    scale = float(abs(metric.a + 1))
    value = numpy.log(scale*numpy.asarray(r, dtype=numpy.float64)) / rate
    if value.ndim == 0:
        return float(value)
    return value


def r_warps(metric):
    """(f, g) of a steep exponential end written in the r variable."""

    if not _steep(metric):
        raise ValueError(f"change of variables needs a < -1 in the exponential family, got a = {metric.a}")
    beta = 2*metric.b/(metric.a + 1)
    g = SymbolicWarp.monomial(rational_power(abs(metric.a + 1), beta), beta, 0, var='r')
    return SymbolicWarp.constant(1, var='r'), g


def k_constants(deg, a, b):
    """
    Coefficients (K1, K2) of r^-2 in the type I and type II potentials of a
    steep end.
    """

    a, b = exact(a), exact(b)
    if a >= -1:
        raise ValueError(f"K constants are defined for a < -1, got a = {a}")
    half_m = Fraction(deg.m, 2)
    half_k = Fraction(deg.k, 2)
    ratio = b/abs(a + 1)
    k1 = half_m**2*ratio**2 + half_m*ratio
    k2 = half_k**2*ratio**2 - half_k*ratio
    return k1, k2


def _bracket(f, g, deg, lam, kind):
    """
    Potential of the conjugated type I (kind=1) or type II (kind=2) operator
    for arbitrary single-term warps f and g.
    """

    df, ddf = f.derivative(), f.derivative().derivative()
    dg, ddg = g.derivative(), g.derivative().derivative()
    finv, ginv = f**-1, g**-1
    if kind == 1:
        e = deg.m
        mixed, square, second = Fraction(-e, 8), Fraction(e*(e - 4), 16), Fraction(e, 4)
    else:
        e = deg.k
        mixed, square, second = Fraction(e, 8), Fraction(e*(e + 4), 16), Fraction(-e, 4)
    potential = Fraction(-7, 16)*df*df*finv**3 + Fraction(1, 4)*ddf*finv**2 \
                + mixed*df*dg*finv**2*ginv \
                + square*dg*dg*finv*ginv**2 \
                + second*ddg*finv*ginv \
                + lam*ginv
    return potential


def _coupling_bracket(f, g, lam):
    return g**Fraction(-3, 2)*f**Fraction(-1, 2)*g.derivative()*rational_power(lam, Fraction(1, 2))


def _bracket_form(metric, coordinate):
    if coordinate == 'r':
        f, g = r_warps(metric)
        return f, g, r_coordinate(metric, float(metric.c))
    f, g = metric.warps()
    return f, g, float(metric.c)


def _closed_form(metric, deg, lam, kind):
    a, b = metric.a, metric.b
    if a == -1:
        half = Fraction(deg.m if kind == 1 else deg.k, 2)
        potential = SymbolicWarp([(half**2*b**2, 0, 0), (lam, 0, 2*b)], var='t')
        return ScalarPotential(potential, SymbolicWarp.constant(1, var='t'), float(metric.c), kind, lam)
    k1, k2 = k_constants(deg, a, b)
    beta = 2*b/(a + 1)
    potential = SymbolicWarp([(k1 if kind == 1 else k2, -2, 0),
                              (lam*rational_power(abs(a + 1), -beta), -beta, 0)], var='r')
    return ScalarPotential(potential, SymbolicWarp.constant(1, var='r'), r_coordinate(metric, float(metric.c)),
                           kind, lam)


def _build_scalar(metric, deg, lam, kind, form):
    if form not in ('closed', 'bracket', 'r-bracket'):
        raise ValueError(f"unknown potential form '{form}'")
    if metric.warp_family == GENERAL or form == 'bracket':
        f, g, left = _bracket_form(metric, 't')
    elif form == 'r-bracket':
        f, g, left = _bracket_form(metric, 'r')
    else:
        return _closed_form(metric, deg, lam, kind)
    return ScalarPotential(_bracket(f, g, deg, lam, kind), f**-1, left, kind, lam)


def build_type1(metric, deg, lam, form='closed'):
    """
    Reduced type I operator for the coclosed boundary eigenvalue lam.

    form='closed' gives the simplified potential (t variable for a = -1, r
    variable for a < -1); form='bracket' gives the general potential in the
    metric's own variable with principal weight 1/f; form='r-bracket'
    evaluates the general potential in the r variable.
    """

    lam = _check_lambda(lam)
    return _build_scalar(metric, deg, lam, 1, form)


def build_type2(metric, deg, lam, form='closed'):
    """Reduced type II operator; same forms as build_type1."""

    lam = _check_lambda(lam)
    return _build_scalar(metric, deg, lam, 2, form)


def build_type3(metric, deg, lam, form='closed'):
    """Reduced coupled type III operator for a nonzero eigenvalue lam."""

    lam = _check_lambda(lam, strict=True)
    v1 = _build_scalar(metric, deg, lam, 1, form)
    v2 = _build_scalar(metric, deg, lam, 2, form)
    root = rational_power(lam, Fraction(1, 2))
    if metric.warp_family == GENERAL or form == 'bracket':
        f, g, _ = _bracket_form(metric, 't')
        coupling = _coupling_bracket(f, g, lam)
    elif form == 'r-bracket':
        f, g, _ = _bracket_form(metric, 'r')
        coupling = _coupling_bracket(f, g, lam)
    elif metric.a == -1:
        coupling = SymbolicWarp.monomial(-2*metric.b*root, 0, metric.b, var='t')
    else:
        a, b = metric.a, metric.b
        beta = 2*b/(a + 1)
        coupling = SymbolicWarp.monomial(beta*root*rational_power(abs(a + 1), -beta/2), -beta/2 - 1, 0, var='r')
    coupling = ScalarPotential(coupling, v1.principal_weight, v1.left, 3, lam)
    return CoupledOperator(v1, v2, coupling, lam)


@dataclass(frozen=True)
class PreTransformOperator(object):
    """
    Type I or type II operator before the unitary rescaling, acting on h in
    L^2((c, inf), weight dt).
    """

    kind: int
    f: SymbolicWarp
    g: SymbolicWarp
    deg: DegreePair
    lam: Fraction
    left: float

    @property
    def var(self):
        return self.f.var if not self.f.is_constant() else self.g.var

    @property
    def weight(self):
        if self.kind == 1:
            return self.g**Fraction(self.deg.m, 2)*self.f**Fraction(1, 2)
        return self.g**Fraction(self.deg.k, 2)*self.f**Fraction(-1, 2)

    def conjugator(self):
        """Multiplier taking h to the rescaled unknown w."""

        return self.weight**Fraction(1, 2)

    def apply(self, h, x, step):
        """Apply the operator to grid values h at the uniform nodes x."""

        potential = float(self.lam)*self.g(x)**-1*h
        if self.kind == 1:
            flux = self.g**Fraction(self.deg.m, 2)*self.f**Fraction(-1, 2)
            return potential - self.weight(x)**-1*_derivative(flux(x)*_derivative(h, step), step)
        inner = self.f**Fraction(-1, 2)*self.g**Fraction(self.deg.k, 2)
        outer = self.f**Fraction(-1, 2)*self.g**Fraction(-self.deg.k, 2)
        return potential - _derivative(outer(x)*_derivative(inner(x)*h, step), step)


def build_pretransform(metric, deg, lam, kind):
    if kind not in (1, 2):
        raise ValueError(f"pre-transform operators exist for types I and II, got {kind}")
    f, g = metric.warps()
    return PreTransformOperator(kind, f, g, deg, _check_lambda(lam), float(metric.c))


def _derivative(values, step):
    # fourth-order central differences; arrays vanish near both ends
    padded = numpy.pad(values, 2)
    return (padded[:-4] - 8*padded[1:-3] + 8*padded[3:-1] - padded[4:]) / (12*step)


def bump(center, radius):
    """Smooth function supported on [center - radius, center + radius]."""

    def sample(x):
        s = (numpy.asarray(x, dtype=numpy.float64) - center)/radius
        value = numpy.zeros_like(s)
        inside = numpy.abs(s) < 1
        value[inside] = numpy.exp(-1.0/(1.0 - s[inside]**2))
        return value

    return sample


def conjugation_check(pre, reduced, sample, support, step=1e-3):
    """
    Maximum grid residual between the rescaled pre-transform operator and the
    reduced operator applied to a compactly supported sample function.
    """

    if reduced.var != pre.var and not reduced.potential.is_constant():
        raise ValueError(f"reduced operator is in '{reduced.var}', pre-transform operator in '{pre.var}'")
    lo, hi = support
    if lo <= pre.left or hi <= lo:
        raise ValueError(f"sample support [{lo}, {hi}] must lie inside ({pre.left}, inf)")

    x = numpy.arange(lo - 8*step, hi + 8*step + step/2, step)
    h = numpy.asarray(sample(x), dtype=numpy.float64)
    scale = numpy.abs(h).max()
    if scale == 0:
        return 0.0
    edge = max(numpy.abs(h[:4]).max(), numpy.abs(h[-4:]).max())
    if edge > 1e-12*scale:
        raise ValueError("sample support touches the grid boundary")

    conjugator = pre.conjugator()(x)
    w = conjugator*h
    lhs = conjugator*pre.apply(h, x, step)
    rhs = -_derivative(reduced.principal_weight(x)*_derivative(w, step), step) + reduced.potential(x)*w
    return float(numpy.abs(lhs - rhs).max())


def conjugation_order(pre, reduced, sample, support, step=0.02):
    """Observed convergence order of the conjugation residual under step halving."""

    coarse = conjugation_check(pre, reduced, sample, support, step)
    fine = conjugation_check(pre, reduced, sample, support, step/2)
    if fine == 0:
        return math.inf
    return math.log2(coarse/fine)
