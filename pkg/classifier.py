"""
Closed-form essential spectrum of the Hodge Laplacian on p-forms of an end
(c, +infinity) x N with the metric exp(-2(a+1)t) dt^2 + exp(-2bt) g_N.

The decision procedure dispatches on the sign of b, on whether the end is
cylindrical-like (a = -1) or steep (a < -1) and, for growing cross sections,
on which of the Betti numbers b_p(N), b_{p-1}(N) vanish.  Every explain_*
function also returns a short branch identifier naming the rule that fired.
"""

import enum
from fractions import Fraction

from spectral_model import (ZeroStatus, SpectrumDescription, ray, empty_spectrum, union,
                            sphere_boundary)

__version__ = '0.1'
__all__ = ['HarmonicDimension', 'explain_general', 'classify_general', 'explain_rotsym',
           'classify_rotsym', 'harmonic_classify', 'component_spectra', 'component_union',
           'operator_spectrum', 'degree_constants', 'closed_eigenvalues', 'lambda_bar',
           'BRANCHES']


#: Branch identifiers returned by the explain_* functions and the rule each one applies
BRANCHES = {
    'b=0:boundary-gap': "b = 0: [lambda_bar, inf) with lambda_bar the bottom of the boundary Laplacian "
                        "on p-forms and (p-1)-forms",
    'a=-1,b<0:minimum-ray': "a = -1, b < 0: [min(((n-2p-1)/2)^2, ((n-2p+1)/2)^2) b^2, inf)",
    'a=-1,b<0:middle-degree': "a = -1, b < 0, 2p = n +- 1: [0, inf)",
    'a=-1,b>0:no-cohomology': "a = -1, b > 0, b_p(N) = b_(p-1)(N) = 0: empty away from 0",
    'a=-1,b>0:betti-p': "a = -1, b > 0, b_p(N) > 0 = b_(p-1)(N): [((n-2p-1)/2)^2 b^2, inf)",
    'a=-1,b>0:betti-p-1': "a = -1, b > 0, b_(p-1)(N) > 0 = b_p(N): [((n-2p+1)/2)^2 b^2, inf)",
    'a=-1,b>0:betti-both': "a = -1, b > 0, b_p(N) > 0 and b_(p-1)(N) > 0: "
                           "[min(((n-2p-1)/2)^2, ((n-2p+1)/2)^2) b^2, inf)",
    'a<-1,b<0:half-line': "a < -1, b < 0: [0, inf)",
    'a<-1,b>0:no-cohomology': "a < -1, b > 0, b_p(N) = b_(p-1)(N) = 0: empty away from 0",
    'a<-1,b>0:cohomology': "a < -1, b > 0, b_p(N) + b_(p-1)(N) > 0: [0, inf)",
    'sphere:b=0:boundary-gap': "round sphere, b = 0: [lambda_bar, inf)",
    'sphere:a=-1,b<0:half-dimension': "round sphere, a = -1, b < 0, 2p = n: {0} U [b^2/4, inf)",
    'sphere:a=-1,b<0:middle-degree': "round sphere, a = -1, b < 0, 2p = n +- 1: [0, inf)",
    'sphere:a=-1,b<0:minimum-ray': "round sphere, a = -1, b < 0, otherwise: "
                                   "[min(((n-2p-1)/2)^2, ((n-2p+1)/2)^2) b^2, inf)",
    'sphere:a=-1,b>0:middle-empty': "round sphere, a = -1, b > 0, 1 < p < n-1: empty",
    'sphere:a=-1,b>0:extreme-degree': "round sphere, a = -1, b > 0, p in {0, 1, n-1, n}: "
                                      "[(n-1)^2 b^2/4, inf)",
    'sphere:a<-1,b<0:half-line': "round sphere, a < -1, b < 0: [0, inf)",
    'sphere:a<-1,b>0:middle-empty': "round sphere, a < -1, b > 0, 1 < p < n-1: empty",
    'sphere:a<-1,b>0:extreme-degree': "round sphere, a < -1, b > 0, p in {0, 1, n-1, n}: [0, inf)",
}


class HarmonicDimension(enum.Enum):
    ZERO = 'zero'
    ONE_DIMENSIONAL = 'one-dimensional'
    INFINITE_DIMENSIONAL = 'infinite-dimensional'


def _check_metric(metric):
    if not metric.is_exponential:
        raise ValueError("closed-form classification needs the exponential warp family")
    if metric.a > -1:
        raise ValueError(f"incomplete metric: a = {metric.a} > -1")


def _check_boundary(deg, boundary):
    if boundary.n != deg.n:
        raise ValueError(f"boundary data is for n = {boundary.n}, degree pair has n = {deg.n}")


def degree_constants(deg):
    """
    ((n-2p-1)/2)^2 and ((n-2p+1)/2)^2, the coefficients of b^2 in the type I
    and type II thresholds of an end with a = -1.
    """

    return Fraction(deg.m, 2)**2, Fraction(deg.k, 2)**2


def _available(deg, first, second):
    values = []
    if deg.has_type1:
        values.append(first)
    if deg.has_type2:
        values.append(second)
    return values


def closed_eigenvalues(boundary, q):
    """
    Eigenvalues of the closed q-forms of the boundary: zero when b_q > 0 and
    the positive coclosed (q-1)-eigenvalues carried over by d.
    """

    values = [Fraction(0)] if boundary.betti_number(q) > 0 else []
    if q >= 1:
        values.extend(value for value in boundary.eigenvalues(q - 1) if value > 0)
    return values


def lambda_bar(deg, boundary):
    """
    Bottom of the boundary spectrum seen by the type I, II and III operators,
    i.e. the smallest eigenvalue of the Laplacian on p- and (p-1)-forms.
    """

    values = []
    if deg.has_type1:
        values.extend(boundary.eigenvalues(deg.p))
    if deg.has_type2:
        values.extend(closed_eigenvalues(boundary, deg.p - 1))
    if deg.has_type3:
        values.extend(value for value in boundary.eigenvalues(deg.p - 1) if value > 0)
    if not values:
        raise ValueError(f"no boundary eigenvalues supplied for degrees {deg.p - 1} and {deg.p}")
    return min(values)


def _cohomology(deg, boundary):
    bp = boundary.betti_number(deg.p) if deg.has_type1 else 0
    bq = boundary.betti_number(deg.p - 1) if deg.has_type2 else 0
    return bp, bq


def _gap(deg, boundary):
    value = lambda_bar(deg, boundary)
    status = ZeroStatus.INCLUDED if value == 0 else ZeroStatus.EXCLUDED
    return SpectrumDescription((value,), (), status)


def explain_general(metric, deg, boundary):
    """Essential spectrum for an arbitrary compact boundary plus the branch used."""

    _check_metric(metric)
    _check_boundary(deg, boundary)
    a, b = metric.a, metric.b
    first, second = degree_constants(deg)

    if b == 0:
        return _gap(deg, boundary), 'b=0:boundary-gap'

    if a == -1 and b < 0:
        start = min(_available(deg, first, second))*b**2
        if start == 0:
            return ray(0), 'a=-1,b<0:middle-degree'
        return SpectrumDescription((start,), (), ZeroStatus.UNKNOWN), 'a=-1,b<0:minimum-ray'

    if a == -1:
        bp, bq = _cohomology(deg, boundary)
        if bp == 0 and bq == 0:
            return empty_spectrum(ZeroStatus.UNKNOWN), 'a=-1,b>0:no-cohomology'
        if bq == 0:
            start, branch = first*b**2, 'a=-1,b>0:betti-p'
        elif bp == 0:
            start, branch = second*b**2, 'a=-1,b>0:betti-p-1'
        else:
            start, branch = min(first, second)*b**2, 'a=-1,b>0:betti-both'
        return SpectrumDescription((start,), (), ZeroStatus.UNKNOWN), branch

    if b < 0:
        return ray(0), 'a<-1,b<0:half-line'

    bp, bq = _cohomology(deg, boundary)
    if bp == 0 and bq == 0:
        return empty_spectrum(ZeroStatus.UNKNOWN), 'a<-1,b>0:no-cohomology'
    return ray(0), 'a<-1,b>0:cohomology'


def classify_general(metric, deg, boundary):
    return explain_general(metric, deg, boundary)[0]


def explain_rotsym(metric, deg, boundary=None):
    """
    Essential spectrum when the end is the complement of a compact set in a
    rotationally symmetric model, so that N is the round sphere.  The point 0
    is always resolved.
    """

    _check_metric(metric)
    if boundary is None:
        boundary = sphere_boundary(deg.n)
    if not boundary.is_sphere:
        raise ValueError("rotationally symmetric classification needs a round sphere boundary")
    _check_boundary(deg, boundary)
    a, b, n, p = metric.a, metric.b, deg.n, deg.p
    middle = 1 < p < n - 1

    if b == 0:
        return _gap(deg, boundary), 'sphere:b=0:boundary-gap'

    if a == -1 and b < 0:
        if 2*p == n:
            return SpectrumDescription((b**2/4,), (0,), ZeroStatus.INCLUDED), 'sphere:a=-1,b<0:half-dimension'
        start = min(_available(deg, *degree_constants(deg)))*b**2
        if start == 0:
            return ray(0), 'sphere:a=-1,b<0:middle-degree'
        return ray(start), 'sphere:a=-1,b<0:minimum-ray'

    if a == -1:
        if middle:
            return empty_spectrum(), 'sphere:a=-1,b>0:middle-empty'
        return ray(Fraction(n - 1, 2)**2*b**2), 'sphere:a=-1,b>0:extreme-degree'

    if b < 0:
        return ray(0), 'sphere:a<-1,b<0:half-line'
    if middle:
        return empty_spectrum(), 'sphere:a<-1,b>0:middle-empty'
    return ray(0), 'sphere:a<-1,b>0:extreme-degree'


def classify_rotsym(metric, deg, boundary=None):
    return explain_rotsym(metric, deg, boundary)[0]


def harmonic_classify(metric, deg):
    """
    Dimension of the space of L^2 harmonic p-forms of the rotationally
    symmetric model, from the integrability of f^(1/2) g^((n-1)/2) (degrees
    0 and n) and of f^(1/2) g^(-1/2) (degree n/2).
    """

    f, g = metric.warps()
    n, p = deg.n, deg.p
    if p in (0, n):
        volume = f**Fraction(1, 2)*g**Fraction(n - 1, 2)
        if volume.integrable_at_infinity():
            return HarmonicDimension.ONE_DIMENSIONAL
        return HarmonicDimension.ZERO
    if 2*p == n:
        if (f**Fraction(1, 2)*g**Fraction(-1, 2)).integrable_at_infinity():
            return HarmonicDimension.INFINITE_DIMENSIONAL
    return HarmonicDimension.ZERO


def component_spectra(metric, deg, boundary):
    """
    Essential spectra of the type I, II and III parts of the Laplacian, None
    for a part that does not occur in degree p.  The union agrees with
    classify_general away from 0.
    """

    _check_metric(metric)
    _check_boundary(deg, boundary)
    a, b = metric.a, metric.b
    first, second = degree_constants(deg)

    if b == 0:
        type1 = ray(min(boundary.eigenvalues(deg.p))) if deg.has_type1 else None
        type2 = None
        if deg.has_type2:
            closed = closed_eigenvalues(boundary, deg.p - 1)
            type2 = ray(min(closed)) if closed else empty_spectrum()
        type3 = None
        if deg.has_type3:
            positive = [value for value in boundary.eigenvalues(deg.p - 1) if value > 0]
            type3 = ray(min(positive)) if positive else empty_spectrum()
    elif a == -1 and b < 0:
        type1 = ray(first*b**2) if deg.has_type1 else None
        type2 = ray(second*b**2) if deg.has_type2 else None
        type3 = None
        if deg.has_type3:
            type3 = SpectrumDescription((min(first, second)*b**2,), (), ZeroStatus.UNKNOWN)
    elif b < 0:
        type1 = ray(0) if deg.has_type1 else None
        type2 = ray(0) if deg.has_type2 else None
        type3 = ray(0) if deg.has_type3 else None
    else:
        bp, bq = _cohomology(deg, boundary)
        scale = b**2 if a == -1 else 0
        type1 = None
        if deg.has_type1:
            type1 = ray(first*scale) if bp > 0 else empty_spectrum()
        type2 = None
        if deg.has_type2:
            type2 = ray(second*scale) if bq > 0 else empty_spectrum()
        type3 = empty_spectrum(ZeroStatus.UNKNOWN) if deg.has_type3 else None
    return type1, type2, type3


def component_union(components):
    result = empty_spectrum()
    for part in components:
        if part is not None:
            result = union(result, part)
    return result


def operator_spectrum(metric, deg, kind, lam):
    """
    Essential spectrum of the single reduced operator of the given type for
    the boundary eigenvalue lam.
    """

    _check_metric(metric)
    if kind not in (1, 2, 3):
        raise ValueError(f"operator type must be 1, 2 or 3, got {kind}")
    if kind == 3 and lam == 0:
        raise ValueError("type III operators exist only for nonzero boundary eigenvalues")
    a, b = metric.a, metric.b
    first, second = degree_constants(deg)
    if b == 0:
        return ray(lam)
    if b > 0 and (lam > 0 or kind == 3):
        return empty_spectrum()
    if a < -1:
        return ray(0)
    if kind == 1:
        return ray(first*b**2)
    if kind == 2:
        return ray(second*b**2)
    return ray(min(first, second)*b**2)
