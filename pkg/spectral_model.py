"""
Core types shared by the reduction, classification and numerics modules:
the warped end metric, the data of the boundary manifold, degree pairs and
descriptions of essential spectra as a half-line plus isolated points.
"""

import enum
from fractions import Fraction
from dataclasses import dataclass, field

from symbolic_warp import SymbolicWarp, exact

__version__ = '0.1'
__all__ = ['FLOAT_TOLERANCE', 'EXPONENTIAL', 'GENERAL', 'ZeroStatus', 'WarpedMetric',
           'BoundaryData', 'sphere_boundary', 'DegreePair', 'SpectrumDescription',
           'ray', 'empty_spectrum', 'union', 'format_value', 'parse_value']


#: Comparison tolerance for floating point ray starts and points
FLOAT_TOLERANCE = 1e-12

EXPONENTIAL = 'exponential'
GENERAL = 'general'


class ZeroStatus(enum.Enum):
    INCLUDED = 'included'
    EXCLUDED = 'excluded'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class WarpedMetric(object):
    """
    Metric f(t) dt^2 + g(t) g_N on (c, +infinity) x N.  The exponential
    family uses f = exp(-2(a+1)t) and g = exp(-2bt); the general family
    carries single-term SymbolicWarp expressions f and g.
    """

    a: Fraction = Fraction(-1)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(1)
    warp_family: str = EXPONENTIAL
    f: SymbolicWarp = None
    g: SymbolicWarp = None

    def __post_init__(self):
        for name in ('a', 'b', 'c'):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.a > -1:
            raise ValueError(f"incomplete metric: a = {self.a} > -1, the end is complete only for a <= -1")
        if self.c <= 0:
            raise ValueError(f"left endpoint c must be positive, got {self.c}")
        if self.warp_family == EXPONENTIAL:
            object.__setattr__(self, 'f', SymbolicWarp.monomial(1, 0, -2*(self.a + 1)))
            object.__setattr__(self, 'g', SymbolicWarp.monomial(1, 0, -2*self.b))
        elif self.warp_family == GENERAL:
            if self.f is None or self.g is None:
                raise ValueError("general warp family needs both f and g")
            for name in ('f', 'g'):
                warp = getattr(self, name)
                if not warp.positive_single_term():
                    raise ValueError(f"{name} = {warp} must be a single term with positive coefficient")
            if self.f.var != self.g.var and not (self.f.is_constant() or self.g.is_constant()):
                raise ValueError("f and g must share a variable")
        else:
            raise ValueError(f"unknown warp family '{self.warp_family}'")

    @property
    def is_exponential(self):
        return self.warp_family == EXPONENTIAL

    @property
    def var(self):
        if self.f.is_constant():
            return self.g.var
        return self.f.var

    def warps(self):
        """Return the (f, g) pair in the metric's own variable."""

        return self.f, self.g

    def describe(self):
        if self.is_exponential:
            return f"a={self.a}, b={self.b}, c={self.c}"
        return f"f={self.f}, g={self.g}, c={self.c}"


@dataclass(frozen=True)
class DegreePair(object):
    n: int
    p: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.p) != self.p:
            raise ValueError(f"degree pair must be integers, got n={self.n}, p={self.p}")
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'p', int(self.p))
        if self.n < 2:
            raise ValueError(f"dimension n must be at least 2, got {self.n}")
        if not 0 <= self.p <= self.n:
            raise ValueError(f"form degree p must satisfy 0 <= p <= {self.n}, got {self.p}")

    @property
    def m(self):
        """n - 2p - 1, the tangential exponent"""
        return self.n - 2*self.p - 1

    @property
    def k(self):
        """n - 2p + 1, the normal exponent"""
        return self.n - 2*self.p + 1

    @property
    def has_type1(self):
        return self.p <= self.n - 1

    @property
    def has_type2(self):
        return self.p >= 1

    @property
    def has_type3(self):
        return 1 <= self.p <= self.n - 1

    def dual(self):
        return DegreePair(self.n, self.n - self.p)


@dataclass(frozen=True)
class BoundaryData(object):
    """
    Topological and spectral data of the cross section N (dimension n-1).
    eigenvalues_coclosed maps a degree q to the ascending coclosed
    eigenvalues of the Hodge Laplacian on q-forms of N.
    """

    n: int
    betti: tuple
    eigenvalues_coclosed: dict = None
    is_sphere: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension n must be at least 2, got {self.n}")
        betti = tuple(int(value) for value in self.betti)
        if len(betti) != self.n:
            raise ValueError(f"expected {self.n} Betti numbers (q = 0..{self.n-1}), got {len(betti)}")
        if any(value < 0 for value in betti):
            raise ValueError("Betti numbers must be nonnegative")
        object.__setattr__(self, 'betti', betti)
        if self.eigenvalues_coclosed is not None:
            lists = {}
            for q, values in self.eigenvalues_coclosed.items():
                q = int(q)
                if not 0 <= q < self.n:
                    raise ValueError(f"eigenvalue degree {q} outside 0..{self.n-1}")
                values = tuple(exact(value) for value in values)
                if any(value < 0 for value in values):
                    raise ValueError(f"negative eigenvalue in degree {q}")
                if list(values) != sorted(values):
                    raise ValueError(f"eigenvalues of degree {q} are not ascending")
                if (0 in values) != (betti[q] > 0):
                    raise ValueError(f"degree {q}: 0 must be an eigenvalue exactly when b_{q} > 0")
                lists[q] = values
            object.__setattr__(self, 'eigenvalues_coclosed', lists)
        if self.is_sphere:
            expected = tuple(1 if q in (0, self.n - 1) else 0 for q in range(self.n))
            if betti != expected:
                raise ValueError(f"sphere S^{self.n-1} has Betti numbers {expected}, got {betti}")

    def betti_number(self, q):
        if 0 <= q < self.n:
            return self.betti[q]
        return 0

    def eigenvalues(self, q):
        """Coclosed eigenvalue list for degree q; ValueError when not supplied."""

        if self.eigenvalues_coclosed is None or q not in self.eigenvalues_coclosed:
            raise ValueError(f"boundary eigenvalues of degree {q} are required but were not supplied")
        return self.eigenvalues_coclosed[q]


def sphere_boundary(n, count=8):
    """
    BoundaryData for the round unit sphere S^{n-1}, with the first count
    coclosed eigenvalues in each degree.
    """

    dim = n - 1
    betti = [1 if q in (0, dim) else 0 for q in range(n)]
    lists = {}
    for q in range(n):
        if q == 0:
            values = [k*(k + dim - 1) for k in range(count)]
        elif q == dim:
            values = [0]
        else:
            values = [(k + q)*(k + dim - q - 1) for k in range(1, count + 1)]
        lists[q] = sorted(values)
    return BoundaryData(n, tuple(betti), lists, is_sphere=True)


def _close(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(float(x) - float(y)) <= FLOAT_TOLERANCE


def _number(value):
    if isinstance(value, bool):
        raise TypeError("boolean is not a spectral value")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    return float(value)


@dataclass(frozen=True)
class SpectrumDescription(object):
    """
    Essential spectrum as at most one half-line [start, +inf) plus isolated
    points below it, with a three-state flag for the point 0.  Instances are
    always in normal form.
    """

    rays: tuple = ()
    points: tuple = ()
    zero_status: ZeroStatus = ZeroStatus.EXCLUDED
    empty: bool = field(init=False, default=True)

    def __post_init__(self):
        rays = [_number(value) for value in self.rays]
        points = [_number(value) for value in self.points]
        if any(value < -FLOAT_TOLERANCE for value in rays + points):
            raise ValueError("spectral values must be nonnegative")
        status = ZeroStatus(self.zero_status)

        start = None
        if rays:
            start = min(rays)
            rays = [start]

        if status == ZeroStatus.INCLUDED and not any(_close(v, 0) for v in rays + points):
            points.append(Fraction(0))

        kept = []
        for value in sorted(points):
            if start is not None and (value > start or _close(value, start)):
                continue
            if any(_close(value, other) for other in kept):
                continue
            kept.append(value)

        if any(_close(v, 0) for v in rays + kept):
            status = ZeroStatus.INCLUDED

        object.__setattr__(self, 'rays', tuple(rays))
        object.__setattr__(self, 'points', tuple(kept))
        object.__setattr__(self, 'zero_status', status)
        object.__setattr__(self, 'empty', not rays and not kept)

    @property
    def bottom(self):
        """Smallest element of the set, or None when empty."""

        values = list(self.rays) + list(self.points)
        if not values:
            return None
        return min(values)

    @property
    def ray_start(self):
        return self.rays[0] if self.rays else None

    def normalized(self):
        return SpectrumDescription(self.rays, self.points, self.zero_status)

    def same_set(self, other):
        """Equality up to zero_status."""

        if len(self.rays) != len(other.rays) or len(self.points) != len(other.points):
            return False
        pairs = list(zip(self.rays, other.rays)) + list(zip(self.points, other.points))
        return all(_close(x, y) for x, y in pairs)

    def without_zero(self):
        """The set with the point 0 removed (used to compare results that only fix the spectrum away from 0)."""

        points = [value for value in self.points if not _close(value, 0)]
        return SpectrumDescription(self.rays, points, ZeroStatus.UNKNOWN)

    def as_dict(self):
        return {'rays': [format_value(value) for value in self.rays],
                'points': [format_value(value) for value in self.points],
                'zero_status': self.zero_status.value,
                'empty': self.empty}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(parse_value(value) for value in data['rays']),
                   tuple(parse_value(value) for value in data['points']),
                   ZeroStatus(data['zero_status']))

    def __str__(self):
        if self.empty:
            text = 'empty'
        else:
            parts = []
            if self.points:
                parts.append('{' + ', '.join(format_value(value) for value in self.points) + '}')
            if self.rays:
                parts.append(f"[{format_value(self.rays[0])}, inf)")
            text = ' U '.join(parts)
        return f"{text} (zero {self.zero_status.value})"


def format_value(value):
    """
    Exact string for a spectral value: fractions as 'p/q', floats by repr
    (which always carries a '.', an exponent or 'inf').
    """

    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def parse_value(text):
    """Inverse of format_value."""

    text = str(text).strip()
    if any(marker in text.lower() for marker in ('.', 'e', 'inf', 'nan')):
        return float(text)
    return Fraction(text)


def ray(start):
    """The single half-line [start, +inf)."""

    start = _number(start)
    if start < 0:
        raise ValueError(f"ray start must be nonnegative, got {start}")
    return SpectrumDescription((start,), (), ZeroStatus.EXCLUDED)


def empty_spectrum(zero_status=ZeroStatus.EXCLUDED):
    return SpectrumDescription((), (), zero_status)


def _combine_status(first, second):
    if ZeroStatus.INCLUDED in (first, second):
        return ZeroStatus.INCLUDED
    if ZeroStatus.UNKNOWN in (first, second):
        return ZeroStatus.UNKNOWN
    return ZeroStatus.EXCLUDED


def union(spec_a, spec_b):
    """Union of two descriptions, returned in normal form."""

    return SpectrumDescription(spec_a.rays + spec_b.rays, spec_a.points + spec_b.points,
                               _combine_status(spec_a.zero_status, spec_b.zero_status))
