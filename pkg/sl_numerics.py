"""
Finite difference eigensolvers for the reduced operators on truncated
intervals (left, L) with Dirichlet conditions at both ends.

Scalar problems become symmetric tridiagonal matrices solved by bisection
(LAPACK stebz through scipy.linalg.eigh_tridiagonal); coupled problems are
interleaved into a symmetric band of half-width two and solved with
scipy.linalg.eig_banded, or densely for small matrices.  The bottom of the
essential spectrum is estimated either from the symbolic limit of the
potential or from a geometric sweep of truncation lengths.
"""

import math
from dataclasses import dataclass, field

import numpy
from scipy.linalg import eigh_tridiagonal, eig_banded, eigvalsh, ldl
from scipy.integrate import quad

from reduction import ScalarPotential, CoupledOperator

__version__ = '0.1'
__all__ = ['SCALAR', 'COUPLED', 'LIMINF', 'TRUNCATION', 'CONVERGED', 'EMPTY', 'INCONCLUSIVE',
           'Grid', 'choose_grid', 'evaluate', 'DiscretizedOperator', 'discretize', 'discretize_coupled',
           'lowest_eigenvalues', 'negative_inertia', 'EssBottomPolicy', 'EssBottomEstimate',
           'ess_bottom', 'discreteness_test', 'window_integral']


SCALAR = 'scalar'
COUPLED = 'coupled'

LIMINF = 'PotentialLiminf'
TRUNCATION = 'TruncationConvergence'

CONVERGED = 'converged'
EMPTY = 'empty'
INCONCLUSIVE = 'inconclusive'

#: Below this dimension coupled problems are solved densely
DENSE_LIMIT = 2000


@dataclass(frozen=True)
class Grid(object):
    """
    Uniform grid of npoints interior nodes on (left, right); both endpoints
    carry Dirichlet conditions and are not nodes.
    """

    left: float
    right: float
    npoints: int

    def __post_init__(self):
        object.__setattr__(self, 'left', float(self.left))
        object.__setattr__(self, 'right', float(self.right))
        if not self.left < self.right:
            raise ValueError(f"grid needs left < right, got [{self.left}, {self.right}]")
        if int(self.npoints) != self.npoints or self.npoints < 16:
            raise ValueError(f"grid needs at least 16 interior nodes, got {self.npoints}")
        object.__setattr__(self, 'npoints', int(self.npoints))

    @property
    def step(self):
        return (self.right - self.left)/(self.npoints + 1)

    @property
    def nodes(self):
        return self.left + self.step*numpy.arange(1, self.npoints + 1)

    @property
    def midpoints(self):
        """The npoints+1 cell midpoints, left of the first node to right of the last."""

        return self.left + self.step*(numpy.arange(self.npoints + 1) + 0.5)


def _expressions(op):
    if isinstance(op, CoupledOperator):
        return [op.v1.potential, op.v2.potential, op.coupling.potential, op.principal_weight]
    return [op.potential, op.principal_weight]


def _max_step(op, max_step=0.01):
    lengths = []
    for expr in _expressions(op):
        lengths.extend(expr.decay_lengths(op.left))
    if lengths:
        return min(max_step, min(lengths)/20.0)
    return max_step


def choose_grid(op, right, max_step=0.01):
    """
    Grid on (op.left, right) fine enough to resolve the variation of the
    potential: step <= min(max_step, shortest decay length / 20).
    """

    step = _max_step(op, max_step)
    npoints = max(16, int(math.ceil((right - op.left)/step)) - 1)
    return Grid(op.left, right, npoints)


def evaluate(expr, x):
    """Sample an expression on x, turning overflow into OverflowError."""

    with numpy.errstate(over='raise', invalid='raise'):
        try:
            values = numpy.asarray(expr(x), dtype=numpy.float64)*numpy.ones_like(x)
        except FloatingPointError as error:
            raise OverflowError(f"'{expr}' overflows on [{x[0]:.6g}, {x[-1]:.6g}]") from error
    if not numpy.all(numpy.isfinite(values)):
        raise OverflowError(f"'{expr}' is not finite on [{x[0]:.6g}, {x[-1]:.6g}]")
    return values


@dataclass(frozen=True)
class DiscretizedOperator(object):
    """
    Finite difference matrix of a scalar or coupled problem.  The coupled
    matrix acts on the interleaved unknowns (w1_0, w2_0, w1_1, w2_1, ...).
    """

    kind: str
    grid: Grid
    diagonal: numpy.ndarray
    offdiag: numpy.ndarray
    diagonal2: numpy.ndarray = None
    offdiag2: numpy.ndarray = None
    coupling_diag: numpy.ndarray = None
    symmetric_block: bool = field(default=False)

    @property
    def dimension(self):
        if self.kind == COUPLED:
            return 2*self.grid.npoints
        return self.grid.npoints

    def tridiagonal(self):
        if self.kind != SCALAR:
            raise ValueError("only scalar operators are tridiagonal")
        return self.diagonal, self.offdiag

    def banded(self):
        """Upper band storage (three rows) of the interleaved coupled matrix."""

        if self.kind != COUPLED:
            raise ValueError("band storage is used for coupled operators")
        size = self.dimension
        band = numpy.zeros((3, size))
        band[2, 0::2] = self.diagonal
        band[2, 1::2] = self.diagonal2
        band[1, 1::2] = self.coupling_diag
        band[0, 2::2] = self.offdiag
        band[0, 3::2] = self.offdiag2
        return band

    def dense(self):
        if self.kind == SCALAR:
            return numpy.diag(self.diagonal) + numpy.diag(self.offdiag, 1) + numpy.diag(self.offdiag, -1)
        size = self.dimension
        matrix = numpy.zeros((size, size))
        band = self.banded()
        for offset in range(3):
            entries = band[2 - offset, offset:]
            matrix += numpy.diag(entries, offset)
            if offset:
                matrix += numpy.diag(entries, -offset)
        return matrix


def _stiffness(principal_weight, grid):
    weights = evaluate(principal_weight, grid.midpoints)
    if numpy.any(weights <= 0):
        raise ValueError("principal weight must be positive on the grid")
    h2 = grid.step**2
    diagonal = (weights[:-1] + weights[1:])/h2
    offdiag = -weights[1:-1]/h2
    return diagonal, offdiag


def discretize(pot, grid):
    """
    Three-point discretization of -(p w')' + V w with p taken at cell
    midpoints; for p = 1 the diagonal is 2/step^2 + V(x_i).
    """

    diagonal, offdiag = _stiffness(pot.principal_weight, grid)
    diagonal = diagonal + evaluate(pot.potential, grid.nodes)
    return DiscretizedOperator(SCALAR, grid, diagonal, offdiag)


def discretize_coupled(op, grid):
    """Block tridiagonal discretization of a coupled operator."""

    diagonal, offdiag = _stiffness(op.principal_weight, grid)
    nodes = grid.nodes
    d1 = diagonal + evaluate(op.v1.potential, nodes)
    d2 = diagonal + evaluate(op.v2.potential, nodes)
    coupling = evaluate(op.coupling.potential, nodes)
    return DiscretizedOperator(COUPLED, grid, d1, offdiag, d2, offdiag.copy(), coupling,
                               symmetric_block=True)


def lowest_eigenvalues(opm, count):
    """Ascending array of the count smallest eigenvalues of the matrix."""

    count = int(count)
    if not 1 <= count <= opm.dimension:
        raise ValueError(f"requested {count} eigenvalues of a {opm.dimension}-dimensional operator")
    if opm.kind == SCALAR:
        diagonal, offdiag = opm.tridiagonal()
        values = eigh_tridiagonal(diagonal, offdiag, eigvals_only=True,
                                  select='i', select_range=(0, count - 1))
    elif opm.dimension < DENSE_LIMIT:
        values = eigvalsh(opm.dense(), subset_by_index=[0, count - 1])
    else:
        values = eig_banded(opm.banded(), eigvals_only=True, select='i', select_range=(0, count - 1))
    return numpy.sort(numpy.asarray(values))


def negative_inertia(opm, sigma):
    """
    Number of eigenvalues below sigma, from the pivots of the LDL^T
    factorization of A - sigma*I.
    """

    if opm.kind == SCALAR:
        count = 0
        pivot = 1.0
        tiny = numpy.finfo(float).tiny
        for i, value in enumerate(opm.diagonal):
            coupling = opm.offdiag[i - 1]**2/pivot if i > 0 else 0.0
            pivot = value - sigma - coupling
            if pivot == 0:
                pivot = -tiny
            if pivot < 0:
                count += 1
        return count
    _, block, _ = ldl(opm.dense() - sigma*numpy.eye(opm.dimension))
    return int(numpy.sum(numpy.linalg.eigvalsh(block) < 0))


@dataclass(frozen=True)
class EssBottomPolicy(object):
    """
    How to estimate the bottom of the essential spectrum.  The truncation
    sweep uses L_j = left + 2^j*span for j = 0..levels-1 and tracks the
    k-th eigenvalue.
    """

    method: str = TRUNCATION
    k: int = 1
    span: float = 2.0
    levels: int = 7
    max_step: float = 0.01
    tol: float = 1e-4
    vmax: float = 1e12
    max_points: int = 400000

    def __post_init__(self):
        if self.method not in (LIMINF, TRUNCATION):
            raise ValueError(f"unknown essential spectrum method '{self.method}'")
        if self.k < 1 or self.levels < 1 or self.span <= 0:
            raise ValueError("eigenvalue index, level count and span must be positive")


@dataclass(frozen=True)
class EssBottomEstimate(object):
    value: float
    method: str
    status: str
    diagnostics: tuple = ()
    spread: float = None
    monotone: bool = True

    @property
    def is_empty(self):
        return self.status == EMPTY


def _coupled_grows(op):
    w = op.coupling.potential
    dominant = w.dominant_term()
    sign = 0 if dominant is None else (1 if dominant[0] > 0 else -1)
    return (op.v1.potential - sign*w).grows() and (op.v2.potential - sign*w).grows()


def _grows(op):
    if isinstance(op, CoupledOperator):
        return _coupled_grows(op)
    return op.potential.grows()


def _liminf(op):
    if isinstance(op, CoupledOperator):
        if not op.principal_weight.is_constant():
            raise ValueError("symbolic limit needs a -w'' principal part")
        if _coupled_grows(op):
            return math.inf
        if op.coupling.potential.limit() != 0:
            raise ValueError(f"no closed-form limit for the non-decaying coupling {op.coupling.potential}")
        return min(op.v1.potential.limit(), op.v2.potential.limit())
    if not op.is_schrodinger:
        raise ValueError("symbolic limit needs a -w'' principal part; use the closed or r-variable form")
    value = op.potential.limit()
    if value == -math.inf:
        raise ValueError(f"potential {op.potential} is unbounded below")
    return value


def _extrapolate(lengths, values):
    """Fit A + B/l^2 + C/l^3 through three points and return A."""

    lengths = numpy.asarray(lengths, dtype=numpy.float64)
    system = numpy.column_stack([numpy.ones(3), lengths**-2, lengths**-3])
    return float(numpy.linalg.solve(system, numpy.asarray(values, dtype=numpy.float64))[0])


def _discretize_any(op, grid):
    if isinstance(op, CoupledOperator):
        return discretize_coupled(op, grid)
    return discretize(op, grid)


def _peak(op, right):
    peak = 0.0
    for expr in _expressions(op)[:-1]:
        with numpy.errstate(over='ignore', invalid='ignore'):
            value = abs(float(expr(numpy.array([right]))[0]))
        if not math.isfinite(value):
            return math.inf
        peak = max(peak, value)
    return peak


def _sweep(op, policy):
    step = _max_step(op, policy.max_step)
    cells = int(math.ceil(policy.span/step))
    step = policy.span/cells
    table = []
    for level in range(policy.levels):
        length = policy.span*2**level
        right = op.left + length
        npoints = cells*2**level - 1
        if npoints > policy.max_points or _peak(op, right) > policy.vmax:
            break
        grid = Grid(op.left, right, max(16, npoints))
        opm = _discretize_any(op, grid)
        if opm.dimension < policy.k:
            continue
        value = float(lowest_eigenvalues(opm, policy.k)[-1])
        table.append((right, grid.npoints, value))
    return table


def ess_bottom(op, policy=None):
    """
    Estimate the bottom of the essential spectrum of a scalar or coupled
    reduced operator.
    """

    if policy is None:
        policy = EssBottomPolicy()
    if not isinstance(op, (ScalarPotential, CoupledOperator)):
        raise TypeError(f"cannot estimate the spectrum of {type(op).__name__}")

    if policy.method == LIMINF:
        value = _liminf(op)
        if value == math.inf:
            return EssBottomEstimate(math.inf, LIMINF, EMPTY)
        return EssBottomEstimate(value, LIMINF, CONVERGED)

    table = _sweep(op, policy)
    values = [row[2] for row in table]
    monotone = all(later <= earlier + 1e-10*(1 + abs(earlier)) for earlier, later in zip(values, values[1:]))
    if _grows(op):
        rows = tuple((right, npoints, value, None) for right, npoints, value in table)
        return EssBottomEstimate(math.inf, TRUNCATION, EMPTY, rows, None, monotone)

    # lengths in r are measured from r = 0, where the potentials are homogeneous
    origin = 0.0 if op.var == 'r' else float(op.left)
    extrapolated = [None]*len(table)
    for i in range(2, len(table)):
        window = table[i-2:i+1]
        extrapolated[i] = _extrapolate([row[0] - origin for row in window], [row[2] for row in window])
    rows = tuple(row + (extra,) for row, extra in zip(table, extrapolated))
    finals = [value for value in extrapolated if value is not None][-3:]
    if len(finals) < 3:
        value = values[-1] if values else math.nan
        return EssBottomEstimate(value, TRUNCATION, INCONCLUSIVE, rows, None, monotone)
    value = finals[-1]
    spread = max(finals) - min(finals)
    status = CONVERGED if spread < policy.tol*(1 + abs(value)) else INCONCLUSIVE
    return EssBottomEstimate(value, TRUNCATION, status, rows, spread, monotone)


def discreteness_test(pot, h_samples=(0.25, 0.5, 0.75)):
    """
    True when the spectrum of -w'' + V is purely discrete, i.e. when the
    window integrals of V over [t, t+h] diverge for every h in (0, 1).
    Decided from the dominant term of the symbolic potential.
    """

    for h in h_samples:
        if not 0 < h < 1:
            raise ValueError(f"window lengths must lie in (0, 1), got {h}")
    if not pot.is_schrodinger:
        raise ValueError("discreteness criterion needs a -w'' principal part")
    return pot.potential.grows()


def window_integral(pot, h, t):
    """Numerical value of the integral of V over [t, t+h]."""

    value, _ = quad(lambda s: float(pot.potential(s)), t, t + h)
    return value
