"""
Unit tests for the symbolic_warp expression family.
"""

import os
import sys
import math
import unittest
from fractions import Fraction

import numpy

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))
from symbolic_warp import SymbolicWarp, exact, rational_power

run_sympy_tests = False
try:
    import sympy
    run_sympy_tests = True
except ImportError:
    pass


__version__  = "0.1"


class symbolic_warp_tests(unittest.TestCase):
    """A unittest.TestCase collection of unit tests for SymbolicWarp."""

    def test_exact(self):
        """Conversion of numbers to fractions."""

        self.assertEqual(exact(-0.5), Fraction(-1, 2))
        self.assertEqual(exact('3/4'), Fraction(3, 4))
        self.assertEqual(exact(0.1), Fraction(1, 10))
        self.assertRaises(ValueError, exact, math.inf)
        self.assertRaises(TypeError, exact, True)

    def test_rational_power(self):
        """Exact roots where they exist, floats otherwise."""

        self.assertEqual(rational_power(Fraction(4, 9), Fraction(1, 2)), Fraction(2, 3))
        self.assertEqual(rational_power(8, Fraction(-2, 3)), Fraction(1, 4))
        self.assertAlmostEqual(rational_power(2, Fraction(1, 2)), math.sqrt(2), 14)
        self.assertRaises(ValueError, rational_power, -4, Fraction(1, 2))

    def test_arithmetic(self):
        """Sums, products and powers of exponential terms."""

        f = SymbolicWarp.monomial(1, 0, -2)
        self.assertEqual(f*f, SymbolicWarp.monomial(1, 0, -4))
        self.assertEqual(f**Fraction(1, 2), SymbolicWarp.monomial(1, 0, -1))
        self.assertEqual(f**-1, SymbolicWarp.monomial(1, 0, 2))
        self.assertTrue((f - f).is_zero())

        g = SymbolicWarp.constant(1) + f
        self.assertEqual(len(g), 2)
        self.assertEqual((g*g).coefficient(0, -2), 2)
        self.assertEqual((g/2).constant_term(), Fraction(1, 2))
        self.assertRaises(ZeroDivisionError, g.__truediv__, 0)
        self.assertRaises(ValueError, g.__pow__, Fraction(1, 2))

    def test_variables(self):
        """Expressions in different variables only mix with constants."""

        t = SymbolicWarp.monomial(1, 0, 1, var='t')
        r = SymbolicWarp.monomial(1, 1, 0, var='r')
        self.assertRaises(ValueError, t.__add__, r)
        self.assertEqual((SymbolicWarp.constant(2)*r).var, 'r')
        self.assertEqual(SymbolicWarp.constant(1, var='r'), SymbolicWarp.constant(1))
        self.assertEqual(hash(SymbolicWarp.constant(1, var='r')), hash(SymbolicWarp.constant(1)))
        self.assertEqual(t.with_var('r').var, 'r')
        self.assertNotEqual(t.with_var('r'), t)

    def test_derivative(self):
        """Product rule for x^q exp(rx)."""

        expr = SymbolicWarp.monomial(3, 2, 1)
        deriv = expr.derivative()
        self.assertEqual(deriv.coefficient(1, 1), 6)
        self.assertEqual(deriv.coefficient(2, 1), 3)
        self.assertTrue(SymbolicWarp.constant(5).derivative().is_zero())

    def test_asymptotics(self):
        """Limits, growth and integrability at infinity."""

        decaying = SymbolicWarp.constant(2) + SymbolicWarp.monomial(1, 0, -1)
        self.assertEqual(decaying.limit(), 2)
        self.assertEqual(SymbolicWarp.monomial(-1, 0, 1).limit(), -math.inf)
        self.assertTrue(SymbolicWarp.monomial(1, 1, 0).grows())
        self.assertFalse(decaying.grows())
        self.assertEqual(SymbolicWarp().limit(), 0)

        self.assertTrue(SymbolicWarp.monomial(1, 0, -1).integrable_at_infinity())
        self.assertTrue(SymbolicWarp.monomial(1, -2, 0, var='r').integrable_at_infinity())
        self.assertFalse(SymbolicWarp.monomial(1, -1, 0, var='r').integrable_at_infinity())
        self.assertFalse(SymbolicWarp.constant(1).integrable_at_infinity())

        expr = SymbolicWarp([(1, 0, 0), (5, 3, -1), (1, 0, 2)])
        self.assertEqual(expr.dominant_term(), (1, 0, 2))

    def test_evaluate(self):
        """Numerical evaluation on arrays and scalars."""

        expr = SymbolicWarp.monomial(1, 0, -1)
        numpy.testing.assert_allclose(expr(numpy.array([0.0, 1.0])), [1.0, math.exp(-1)])
        self.assertAlmostEqual(SymbolicWarp.monomial(2, -2, 0, var='r')(2.0), 0.5, 14)

    def test_str(self):
        """Rendering used by the reduce command."""

        self.assertEqual(str(SymbolicWarp.constant(1) + SymbolicWarp.monomial(1, 0, -2)), "1 + 1·exp(-2t)")
        self.assertEqual(str(SymbolicWarp.monomial(2, -2, 0, var='r')), "2·r^-2")
        self.assertEqual(str(SymbolicWarp()), "0")

    @unittest.skipUnless(run_sympy_tests, "requires the 'sympy' module")
    def test_sympy_oracle(self):
        """Derivatives and products agree with sympy."""

        x = sympy.Symbol('x', positive=True)

        def to_sympy(expr):
            return sum(sympy.Rational(str(c))*x**sympy.Rational(str(q))*sympy.exp(sympy.Rational(str(r))*x)
                       for c, q, r in expr.terms)

        f = SymbolicWarp([(2, 0, -1), (Fraction(1, 3), -2, 0)])
        g = SymbolicWarp([(1, 1, Fraction(1, 2)), (-3, 0, 0)])
        for ours, theirs in ((f.derivative(), sympy.diff(to_sympy(f), x)),
                             (f.derivative().derivative(), sympy.diff(to_sympy(f), x, 2)),
                             (f*g, to_sympy(f)*to_sympy(g))):
            for point in (0.7, 1.3, 2.9):
                self.assertAlmostEqual(ours(point), float(theirs.subs(x, point)), 10)


class symbolic_warp_test_suite(unittest.TestSuite):
    """A unittest.TestSuite class which contains all of the SymbolicWarp tests."""

    def __init__(self):
        unittest.TestSuite.__init__(self)

        loader = unittest.TestLoader()
        self.addTests(loader.loadTestsFromTestCase(symbolic_warp_tests))


if __name__ == '__main__':
    unittest.main()
