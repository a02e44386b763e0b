"""
Unit tests for the closed-form essential spectrum classification.
"""

import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))
from spectral_model import (WarpedMetric, DegreePair, BoundaryData, sphere_boundary, ZeroStatus,
                            SpectrumDescription, ray, empty_spectrum)
from classifier import (HarmonicDimension, explain_general, classify_general, explain_rotsym,
                        classify_rotsym, harmonic_classify, component_spectra, component_union,
                        operator_spectrum, degree_constants, closed_eigenvalues, lambda_bar, BRANCHES)


__version__  = "0.1"


HALF = 'half'

# Ray starts on the sphere for a = -1, b = -1, worked out by hand; HALF marks
# {0} U [1/4, inf) in degree n/2
_SPHERE_DECAYING = {2: [Fraction(1, 4), HALF, Fraction(1, 4)],
                    3: [1, 0, 0, 1],
                    4: [Fraction(9, 4), Fraction(1, 4), HALF, Fraction(1, 4), Fraction(9, 4)],
                    5: [4, 1, 0, 0, 1, 4],
                    6: [Fraction(25, 4), Fraction(9, 4), Fraction(1, 4), HALF, Fraction(1, 4),
                        Fraction(9, 4), Fraction(25, 4)]}


def _expected_sphere(a, b, n, p):
    """Round sphere rules written out case by case."""

    a, b = Fraction(a), Fraction(b)
    extreme = p in (0, 1, n - 1, n)
    if b == 0:
        if extreme:
            return ray(0)
        # bottom of the S^{n-1} Laplacian on p- and (p-1)-forms
        return ray(p*(n - p) - abs(n - 2*p) - 1)
    if a == -1 and b < 0:
        if 2*p == n:
            return SpectrumDescription((b**2/4,), (0,), ZeroStatus.INCLUDED)
        if p in (0, n):
            return ray(Fraction(n - 1, 2)**2*b**2)
        return ray(Fraction(abs(n - 2*p) - 1, 2)**2*b**2)
    if a == -1:
        return ray(Fraction(n - 1, 2)**2*b**2) if extreme else empty_spectrum()
    if b < 0:
        return ray(0)
    return ray(0) if extreme else empty_spectrum()


def _expected_harmonic(a, b, n, p):
    a, b = Fraction(a), Fraction(b)
    if p in (0, n):
        return HarmonicDimension.ONE_DIMENSIONAL if (n - 1)*b > abs(a + 1) else HarmonicDimension.ZERO
    if 2*p == n and b < -abs(a + 1):
        return HarmonicDimension.INFINITE_DIMENSIONAL
    return HarmonicDimension.ZERO


class classifier_tests(unittest.TestCase):
    """A unittest.TestCase collection of unit tests for the classifier."""

    def test_degree_constants(self):
        """Coefficients of b^2 for a = -1."""

        self.assertEqual(degree_constants(DegreePair(3, 0)), (1, 4))
        self.assertEqual(degree_constants(DegreePair(4, 2)), (Fraction(1, 4), Fraction(1, 4)))

    def test_sphere_table(self):
        """Round sphere cross sections with a decaying warp, n = 2..6."""

        metric = WarpedMetric(-1, -1)
        for n, starts in _SPHERE_DECAYING.items():
            for p, start in enumerate(starts):
                with self.subTest(n=n, p=p):
                    result, branch = explain_rotsym(metric, DegreePair(n, p))
                    if start == HALF:
                        self.assertEqual(result, SpectrumDescription((Fraction(1, 4),), (0,), ZeroStatus.INCLUDED))
                        self.assertEqual(branch, 'sphere:a=-1,b<0:half-dimension')
                    else:
                        self.assertEqual(result, ray(start))
                        if start == 0:
                            self.assertEqual(branch, 'sphere:a=-1,b<0:middle-degree')

    def test_sphere_scaling(self):
        """Ray starts scale with b^2."""

        self.assertEqual(classify_rotsym(WarpedMetric(-1, -2), DegreePair(3, 0)), ray(4))
        self.assertEqual(classify_rotsym(WarpedMetric(-1, -2), DegreePair(2, 1)),
                         SpectrumDescription((1,), (0,), ZeroStatus.INCLUDED))

    def test_sphere_growing(self):
        """Growing cross sections empty the middle degrees."""

        metric = WarpedMetric(-1, 1)
        for p in range(5):
            result, branch = explain_rotsym(metric, DegreePair(4, p))
            if p in (0, 1, 3, 4):
                self.assertEqual(result, ray(Fraction(9, 4)))
                self.assertEqual(branch, 'sphere:a=-1,b>0:extreme-degree')
            else:
                self.assertTrue(result.empty)
                self.assertEqual(result.zero_status, ZeroStatus.EXCLUDED)

        steep = WarpedMetric(-2, 1)
        self.assertEqual(classify_rotsym(steep, DegreePair(4, 0)), ray(0))
        self.assertTrue(classify_rotsym(steep, DegreePair(4, 2)).empty)
        self.assertEqual(classify_rotsym(WarpedMetric(-2, -1), DegreePair(4, 2)), ray(0))

    def test_sphere_boundary_gap(self):
        """b = 0 uses the smallest boundary eigenvalue."""

        result, branch = explain_rotsym(WarpedMetric(-1, 0), DegreePair(4, 2))
        self.assertEqual(result, ray(3))
        self.assertEqual(result.zero_status, ZeroStatus.EXCLUDED)
        self.assertEqual(branch, 'sphere:b=0:boundary-gap')
        self.assertEqual(classify_rotsym(WarpedMetric(-1, 0), DegreePair(4, 0)), ray(0))

        # exact forms d(phi) of degree p-1 set the threshold once n >= 5
        for n, p, value in ((5, 2, 4), (5, 3, 4), (6, 2, 5), (6, 3, 8), (6, 4, 5)):
            with self.subTest(n=n, p=p):
                self.assertEqual(classify_rotsym(WarpedMetric(-1, 0), DegreePair(n, p)), ray(value))

    def test_general_matches_sphere(self):
        """Away from 0 the general rules agree with the rotationally symmetric ones."""

        for a, b in ((-1, -1), (-1, 1), (-2, -1), (-2, 1), (-1, 0), (-3, Fraction(1, 2))):
            metric = WarpedMetric(a, b)
            for n in range(2, 7):
                boundary = sphere_boundary(n)
                for p in range(n + 1):
                    with self.subTest(a=a, b=b, n=n, p=p):
                        deg = DegreePair(n, p)
                        general = classify_general(metric, deg, boundary).without_zero()
                        sphere = classify_rotsym(metric, deg, boundary).without_zero()
                        self.assertTrue(general.same_set(sphere))

    def test_general_boundary(self):
        """Betti number cases for a growing cross section."""

        boundary = BoundaryData(4, (1, 0, 0, 1))
        metric = WarpedMetric(-1, 2)
        result, branch = explain_general(metric, DegreePair(4, 0), boundary)
        self.assertTrue(result.same_set(ray(9)))
        self.assertEqual(result.zero_status, ZeroStatus.UNKNOWN)
        self.assertEqual(branch, 'a=-1,b>0:betti-p')

        result, branch = explain_general(metric, DegreePair(4, 1), boundary)
        self.assertTrue(result.same_set(ray(9)))
        self.assertEqual(branch, 'a=-1,b>0:betti-p-1')

        result, branch = explain_general(metric, DegreePair(4, 2), boundary)
        self.assertTrue(result.empty)
        self.assertEqual(result.zero_status, ZeroStatus.UNKNOWN)
        self.assertEqual(branch, 'a=-1,b>0:no-cohomology')

        torus = BoundaryData(3, (1, 2, 1))
        result, branch = explain_general(metric, DegreePair(3, 1), torus)
        self.assertEqual(result, ray(0))
        self.assertEqual(branch, 'a=-1,b>0:betti-both')

        result, branch = explain_general(WarpedMetric(-2, 1), DegreePair(4, 2), boundary)
        self.assertEqual(branch, 'a<-1,b>0:no-cohomology')
        result, branch = explain_general(WarpedMetric(-2, 1), DegreePair(3, 1), torus)
        self.assertEqual(result, ray(0))
        self.assertEqual(branch, 'a<-1,b>0:cohomology')
        result, branch = explain_general(WarpedMetric(-2, -1), DegreePair(3, 1), torus)
        self.assertEqual(branch, 'a<-1,b<0:half-line')

    def test_general_gap(self):
        """b = 0 needs the eigenvalue lists and reports the bottom of the boundary spectrum."""

        boundary = BoundaryData(4, (1, 0, 0, 1), {0: [0, 3], 1: [4, 9], 2: [3, 8]})
        self.assertEqual(lambda_bar(DegreePair(4, 2), boundary), 3)
        result, branch = explain_general(WarpedMetric(-1, 0), DegreePair(4, 2), boundary)
        self.assertEqual(result, ray(3))
        self.assertEqual(branch, 'b=0:boundary-gap')

        lowered = BoundaryData(4, (1, 0, 0, 1), {0: [0, 2], 1: [4, 9], 2: [3, 8]})
        self.assertEqual(closed_eigenvalues(lowered, 0), [0])
        self.assertEqual(closed_eigenvalues(lowered, 1), [2])
        self.assertEqual(lambda_bar(DegreePair(4, 2), lowered), 2)
        self.assertEqual(component_spectra(WarpedMetric(-1, 0), DegreePair(4, 2), lowered),
                         (ray(3), ray(2), ray(4)))
        self.assertEqual(lambda_bar(DegreePair(4, 1), lowered), 0)

        partial = BoundaryData(4, (1, 0, 0, 1), {1: [4, 9], 2: [3, 8]})
        self.assertRaises(ValueError, classify_general, WarpedMetric(-1, 0), DegreePair(4, 2), partial)
        self.assertRaises(ValueError, classify_general, WarpedMetric(-1, 0), DegreePair(4, 1), partial)
        self.assertRaises(ValueError, classify_general, WarpedMetric(-1, 0), DegreePair(3, 1), boundary)

    def test_sphere_grid(self):
        """Every round sphere case for a in {-1, -2}, b in {-1, 0, 1}, n = 2..6."""

        for a in (-1, -2):
            for b in (-1, 0, 1):
                metric = WarpedMetric(a, b)
                for n in range(2, 7):
                    for p in range(n + 1):
                        with self.subTest(a=a, b=b, n=n, p=p):
                            result = classify_rotsym(metric, DegreePair(n, p))
                            self.assertEqual(result, _expected_sphere(a, b, n, p))
                            self.assertNotEqual(result.zero_status, ZeroStatus.UNKNOWN)
                            for value in result.rays + result.points:
                                self.assertIsInstance(value, Fraction)

    def test_branch_table(self):
        """Every branch identifier names a rule and every rule is reachable."""

        torus = BoundaryData(3, (1, 2, 1))
        seen = set()
        for a in (-1, -2):
            for b in (-1, 0, 1):
                metric = WarpedMetric(a, b)
                for n in range(2, 7):
                    boundary = sphere_boundary(n)
                    for p in range(n + 1):
                        deg = DegreePair(n, p)
                        seen.add(explain_rotsym(metric, deg, boundary)[1])
                        seen.add(explain_general(metric, deg, boundary)[1])
                if b != 0:
                    for p in range(4):
                        seen.add(explain_general(metric, DegreePair(3, p), torus)[1])
        self.assertEqual(seen, set(BRANCHES))
        for branch, rule in BRANCHES.items():
            self.assertTrue(rule)
            self.assertEqual(branch.startswith('sphere:'), rule.startswith('round sphere'))

    def test_hodge_duality(self):
        """Degrees p and n-p have the same essential spectrum."""

        for a, b in ((-1, -1), (-1, 0), (-1, 1), (-2, -1), (-2, 0), (-2, 1), (Fraction(-3, 2), Fraction(1, 2))):
            metric = WarpedMetric(a, b)
            for n in range(2, 8):
                for p in range(n + 1):
                    with self.subTest(a=a, b=b, n=n, p=p):
                        deg = DegreePair(n, p)
                        self.assertEqual(classify_rotsym(metric, deg), classify_rotsym(metric, deg.dual()))

        # Poincare dual Betti numbers on N
        for betti in ((1, 2, 1), (1, 0, 0, 1), (1, 3, 3, 1), (1, 0, 2, 0, 1)):
            boundary = BoundaryData(len(betti), betti)
            for a, b in ((-1, -1), (-1, 1), (-2, -1), (-2, 1)):
                metric = WarpedMetric(a, b)
                for p in range(boundary.n + 1):
                    with self.subTest(betti=betti, a=a, b=b, p=p):
                        deg = DegreePair(boundary.n, p)
                        self.assertEqual(classify_general(metric, deg, boundary),
                                         classify_general(metric, deg.dual(), boundary))

    def test_harmonic(self):
        """Dimension of the L^2 harmonic forms of the model."""

        self.assertEqual(harmonic_classify(WarpedMetric(-1, 1), DegreePair(3, 0)), HarmonicDimension.ONE_DIMENSIONAL)
        self.assertEqual(harmonic_classify(WarpedMetric(-1, -1), DegreePair(3, 3)), HarmonicDimension.ZERO)
        self.assertEqual(harmonic_classify(WarpedMetric(-1, -1), DegreePair(2, 1)),
                         HarmonicDimension.INFINITE_DIMENSIONAL)
        self.assertEqual(harmonic_classify(WarpedMetric(-1, 1), DegreePair(2, 1)), HarmonicDimension.ZERO)
        self.assertEqual(harmonic_classify(WarpedMetric(-1, -1), DegreePair(3, 1)), HarmonicDimension.ZERO)
        self.assertEqual(harmonic_classify(WarpedMetric(-2, 0), DegreePair(3, 0)), HarmonicDimension.ZERO)
        self.assertEqual(harmonic_classify(WarpedMetric(-2, 1), DegreePair(3, 0)), HarmonicDimension.ONE_DIMENSIONAL)

    def test_harmonic_grid(self):
        """L^2 harmonic dimension over a grid of warps, degrees 0, 1, n/2 and n."""

        count = 0
        for a in (-1, Fraction(-3, 2), -2):
            for b in (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1):
                metric = WarpedMetric(a, b)
                for n in (2, 3, 4):
                    for p in sorted({0, 1, n//2, n}):
                        with self.subTest(a=a, b=b, n=n, p=p):
                            deg = DegreePair(n, p)
                            dimension = harmonic_classify(metric, deg)
                            self.assertEqual(dimension, _expected_harmonic(a, b, n, p))
                            if dimension == HarmonicDimension.INFINITE_DIMENSIONAL:
                                self.assertEqual(classify_rotsym(metric, deg).zero_status, ZeroStatus.INCLUDED)
                        count += 1
        self.assertGreaterEqual(count, 50)

    def test_components(self):
        """The union of the component spectra is the classified spectrum."""

        for a, b in ((-1, -1), (-1, 1), (-2, -1), (-2, 1), (-1, 0)):
            metric = WarpedMetric(a, b)
            for n in (3, 4):
                boundary = sphere_boundary(n)
                for p in range(n + 1):
                    with self.subTest(a=a, b=b, n=n, p=p):
                        deg = DegreePair(n, p)
                        parts = component_spectra(metric, deg, boundary)
                        self.assertEqual(parts[0] is None, not deg.has_type1)
                        self.assertEqual(parts[1] is None, not deg.has_type2)
                        self.assertEqual(parts[2] is None, not deg.has_type3)
                        union = component_union(parts).without_zero()
                        self.assertTrue(union.same_set(classify_general(metric, deg, boundary).without_zero()))

    def test_operator_spectrum(self):
        """Per-operator rules used by the verification harness."""

        metric = WarpedMetric(-1, -1)
        self.assertEqual(operator_spectrum(metric, DegreePair(3, 0), 1, 2), ray(1))
        self.assertEqual(operator_spectrum(metric, DegreePair(3, 3), 2, 0), ray(1))
        self.assertEqual(operator_spectrum(metric, DegreePair(3, 1), 3, 2), ray(0))
        self.assertRaises(ValueError, operator_spectrum, metric, DegreePair(3, 1), 3, 0)
        self.assertRaises(ValueError, operator_spectrum, metric, DegreePair(3, 1), 4, 1)

        self.assertTrue(operator_spectrum(WarpedMetric(-1, 1), DegreePair(3, 0), 1, 2).empty)
        self.assertEqual(operator_spectrum(WarpedMetric(-1, 1), DegreePair(3, 0), 1, 0), ray(1))
        self.assertEqual(operator_spectrum(WarpedMetric(-2, -1), DegreePair(3, 0), 1, 6), ray(0))
        self.assertEqual(operator_spectrum(WarpedMetric(-1, 0), DegreePair(3, 1), 3, 6), ray(6))
        self.assertEqual(operator_spectrum(WarpedMetric(-2, 1), DegreePair(3, 0), 1, 0), ray(0))

    def test_invalid(self):
        """Boundary data must match the dimension."""

        self.assertRaises(ValueError, classify_general, WarpedMetric(-1, -1), DegreePair(3, 0), sphere_boundary(4))
        self.assertRaises(ValueError, classify_rotsym, WarpedMetric(-1, -1), DegreePair(3, 0),
                          BoundaryData(3, (1, 0, 1)))


class classifier_test_suite(unittest.TestSuite):
    """A unittest.TestSuite class which contains all of the classifier tests."""

    def __init__(self):
        unittest.TestSuite.__init__(self)

        loader = unittest.TestLoader()
        self.addTests(loader.loadTestsFromTestCase(classifier_tests))


if __name__ == '__main__':
    unittest.main()
