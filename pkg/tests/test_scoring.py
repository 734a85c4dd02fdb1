#  MacGyver Tool Construction - A geometric reasoning engine that builds
#  substitute tools out of the parts at hand
#  Copyright (c) 2019 Phil Birkelbach
#
#  This program is free software; you can redistribute it and/or modify
#  it under the terms of the GNU General Public License as published by
#  the Free Software Foundation; either version 2 of the License, or
#  (at your option) any later version.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program; if not, write to the Free Software
#  Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA 02111-1307, USA.

import itertools
import time
import unittest
import numpy as np

import macgyver
from macgyver.attachment import AttachmentLibrary, AttachmentPoint
from macgyver.scoring import ReferenceTool, CandidatePart, ScoreWeights, rankBuilds, \
    permuteCandidates, aggregateError, countConfigurations, shapeError, scaleError, rel
from macgyver.superquadric import SuperquadricParams, sampleSurface, canonicalize


def randomSq(rng, z=0.0):
    return SuperquadricParams(rng.uniform(0.01, 0.06, 3), rng.uniform(0.2, 1.8, 2),
                              rng.uniform(-np.pi, np.pi, 3), (0.0, 0.0),
                              (rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), z))


def makeReference(rng, points=200):
    comps = []
    for j in range(2):
        sq = randomSq(rng, 0.1 * j)
        comps.append((sampleSurface(sq, points, seed=j), sq))
    return ReferenceTool(comps)


def makeParts(rng, n, points=200, ids="ABCDE"):
    parts = []
    for i in range(n):
        sq = randomSq(rng)
        parts.append(CandidatePart(ids[i], sampleSurface(sq, points, seed=10 + i), sq))
    return parts


def naiveRanking(reference, parts, weights, emptyIds):
    """Independent recomputation of the ranked order"""
    ref = [canonicalize(reference.sq(j)) for j in range(reference.m)]
    rows = []
    for t in itertools.permutations(parts, reference.m):
        sqs = [canonicalize(p.sq) for p in t]
        shape = sum(np.abs(r.shape - c.shape).sum() for r, c in zip(ref, sqs))
        scale = sum(np.abs(r.scale - c.scale).sum() for r, c in zip(ref, sqs))
        ratio = 0.0
        for j in range(reference.m):
            for k in range(reference.m):
                if j != k:
                    ratio += np.abs(ref[j].scale / ref[k].scale - sqs[j].scale / sqs[k].scale).sum()
        att = float("inf") if any(p.id in emptyIds for p in t) else 0.0
        if np.isinf(att):
            e = float("inf")
        else:
            e = weights[0] * scale + weights[1] * shape + weights[2] * ratio + weights[3] * att
        rows.append((e, tuple(p.id for p in t)))
    # sorted() is stable, equal costs keep enumeration order
    return [r[1] for r in sorted(rows, key=lambda r: r[0])], [r[0] for r in sorted(rows, key=lambda r: r[0])]


class TestPermutations(unittest.TestCase):
    def test_Count(self):
        rng = np.random.default_rng(0)
        parts = makeParts(rng, 4)
        self.assertEqual(len(permuteCandidates(parts, 2)), 12)
        self.assertEqual(len(permuteCandidates(parts, 3)), 24)
        self.assertEqual(len(permuteCandidates(parts, 4)), 24)

    def test_Order(self):
        rng = np.random.default_rng(0)
        parts = makeParts(rng, 3)
        ids = [tuple(p.id for p in t) for t in permuteCandidates(parts, 2)]
        self.assertEqual(ids, [("A", "B"), ("A", "C"), ("B", "A"), ("B", "C"), ("C", "A"), ("C", "B")])

    def test_TooFew(self):
        rng = np.random.default_rng(0)
        with self.assertRaises(macgyver.InsufficientPartsError):
            permuteCandidates(makeParts(rng, 1), 2)
        with self.assertRaises(ValueError):
            permuteCandidates(makeParts(rng, 3), 1)


class TestErrors(unittest.TestCase):
    def test_SelfIsZero(self):
        sq = SuperquadricParams([0.02, 0.03, 0.1], (0.4, 0.9), (0.3, 0.2, 0.1))
        self.assertEqual(shapeError(sq, sq), 0.0)
        self.assertEqual(scaleError(sq, sq), 0.0)

    def test_SymmetricForms(self):
        # Swapping a1 and a2 with a quarter turn is the same solid
        a = SuperquadricParams([0.02, 0.04, 0.1], (0.4, 0.9))
        b = SuperquadricParams([0.04, 0.02, 0.1], (0.4, 0.9), (np.pi / 2, 0.0, 0.0))
        self.assertAlmostEqual(scaleError(a, b), 0.0)
        np.testing.assert_allclose(rel(a, b), [1.0, 1.0, 1.0])

    def test_Values(self):
        a = SuperquadricParams([0.05, 0.02, 0.1], (0.5, 1.0))
        b = SuperquadricParams([0.04, 0.02, 0.2], (0.7, 0.8))
        self.assertAlmostEqual(scaleError(a, b), 0.11)
        self.assertAlmostEqual(shapeError(a, b), 0.4)
        np.testing.assert_allclose(rel(a, b), [1.25, 1.0, 0.5])

    def test_Aggregate(self):
        w = ScoreWeights(1, 1, 5, 5)
        self.assertAlmostEqual(aggregateError(0.1, 0.2, 0.3, 0.4, w), 0.1 + 0.2 + 1.5 + 2.0)
        self.assertEqual(aggregateError(0.1, 0.2, 0.3, float("inf"), w), float("inf"))
        self.assertEqual(aggregateError(0.1, 0.2, 0.3, float("inf"), ScoreWeights(1, 1, 1, 0)),
                         float("inf"))


class TestWeights(unittest.TestCase):
    def test_Defaults(self):
        self.assertEqual(ScoreWeights().toList(), [1.0, 1.0, 5.0, 5.0])
        self.assertEqual(ScoreWeights.fromList([1, 2, 3, 4]).toList(), [1.0, 2.0, 3.0, 4.0])

    def test_Invalid(self):
        with self.assertRaises(ValueError):
            ScoreWeights(-1, 1, 1, 1)
        with self.assertRaises(ValueError):
            ScoreWeights(0, 0, 0, 0)
        with self.assertRaises(ValueError):
            ScoreWeights.fromList([1, 2, 3])


class TestRanking(unittest.TestCase):
    def test_Oracle(self):
        rng = np.random.default_rng(42)
        for trial in range(20):
            reference = makeReference(rng)
            n = int(rng.integers(2, 6))
            parts = makeParts(rng, n)
            weights = list(rng.uniform(0.1, 5.0, 4))
            emptyIds = set(p.id for p in parts if rng.uniform() < 0.25)
            library = AttachmentLibrary(dict((i, []) for i in emptyIds))
            builds, att = rankBuilds(reference, parts, ScoreWeights.fromList(weights), library)
            order, costs = naiveRanking(reference, parts, weights, emptyIds)
            self.assertEqual([b.parts for b in builds], order)
            self.assertEqual([b.rank for b in builds], list(range(1, len(order) + 1)))
            self.assertEqual(len(att), len(builds))
            for b, e in zip(builds, costs):
                if np.isinf(e):
                    self.assertTrue(np.isinf(b.eConst))
                else:
                    self.assertAlmostEqual(b.eConst, e, places=9)

    def test_InfiniteLast(self):
        rng = np.random.default_rng(7)
        reference = makeReference(rng)
        parts = makeParts(rng, 4)
        library = AttachmentLibrary({"C": []})
        builds, _ = rankBuilds(reference, parts, ScoreWeights(), library)
        self.assertEqual(len(builds), 12)
        tail = builds[-6:]
        self.assertTrue(all("C" in b.parts and not b.finite() for b in tail))
        self.assertTrue(all(b.finite() for b in builds[:6]))
        self.assertEqual(tail[0].toDict()["e_const"], "inf")

    def test_WeightScaling(self):
        rng = np.random.default_rng(8)
        for trial in range(5):
            reference = makeReference(rng)
            parts = makeParts(rng, 4)
            w = ScoreWeights.fromList(rng.uniform(0.1, 5.0, 4))
            a, _ = rankBuilds(reference, parts, w)
            for factor in (0.01, 3.7, 1000.0):
                b, _ = rankBuilds(reference, parts, w.scaled(factor))
                self.assertEqual([x.parts for x in a], [x.parts for x in b])

    def test_Monotonicity(self):
        rng = np.random.default_rng(9)
        w = ScoreWeights()
        for trial in range(1000):
            terms = [list(rng.uniform(0, 1, 4)) for i in range(12)]
            def ranks(rows):
                costs = [aggregateError(r[0], r[1], r[2], r[3], w) for r in rows]
                order = sorted(range(len(rows)), key=lambda i: costs[i])
                return dict((i, n) for n, i in enumerate(order))
            before = ranks(terms)
            i = int(rng.integers(12))
            k = int(rng.integers(4))
            terms[i][k] *= rng.uniform(0, 1)
            after = ranks(terms)
            self.assertLessEqual(after[i], before[i])

    def test_SymmetricTies(self):
        rng = np.random.default_rng(10)
        reference = makeReference(rng)
        sq = randomSq(rng)
        cloud = sampleSurface(sq, 200, seed=3)
        other = randomSq(rng)
        parts = [CandidatePart("A", cloud, sq), CandidatePart("B", cloud, sq),
                 CandidatePart("C", sampleSurface(other, 200, seed=4), other)]
        builds, _ = rankBuilds(reference, parts, ScoreWeights())
        order = [b.parts for b in builds]
        self.assertLess(order.index(("A", "C")), order.index(("B", "C")))
        self.assertLess(order.index(("C", "A")), order.index(("C", "B")))
        self.assertLess(order.index(("A", "B")), order.index(("B", "A")))

    def test_Speed(self):
        rng = np.random.default_rng(11)
        reference = makeReference(rng, 500)
        parts = makeParts(rng, 4, 500)
        start = time.time()
        builds, _ = rankBuilds(reference, parts, ScoreWeights())
        self.assertEqual(len(builds), 12)
        self.assertLess(time.time() - start, 1.0)


class TestCandidates(unittest.TestCase):
    def test_AttachmentTooFar(self):
        sq = SuperquadricParams([0.02, 0.02, 0.05])
        cloud = sampleSurface(sq, 300, seed=0)
        CandidatePart("A", cloud, sq, [AttachmentPoint("A", [0, 0, 0.05])])
        with self.assertRaises(ValueError):
            CandidatePart("A", cloud, sq, [AttachmentPoint("A", [0, 0, 0.2])])

    def test_ConfigurationCount(self):
        rng = np.random.default_rng(12)
        parts = makeParts(rng, 4)
        self.assertEqual(countConfigurations(parts, 2), 12)
        p = lambda i: AttachmentPoint(i, [0, 0, 0])
        library = AttachmentLibrary({"A": [p("A"), p("A")], "B": [p("B")], "C": []})
        # A: 2 choices, B: 1, C: 0, D unknown: 1
        expected = 0
        choices = {"A": 2, "B": 1, "C": 0, "D": 1}
        for x, y in itertools.permutations("ABCD", 2):
            expected += choices[x] * choices[y]
        self.assertEqual(countConfigurations(parts, 2, library), expected)

    def test_ReferenceNeedsTwo(self):
        rng = np.random.default_rng(13)
        sq = randomSq(rng)
        with self.assertRaises(ValueError):
            ReferenceTool([(sampleSurface(sq, 100), sq)])

    def test_UnconvergedReferenceWarns(self):
        a = SuperquadricParams([0.01, 0.01, 0.08], (0.5, 1.0))
        b = SuperquadricParams([0.03, 0.01, 0.02], (0.5, 1.0), center=(0, 0, 0.1))
        clouds = [sampleSurface(a, 300, seed=1), sampleSurface(b, 300, seed=2)]
        with self.assertLogs("macgyver", level="WARNING") as cm:
            reference = ReferenceTool.fromClouds(clouds, {"max_iterations": 1})
        self.assertEqual(reference.m, 2)
        self.assertTrue(any("iteration limit" in line for line in cm.output))


if __name__ == '__main__':
    unittest.main()
