#!/usr/bin/env python

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

# Parts score computation: every ordered tuple of candidate parts is compared
# against the reference tool and the tuples are ranked by weighted error.

import itertools
import numpy as np
from scipy.spatial import cKDTree

from .globals import *
from .geometry import pcaFrame
from .superquadric import canonicalize, fitSuperquadric
from .attachment import alignParts, computeIntersections, attachmentFit, DEFAULT_ATTACHMENT_CONFIG
from .utils import jsonFloat


class ReferenceTool(object):
    """Ordered components (r1..rm) of the tool to imitate

    Components are expected to carry converged fits.  fromClouds does not
    enforce this: a fit that stops at the evaluation limit is kept and
    logged as a warning.
    """
    def __init__(self, components):
        if len(components) < 2:
            raise ValueError("A reference tool needs at least two components")
        self.components = [(cloud, sq) for cloud, sq in components]
        self.__frames = {}

    def getM(self):
        return len(self.components)

    m = property(getM)

    def cloud(self, j):
        return self.components[j][0]

    def sq(self, j):
        return self.components[j][1]

    def frame(self, j):
        if j not in self.__frames:
            self.__frames[j] = pcaFrame(self.components[j][0])
        return self.__frames[j]

    @classmethod
    def fromClouds(cls, clouds, fitConfig=None):
        components = []
        for j, cloud in enumerate(clouds):
            result = fitSuperquadric(cloud, fitConfig)
            if not result.converged:
                log.warning("Fit of reference component r{} hit the iteration limit".format(j + 1))
            components.append((cloud, result.params))
        return cls(components)


class CandidatePart(object):
    """One part available for construction"""
    def __init__(self, id, cloud, sq, attachments=None):
        self.id = id
        self.cloud = cloud
        self.sq = sq
        self.attachments = attachments
        self.__frame = None

    def setAttachments(self, attachments):
        if attachments and self.cloud is not None:
            tree = cKDTree(self.cloud.points)
            for a in attachments:
                d, _ = tree.query(a.location)
                if d > ATTACHMENT_PROXIMITY:
                    raise ValueError("Attachment {} is {:.3f} m away from part '{}'"
                                     .format(a, d, self.id))
        self.__attachments = attachments

    def getAttachments(self):
        return self.__attachments

    attachments = property(getAttachments, setAttachments)

    def frame(self):
        if self.__frame is None:
            self.__frame = pcaFrame(self.cloud)
        return self.__frame

    def __str__(self):
        return "CandidatePart({})".format(self.id)


class ScoreWeights(object):
    """Importance weights for the scale, shape, ratio and attachment terms"""
    def __init__(self, scale=1.0, shape=1.0, ratio=5.0, att=5.0):
        values = [float(x) for x in (scale, shape, ratio, att)]
        if any(v < 0 or not np.isfinite(v) for v in values):
            raise ValueError("Weights must be finite and non-negative")
        if not any(values):
            raise ValueError("At least one weight must be non-zero")
        self.scale, self.shape, self.ratio, self.att = values

    @classmethod
    def fromList(cls, values):
        if len(values) != 4:
            raise ValueError("Expected four weights, got {}".format(len(values)))
        return cls(*values)

    def toList(self):
        return [self.scale, self.shape, self.ratio, self.att]

    def scaled(self, factor):
        return ScoreWeights(*[v * factor for v in self.toList()])


class CandidateBuild(object):
    """An ordered tuple of parts, position j paired with component r_j"""
    def __init__(self, parts, indices, sqs, eShape, eScale, eRatio, eAtt, eConst,
                 attachmentsChosen, alignments=None, intersections=None):
        self.parts = tuple(parts)
        self.indices = tuple(indices)
        self.sqs = sqs
        self.eShape = eShape
        self.eScale = eScale
        self.eRatio = eRatio
        self.eAtt = eAtt
        self.eConst = eConst
        self.attachmentsChosen = attachmentsChosen
        self.alignments = alignments or []
        self.intersections = intersections or []
        self.rank = None

    def finite(self):
        return np.isfinite(self.eConst)

    def toDict(self):
        att = []
        for a in self.attachmentsChosen:
            att.append(a.toDict() if hasattr(a, "toDict") else np.asarray(a).tolist())
        return {"rank": self.rank, "parts": list(self.parts),
                "e_shape": self.eShape, "e_scale": self.eScale,
                "e_ratio": self.eRatio, "e_att": jsonFloat(self.eAtt),
                "e_const": jsonFloat(self.eConst), "attachments": att}

    def __str__(self):
        return "+".join(self.parts)


def permuteCandidates(candidates, m):
    """All ordered m-tuples of distinct candidates, lexicographic by index"""
    if m < 2:
        raise ValueError("A build needs at least two parts")
    if len(candidates) < m:
        raise InsufficientPartsError("Need at least {} candidate parts, got {}".format(m, len(candidates)))
    return [tuple(candidates[i] for i in t) for t in itertools.permutations(range(len(candidates)), m)]


def shapeError(r, c):
    """L1 distance of the canonical (eps1, eps2) pairs"""
    return float(np.sum(np.abs(canonicalize(r).shape - canonicalize(c).shape)))


def scaleError(r, c):
    """L1 distance of the canonical (a1, a2, a3) triples, in meters"""
    return float(np.sum(np.abs(canonicalize(r).scale - canonicalize(c).scale)))


def rel(a, b):
    """Elementwise ratio of the canonical scales of a over b"""
    return canonicalize(a).scale / canonicalize(b).scale


def ratioError(rj, rk, cj, ck):
    return float(np.sum(np.abs(rel(rj, rk) - rel(cj, ck))))


def aggregateError(eScale, eShape, eRatio, eAtt, w):
    """Weighted sum of the four terms, any infinite term wins"""
    terms = (eScale, eShape, eRatio, eAtt)
    if any(np.isinf(t) for t in terms):
        return float("inf")
    return float(w.scale * eScale + w.shape * eShape + w.ratio * eRatio + w.att * eAtt)


def countConfigurations(candidates, m, library=None):
    """Ordered tuples times attachment assignment choices

    A part contributes one choice per known attachment point, none if it is
    known to have none and a single choice when nothing is known about it.
    """
    def choices(part):
        if library is None or not library.knows(part.id):
            return 1
        return len(library.points(part.id))
    total = 0
    for t in permuteCandidates(candidates, m):
        n = 1
        for part in t:
            n *= choices(part)
        total += n
    return total


def rankBuilds(reference, candidates, weights, library=None, config=None):
    """Score every ordered tuple of candidates and sort by e_const

    :param reference: ReferenceTool
    :param candidates: list of CandidatePart
    :param weights: ScoreWeights
    :param library: AttachmentLibrary or None when attachments are unknown
    :param config: attachment settings, see DEFAULT_ATTACHMENT_CONFIG
    :returns: (sorted list of CandidateBuild, chosen attachments per build)
    """
    cfg = dict(DEFAULT_ATTACHMENT_CONFIG)
    if config:
        cfg.update(config)
    m = reference.m
    tuples = permuteCandidates(candidates, m)
    refSq = [canonicalize(reference.sq(j)) for j in range(m)]
    partSq = dict((c.id, canonicalize(c.sq)) for c in candidates)
    index = dict((c.id, i) for i, c in enumerate(candidates))
    builds = []
    for t in tuples:
        sqs = [partSq[c.id] for c in t]
        eShape = 0.0
        eScale = 0.0
        for j in range(m):
            eShape += shapeError(refSq[j], sqs[j])
            eScale += scaleError(refSq[j], sqs[j])
        eRatio = 0.0
        for j in range(m):
            for k in range(m):
                if j != k:
                    eRatio += ratioError(refSq[j], refSq[k], sqs[j], sqs[k])
        alignments = alignParts(t, reference, cfg["max_alignments"])
        P = computeIntersections(alignments, t, cfg["k_closest"], cfg["dedup_radius"])
        eAtt, chosen = attachmentFit(t, library, reference, cfg, alignments, P)
        eConst = aggregateError(eScale, eShape, eRatio, eAtt, weights)
        build = CandidateBuild([c.id for c in t], [index[c.id] for c in t], sqs,
                               eShape, eScale, eRatio, eAtt, eConst, chosen, alignments, P)
        log.debug("Build {}: shape {:.4f} scale {:.4f} ratio {:.4f} att {} -> {}"
                  .format(build, eShape, eScale, eRatio, eAtt, eConst))
        builds.append(build)
    builds.sort(key=lambda b: b.eConst)
    for rank, b in enumerate(builds):
        b.rank = rank + 1
    return builds, [b.attachmentsChosen for b in builds]
