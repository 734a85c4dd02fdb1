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

# Aligning candidate parts onto a reference tool, estimating where they
# touch and scoring how well known attachment points reach those places.

import itertools
import json
import numpy as np

from .globals import *
from .geometry import RigidTransform, closestPairs, transformCloud
from . import schema

# The four proper rotations that keep every PCA axis on its own line
FLIPS = (np.diag([1.0, 1.0, 1.0]),
         np.diag([1.0, -1.0, -1.0]),
         np.diag([-1.0, 1.0, -1.0]),
         np.diag([-1.0, -1.0, 1.0]))

AGGREGATES = ("sum", "mean", "min")

DEFAULT_ATTACHMENT_CONFIG = {
    "k_closest": K_CLOSEST,
    "dedup_radius": DEDUP_RADIUS,
    "max_alignments": MAX_ALIGNMENTS,
    "att_aggregate": "sum",
}


class AttachmentPoint(object):
    """A place on a part where a fixed connection can be made

    location is expressed in the part's own frame, which is the frame of
    its point cloud file.
    """
    def __init__(self, partId, location, kind="magnet", polarity=None):
        self.partId = partId
        loc = np.array(location, dtype=float)
        if loc.shape != (3,) or not np.all(np.isfinite(loc)):
            raise ValueError("Attachment location must be three finite numbers")
        self.location = loc
        self.kind = kind
        self.polarity = polarity

    def setKind(self, kind):
        if kind not in ("magnet", "other"):
            raise ValueError("Unknown attachment kind '{}'".format(kind))
        self.__kind = kind

    def getKind(self):
        return self.__kind

    kind = property(getKind, setKind)

    def setPolarity(self, polarity):
        if polarity not in (None, "north", "south"):
            raise ValueError("Polarity must be north, south or None")
        self.__polarity = polarity

    def getPolarity(self):
        return self.__polarity

    polarity = property(getPolarity, setPolarity)

    def compatible(self, other):
        """Two magnets join unless they have the same known polarity"""
        if self.polarity is None or other.polarity is None:
            return True
        return self.polarity != other.polarity

    def toDict(self):
        d = {"location": self.location.tolist(), "kind": self.kind}
        if self.polarity is not None:
            d["polarity"] = self.polarity
        return d

    def __str__(self):
        return "{}@{}".format(self.partId, np.round(self.location, 4).tolist())


class AttachmentLibrary(object):
    """Known attachment points per part

    A part that is missing from the library is unknown.  A part mapped to
    an empty list is known to have no attachment points.
    """
    def __init__(self, entries=None):
        self.entries = {}
        for partId, points in (entries or {}).items():
            self.entries[partId] = list(points)

    def knows(self, partId):
        return partId in self.entries

    def points(self, partId):
        return self.entries.get(partId)

    def isKnownEmpty(self, partId):
        return partId in self.entries and len(self.entries[partId]) == 0

    def toDict(self):
        return dict((k, [p.toDict() for p in v]) for k, v in self.entries.items())

    @classmethod
    def fromDict(cls, d):
        schema.validate(d, "library")
        entries = {}
        for partId, points in d.items():
            entries[partId] = [AttachmentPoint(partId, p["location"], p.get("kind", "magnet"),
                                               p.get("polarity")) for p in points]
        return cls(entries)


def loadLibrary(path):
    with open(path) as f:
        return AttachmentLibrary.fromDict(json.load(f))


class Alignment(object):
    """One placement of every part of a build in the reference frame"""
    def __init__(self, transforms, error, flips, index):
        self.transforms = transforms
        self.error = float(error)
        self.flips = tuple(flips)
        self.index = index

    def toDict(self):
        return {"index": self.index, "flips": list(self.flips), "error": self.error,
                "transforms": [t.toDict() for t in self.transforms]}


class AttachmentChoice(object):
    """The attachment point picked for one part under one alignment"""
    def __init__(self, alignment, point, location, target, distance):
        self.alignment = alignment
        self.point = point
        self.location = location
        self.target = target
        self.distance = float(distance)

    def toDict(self):
        return {"alignment": self.alignment, "part": self.point.partId,
                "point": self.point.location.tolist(), "location": self.location.tolist(),
                "target": self.target.tolist(), "distance": self.distance}


def alignParts(parts, reference, maxAlignments=MAX_ALIGNMENTS):
    """Enumerate the PCA alignments of a build onto the reference tool

    Part j is moved so that its PCA frame lands on the frame of reference
    component j.  Every part can be turned half way around any of its axes,
    so there are 4**m alignments, capped at maxAlignments.  The alignment
    error compares the square roots of the sorted eigenvalues and does not
    depend on the flips, so ties are broken by enumeration index.
    """
    if len(parts) != reference.m:
        raise ValueError("Build has {} parts but the reference tool has {} components"
                         .format(len(parts), reference.m))
    partFrames = [p.frame() for p in parts]
    refFrames = [reference.frame(j) for j in range(reference.m)]
    diffs = [np.mean(np.abs(np.sqrt(pf.eigenvalues) - np.sqrt(rf.eigenvalues)))
             for pf, rf in zip(partFrames, refFrames)]
    error = float(np.mean(diffs))
    options = []
    for pf, rf in zip(partFrames, refFrames):
        ts = []
        for f in FLIPS:
            r = rf.axes.dot(f).dot(pf.axes.T)
            ts.append(RigidTransform(r, rf.center - r.dot(pf.center)))
        options.append(ts)
    alignments = []
    for index, flips in enumerate(itertools.product(range(len(FLIPS)), repeat=len(parts))):
        if index >= maxAlignments:
            break
        alignments.append(Alignment([options[j][f] for j, f in enumerate(flips)], error, flips, index))
    alignments.sort(key=lambda a: (a.error, a.index))
    return alignments


def dedupPoints(points, radius=DEDUP_RADIUS):
    """Keep points in order, dropping any within radius of a kept one"""
    kept = []
    for p in points:
        if all(np.linalg.norm(p - q) > radius for q in kept):
            kept.append(p)
    return kept


def computeIntersections(alignments, parts, k=K_CLOSEST, dedupRadius=DEDUP_RADIUS):
    """Candidate attachment locations P for a build

    For every alignment and every pair of neighbouring parts, the centroid
    of the k closest cross cloud pairs approximates where the parts meet.
    """
    cache = {}
    def placed(j, alignment):
        key = (j, alignment.flips[j])
        if key not in cache:
            cache[key] = transformCloud(parts[j].cloud, alignment.transforms[j], "reference")
        return cache[key]

    raw = []
    for a in alignments:
        for j in range(len(parts) - 1):
            pairs = closestPairs(placed(j, a), placed(j + 1, a), k)
            pts = np.array([p[0] for p in pairs] + [p[1] for p in pairs])
            raw.append(pts.mean(axis=0))
    P = dedupPoints(raw, dedupRadius)
    log.debug("{} intersection centroids, {} after dedup".format(len(raw), len(P)))
    return P


def _nearest(P, x):
    d = [np.linalg.norm(x - p) for p in P]
    i = int(np.argmin(d))
    return P[i], d[i]


def aggregateDistances(perAlignment, mode):
    """Combine per alignment lists of distances into one e_att value"""
    if mode not in AGGREGATES:
        raise ValueError("Unknown attachment aggregate '{}'".format(mode))
    sums = [sum(d) for d in perAlignment]
    if not sums:
        return 0.0
    if mode == "sum":
        return float(sum(sums))
    if mode == "mean":
        return float(sum(sums) / len(sums))
    return float(min(sums))


def attachmentFit(parts, library, reference, config=None, alignments=None, intersections=None):
    """Score how well the parts' attachment points reach the joints

    :param parts: The build, one CandidatePart per reference component
    :param library: AttachmentLibrary, or None when attachments are unknown
    :param reference: ReferenceTool
    :param config: attachment settings, see DEFAULT_ATTACHMENT_CONFIG
    :returns: (e_att, A_closest).  Without a library this is (0, P).  A part
        known to have no attachment points makes e_att infinite.
    """
    cfg = dict(DEFAULT_ATTACHMENT_CONFIG)
    if config:
        cfg.update(config)
    for p in parts:
        if p.cloud is None:
            raise ScenarioError("Part '{}' has no point cloud".format(p.id))
    if alignments is None:
        alignments = alignParts(parts, reference, cfg["max_alignments"])
    if intersections is None:
        intersections = computeIntersections(alignments, parts, cfg["k_closest"], cfg["dedup_radius"])
    P = intersections
    if library is None:
        return 0.0, P
    if any(library.isKnownEmpty(p.id) for p in parts):
        return float("inf"), []
    chosen = []
    perAlignment = []
    for a in alignments:
        dists = []
        for j, part in enumerate(parts):
            points = library.points(part.id)
            if not points:
                continue
            best = None
            for point in points:
                loc = a.transforms[j].apply(point.location)
                target, d = _nearest(P, loc)
                if best is None or d < best.distance:
                    best = AttachmentChoice(a.index, point, loc, target, d)
            dists.append(best.distance)
            chosen.append(best)
        perAlignment.append(dists)
    eAtt = aggregateDistances(perAlignment, cfg["att_aggregate"])
    return eAtt, chosen
