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

# Replays the build and validate loop against a rule based world model

import numpy as np

from .globals import *
from .attachment import AttachmentLibrary

TASKS = ("hit", "scoop", "flip")


class BreakageRule(object):
    """Builds matching the pattern fall apart when the tool is used

    The pattern lists one part id per position, "*" matches any part.
    """
    def __init__(self, parts, reason=""):
        self.parts = tuple(parts)
        self.reason = reason

    def matches(self, build):
        if len(self.parts) != len(build.parts):
            return False
        return all(p == "*" or p == b for p, b in zip(self.parts, build.parts))

    def toDict(self):
        return {"parts": list(self.parts), "reason": self.reason}


class TaskPredicate(object):
    """Geometric stand-in for "the tool did its job"

    Position j of the build passes when the longest full extent of its
    fitted superquadric, 2 max(a1, a2, a3), is at least minExtent[j].
    """
    def __init__(self, name, minExtent):
        if name not in TASKS:
            raise ValueError("Unknown task '{}'".format(name))
        self.name = name
        self.minExtent = [float(x) for x in minExtent]

    def check(self, build):
        if len(self.minExtent) != len(build.sqs):
            raise ValueError("Task '{}' expects {} parts".format(self.name, len(self.minExtent)))
        for sq, limit in zip(build.sqs, self.minExtent):
            if 2.0 * float(np.max(sq.scale)) < limit:
                return False
        return True

    def toDict(self):
        return {"name": self.name, "min_extent": self.minExtent}


class WorldModel(object):
    def __init__(self, trueAttachments, breakageRules=None, task=None):
        self.trueAttachments = trueAttachments if trueAttachments is not None else AttachmentLibrary()
        self.breakageRules = list(breakageRules or [])
        self.task = task

    @classmethod
    def fromDict(cls, d, library=None):
        if library is None:
            library = AttachmentLibrary.fromDict(d.get("true_attachments") or {})
        rules = [BreakageRule(r["parts"], r.get("reason", "")) for r in d.get("breakage_rules", [])]
        task = d.get("task")
        if task is not None:
            task = TaskPredicate(task["name"], task["min_extent"])
        return cls(library, rules, task)


class Attempt(object):
    def __init__(self, build, alignment, location, outcome):
        self.build = build
        self.alignment = alignment
        self.location = None if location is None else np.asarray(location, dtype=float)
        self.outcome = outcome

    def toDict(self):
        return {"parts": list(self.build.parts), "rank": self.build.rank,
                "alignment": self.alignment,
                "location": None if self.location is None else self.location.tolist(),
                "outcome": self.outcome}


class AttemptLog(object):
    """Ordered record of simulated construction attempts"""
    def __init__(self):
        self.attempts = []
        self.solution = None

    def add(self, attempt):
        if self.solution is not None:
            raise RuntimeError("The log already ends in a success")
        self.attempts.append(attempt)
        log.info("Attempt {}: {} alignment {} -> {}".format(
            len(self.attempts), attempt.build, attempt.alignment, attempt.outcome))
        if attempt.outcome == SUCCESS:
            self.solution = attempt.build

    def getTotalAttempts(self):
        return len(self.attempts)

    totalAttempts = property(getTotalAttempts)

    def outcomes(self):
        return [(a.build.parts, a.outcome) for a in self.attempts]

    def summary(self):
        if self.solution is None:
            return "no solution after {} attempts".format(self.totalAttempts)
        return "solution at rank {} after {} attempts".format(self.solution.rank, self.totalAttempts)

    def toDict(self):
        return {"attempts": [a.toDict() for a in self.attempts],
                "total_attempts": self.totalAttempts,
                "solution": None if self.solution is None else self.solution.toDict(),
                "summary": self.summary()}

    def table(self):
        lines = ["{:>4}  {:>4}  {:<10} {:>9}  {}".format("#", "rank", "parts", "alignment", "outcome")]
        for n, a in enumerate(self.attempts):
            mark = "*" if a.outcome == SUCCESS else " "
            lines.append("{:>4}  {:>4}  {:<10} {:>9}  {}{}".format(
                n + 1, a.build.rank, "+".join(a.build.parts), a.alignment, a.outcome, mark))
        lines.append(self.summary())
        return "\n".join(lines)


def validateTool(build, world):
    """Apply the breakage rules, then the task predicate"""
    for rule in world.breakageRules:
        if rule.matches(build):
            log.debug("Build {} broke: {}".format(build, rule.reason))
            return BROKE_IN_VALIDATION
    if world.task is not None and not world.task.check(build):
        return TASK_FAILED
    return SUCCESS


def _alignment(build, index):
    for a in build.alignments:
        if a.index == index:
            return a
    raise ValueError("Build {} has no alignment {}".format(build, index))


def tryAttach(build, world, alignment, location, attachRadius=ATTACH_RADIUS):
    """Whether the parts can be joined at location under alignment

    Every part needs a true attachment point within attachRadius of the
    location and neighbouring parts need a pair that does not repel.
    """
    near = []
    for j, partId in enumerate(build.parts):
        points = world.trueAttachments.points(partId) or []
        t = alignment.transforms[j]
        near.append([p for p in points
                     if np.linalg.norm(t.apply(p.location) - location) <= attachRadius])
        if not near[-1]:
            return False
    for j in range(len(near) - 1):
        if not any(p.compatible(q) for p in near[j] for q in near[j + 1]):
            log.debug("Build {}: magnets repel at {}".format(build, location))
            return False
    return True


def _bestChoice(build):
    # Alignment whose chosen points are closest to the joints overall
    sums = {}
    for c in build.attachmentsChosen:
        sums.setdefault(c.alignment, []).append(c)
    if not sums:
        return None, []
    order = dict((a.index, n) for n, a in enumerate(build.alignments))
    best = min(sums, key=lambda i: (sum(c.distance for c in sums[i]), order.get(i, i)))
    return best, sums[best]


def simulateKnown(builds, world, attachRadius=ATTACH_RADIUS):
    """One attempt per finite build, best ranked first"""
    if not builds:
        raise ScenarioError("There are no builds to simulate")
    result = AttemptLog()
    for build in builds:
        if not build.finite():
            continue
        index, choices = _bestChoice(build)
        if index is None:
            alignment = build.alignments[0]
            location = build.intersections[0]
        else:
            alignment = _alignment(build, index)
            location = np.mean([c.location for c in choices], axis=0)
        if not tryAttach(build, world, alignment, location, attachRadius):
            result.add(Attempt(build, alignment.index, location, ATTACH_FAILED))
            continue
        result.add(Attempt(build, alignment.index, location, validateTool(build, world)))
        if result.solution is not None:
            break
    return result


def explorationTrials(build, attachRadius=ATTACH_RADIUS):
    """Physically distinct (alignment, location) trials of a build

    Alignments are taken in order and each is tried at every entry of P.  A
    trial whose location lands, in every part's own frame, within
    attachRadius of an earlier trial is the same attempt and is skipped.
    """
    tried = []
    trials = []
    for a in build.alignments:
        inverse = [t.inverse() for t in a.transforms]
        for loc in build.intersections:
            local = [inv.apply(loc) for inv in inverse]
            if any(all(np.linalg.norm(l - p) <= attachRadius for l, p in zip(local, prev))
                   for prev in tried):
                continue
            tried.append(local)
            trials.append((a, loc))
    return trials


def simulateUnknown(builds, world, attachRadius=ATTACH_RADIUS):
    """Explore the candidate locations of each build until a tool works"""
    if not builds:
        raise ScenarioError("There are no builds to simulate")
    result = AttemptLog()
    for build in builds:
        if not build.finite():
            continue
        for alignment, loc in explorationTrials(build, attachRadius):
            if not tryAttach(build, world, alignment, loc, attachRadius):
                result.add(Attempt(build, alignment.index, loc, ATTACH_FAILED))
                continue
            result.add(Attempt(build, alignment.index, loc, validateTool(build, world)))
            # Attached but unusable, so this combination of parts is done
            break
        if result.solution is not None:
            break
    return result
