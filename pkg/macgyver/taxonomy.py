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

# Affordance solutions, task goals and the three levels of improvised
# solutions: object, object-action and object-action-effect equivalence.

import json

from .globals import *
from . import schema

O_EQ = "O_eq"
OA_EQ = "OA_eq"
OAE_EQ = "OAE_eq"
LEVELS = (O_EQ, OA_EQ, OAE_EQ)

SUBSTITUTION = "S"
CONSTRUCTION = "C"

PROVENANCE = {"existing": SUBSTITUTION, "constructed": CONSTRUCTION}

levelNames = {O_EQ: "Level 1 (object equivalence)",
              OA_EQ: "Level 2 (object-action equivalence)",
              OAE_EQ: "Level 3 (object-action-effect equivalence)"}


def _label(value, name):
    if not isinstance(value, str) or not value:
        raise ValueError("{} must be a non-empty label".format(name))
    return value


class AffordanceSolution(object):
    """An object, the action applied with it and the resulting effect"""
    def __init__(self, object, action, effect, provenance="existing"):
        self.object = object
        self.action = action
        self.effect = effect
        self.provenance = provenance

    def setObject(self, value):
        self.__object = _label(value, "object")

    def getObject(self):
        return self.__object

    object = property(getObject, setObject)

    def setAction(self, value):
        self.__action = _label(value, "action")

    def getAction(self):
        return self.__action

    action = property(getAction, setAction)

    def setEffect(self, value):
        self.__effect = _label(value, "effect")

    def getEffect(self):
        return self.__effect

    effect = property(getEffect, setEffect)

    def setProvenance(self, value):
        if value not in PROVENANCE:
            raise ValueError("Provenance must be 'existing' or 'constructed'")
        self.__provenance = value

    def getProvenance(self):
        return self.__provenance

    provenance = property(getProvenance, setProvenance)

    @classmethod
    def fromDict(cls, d):
        return cls(d["object"], d["action"], d["effect"], d.get("provenance", "existing"))

    def toDict(self):
        return {"object": self.object, "action": self.action,
                "effect": self.effect, "provenance": self.provenance}

    def __str__(self):
        return "({}, {}, {})".format(self.object, self.action, self.effect)


class TaskGoal(object):
    def __init__(self, predicate, arguments=None, satisfiedBy=None):
        self.predicate = _label(predicate, "predicate")
        self.arguments = list(arguments or [])
        self.satisfiedBy = frozenset(satisfiedBy or [])
        if not self.satisfiedBy:
            raise ValueError("A goal needs at least one satisfying effect")

    @classmethod
    def fromDict(cls, d):
        return cls(d["predicate"], d.get("arguments"), d["satisfied_by"])

    def __str__(self):
        return "{}({})".format(self.predicate, ", ".join(self.arguments))


def isGoalSatisfied(goal, effect):
    """Exact, case sensitive membership of effect in the goal's effects"""
    return effect in goal.satisfiedBy


def classifyEquivalence(reference, candidate, goal):
    """Classify candidate against the reference solution

    :returns: (level, variant) where level is one of LEVELS and variant is
        "S" for substitution or "C" for construction
    :raises NotASolutionError: the candidate does not reach the goal, or it
        is the reference solution itself
    """
    if not isGoalSatisfied(goal, candidate.effect):
        raise NotASolutionError("Effect '{}' does not satisfy {}".format(candidate.effect, goal))
    sameAction = candidate.action == reference.action
    sameEffect = candidate.effect == reference.effect
    if sameAction and sameEffect and candidate.object == reference.object:
        raise NotASolutionError("{} is the reference solution".format(candidate))
    variant = PROVENANCE[candidate.provenance]
    if sameAction and sameEffect:
        level = O_EQ
    elif sameEffect or sameAction:
        # The same-action, different-effect cell also differs in one slot
        level = OA_EQ
    else:
        level = OAE_EQ
    log.debug("{} against {}: {}{}".format(candidate, reference, level, variant))
    return level, variant


def loadTaxonomy(path):
    """Read a goal, a reference solution and candidate solutions"""
    with open(path) as f:
        d = json.load(f)
    schema.validate(d, "taxonomy")
    goal = TaskGoal.fromDict(d["goal"])
    reference = AffordanceSolution.fromDict(d["reference"])
    candidates = [AffordanceSolution.fromDict(c) for c in d["candidates"]]
    return goal, reference, candidates


def levelTable(reference, candidates, goal):
    rows = ["{:<7} {:<7} {:<14} {:<12} {}".format("level", "variant", "object", "action", "effect")]
    for c in candidates:
        try:
            level, variant = classifyEquivalence(reference, c, goal)
        except NotASolutionError:
            level, variant = "-", "-"
        rows.append("{:<7} {:<7} {:<14} {:<12} {}".format(level, variant, c.object, c.action, c.effect))
    return "\n".join(rows)
