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

# Tapered superellipsoids: parameters, inside-outside function, surface
# sampling and Levenberg-Marquardt fitting.

import numpy as np
from scipy.optimize import least_squares
from scipy.special import expit, logit
from scipy.spatial.transform import Rotation

from .globals import *
from .geometry import PointCloud, pcaFrame

EULER_ORDER = 'ZYX'

# Exponent results are capped so the optimizer never sees inf
_F_CAP = 1e30

DEFAULT_FIT_CONFIG = {
    "restarts": 3,
    "max_iterations": 200,
    "ftol": 1e-10,
    "xtol": 1e-10,
    "gtol": 1e-10,
}


def _triple(value, name):
    v = np.array(value, dtype=float).reshape(-1)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValueError("{} must be three finite numbers".format(name))
    return v

def _pair(value, name):
    v = np.array(value, dtype=float).reshape(-1)
    if v.shape != (2,) or not np.all(np.isfinite(v)):
        raise ValueError("{} must be two finite numbers".format(name))
    return v


class SuperquadricParams(object):
    """The 13 parameters of a tapered superellipsoid

    scale is (a1, a2, a3) in meters, shape is (eps1, eps2), euler holds the
    intrinsic Z-Y-X angles of the local frame, taper is (kx, ky) applied
    along local z and center is the position of the local origin.
    """
    def __init__(self, scale, shape=(1.0, 1.0), euler=(0.0, 0.0, 0.0),
                 taper=(0.0, 0.0), center=(0.0, 0.0, 0.0)):
        self.scale = scale
        self.shape = shape
        self.euler = euler
        self.taper = taper
        self.center = center

    def setScale(self, scale):
        v = _triple(scale, "Scale")
        if np.any(v <= 0):
            raise ValueError("Scale values must be greater than zero")
        self.__scale = v

    def getScale(self):
        return self.__scale.copy()

    scale = property(getScale, setScale)

    def setShape(self, shape):
        v = _pair(shape, "Shape")
        if np.any(v < SHAPE_MIN - 1e-12) or np.any(v > SHAPE_MAX + 1e-12):
            raise ValueError("Shape values must be between {} and {}".format(SHAPE_MIN, SHAPE_MAX))
        self.__shape = v

    def getShape(self):
        return self.__shape.copy()

    shape = property(getShape, setShape)

    def setEuler(self, euler):
        self.__euler = _triple(euler, "Euler angles")

    def getEuler(self):
        return self.__euler.copy()

    euler = property(getEuler, setEuler)

    def setTaper(self, taper):
        v = _pair(taper, "Taper")
        if np.any(np.abs(v) >= 1.0):
            raise ValueError("Taper values must be strictly between -1 and 1")
        self.__taper = v

    def getTaper(self):
        return self.__taper.copy()

    taper = property(getTaper, setTaper)

    def setCenter(self, center):
        self.__center = _triple(center, "Center")

    def getCenter(self):
        return self.__center.copy()

    center = property(getCenter, setCenter)

    def rotation(self):
        """Matrix whose columns are the local axes in the world frame"""
        return Rotation.from_euler(EULER_ORDER, self.__euler).as_matrix()

    def toVector(self):
        return np.concatenate([self.__scale, self.__shape, self.__euler,
                               self.__taper, self.__center])

    @classmethod
    def fromVector(cls, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (SQ_PARAMETER_COUNT,):
            raise ValueError("Expected {} parameters".format(SQ_PARAMETER_COUNT))
        return cls(x[0:3], x[3:5], x[5:8], x[8:10], x[10:13])

    def toDict(self):
        return {"scale": self.__scale.tolist(), "shape": self.__shape.tolist(),
                "euler": self.__euler.tolist(), "taper": self.__taper.tolist(),
                "center": self.__center.tolist()}

    @classmethod
    def fromDict(cls, d):
        return cls(d["scale"], d.get("shape", (1.0, 1.0)), d.get("euler", (0.0, 0.0, 0.0)),
                   d.get("taper", (0.0, 0.0)), d.get("center", (0.0, 0.0, 0.0)))

    def copy(self):
        return SuperquadricParams.fromVector(self.toVector())

    def __str__(self):
        return "SQ(scale={}, shape={}, euler={}, taper={}, center={})".format(
            np.round(self.__scale, 5).tolist(), np.round(self.__shape, 4).tolist(),
            np.round(self.__euler, 4).tolist(), np.round(self.__taper, 4).tolist(),
            np.round(self.__center, 5).tolist())


class SqFitResult(object):
    """Outcome of fitSuperquadric

    iterations counts residual evaluations made by the LM solver, including
    the ones spent on its finite difference Jacobian.
    """
    def __init__(self, params, residual, iterations, converged):
        self.params = params
        self.residual = float(residual)
        self.iterations = int(iterations)
        self.converged = bool(converged)

    def toDict(self):
        d = self.params.toDict()
        d["residual"] = self.residual
        d["iterations"] = self.iterations
        d["converged"] = self.converged
        return d


def _spow(u, e):
    return np.sign(u) * np.abs(u) ** e

def _localPoints(points, sq):
    # World to SQ frame, then undo the linear taper along local z
    p = (np.atleast_2d(np.asarray(points, dtype=float)) - sq.center).dot(sq.rotation())
    a = sq.scale
    k = sq.taper
    zr = p[:, 2] / a[2]
    fx = k[0] * zr + 1.0
    fy = k[1] * zr + 1.0
    fx = np.where(np.abs(fx) < 1e-9, np.where(fx < 0, -1e-9, 1e-9), fx)
    fy = np.where(np.abs(fy) < 1e-9, np.where(fy < 0, -1e-9, 1e-9), fy)
    return np.column_stack([p[:, 0] / fx, p[:, 1] / fy, p[:, 2]])

def _insideOutside(points, sq):
    q = _localPoints(points, sq)
    a = sq.scale
    e1, e2 = sq.shape
    with np.errstate(over='ignore', invalid='ignore'):
        xy = np.abs(q[:, 0] / a[0]) ** (2.0 / e2) + np.abs(q[:, 1] / a[1]) ** (2.0 / e2)
        f = xy ** (e2 / e1) + np.abs(q[:, 2] / a[2]) ** (2.0 / e1)
    return np.where(np.isfinite(f), np.minimum(f, _F_CAP), _F_CAP)


def insideOutside(p, sq):
    """Evaluate the inside-outside function F

    F is below 1 inside the surface, 1 on it and above 1 outside.  p may be
    a single point, in which case a float is returned, or an (N, 3) array.
    """
    f = _insideOutside(p, sq)
    if np.ndim(p) == 1:
        return float(f[0])
    return f


def residuals(points, sq):
    """Per point terms of fitCost, sqrt(a1 a2 a3) (F^eps1 - 1)"""
    a = sq.scale
    f = _insideOutside(points, sq)
    return np.sqrt(a[0] * a[1] * a[2]) * (f ** sq.shape[0] - 1.0)


def fitCost(cloud, sq):
    """Volume penalised least squares cost of sq against the cloud"""
    if len(cloud) == 0:
        raise EmptyCloudError("Cannot compute a fit cost for an empty cloud")
    r = residuals(cloud.points, sq)
    return float(r.dot(r))


def surfacePoints(sq, eta, omega):
    """Surface points of sq at latitudes eta and longitudes omega

    Applies the signed powers, the taper along local z and the pose.
    """
    a = sq.scale
    e1, e2 = sq.shape
    k = sq.taper
    ce = _spow(np.cos(eta), e1)
    x = a[0] * ce * _spow(np.cos(omega), e2)
    y = a[1] * ce * _spow(np.sin(omega), e2)
    z = a[2] * _spow(np.sin(eta), e1)
    x = x * (k[0] * z / a[2] + 1.0)
    y = y * (k[1] * z / a[2] + 1.0)
    return np.column_stack([x, y, z]).dot(sq.rotation().T) + sq.center


def sampleSurface(sq, n, noiseSigma=0.0, seed=0):
    """Sample n points on the surface of sq

    Uses the usual eta/omega parameterisation with signed powers, applies
    taper and pose, then adds isotropic Gaussian noise.  The same seed
    always gives the same cloud.
    """
    if n < 1:
        raise ValueError("Need at least one sample")
    if noiseSigma < 0:
        raise ValueError("Noise sigma can not be negative")
    rng = np.random.default_rng(seed)
    eta = rng.uniform(-np.pi / 2, np.pi / 2, n)
    omega = rng.uniform(-np.pi, np.pi, n)
    pts = surfacePoints(sq, eta, omega)
    if noiseSigma > 0:
        pts = pts + rng.normal(0.0, noiseSigma, pts.shape)
    return PointCloud(pts, "sq")


def clampVector(x):
    """Project a raw parameter vector into the valid parameter box"""
    x = np.array(x, dtype=float)
    x[0:3] = np.maximum(x[0:3], SCALE_MIN)
    x[3:5] = np.clip(x[3:5], SHAPE_MIN, SHAPE_MAX)
    x[8:10] = np.clip(x[8:10], -TAPER_LIMIT, TAPER_LIMIT)
    return x


# The optimizer works on an unbounded vector.  Scale, shape and taper are
# mapped smoothly into their ranges so no slot ever has a flat gradient.
_SHAPE_SPAN = SHAPE_MAX - SHAPE_MIN
_EDGE = 1e-9

def encodeVector(sq):
    """Unbounded search vector for sq, the inverse of decodeVector"""
    x = clampVector(sq.toVector())
    u = x.copy()
    u[0:3] = np.log(np.maximum(x[0:3] - SCALE_MIN, _EDGE))
    s = np.clip((x[3:5] - SHAPE_MIN) / _SHAPE_SPAN, _EDGE, 1.0 - _EDGE)
    u[3:5] = logit(s)
    t = np.clip(x[8:10] / TAPER_LIMIT, -1.0 + _EDGE, 1.0 - _EDGE)
    u[8:10] = np.arctanh(t)
    return u

def decodeVector(u):
    """Parameters for an unbounded search vector"""
    u = np.asarray(u, dtype=float)
    x = u.copy()
    with np.errstate(over='ignore'):
        x[0:3] = SCALE_MIN + np.minimum(np.exp(u[0:3]), 1e6)
    x[3:5] = SHAPE_MIN + _SHAPE_SPAN * expit(u[3:5])
    x[8:10] = TAPER_LIMIT * np.tanh(u[8:10])
    return SuperquadricParams.fromVector(clampVector(x))


def initialGuesses(cloud, restarts=3):
    """PCA based starting points, one per choice of the local z axis"""
    frame = pcaFrame(cloud)
    d = cloud.points - frame.center
    guesses = []
    for i in range(min(restarts, 3)):
        others = [j for j in range(3) if j != i]
        r = np.column_stack([frame.axes[:, others[0]], frame.axes[:, others[1]], frame.axes[:, i]])
        if np.linalg.det(r) < 0:
            r[:, 1] = -r[:, 1]
        proj = d.dot(r)
        half = np.maximum((proj.max(axis=0) - proj.min(axis=0)) / 2.0, SCALE_MIN)
        euler = Rotation.from_matrix(r).as_euler(EULER_ORDER)
        guesses.append(SuperquadricParams(half, (1.0, 1.0), euler, (0.0, 0.0), frame.center))
    return guesses


def fitSuperquadric(cloud, config=None):
    """Fit a tapered superellipsoid to a cloud with Levenberg-Marquardt

    Every PCA initialisation is optimised with MINPACK's LM on the
    unbounded search vector of encodeVector and the lowest residual result
    is returned.

    :param cloud: Points to fit, at least 13 of them
    :type cloud: PointCloud
    :param config: Fit settings, see DEFAULT_FIT_CONFIG
    :returns: SqFitResult
    :raises InsufficientDataError: fewer than 13 points
    :raises DegenerateGeometryError: the cloud has no usable PCA frame
    """
    cfg = dict(DEFAULT_FIT_CONFIG)
    if config:
        cfg.update(config)
    if len(cloud) < SQ_PARAMETER_COUNT:
        raise InsufficientDataError("Need at least {} points to fit a superquadric, got {}"
                                    .format(SQ_PARAMETER_COUNT, len(cloud)))
    pts = cloud.points
    best = None
    for n, guess in enumerate(initialGuesses(cloud, cfg["restarts"])):
        x0 = encodeVector(guess)
        fun = lambda u: residuals(pts, decodeVector(u))
        res = least_squares(fun, x0, method='lm', x_scale='jac',
                            ftol=cfg["ftol"], xtol=cfg["xtol"], gtol=cfg["gtol"],
                            max_nfev=cfg["max_iterations"] * (SQ_PARAMETER_COUNT + 1))
        params = decodeVector(res.x)
        cost = fitCost(cloud, params)
        log.debug("Fit restart {}: cost {:.6g} -> {:.6g} after {} evaluations"
                  .format(n, fitCost(cloud, guess), cost, res.nfev))
        if best is None or cost < best.residual:
            best = SqFitResult(params, cost, res.nfev, res.status > 0)
    log.info("Fitted {} with residual {:.6g}".format(best.params, best.residual))
    return best


def _sign(v):
    for c in v:
        if abs(c) > 1e-6:
            return 1.0 if c > 0 else -1.0
    return 1.0


def canonicalize(sq):
    """Map sq onto the canonical member of its symmetry class

    The x and y axes are swapped if needed so that a1 >= a2, then one of the
    four half turns that leave the shape unchanged is chosen so that the
    local x and z axes have a positive leading component.  Half turns that
    reverse local z also reverse the taper.  Euler angles end up in (-pi, pi].
    """
    a = sq.scale
    k = sq.taper
    r = sq.rotation()
    if a[0] < a[1]:
        a = a[[1, 0, 2]]
        k = k[[1, 0]]
        r = r.dot(np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]))
    sx = _sign(r[:, 0])
    sz = _sign(r[:, 2])
    r = r.dot(np.diag([sx, sx * sz, sz]))
    if sz < 0:
        k = -k
    euler = Rotation.from_matrix(r).as_euler(EULER_ORDER)
    euler = np.where(euler <= -np.pi, euler + 2 * np.pi, euler)
    return SuperquadricParams(a, sq.shape, euler, k + 0.0, sq.center)
