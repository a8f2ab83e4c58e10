"""Central finite differences over 3-vectors."""
import numpy as np


def gradient(fn, x, h=1e-5):
    """Gradient of a scalar function of a 3-vector."""
    x = np.asarray(x, dtype=float)
    out = np.empty(3)
    for i in range(3):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        out[i] = (fn(xp) - fn(xm)) / (xp[i] - xm[i])
    return out


def jacobian(field, x, h=1e-5):
    """J[i, j] = d field_i / d x_j for a 3-vector field."""
    x = np.asarray(x, dtype=float)
    J = np.empty((3, 3))
    for j in range(3):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        J[:, j] = (np.asarray(field(xp)) - np.asarray(field(xm))) / (xp[j] - xm[j])
    return J


def curl(field, x, h=1e-5):
    J = jacobian(field, x, h)
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])
