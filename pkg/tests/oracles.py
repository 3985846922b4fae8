"""Independent brute-force references used only by the tests.

Nothing here imports the package: each quantity is recomputed from first
principles by enumerating outcomes.
"""

import math
from itertools import product

import numpy as np


def shannon(probs):
    return -sum(x * math.log2(x) for x in probs if x > 0)


def h(p):
    return shannon([p, 1 - p])


def _entropy_of_masses(masses):
    m = np.asarray(masses, dtype=float).ravel()
    m = m[m > 0]
    return float(-(m * np.log2(m)).sum())


def parity_split_by_enumeration(p, n):
    """H(Z|Y) and H(X|Y,Z) from the explicit (X, Y, Z) joint, Z = parity of X.

    Returns ``(H_Z_given_Y, H_X_given_YZ, H_X_given_Y)``.
    """
    q = 1 - p
    k = 2**n
    words = np.arange(k)
    weight = np.array([bin(w).count("1") for w in range(k)])
    dist = weight[words[:, None] ^ words[None, :]]
    joint_xy = (p ** (n - dist)) * (q**dist) / k  # rows x, cols y
    z = weight & 1  # parity of x
    joint_yz = np.zeros((k, 2))
    for zval in (0, 1):
        joint_yz[:, zval] = joint_xy[z == zval].sum(axis=0)
    h_y = _entropy_of_masses(joint_xy.sum(axis=0))
    h_yz = _entropy_of_masses(joint_yz)
    h_xyz = _entropy_of_masses(joint_xy)  # z is a function of x
    return h_yz - h_y, h_xyz - h_yz, h_xyz - h_y


def error_patterns(p, t):
    """All (pattern, probability) pairs for t independent flips with P(no flip) = p."""
    for bits in product((0, 1), repeat=t):
        w = sum(bits)
        yield bits, p ** (t - w) * (1 - p) ** w


def posterior_by_enumeration(p, t):
    """P(first bits agree | block parities agree)."""
    match = agree = 0.0
    for bits, pr in error_patterns(p, t):
        if sum(bits) % 2 == 0:
            match += pr
            if bits[0] == 0:
                agree += pr
    return agree / match


def keep_by_enumeration(p, t):
    return sum(pr for bits, pr in error_patterns(p, t) if sum(bits) % 2 == 0)


def rate_by_enumeration(p, t):
    return keep_by_enumeration(p, t) / t * (1 - h(posterior_by_enumeration(p, t)))
