"""Independent reference computations used by the tests."""

import numpy as np


def lattice_box_chords(d, cutoff):
    """Torus chords by a vectorized scan of a generous lattice box."""
    r = int(np.ceil(cutoff + abs(d[0]) + abs(d[1]))) + 2
    m, n = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    act = np.hypot(d[0] + m, d[1] + n)
    keep = act <= cutoff
    return {(int(a), int(b)): float(v) for a, b, v in zip(m[keep], n[keep], act[keep])}


def cannon_sphere_sizes(n_terms):
    """Sphere sizes of the genus-2 surface group in the standard generators.

    Power series of (1 + 2x + 2x^2 + 2x^3 + x^4) / (1 - 6x - 6x^2 - 6x^3 + x^4).
    """
    num = [1, 2, 2, 2, 1]
    den = [1, -6, -6, -6, 1]
    out = []
    for i in range(n_terms):
        c = num[i] if i < len(num) else 0
        c -= sum(den[j] * out[i - j] for j in range(1, min(i, 4) + 1))
        out.append(c)
    return out


def letter_abelianization(kind, letters):
    """Exponent sums over the raw (unreduced) letters."""
    v = [0] * kind.n_generators
    for g, e in letters:
        v[g] += e
    return tuple(v)


def random_letters(rng, kind, max_len):
    n = int(rng.integers(0, max_len + 1))
    return [(int(rng.integers(0, kind.n_generators)), int(rng.choice([-2, -1, 1, 2])))
            for _ in range(n)]


def truncated_kernel_dimension(q, box=12):
    """dim ker of (u, v) -> u + q v on coefficient vectors with exponents in the box.

    The map is written as an integer matrix from the truncated domain into a
    box large enough to hold every image, and its rank is taken numerically.
    """
    expo = [(a, b) for a in range(-box, box + 1) for b in range(-box, box + 1)]
    shift = max(abs(a) + abs(b) for a, b in q.terms()) if not q.is_zero() else 0
    big = box + shift
    index = {(a, b): i for i, (a, b) in enumerate(
        (a, b) for a in range(-big, big + 1) for b in range(-big, big + 1))}
    M = np.zeros((len(index), 2 * len(expo)))
    for j, (a, b) in enumerate(expo):
        M[index[(a, b)], j] += 1
        for (qa, qb), c in q.terms().items():
            M[index[(a + qa, b + qb)], len(expo) + j] += c
    return 2 * len(expo) - int(np.linalg.matrix_rank(M))
