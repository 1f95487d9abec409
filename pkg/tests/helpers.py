"""Shared builders and independent oracles used across the test suite.

The oracles here are deliberately written as plain loops over the obvious
formulas; they never call into the code paths they are used to check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from faceset import ClassProbabilitySet, EmbeddingSet


def unit_rows(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    m = rng.normal(size=(n, d))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def make_set(matrix, ids=None, normalized=False, face_found=None, check=True) -> EmbeddingSet:
    matrix = np.asarray(matrix, dtype=np.float64)
    if ids is None:
        ids = [f"img{i:04d}" for i in range(matrix.shape[0])]
    return EmbeddingSet.create(
        ids, matrix, normalized=normalized, face_found=face_found, check=check
    )


def make_probs(matrix, ids=None) -> ClassProbabilitySet:
    matrix = np.asarray(matrix, dtype=np.float64)
    if ids is None:
        ids = [f"img{i:04d}" for i in range(matrix.shape[0])]
    return ClassProbabilitySet.create(ids, matrix)


def random_probs(rng: np.random.Generator, n: int, c: int) -> np.ndarray:
    m = rng.uniform(0.01, 1.0, size=(n, c))
    return m / m.sum(axis=1, keepdims=True)


def jittered_directions(
    rng: np.random.Generator, n: int, sigma: float, d: int = 64
) -> np.ndarray:
    """Unit vectors at angle ~|N(0, sigma)| from a fixed base direction."""
    base = np.zeros(d)
    base[0] = 1.0
    out = np.empty((n, d))
    for i in range(n):
        theta = abs(rng.normal(0.0, sigma))
        raw = rng.normal(size=d)
        perp = raw - raw @ base * base
        perp /= np.linalg.norm(perp)
        out[i] = math.cos(theta) * base + math.sin(theta) * perp
    return out


def random_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


# ---------------------------------------------------------------------------
# oracles


def welford_summary(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Streaming (single-pass) mean and unbiased covariance."""
    n, d = rows.shape
    mean = np.zeros(d)
    m2 = np.zeros((d, d))
    for count, row in enumerate(rows, start=1):
        delta = row - mean
        mean = mean + delta / count
        m2 = m2 + np.outer(delta, row - mean)
    return mean, m2 / (n - 1)


def two_pass_summary(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Textbook two-pass mean and unbiased covariance via explicit loops."""
    n, d = rows.shape
    mean = np.array([math.fsum(rows[:, j]) / n for j in range(d)])
    cov = np.zeros((d, d))
    for a in range(d):
        for b in range(d):
            cov[a, b] = math.fsum(
                (rows[i, a] - mean[a]) * (rows[i, b] - mean[b]) for i in range(n)
            ) / (n - 1)
    return mean, cov


def diagonal_frechet(mu1, mu2, var1, var2) -> float:
    """Closed form for diagonal covariances."""
    total = 0.0
    for a, b, s1, s2 in zip(mu1, mu2, var1, var2):
        total += (a - b) ** 2 + s1 + s2 - 2.0 * math.sqrt(s1 * s2)
    return total


def inception_score_oracle(matrix: np.ndarray, splits: int) -> tuple[float, float]:
    """Direct double-loop KL computation, including the 1e-12 floor policy."""
    p = np.array(matrix, dtype=np.float64, copy=True)
    n, c = p.shape
    for i in range(n):
        if any(p[i, j] < 1e-12 for j in range(c)):
            for j in range(c):
                if p[i, j] < 1e-12:
                    p[i, j] = 1e-12
            p[i] = p[i] / p[i].sum()
    scores = []
    for s in range(splits):
        part = p[s * n // splits : (s + 1) * n // splits]
        marginal = part.mean(axis=0)
        kls = []
        for row in part:
            kl = 0.0
            for j in range(c):
                kl += row[j] * (math.log(row[j]) - math.log(marginal[j]))
            kls.append(kl)
        scores.append(math.exp(sum(kls) / len(kls)))
    mean = sum(scores) / len(scores)
    variance = sum((s - mean) ** 2 for s in scores) / len(scores)
    return mean, variance


def pair_distances_oracle(rows: np.ndarray) -> np.ndarray:
    """All-pairs squared L2 distances, pairs enumerated (0,1), (0,2), ..."""
    out = []
    for i in range(rows.shape[0] - 1):
        for j in range(i + 1, rows.shape[0]):
            diff = rows[j] - rows[i]
            out.append((diff * diff).sum())
    return np.array(out)


def variability_oracle(rows: np.ndarray) -> tuple[int, float, float, float, float]:
    d = pair_distances_oracle(rows)
    mean = math.fsum(d) / d.size
    var = math.fsum((x - mean) ** 2 for x in d) / d.size
    return d.size, mean, var, float(d.min()), float(d.max())


def match_counts_oracle(
    gen_rows: np.ndarray, gen_valid: np.ndarray, ref_rows: np.ndarray, threshold: float
) -> tuple[int, int, int]:
    matching = not_matching = not_faces = 0
    for row, ok in zip(gen_rows, gen_valid):
        if not ok:
            not_faces += 1
            continue
        best = min(
            math.sqrt(((row - ref) ** 2).sum()) for ref in ref_rows
        )
        if best <= threshold:
            matching += 1
        else:
            not_matching += 1
    return matching, not_matching, not_faces


def exhaustive_dispersion_oracle(
    rows: np.ndarray, ids: tuple[str, ...], k: int
) -> tuple[tuple[str, ...], float]:
    """Second, independent enumeration of the max-min dispersion optimum."""
    best_ids = None
    best_obj = -1.0
    for combo in itertools.combinations(range(rows.shape[0]), k):
        if len(combo) < 2:
            obj = 0.0
        else:
            obj = min(
                float(((rows[a] - rows[b]) ** 2).sum())
                for a, b in itertools.combinations(combo, 2)
            )
        key = tuple(sorted(ids[i] for i in combo))
        if obj > best_obj or (obj == best_obj and key < best_ids):
            best_obj = obj
            best_ids = key
    return best_ids, best_obj
