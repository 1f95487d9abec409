"""Face detection, face embeddings, and landmark export.

Detection uses the LBP frontal-face cascade that ships with scikit-image,
so it works with no model download. Embeddings are low-frequency DCT
descriptors of the normalized face crop: deterministic, unit-norm, and
identical for identical images. Landmarks follow the 68-point convention,
placed by a canonical face template scaled into the detected box.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
import skimage.data
from skimage.feature import Cascade

from .imageio import nearest_resize, to_grayscale

log = logging.getLogger("faceset_extractors.faces")

EMBEDDING_DIM = 64
CROP_SIZE = 32
BOX_MARGIN = 0.1


@dataclass(frozen=True)
class FaceBox:
    """Detected face region in pixel coordinates."""

    x: int
    y: int
    width: int
    height: int


class FaceExtractor:
    def __init__(self, min_size: int = 40):
        self._cascade = Cascade(skimage.data.lbp_frontal_face_cascade_filename())
        self._min_size = min_size

    def detect(self, rgb: np.ndarray) -> FaceBox | None:
        """Largest detected frontal face, or None."""
        h, w = rgb.shape[0], rgb.shape[1]
        limit = min(h, w)
        if limit < self._min_size:
            return None
        try:
            found = self._cascade.detect_multi_scale(
                img=rgb,
                scale_factor=1.15,
                step_ratio=1,
                min_size=(self._min_size, self._min_size),
                max_size=(limit, limit),
            )
        except Exception as exc:  # detector failure counts as "no face"
            log.info("face detector failed: %s", exc)
            return None
        if not found:
            return None
        best = max(found, key=lambda d: d["width"] * d["height"])
        return FaceBox(
            x=int(best["c"]), y=int(best["r"]),
            width=int(best["width"]), height=int(best["height"]),
        )

    def embed(self, rgb: np.ndarray, box: FaceBox) -> np.ndarray | None:
        """Unit-norm spectral descriptor of the face crop."""
        h, w = rgb.shape[0], rgb.shape[1]
        mx = int(round(box.width * BOX_MARGIN))
        my = int(round(box.height * BOX_MARGIN))
        y0, y1 = max(0, box.y - my), min(h, box.y + box.height + my)
        x0, x1 = max(0, box.x - mx), min(w, box.x + box.width + mx)
        crop = rgb[y0:y1, x0:x1]
        if crop.shape[0] < 2 or crop.shape[1] < 2:
            return None
        gray = to_grayscale(nearest_resize(crop, CROP_SIZE, CROP_SIZE))
        std = gray.std()
        if std < 1e-9:
            return None
        gray = (gray - gray.mean()) / std
        side = int(math.isqrt(EMBEDDING_DIM))
        coeffs = scipy.fft.dctn(gray, norm="ortho")[:side, :side].copy()
        coeffs[0, 0] = 0.0  # DC carries no identity information
        flat = coeffs.reshape(-1)
        norm = np.linalg.norm(flat)
        if norm < 1e-12:
            return None
        return flat / norm


def landmark_template(box: FaceBox) -> list[tuple[float, float]]:
    """68 landmark points in the standard ordering, from a canonical face
    layout scaled into the detected box. Template geometry, not a fitted
    shape model."""
    pts: list[tuple[float, float]] = []

    def add(u: float, v: float) -> None:
        pts.append((box.x + u * box.width, box.y + v * box.height))

    for i in range(17):  # jaw 0-16
        t = i / 16.0
        add(0.5 - 0.5 * math.cos(math.pi * t), 0.42 + 0.58 * math.sin(math.pi * t))
    for i in range(5):  # right brow 17-21 (subject's right, image left)
        t = i / 4.0
        add(0.14 + 0.26 * t, 0.28 - 0.05 * math.sin(math.pi * t))
    for i in range(5):  # left brow 22-26
        t = i / 4.0
        add(0.60 + 0.26 * t, 0.23 + 0.05 * math.sin(math.pi * t))
    for i in range(4):  # nose bridge 27-30
        add(0.50, 0.36 + 0.06 * i)
    for i in range(5):  # nose base 31-35
        t = i / 4.0
        add(0.40 + 0.20 * t, 0.62 + 0.03 * math.sin(math.pi * t))
    for cx, rng in ((0.31, range(36, 42)), (0.69, range(42, 48))):  # eyes
        for j, _ in enumerate(rng):
            angle = 2.0 * math.pi * j / 6.0
            add(cx + 0.09 * math.cos(angle), 0.40 - 0.045 * math.sin(angle))
    for j in range(12):  # outer lip 48-59
        angle = 2.0 * math.pi * j / 12.0
        add(0.50 + 0.16 * math.cos(angle), 0.78 - 0.07 * math.sin(angle))
    for j in range(8):  # inner lip 60-67
        angle = 2.0 * math.pi * j / 8.0
        add(0.50 + 0.09 * math.cos(angle), 0.78 - 0.035 * math.sin(angle))
    return pts
