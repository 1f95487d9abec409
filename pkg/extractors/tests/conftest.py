import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

sys.path.insert(0, str(Path(__file__).parent))


def _portrait_sources():
    import skimage.data

    sources = [np.asarray(skimage.data.astronaut())]
    try:
        import matplotlib.cbook as cbook

        hopper = Image.open(cbook.get_sample_data("grace_hopper.jpg", asfileobj=False))
        sources.append(np.asarray(hopper.convert("RGB")))
    except Exception:
        pass
    return sources


def build_portraits(dest: Path, count: int = 12) -> list[Path]:
    """Deterministic portrait variants (flips, brightness, crops) of the
    public-domain photos bundled with scikit-image/matplotlib."""
    dest.mkdir(parents=True, exist_ok=True)

    def variants(img):
        h, w = img.shape[:2]
        yield img
        yield img[:, ::-1]
        yield np.clip(img.astype(np.int16) + 35, 0, 255).astype(np.uint8)
        yield np.clip(img.astype(np.int16) - 35, 0, 255).astype(np.uint8)
        yield img[: int(h * 0.85), : int(w * 0.85)]
        yield img[int(h * 0.1) :, int(w * 0.1) :]
        yield np.clip(img.astype(np.int16) + 70, 0, 255).astype(np.uint8)[:, ::-1]
        yield img[: int(h * 0.9), int(w * 0.05) :]

    paths = []
    index = 0
    bases = _portrait_sources()
    while len(paths) < count:
        base = bases[index % len(bases)]
        variant = list(variants(base))[index % 8]
        path = dest / f"portrait{index:02d}.png"
        Image.fromarray(np.ascontiguousarray(variant)).save(path)
        paths.append(path)
        index += 1
    return paths


@pytest.fixture(scope="session")
def portraits_dir(tmp_path_factory) -> Path:
    dest = tmp_path_factory.mktemp("portraits")
    build_portraits(dest, count=12)
    return dest


@pytest.fixture(scope="session")
def duplicate_pair_dir(tmp_path_factory) -> Path:
    import skimage.data

    dest = tmp_path_factory.mktemp("dup")
    img = Image.fromarray(skimage.data.astronaut())
    img.save(dest / "copy_a.png")
    img.save(dest / "copy_b.png")
    return dest
