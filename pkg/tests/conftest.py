import json

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from PIL import Image

from figmine import synthetic
from figmine.features import build_codebook, fit_whitening, normalize_image, sample_patches

settings.register_profile(
    "figmine",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("figmine")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def small_corpus():
    """60 labeled synthetic singleton images (12 per class)."""
    return synthetic.generate_labeled_corpus(12, seed=3)


@pytest.fixture(scope="session")
def small_codebook(small_corpus):
    images, _ = small_corpus
    norm = [normalize_image(im) for im in images]
    patches = sample_patches(norm, per_image=60, seed=0)
    whitening = fit_whitening(patches)
    return build_codebook(patches, whitening, k=24, seed=0)


def write_corpus_dir(root, papers, rng):
    """Lay out images + metadata JSONL for ingest; returns metadata path.

    papers: list of (paper_id, [(filename, image array or raw bytes)], extra fields)
    """
    img_dir = root / "images"
    img_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    for paper_id, figures, extra in papers:
        figs = []
        for name, data in figures:
            path = img_dir / name
            if isinstance(data, bytes):
                path.write_bytes(data)
            else:
                arr = (np.asarray(data) * 255).round().astype(np.uint8)
                Image.fromarray(arr, mode="L").save(path)
            figs.append({"file": name, "caption": f"caption for {name}"})
        row = {"paper_id": paper_id, "year": 2005, "page_count": 10,
               "title": f"Title {paper_id}", "figures": figs}
        row.update(extra)
        lines.append(row)
    meta = root / "metadata.jsonl"
    meta.write_text("".join(json.dumps(l) + "\n" for l in lines))
    return img_dir, meta


@pytest.fixture(scope="session")
def fragment_model():
    """Standalone/auxiliary fragment model for dismantler tests."""
    from figmine import gate

    images, labels = synthetic.generate_fragment_set(60, seed=1)
    return gate.train_gate(images, labels)


@pytest.fixture(scope="session")
def gate_model():
    """Multichart/singleton gate model on a small synthetic set."""
    from figmine import gate

    images, labels = synthetic.generate_gate_set(80, 80, seed=2)
    return gate.train_gate(images, labels)


@pytest.fixture(scope="session")
def ingested_manifest(tmp_path_factory):
    """A small ingested manifest: 6 papers, 14 singleton/montage figures."""
    from figmine import corpus

    root = tmp_path_factory.mktemp("corpus")
    rng = np.random.default_rng(5)
    kinds = sorted(synthetic.GENERATORS)
    papers = []
    n = 0
    for p in range(6):
        figs = []
        for k in range(2 + p % 2):
            if n % 5 == 4:
                img, _, _ = synthetic.generate_montage(rng)
            else:
                img = synthetic.generate_figure(kinds[n % len(kinds)], rng)
            figs.append((f"p{p}f{k}.png", img))
            n += 1
        papers.append((f"paper{p}", figs, {"journal": f"J{p % 3}", "abstract": "studying things"}))
    img_dir, meta = write_corpus_dir(root, papers, rng)
    out = root / "manifest"
    corpus.ingest(img_dir, meta, out)
    return out
