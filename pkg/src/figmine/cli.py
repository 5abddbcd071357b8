"""Command-line interface for the figure-mining pipeline."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from figmine import alef, analysis, baselines, corpus, dismantler, gate, synthetic
from figmine.errors import FigmineError, InvalidParameter
from figmine.features import build_codebook, encode, fit_whitening, normalize_image, sample_patches
from figmine.features.codebook import Codebook
from figmine.records import SINGLETON_CLASSES, FigureRecord, Manifest
from figmine.svm import ConfusionMatrix, SvmModel, SvmParams, cross_validate, grid_search, predict, train


def _load_manifest_images(manifest, figures):
    for fig in figures:
        yield fig, corpus.load_image(manifest, fig.image_key)


def cmd_ingest(args):
    report = corpus.ingest(args.images, args.metadata, args.out)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_demo_corpus(args):
    """Generate a synthetic corpus: images, metadata JSONL, citation TSV."""
    rng = np.random.default_rng(args.seed)
    out = Path(args.out)
    img_dir = out / "images"
    img_dir.mkdir(parents=True, exist_ok=True)
    kinds = sorted(synthetic.GENERATORS)
    words = ["virus", "genome", "neuron", "protein", "network", "cell",
             "graph", "model", "signal", "tissue"]
    meta_lines = []
    edges = []
    from PIL import Image

    paper_ids = [f"P{idx:04d}" for idx in range(args.papers)]
    true_labels = []
    for idx, pid in enumerate(paper_ids):
        n_figs = int(rng.integers(1, 5))
        figs = []
        for k in range(n_figs):
            if rng.random() < args.montage_rate:
                img, _, _ = synthetic.generate_montage(rng)
                kind = "multichart"
            else:
                kind = kinds[int(rng.integers(len(kinds)))]
                img = synthetic.generate_figure(kind, rng)
            name = f"{pid}_f{k}.png"
            Image.fromarray((img * 255).round().astype(np.uint8), mode="L").save(img_dir / name)
            cap_words = rng.choice(words, size=4, replace=True)
            figs.append({"file": name, "caption": "Figure of " + " ".join(cap_words)})
            true_labels.append({"figure_id": f"{pid}/fig{k}", "label": kind})
        title_words = rng.choice(words, size=3, replace=False)
        meta_lines.append({
            "paper_id": pid,
            "title": " ".join(w.capitalize() for w in title_words),
            "abstract": "We study " + " and ".join(rng.choice(words, size=3)) + ".",
            "journal": f"Journal {int(rng.integers(1, 5))}",
            "year": int(rng.integers(1995, 2016)),
            "page_count": int(rng.integers(4, 20)),
            "figures": figs,
        })
        for _ in range(int(rng.integers(0, 6))):
            other = paper_ids[int(rng.integers(len(paper_ids)))]
            if other != pid:
                edges.append(f"{pid}\t{other}")
    with open(out / "metadata.jsonl", "w") as f:
        for line in meta_lines:
            f.write(json.dumps(line, sort_keys=True) + "\n")
    with open(out / "citations.tsv", "w") as f:
        f.write("\n".join(edges) + ("\n" if edges else ""))
    with open(out / "labels.jsonl", "w") as f:
        for row in true_labels:
            f.write(json.dumps(row, sort_keys=True) + "\n")
    print(f"wrote {args.papers} papers, {sum(len(m['figures']) for m in meta_lines)} "
          f"images, {len(edges)} citation edges under {out}")
    return 0


def cmd_train_codebook(args):
    manifest = Manifest(args.manifest)
    figures = manifest.load_figures()
    images = [normalize_image(img) for _, img in _load_manifest_images(manifest, figures)]
    patches = sample_patches(images, per_image=args.per_image, seed=args.seed)
    whitening = fit_whitening(patches, eps_zca=args.eps_zca)
    book = build_codebook(patches, whitening, k=args.k, seed=args.seed)
    book.save(args.out, extra_meta={"per_image": args.per_image, "seed": args.seed,
                                    "n_images": len(images)})
    print(f"codebook: k={args.k} from {len(patches)} patches of {len(images)} images -> {args.out}")
    return 0


def cmd_encode(args):
    manifest = Manifest(args.manifest)
    book = Codebook.load(args.codebook)
    figures = manifest.load_figures()
    feats, ids, labels = [], [], []
    for fig, img in _load_manifest_images(manifest, figures):
        feats.append(encode(normalize_image(img), book))
        ids.append(fig.figure_id)
        labels.append(fig.label)
    np.save(args.out, np.array(feats))
    Path(args.ids_out).write_text("".join(i + "\n" for i in ids))
    if args.labels_out:
        Path(args.labels_out).write_text("".join(l + "\n" for l in labels))
    print(f"encoded {len(ids)} figures -> {args.out}")
    return 0


def _read_grid(spec_str):
    text = Path(spec_str).read_text() if Path(spec_str).exists() else spec_str
    cells = json.loads(text)
    return [SvmParams.from_dict(c) for c in cells]


def _labeled_features(args):
    """Features + labels either from arrays on disk or from a manifest join."""
    if args.features:
        X = np.load(args.features)
        labels = [l for l in Path(args.labels).read_text().splitlines() if l]
        return X, labels
    if not (args.manifest and args.codebook):
        raise InvalidParameter(
            "need --features or both --manifest and --codebook")
    wanted = {}
    with open(args.labels) as f:
        for line in f:
            if line.strip():
                row = json.loads(line)
                if row["label"] in SINGLETON_CLASSES:
                    wanted[row["figure_id"]] = row["label"]
    manifest = Manifest(args.manifest)
    book = Codebook.load(args.codebook)
    feats, labels = [], []
    figures = [f for f in manifest.load_figures() if f.figure_id in wanted]
    for fig, img in _load_manifest_images(manifest, figures):
        feats.append(encode(normalize_image(img), book))
        labels.append(wanted[fig.figure_id])
    if not feats:
        raise InvalidParameter("no labeled singleton figures matched the manifest")
    return np.stack(feats), labels


def cmd_train_classifier(args):
    X, labels = _labeled_features(args)
    grid = _read_grid(args.grid) if args.grid else [SvmParams()]
    scale = not args.no_scale
    if len(grid) > 1:
        best, accs = grid_search(X, labels, grid, folds=args.folds, seed=args.seed, scale=scale)
        print("grid accuracies:", [f"{a:.4f}" for a in accs])
    else:
        best = grid[0]
    result = cross_validate(X, labels, best, folds=args.folds, seed=args.seed, scale=scale)
    model = train(X, labels, best, scale=scale)
    model.save(args.out, extra_meta={"cv_accuracy": result.accuracy,
                                     "folds": args.folds, "seed": args.seed})
    report = {
        "params": best.to_dict(),
        "cv": result.to_dict(),
        "reference": {
            "accuracy": baselines.CLASSIFIER_ACCURACY,
            "per_class": baselines.CLASSIFIER_PRECISION_RECALL,
        },
    }
    report_path = args.report or (args.out + ".report.json")
    Path(report_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"cv accuracy {result.accuracy:.4f}; model -> {args.out}; report -> {report_path}")
    return 0


def cmd_classify(args):
    manifest = Manifest(args.manifest)
    book = Codebook.load(args.codebook)
    model = SvmModel.load(args.model)
    papers = manifest.load_papers()
    figures = manifest.load_figures()
    n = 0
    for fig in figures:
        if fig.label == "multichart":
            continue
        img = corpus.load_image(manifest, fig.image_key)
        label, probs = predict(model, encode(normalize_image(img), book))
        fig.label = label
        fig.class_probs = [float(p) for p in probs]
        n += 1
    manifest.write(papers, figures)
    print(f"classified {n} figures")
    return 0


def cmd_train_gate(args):
    if args.synthetic:
        images, labels = synthetic.generate_gate_set(args.synthetic, args.synthetic,
                                                     seed=args.seed)
    else:
        manifest = Manifest(args.manifest)
        wanted = {}
        with open(args.labels) as f:
            for line in f:
                if line.strip():
                    row = json.loads(line)
                    wanted[row["figure_id"]] = row["label"]
        images, labels = [], []
        for fig in manifest.load_figures():
            if fig.figure_id in wanted:
                images.append(corpus.load_image(manifest, fig.image_key))
                lbl = wanted[fig.figure_id]
                labels.append(lbl if lbl == "multichart" else "singleton")
    model = gate.train_gate(images, labels, SvmParams(gamma=args.gamma, penalty_c=args.c))
    model.save(args.out)
    print(f"gate model trained on {len(images)} images -> {args.out}")
    return 0


def cmd_train_fragment(args):
    images, labels = synthetic.generate_fragment_set(args.synthetic, seed=args.seed)
    model = gate.train_gate(images, labels, SvmParams(gamma=args.gamma, penalty_c=args.c))
    model.save(args.out)
    print(f"fragment model trained on {len(images)} fragments -> {args.out}")
    return 0


def cmd_gate(args):
    manifest = Manifest(args.manifest)
    gmodel = gate.GateModel.load(args.model)
    papers = manifest.load_papers()
    figures = manifest.load_figures()
    n_multi = 0
    for fig in figures:
        if fig.parent_figure_id is not None:
            continue  # dismantled outputs are singletons by construction
        img = corpus.load_image(manifest, fig.image_key)
        label, prob = gate.classify_with(gmodel, img)
        fig.gate_prob = float(prob)
        if label == "multichart":
            fig.label = "multichart"
            n_multi += 1
    manifest.write(papers, figures)
    print(f"gated {len(figures)} figures; {n_multi} multichart")
    return 0


def cmd_dismantle(args):
    manifest = Manifest(args.manifest)
    gmodel = gate.GateModel.load(args.gate) if args.gate else None
    fmodel = gate.GateModel.load(args.frag)
    papers = manifest.load_papers()
    figures = manifest.load_figures()
    have_children = {f.parent_figure_id for f in figures if f.parent_figure_id}
    new_figs = []
    from PIL import Image

    for fig in figures:
        if fig.parent_figure_id is not None or fig.figure_id in have_children:
            continue
        if fig.label != "multichart":
            if gmodel is None or fig.label != "unclassified":
                continue
            img = corpus.load_image(manifest, fig.image_key)
            label, prob = gate.classify_with(gmodel, img)
            fig.gate_prob = float(prob)
            if label != "multichart":
                continue
            fig.label = "multichart"
        img = corpus.load_image(manifest, fig.image_key)
        crops, subs = dismantler.dismantle(img, fmodel)
        for k, (crop, sub) in enumerate(zip(crops, subs)):
            png_img = Image.fromarray((crop * 255).round().astype(np.uint8), mode="L")
            import io

            buf = io.BytesIO()
            png_img.save(buf, format="PNG")
            key = manifest.store_image(buf.getvalue())
            new_figs.append(FigureRecord(
                figure_id=f"{fig.figure_id}/sub{k}",
                paper_id=fig.paper_id,
                image_key=key,
                caption=fig.caption,
                width=sub.bbox.width,
                height=sub.bbox.height,
                parent_figure_id=fig.figure_id,
                bbox_in_parent=sub.bbox,
            ))
    manifest.write(papers, figures + new_figs)
    print(f"dismantled into {len(new_figs)} sub-figures")
    return 0


def cmd_rank(args):
    with open(args.edges) as f:
        graph = alef.build_graph(f)
    params = alef.AlefParams(alpha=args.alpha, steps=args.steps)
    if args.scorer == "citation-count":
        scores = alef.citation_count_scores(graph)
    else:
        scores = alef.alef_scores(graph, params)
    with open(args.out, "w") as f:
        for pid in sorted(scores):
            f.write(json.dumps({"paper_id": pid, "alef": scores[pid]}) + "\n")
    print(f"ranked {len(scores)} papers -> {args.out}")
    return 0


def cmd_analyze(args):
    from figmine.search.service import load_scores

    manifest = Manifest(args.manifest)
    papers = manifest.load_papers()
    figures = manifest.load_figures()
    scores = load_scores(args.scores)
    for p in papers:
        p.alef_score = scores.get(p.paper_id, 0.0)

    top_level = [f for f in figures if f.parent_figure_id is None]
    have_children = {f.parent_figure_id for f in figures if f.parent_figure_id}
    leaves = [f for f in figures
              if f.parent_figure_id is not None
              or (f.label != "multichart" and f.figure_id not in have_children)]
    by_paper = {}
    for f in leaves:
        by_paper.setdefault(f.paper_id, []).append(f)
    profiles = {p.paper_id: analysis.density_profile(p, by_paper.get(p.paper_id, ()))
                for p in papers}

    report_dir = Path(args.report)
    report_dir.mkdir(parents=True, exist_ok=True)

    def label_counts(figs):
        out = {}
        for f in figs:
            out[f.label] = out.get(f.label, 0) + 1
        return dict(sorted(out.items()))

    counts = {"before_dismantling": label_counts(top_level),
              "after_dismantling": label_counts(leaves),
              "reference": baselines.FIGURE_COUNTS}
    (report_dir / "counts.json").write_text(json.dumps(counts, indent=2, sort_keys=True) + "\n")

    correlations = {}
    rows = ["figure_type,target,filter,coefficient,p_value,label,n_bins"]
    for target in ("density", "proportion"):
        for t in analysis.DENSITY_TYPES:
            for name, excl in (("all", ()), ("filtered", tuple(args.exclude_journal))):
                if name == "filtered" and not excl:
                    continue
                try:
                    r = analysis.binned_correlation(
                        papers, profiles, t, target=target,
                        bin_fraction=args.bin_fraction, exclude_journals=excl)
                except Exception as e:  # small corpora legitimately lack bins
                    correlations[f"{t}/{target}/{name}"] = {"error": str(e)}
                    continue
                correlations[f"{t}/{target}/{name}"] = r.to_dict()
                d = r.to_dict()
                rows.append(f"{t},{target},{name},{d['coefficient']:.6f},"
                            f"{d['p_value']:.6g},{d['label']},{d['n_bins']}")
    correlations["reference"] = baselines.CORRELATIONS
    (report_dir / "correlations.json").write_text(
        json.dumps(correlations, indent=2, sort_keys=True) + "\n")
    (report_dir / "correlations.csv").write_text("\n".join(rows) + "\n")

    bins_report = {}
    for scheme in ("fixed-boundaries", "half-percentile"):
        b = analysis.impact_bins(papers, scheme=scheme, bin_fraction=args.bin_fraction)
        bins_report[scheme] = b.sizes()
    (report_dir / "bins.json").write_text(json.dumps(bins_report, indent=2) + "\n")

    if args.confusion:
        cm_data = json.loads(Path(args.confusion).read_text())
        cm = ConfusionMatrix(classes=cm_data["classes"],
                             counts=np.array(cm_data["counts"], dtype=np.int64))
        results = analysis.calibration_experiment(
            leaves, papers, cm, trials=args.trials, seed=args.seed)
        cal = {t: r.to_dict() for t, r in results.items()}
        cal["reference"] = {t: {"mean": m, "stderr": s}
                            for t, (m, s) in baselines.CALIBRATED_COEFFICIENTS.items()}
        (report_dir / "calibration.json").write_text(
            json.dumps(cal, indent=2, sort_keys=True) + "\n")

    print(f"reports -> {report_dir}")
    return 0


def cmd_serve(args):
    import uvicorn

    from figmine.search.service import create_app

    app = create_app(args.manifest, scores_path=args.scores,
                     verification_log=args.verification_log,
                     cors_origins=args.cors_origin)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="figmine",
                                description="figure mining, ranking, and search")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="build a manifest from images + metadata")
    s.add_argument("--images", required=True)
    s.add_argument("--metadata", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("demo-corpus", help="generate a synthetic demo corpus")
    s.add_argument("--out", required=True)
    s.add_argument("--papers", type=int, default=40)
    s.add_argument("--montage-rate", type=float, default=0.25)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_demo_corpus)

    s = sub.add_parser("train-codebook", help="sample patches and cluster a codebook")
    s.add_argument("--manifest", required=True)
    s.add_argument("--per-image", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--k", type=int, default=200)
    s.add_argument("--eps-zca", type=float, default=0.01)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train_codebook)

    s = sub.add_parser("encode", help="encode manifest figures to feature vectors")
    s.add_argument("--manifest", required=True)
    s.add_argument("--codebook", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--ids-out", required=True)
    s.add_argument("--labels-out")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("train-classifier", help="grid search + train an SVM")
    s.add_argument("--features", help=".npy feature rows (with --labels text)")
    s.add_argument("--manifest", help="encode labeled manifest figures instead")
    s.add_argument("--codebook", help="codebook for --manifest encoding")
    s.add_argument("--labels", required=True,
                   help="text file of row labels, or JSONL of {figure_id, label}")
    s.add_argument("--grid", help="JSON list of {kernel, gamma, penalty_c} or a path")
    s.add_argument("--folds", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-scale", action="store_true",
                   help="skip per-dimension standardization")
    s.add_argument("--report")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train_classifier)

    s = sub.add_parser("classify", help="apply a figure-type model to a manifest")
    s.add_argument("--manifest", required=True)
    s.add_argument("--codebook", required=True)
    s.add_argument("--model", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("train-gate", help="train the multichart/singleton gate")
    s.add_argument("--manifest")
    s.add_argument("--labels", help="JSONL of {figure_id, label}")
    s.add_argument("--synthetic", type=int,
                   help="train on N synthetic singletons + N montages")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gamma", type=float, default=0.001)
    s.add_argument("--c", type=float, default=1000.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train_gate)

    s = sub.add_parser("train-fragment", help="train the standalone/auxiliary model")
    s.add_argument("--synthetic", type=int, default=150)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gamma", type=float, default=0.001)
    s.add_argument("--c", type=float, default=1000.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train_fragment)

    s = sub.add_parser("gate", help="route manifest figures multichart/singleton")
    s.add_argument("--manifest", required=True)
    s.add_argument("--model", required=True)
    s.set_defaults(func=cmd_gate)

    s = sub.add_parser("dismantle", help="split multichart figures into sub-figures")
    s.add_argument("--manifest", required=True)
    s.add_argument("--gate")
    s.add_argument("--frag", required=True)
    s.set_defaults(func=cmd_dismantle)

    s = sub.add_parser("rank", help="influence scores from a citation edge list")
    s.add_argument("--edges", required=True)
    s.add_argument("--alpha", type=float, default=0.85)
    s.add_argument("--steps", type=int, default=2)
    s.add_argument("--scorer", choices=("alef", "citation-count"), default="alef")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("analyze", help="densities, bins, correlations, calibration")
    s.add_argument("--manifest", required=True)
    s.add_argument("--scores", required=True)
    s.add_argument("--report", required=True)
    s.add_argument("--exclude-journal", action="append", default=[])
    s.add_argument("--bin-fraction", type=float, default=0.005)
    s.add_argument("--confusion", help="JSON confusion matrix for calibration")
    s.add_argument("--trials", type=int, default=2000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("serve", help="run the search API")
    s.add_argument("--manifest", required=True)
    s.add_argument("--scores")
    s.add_argument("--verification-log")
    s.add_argument("--cors-origin", action="append", default=[])
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.set_defaults(func=cmd_serve)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FigmineError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
