"""Full-scale corpus baselines embedded in generated reports.

Desk-scale synthetic runs cannot reproduce these numbers; they come from a
production run over an 8M-figure biomedical corpus and are included in
report output so future full-scale runs can be compared against the same
yardstick. "NSS" marks a correlation that was not statistically significant.
"""

FIGURE_COUNTS = {
    "before_dismantling": {
        "multichart": 1_416_237,
        "equation": 1_425_042,
        "diagram": 652_918,
        "photo": 475_615,
        "plot": 475_327,
        "table": 336_602,
    },
    "after_dismantling": {
        "equation": 1_741_059,
        "diagram": 2_036_704,
        "photo": 2_322_231,
        "plot": 3_579_839,
        "table": 553_171,
    },
}

# figure-type classifier: 10-fold CV on 3,271 hand-labeled images
CLASSIFIER_ACCURACY = 0.915
CLASSIFIER_PRECISION_RECALL = {
    "equation": {"precision": 0.954, "recall": 0.951},
    "diagram": {"precision": 0.842, "recall": 0.841},
    "photo": {"precision": 0.945, "recall": 0.973},
    "plot": {"precision": 0.915, "recall": 0.902},
    "table": {"precision": 0.951, "recall": 0.931},
}

# multichart/singleton gate: 10-fold CV on 1,947 hand-labeled images
GATE_ACCURACY = 0.918
GATE_PRECISION_RECALL = {
    "multichart": {"precision": 0.929, "recall": 0.863},
    "singleton": {"precision": 0.893, "recall": 0.946},
}

# dismantler quality on 500 hand-checked multichart figures
DISMANTLER_RECALL = 0.829
DISMANTLER_PRECISION = 0.843

# binned correlation of influence vs density/proportion, per figure type,
# as (all journals, excluding the one high-table-density outlier journal)
CORRELATIONS = {
    "density": {
        "diagram": (0.84, 0.92),
        "photo": (0.57, 0.70),
        "plot": (0.60, 0.80),
        "table": ("NSS", 0.78),
    },
    "proportion": {
        "diagram": (0.61, 0.52),
        "photo": (-0.69, -0.63),
        "plot": ("NSS", "NSS"),
        "table": ("NSS", "NSS"),
    },
}

# calibration experiment, 2,000 trials: mean +/- standard error
CALIBRATED_COEFFICIENTS = {
    "plot": (0.099570, 0.000027),
    "diagram": (0.110295, 0.000032),
}


def reference_report():
    """The baseline block that report writers attach under "reference"."""
    return {
        "figure_counts": FIGURE_COUNTS,
        "classifier": {
            "accuracy": CLASSIFIER_ACCURACY,
            "per_class": CLASSIFIER_PRECISION_RECALL,
        },
        "gate": {"accuracy": GATE_ACCURACY, "per_class": GATE_PRECISION_RECALL},
        "dismantler": {
            "recall": DISMANTLER_RECALL,
            "precision": DISMANTLER_PRECISION,
        },
        "correlations": CORRELATIONS,
        "calibrated_coefficients": CALIBRATED_COEFFICIENTS,
    }
