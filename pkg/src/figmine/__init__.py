"""figmine: mine figures from scholarly papers, classify them, and rank them.

Pipeline stages: ingest documents into a content-addressed figure store,
encode figures as bag-of-visual-words histograms, classify figure type with
an SVM, split composite figures into panels, score papers by citation flow,
and serve a searchable index over the results.
"""

__version__ = "0.1.0"
