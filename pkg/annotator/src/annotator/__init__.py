"""Rule-based annotation pipeline emitting graph-ingestable records."""

from .pipeline import AnnotatorConfig, annotate_corpus, annotate_document

__version__ = "0.1.0"

__all__ = ["AnnotatorConfig", "annotate_corpus", "annotate_document"]
