"""Expert finding: n-gram topic weights reinforced over the document-author graph."""

from ._core import Index, load_index, nidf, run_pipeline, save_index

__all__ = ["Index", "load_index", "nidf", "run_pipeline", "save_index"]
__version__ = "1.0.0"
