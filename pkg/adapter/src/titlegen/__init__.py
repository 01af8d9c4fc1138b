"""Reference external generator for the titlekit pipeline: an
attention-based encoder-decoder with a copy mechanism, trained on
conditioned pairs and served over the generator line protocol."""

__version__ = "0.1.0"
