"""specprobe: find ambiguous inputs by proving candidate implementations
of the same purpose statement behaviourally inequivalent."""

__version__ = "0.1.0"
