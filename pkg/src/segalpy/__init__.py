"""Loop-space models of one-vertex simplicial sets via arranged Segal precats."""

__version__ = "0.1.0"
