"""Benchmark toolkit for extractive summarisation of call-centre dialogue transcripts."""

__version__ = "0.1.0"
