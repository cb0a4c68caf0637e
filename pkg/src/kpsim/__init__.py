"""Cycle-accurate simulation of GF(2^233) ECC point-multiplication designs
and a horizontal difference-of-means DPA attack harness."""

__version__ = "0.1.0"
