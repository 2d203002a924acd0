"""*Spraycheck* verifies spray geometry on the prolongation of a Lie algebroid.

Given an algebroid, a semispray and candidate symmetries written as
coordinate expressions, it builds the Berwald connection and the curvature
suite with exact derivatives and checks the symmetry and curvature
collineation statements numerically at sampled points of E.

"""
from . import util

__all__ = ["util"]

__version__ = "0.1.0"
