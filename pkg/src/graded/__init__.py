"""Graded rings with weights in {−1, 0, 1}, their finitely presented modules,
graded pieces over the base, resolutions, Hom and Ext."""
