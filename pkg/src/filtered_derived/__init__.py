"""Bounded complexes over the extended Rees ring as the model of filtered
derived categories: cones, torsion levels, hyper-Ext, and the certificates
for the unit cone, semiorthogonality and adjunction."""
