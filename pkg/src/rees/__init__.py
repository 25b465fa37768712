"""Rees and extended Rees presentations of an ideal, I-filtered modules,
modules over R/I, and the functors relating them to graded modules."""
