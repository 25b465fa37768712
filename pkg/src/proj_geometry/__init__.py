"""The blowup Y = Proj of the Rees ring: affine charts, restriction of graded
modules to them, twisted sections and higher cohomology as colimits over
powers of the irrelevant ideal, the pushforward to the extended Rees ring and
the stability bound built from them."""
