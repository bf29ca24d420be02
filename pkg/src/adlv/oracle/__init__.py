"""Brute-force lattice model of GL_n affine Deligne-Lusztig varieties over F_{q^s}((t))."""
