"""Finite polynomial functors, comonoids, bicomodules and the constructions built on them."""
