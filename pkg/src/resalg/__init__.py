"""Finite residuated lattices and bounded hoops: structure, varieties, morphisms."""
