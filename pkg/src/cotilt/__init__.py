"""Computational kernel for Hom-dualities, derived reflexivity and cotilting checks."""
