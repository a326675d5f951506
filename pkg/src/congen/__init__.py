"""Congruence lattices, commutators and clone generation for finite algebras."""
