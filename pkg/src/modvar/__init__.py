"""Exact computations on varieties of modules over quivers with relations."""
