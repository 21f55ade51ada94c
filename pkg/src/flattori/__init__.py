"""Exact computational toolkit for the isospectrality of flat tori.

Representation numbers and theta coefficients of positive definite forms,
Minkowski and sign-normalized reduction, integral-equivalence search,
modular-form isospectrality certificates, lattices from linear codes, and
the covering-refinement proof that three-dimensional flat tori are
determined by their spectra.
"""

__version__ = "0.1.0"
