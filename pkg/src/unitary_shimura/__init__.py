"""Class groups, self-dual hermitian lattices, Eichler orders and the
degrees and arithmetic volumes of unitary Shimura curves over imaginary
quadratic fields of odd discriminant."""

__version__ = "0.1.0"
