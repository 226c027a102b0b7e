from qwalk_equivalence.core import ParameterError
from qwalk_equivalence.lattices.base import Lattice
from qwalk_equivalence.lattices.honeycomb import HONEYCOMB, HoneycombLattice
from qwalk_equivalence.lattices.line1d import LINE, LineLattice
from qwalk_equivalence.lattices.square import SQUARE, SQUARE_DIAGONAL, SquareLattice

LATTICES = {lattice.name: lattice for lattice in (LINE, SQUARE, SQUARE_DIAGONAL, HONEYCOMB)}


def get_lattice(name: str) -> Lattice:
    try:
        return LATTICES[name]
    except KeyError:
        raise ParameterError(f"unknown lattice '{name}'; valid lattices are {', '.join(LATTICES)}")
