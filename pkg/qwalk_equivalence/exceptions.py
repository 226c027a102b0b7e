class QuantumWalkError(Exception):
    pass


class LatticeMismatchError(QuantumWalkError):
    def __init__(self, expected, found):
        super().__init__(f"model/lattice mismatch: expected {expected}, found {found}")
        self.expected = expected
        self.found = found


class LabelError(QuantumWalkError):
    pass


class MatrixError(QuantumWalkError):
    pass


class ParameterError(QuantumWalkError):
    pass
