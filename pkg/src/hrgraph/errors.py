"""Exception hierarchy shared by every module."""


class KGraphError(Exception):
    """Base class for all library errors."""


class DuplicateId(KGraphError):
    def __init__(self, token):
        super().__init__(f"duplicate identifier {token!r}")
        self.token = token


class DanglingEndpoint(KGraphError):
    def __init__(self, edge, vertex):
        super().__init__(f"edge {edge!r} references undeclared vertex {vertex!r}")
        self.edge = edge
        self.vertex = vertex


class ColorOutOfRange(KGraphError):
    def __init__(self, token, color, rank):
        super().__init__(f"{token!r}: color {color} outside 1..{rank}")
        self.token = token
        self.color = color
        self.rank = rank


class UnknownVertex(KGraphError):
    def __init__(self, vertex):
        super().__init__(f"unknown vertex {vertex!r}")
        self.vertex = vertex


class UnknownEdge(KGraphError):
    def __init__(self, edge):
        super().__init__(f"unknown edge {edge!r}")
        self.edge = edge


class UncoveredPath(KGraphError):
    def __init__(self, path):
        super().__init__(f"2-path {' '.join(path)} is not covered by any square")
        self.path = tuple(path)


class TargetNotPermutation(KGraphError):
    pass


class NotComposable(KGraphError):
    pass


class NotComposableConfiguration(KGraphError):
    pass


class Kg2NotEstablished(KGraphError):
    pass


class Kg2Failure(KGraphError):
    def __init__(self, report):
        super().__init__("KG2 validation failed:\n" + report.summary())
        self.report = report


class Kg3Failure(KGraphError):
    def __init__(self, report):
        super().__init__("KG3 validation failed:\n" + report.summary())
        self.report = report


class NotInjectiveOmega(KGraphError):
    pass


class NoIntegralLeftInverse(NotInjectiveOmega):
    """Omega is injective but has no left inverse with integer entries."""


class HypothesesNotMet(KGraphError):
    def __init__(self, report):
        super().__init__("move hypotheses not met:\n" + report.summary())
        self.report = report


class InducedSquareAmbiguity(KGraphError):
    pass


class BridgeColorNotInB(KGraphError):
    pass


class InvalidParameter(KGraphError):
    pass
