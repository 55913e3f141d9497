"""Exception hierarchy shared by all oncograph modules."""


class OncographError(Exception):
    """Base class for all domain errors raised by this package."""


class DuplicateNode(OncographError):
    pass


class DuplicateEdge(OncographError):
    pass


class MissingEndpoint(OncographError):
    pass


class InvalidLabel(OncographError):
    pass


class UnknownNode(OncographError):
    pass


class UnknownDisease(UnknownNode):
    pass


class UnknownMutation(UnknownNode):
    pass


class UnknownGene(UnknownNode):
    pass


class InvalidThresholds(OncographError):
    pass


class InvalidPercent(OncographError):
    pass


class EmptyPopulation(OncographError):
    pass


class NotPatientMutation(OncographError):
    pass


class Untargetable(OncographError):
    """A target mutation has no drug acting on it; names the mutation."""

    def __init__(self, mutation):
        self.mutation = mutation
        super().__init__(f"untargetable mutation {mutation}")


class UniverseTooLarge(OncographError):
    pass


class MissingColumn(OncographError):
    pass
