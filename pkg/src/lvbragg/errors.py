"""Exception hierarchy shared by every module."""


class ModelError(ValueError):
    """Base class for all domain errors raised by lvbragg."""


class RangeViolation(ModelError):
    def __init__(self, field, value, allowed):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r} outside allowed range {allowed}")


class AntisymmetryViolation(ModelError):
    pass


class SingularForm(ModelError):
    """A rate form needs a division by a parameter that is zero.

    ``form`` is ``"prey"``, ``"predator"`` or ``"closed_form"``; ``zeros`` names
    the vanishing denominators.
    """

    def __init__(self, form, zeros):
        self.form = form
        self.zeros = tuple(zeros)
        super().__init__(f"{form} form is singular: zero denominator(s) {', '.join(self.zeros)}")


class DimensionMismatch(ModelError):
    pass


class ParseError(ModelError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NonFiniteState(ModelError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"population became non-finite at t={t}")


class NegativePopulation(ModelError):
    def __init__(self, t, species):
        self.t = t
        self.species = species
        super().__init__(f"population of species {species} went negative at t={t}")


class NonPositivePopulation(ModelError):
    pass


class NonPositiveCount(ModelError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"non-positive count at t={t}; logarithm undefined")


class FewerThanTwoSamples(ModelError):
    pass


class NonPositiveGestation(ModelError):
    pass
