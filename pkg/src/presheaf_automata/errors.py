"""Exception types shared across the package."""


class PresheafAutomataError(Exception):
    """Base class for all library errors."""


class NotComposable(PresheafAutomataError):
    """Endpoints of two morphisms do not match."""


class NotInWindow(PresheafAutomataError):
    """A composite or action leaves the finite truncation window."""


class WindowOverflow(NotInWindow):
    """A construction required data outside the truncation window."""


class EndpointMismatch(PresheafAutomataError):
    """Sources and targets of paths or tracks do not line up."""


class PolarityMismatch(PresheafAutomataError):
    """A morphism was used against its for/back polarity."""


class AlphabetContainsEmptySymbol(PresheafAutomataError):
    """The reserved empty-word object cannot be an alphabet letter."""


class StarOnInfiniteObjects(PresheafAutomataError):
    """Kleene star needs the fragment's object set to be complete."""


class CubicalIdentityViolation(PresheafAutomataError):
    """Face data breaks a cubical identity; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FullModeInfinite(PresheafAutomataError):
    """The unrestricted net translation has no finite shape."""


class NotAVassImage(PresheafAutomataError):
    """A counter automaton lacks the free counter structure of a VASS."""


class UnknownLabel(PresheafAutomataError):
    """An edge label is missing from the alphabet."""


class SchemaError(PresheafAutomataError):
    """An input file does not match its JSON schema."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}" if pointer else message)
        self.pointer = pointer
