"""Exception types raised by the retrieval engine."""


class MfirError(Exception):
    """Base class for all engine errors."""


# --- image decoding ---

class UnreadableFile(MfirError):
    """File is missing, unreadable, or not decodable as an image."""


class UnsupportedFormat(MfirError):
    """File decodes, but is not one of the supported image formats."""


class EmptyImage(MfirError):
    """Operation requires at least one pixel."""


# --- filter bank ---

class InvalidParams(MfirError):
    """Filter-bank parameters violate their invariants."""


# --- rough-set reduction ---

class MissingLabels(MfirError):
    """Discretization requires a class label for every row."""


class UnknownAttribute(MfirError):
    """Attribute id not present in the information system."""


class TooManyAttributes(MfirError):
    """Exhaustive subset search refused; attribute count exceeds the guard."""


# --- fusion / ranking ---

class LengthMismatch(MfirError):
    """Paired vectors or histograms differ in length."""


class TooFewCandidates(MfirError):
    """Distance normalization needs at least two candidates."""


class InvalidWeights(MfirError):
    """Fusion weights must be nonnegative and sum to 1."""


class EmptyIndex(MfirError):
    """Ranking requires a nonempty index."""


# --- index store ---

class NoImagesFound(MfirError):
    """Index build found no decodable images under the root."""


class CorruptIndex(MfirError):
    """Index file has a bad magic, truncated payload, or invalid contents."""


class UnsupportedVersion(MfirError):
    """Index file version is not recognized."""


# --- evaluation ---

class InsufficientCorpus(MfirError):
    """Corpus too small for the requested experiment cells."""
