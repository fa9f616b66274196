"""Exception hierarchy shared by all oritube modules."""


class OritubeError(Exception):
    """Base class for all domain errors raised by this package."""


# --- cross-section / tube construction ---

class DegeneratePolygon(OritubeError):
    """Polygon is self-intersecting, has <3 vertices, or repeated points."""


class DegenerateAngles(OritubeError):
    """The two requested edge slopes coincide modulo 180 degrees."""


class InadmissibleSection(OritubeError):
    """Cross-section fails the equal-slope-group length condition."""


class DegenerateSpec(OritubeError):
    """Tube parameters outside their allowed open ranges."""


class NonUnrollable(OritubeError):
    """Mesh is not a manifold tube surface and cannot be unrolled."""


class InterfaceMismatch(OritubeError):
    """Faces to be joined during assembly are not congruent."""


# --- mesh / export ---

class IoFailure(OritubeError):
    """Underlying stream raised while writing."""


class EmptyMesh(OritubeError):
    """No triangles / no pattern content to export."""


class EmptySeries(OritubeError):
    """No data points to plot."""


# --- folding / solving ---

class NoConvergence(OritubeError):
    """Iterative solve did not meet its residual tolerance."""


class NotOneDof(OritubeError):
    """Tube section does not define a single-DOF rigid mechanism."""


class OpenSurface(OritubeError):
    """End rings cannot be capped into a closed surface."""


# --- structural model ---

class InvalidMaterial(OritubeError):
    """Material constants outside their physical range."""


class UnderConstrained(OritubeError):
    """Boundary conditions leave rigid-body modes unconstrained."""


# --- material model / fitting ---

class Unsupported(OritubeError):
    """Requested configuration is out of scope (e.g. compressible Ogden)."""


class IncompressibilityViolated(OritubeError):
    """Principal stretches do not satisfy det F = 1."""


class MalformedCsv(OritubeError):
    """CSV stream is missing required columns or has unparseable rows."""


class NonPositiveGeometry(OritubeError):
    """Specimen width / thickness / gauge length must be positive."""


class InsufficientData(OritubeError):
    """Too few samples for a meaningful fit."""


# --- characterization ---

class MissingColumn(OritubeError):
    """Experiment record lacks a column the metric needs."""


class NoPlateau(OritubeError):
    """Step-response plateau detection failed."""


class DuplicatePressure(OritubeError):
    """Two records claim the same steady pressure."""


class InsufficientRounds(OritubeError):
    """Fewer than two trajectory rounds per direction."""


class UnknownMaterial(OritubeError):
    """Material name not present in the catalog."""
