"""Exception hierarchy shared by every module.

Each error carries a stable ``code`` string that the CLI emits verbatim.
"""


class MGSpecError(Exception):
    code = "error"


# graph construction and surgery
class GraphError(MGSpecError, ValueError):
    code = "graph_error"


class EmptyGraph(GraphError):
    code = "empty_graph"


class NonpositiveLength(GraphError):
    code = "nonpositive_length"


class Disconnected(GraphError):
    code = "disconnected"


class UnknownVertex(GraphError):
    code = "unknown_vertex"


class UnknownEdge(GraphError):
    code = "unknown_edge"


class InvalidPendant(GraphError):
    code = "invalid_pendant"


class NonpositiveScale(GraphError):
    code = "nonpositive_scale"


# families
class InvalidFamilyParams(MGSpecError, ValueError):
    code = "invalid_family_params"


class NoClosedForm(MGSpecError, ValueError):
    code = "no_closed_form"


# solvers
class MeshMismatch(MGSpecError, ValueError):
    code = "mesh_mismatch"


class SolverFailure(MGSpecError, RuntimeError):
    code = "solver_failure"


class BudgetExceeded(MGSpecError, RuntimeError):
    code = "budget_exceeded"


class NoEigenvectors(MGSpecError, ValueError):
    code = "no_eigenvectors"


class PathBudgetExceeded(MGSpecError, RuntimeError):
    code = "path_budget_exceeded"


# root finding / discrete correspondence
class InvalidRegime(MGSpecError, ValueError):
    code = "invalid_regime"


class NoRootInScanRange(MGSpecError, RuntimeError):
    code = "no_root_in_scan_range"


class OutOfRange(MGSpecError, ValueError):
    code = "out_of_range"
