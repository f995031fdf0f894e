from .oblique import BurerMonteiroCost, ObliqueManifold, row_dot
from .operations import (
    euclidean_gradient,
    hessian_form,
    inner,
    is_feasible,
    objective,
    project_tangent,
    random_point,
    random_tangent,
    retract,
    riemannian_gradient,
    s_matrix,
)

__all__ = [
    "BurerMonteiroCost",
    "ObliqueManifold",
    "row_dot",
    "euclidean_gradient",
    "hessian_form",
    "inner",
    "is_feasible",
    "objective",
    "project_tangent",
    "random_point",
    "random_tangent",
    "retract",
    "riemannian_gradient",
    "s_matrix",
]
