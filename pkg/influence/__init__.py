from .oracles import (
    enumerate_paths,
    influence_audit,
    max_information_path_bruteforce,
    node_influence_oracle,
    transition_matrix,
)
from .theory import (
    InfluenceError,
    InfluenceValue,
    PathInformation,
    node_influence_closed,
    path_information,
    path_information_closed_form,
    path_information_literal,
)

__all__ = [
    "InfluenceError",
    "InfluenceValue",
    "PathInformation",
    "enumerate_paths",
    "influence_audit",
    "max_information_path_bruteforce",
    "node_influence_closed",
    "node_influence_oracle",
    "path_information",
    "path_information_closed_form",
    "path_information_literal",
    "transition_matrix",
]
