"""Genuine tripartite entanglement detection from Bloch correlation tensors."""
from .basis import GeneratorBasis, generators, verify_orthogonality
from .bloch import CorrelationTensor, correlation_tensor, frobenius_t123, matricize
from .criteria import (
    CriterionReport,
    ge_concurrence_pure,
    kyfan_norm,
    theorem1,
    theorem2,
    theorem2_all,
    theorem3,
)
from .states import DensityMatrix, embed, is_ppt, tensor_and_regroup, werner, werner_project

__version__ = "0.1.0"
