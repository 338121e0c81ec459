"""Module families on the projective line and their global sections."""

from .analysis import (
    Certificate,
    CompositionReport,
    NotAWeightBasis,
    ParityReport,
    SubmoduleReport,
    WeightVector,
    borel_weil_dim,
    casimir_scalar,
    composition_report,
    h_eigenvectors,
    highest_weight_vectors,
    irreducibility_certificate,
    k_weight_parity,
    lowest_weight_vectors,
    module_name,
    submodule_generated,
    weights,
    whittaker_vectors,
)
from .modules import (
    ActionRule,
    BasisModule,
    Element,
    Family,
    IndexDomain,
    UnsupportedModule,
    act_lie,
    act_weyl,
    action_table,
    make_local,
)
from .sl2 import OverlapReport, Sl2Module, global_module, overlap_check

__all__ = [
    "ActionRule",
    "BasisModule",
    "Certificate",
    "CompositionReport",
    "Element",
    "Family",
    "IndexDomain",
    "NotAWeightBasis",
    "OverlapReport",
    "ParityReport",
    "Sl2Module",
    "SubmoduleReport",
    "UnsupportedModule",
    "WeightVector",
    "act_lie",
    "act_weyl",
    "action_table",
    "borel_weil_dim",
    "casimir_scalar",
    "composition_report",
    "global_module",
    "h_eigenvectors",
    "highest_weight_vectors",
    "irreducibility_certificate",
    "k_weight_parity",
    "lowest_weight_vectors",
    "make_local",
    "module_name",
    "overlap_check",
    "submodule_generated",
    "weights",
    "whittaker_vectors",
]
