"""Exact counts of complete exceptional sequences for Dynkin diagrams.

Equivalently, maximal chains in the lattice of non-crossing partitions.
"""

from .counting import (
    CountBreakdown,
    e_B_via_A,
    e_breakdown,
    e_closed,
    e_of,
    e_recursive,
    factorize,
    verify_uniform_formula,
)
from .diagram import (
    ConnectedDiagram,
    Diagram,
    DiagramError,
    DiagramSyntaxError,
    RankError,
    automorphism_rho,
    coxeter_number,
    delete_vertex,
    parse_diagram,
    render,
    weyl_order,
)
from .series import (
    SeriesPrefix,
    abel_sum,
    binomial_convolution,
    seq_A,
    seq_B,
    seq_D,
    verify_appendix_proposition,
)
from .weyl import (
    BudgetExhausted,
    build_root_system,
    count_chain_factorizations,
    coxeter_element,
    reflection_length,
)

__version__ = "0.1.0"
