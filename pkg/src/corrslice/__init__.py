"""Exact volume ratios of correlation vs transportation polytope slices."""

__version__ = "0.1.0"

from .geometry import (
    InfeasibleError,
    LinearSystem,
    PointList,
    UnboundedError,
    UnsupportedSizeError,
    fm_eliminate,
    frac,
    frac_str,
    hrep_to_vrep,
    lp,
    remove_redundant,
    volume,
    vrep_to_hrep,
)
from .graphs import (
    Graph,
    NamedGraph,
    catalog_names,
    complete,
    complete_bipartite,
    construct,
    cycle,
    glue,
    is_forest,
    is_isomorphic,
    named,
    path,
    remove_edge,
    treewidth,
)
from .polytopes import (
    DegenerateSliceError,
    EdgeAssignment,
    MarginalSpec,
    UseSymmetryError,
    cor_hrep,
    cor_vertices,
    is_compatible,
    l_slice,
    n_slice,
    scaled_slices,
    tra_hrep,
)
from .inequalities import (
    TaggedInequality,
    activation_threshold,
    box_inequalities,
    inclusion_exclusion_inequalities,
    m_negative_inequalities,
    odd_cycle_inequalities,
)
from .formulas import (
    cn_parameters,
    cn_ratio,
    k22_ratio,
    k3_skewed_ratio,
    k3_symmetric_ratio,
)
from .analysis import (
    ConjectureResult,
    McEstimate,
    RatioReport,
    check_conjecture,
    check_glue_laws,
    fall_off,
    monte_carlo_ratio,
    ratio_at,
    ratio_curve,
    ratio_report,
    symmetric_ratio,
)
