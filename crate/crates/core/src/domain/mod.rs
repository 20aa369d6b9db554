//! Ideal domains, horocycle systems, measures and admissibility.

mod admissibility;
mod complex;
mod horocycles;
mod measures;
mod quadrilateral;

pub use admissibility::{
    balance_residual, check_admissibility, check_admissibility_with, connected_subsets, enumerate_boundary_polygons,
    enumerate_boundary_polygons_with, AdmissibilityReport, EnumerationLimits, HorocycleEntry, PolygonSlack, Tolerances,
    GUARANTEE_CELL_UNIONS,
};
pub use complex::{
    Attachment, Block, BoundarySide, Cell, CellComplex, CellId, Edge, EdgeId, IdealDomain, SideKind, VertexId,
};
pub use horocycles::{default_std_sizes, standard_horocycles, HorocycleSystem};
pub use measures::{edge_length, measures, polygon_slacks, BoundaryPolygon, Measurer, PolygonMeasures, PolygonSide, SideRole};
pub use quadrilateral::{
    balance_g, bracket_floor, connectivity_bound, connectivity_discriminant, paper_d3, quad_balance,
    quadrilateral_domain, solve_d3_for_balance, solve_d3_star, standard_horocycle_system, standard_quadrilateral,
    xi, D3Mode, QuadBalance,
};
