//! Weighted norms of solutions and sources, and the inequalities that relate them.

mod energy;
mod estimate;
mod hardy;
mod mixed;
mod params;
mod slice;
mod trace;

pub use energy::{
    integrating_check, lhs_weighted_energy, lightcone_flux, rhs_weighted_source, slice_energy, Cone,
    EnergyComponents, IntegratingReport, SliceSeries, SourceNorm,
};
pub use estimate::{
    estimate_from_solution, estimate_many, estimate_ratio, LhsPiece, NormReport, RefinementLevel, SliceRow, Status,
};
pub use hardy::{
    hardy_ratio, hardy_sides, random_profiles, verify_hardy, HardyProfile, HardyReport, HardyRow, HardySides,
    HardyVariant, HARDY1_BOUND, HARDY2_BOUND,
};
pub use mixed::{
    interpolation_check, mixed_norm, InterpolationReport, InterpolationSlice, MixedNorm, RadialWeight, SphereNorm,
};
pub use params::WeightParams;
pub use slice::{radial_derivative, SliceData};
pub use trace::{
    inner_weight, outer_weight, trace_check, trace_norm, trace_slice, trace_weight, TraceReport, TraceSlice,
    INNER_FACTOR, OUTER_FACTOR,
};
