//! Distance monoids, R-metric spaces, and Urysohn approximations.

mod monoid;
mod space;
mod urysohn;

pub use monoid::{
    check_monoid, truncated_monoid, DistanceMonoid, MonoidFile, MonoidVerdict, Violation,
};
pub use space::{
    class_type_key, divides_over_class, divides_urysohn, find_independence_distance,
    metric_completion_feasible, RMetricSpace, SpaceFile,
};
pub use urysohn::{build_urysohn, extension_deficits, Demand};
