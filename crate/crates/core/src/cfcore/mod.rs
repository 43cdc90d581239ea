//! Continued fractions, convergents, limits, rates and three-term recurrences.

pub mod cf;
pub mod poly;
pub mod rate;
pub mod recurrence;

pub use cf::{CFSpec, ConvergentPair, LimitResult, Part, MAX_EXACT_DEPTH};
pub use poly::{q, qi, Poly2, ZArg, Q};
pub use rate::{error_sequence, rate_fit, RateCheck, RateFit, RateModel, RateSign};
pub use recurrence::{
    check_recurrence_exact, check_recurrence_real, denominator_profile, odd_lcm, recurrence_to_cf, RecurrenceCf,
    RecurrenceReport, ThreeTermRecurrence,
};
