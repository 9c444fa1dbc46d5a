//! Pattern-free sets, bit-parallel correlation scans, box syndeticity and
//! multiplicative pattern counts.

mod behrend;
pub mod numtheory;
mod patterns;
mod scan;
mod syndetic;

pub use behrend::*;
pub use patterns::{pattern_free_check, Ambient, PatternWitness};
pub use scan::{
    popular_difference_report, triple_correlation_scan, triple_correlation_scan_group, BitSet, Kernel,
    PopularReport, ScanResult,
};
pub use syndetic::{multiplicative_pattern_count, syndetic_threshold, Threshold};
