//! Finite-window models of the symbolic systems on which the group of
//! permutations of the integers acts: `±1` configurations on injective
//! tuples, linear and circular orders, order-type block codes, Ramsey-based
//! witnesses, and the exchangeable measure on orders.
//!
//! The infinite group is represented by its finitely supported elements
//! ([`FinPerm`]). Every configuration lives on a finite [`Window`] and the
//! action relocates that window.

pub mod codes;
pub mod config;
pub mod ergodic;
pub mod error;
pub mod exact;
pub mod order;
pub mod perm;
pub mod ramsey;
pub mod window;

pub use codes::{apply_code, circular_code, is_alternating_code, sign_code, BlockCode};
pub use config::{apply_perm, apply_perm_onto, is_alternating, KConfig, Sign};
pub use ergodic::{cylinder_measure, orbit_average, pattern_counts, random_linear_order, PatternStat};
pub use error::{Error, Result};
pub use exact::moment_curve_orientation;
pub use order::{
    config2_is_linear_order, config2_to_order, is_circular_realizable, lin_order_to_config2, order_type,
    reversal_class_rep, reverse, LinearOrder, OrderType,
};
pub use perm::FinPerm;
pub use ramsey::{minimality_witness, proximality_witness, ramsey_mono_subset, PairColoring, Witness, WitnessKind};
pub use window::{InjTuple, Window};
