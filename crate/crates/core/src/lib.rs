//! Coupling of two trapped ions through a floating disk–wire–disk conductor.
//!
//! * [`linear`]: linear-element model (displacement → induced charge →
//!   shared charge → force), its coupling γ and Rabi rate g.
//! * [`lumped`]: the equivalent-circuit quantities for comparison.
//! * [`oracle`]: image-charge and boundary-element induced-charge
//!   calculations that check the linear factors independently.
//! * [`dynamics`]: classical simulation of the coupled oscillators.
//! * [`causal`]: parser and rule engine for causal equalities.
//! * [`report`], [`sweep`], [`cli`]: configuration-driven reports.

pub mod capacitance;
pub mod causal;
pub mod cli;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod linear;
pub mod lumped;
pub mod oracle;
pub mod report;
pub mod sweep;
pub mod types;

pub use capacitance::{disk_self_capacitance, wire_self_capacitance, IsolatedConductors, SelfCapacitanceModel, SelfCapacitances};
pub use config::{validate_config, Config, ValidatedConfig};
pub use constants::PhysicalConstants;
pub use error::{Error, Result, Violation};
pub use linear::{LinearElements, InducedChargeResponse};
pub use lumped::LumpedElements;
pub use types::{CouplingGeometry, HarmonicTrap, IonSpecies};
