//! Value sets of polynomials over finite fields through cyclotomic mappings,
//! with exact value set size distributions for random polynomials, random
//! cyclotomic mappings and unions of random sets, plus the enumeration and
//! Monte Carlo harness that checks them.

pub mod cli;
pub mod combin;
pub mod cyclo;
pub mod dist;
pub mod error;
pub mod field;
pub mod io;
pub mod poly;
pub mod sim;
pub mod union;

pub use cyclo::{CyclotomicMapping, ValueSetCounter, ValueSetReport};
pub use dist::{CycloModel, ExactDistribution, MomentTable};
pub use error::{Error, Result};
pub use field::{build_field, FieldBuilder, FieldDescriptor, FieldElement, FieldSpec};
pub use poly::{from_cyclotomic, IndexForm, Polynomial};
pub use sim::{EmpiricalDistribution, MonteCarlo, Seed};
pub use union::UnionModel;
