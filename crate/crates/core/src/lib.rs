pub mod classify;
pub mod corpus;
pub mod error;
pub mod group;
pub mod partition;
pub mod structure;
pub mod subgroup;

pub use error::{Error, Result};
pub use group::{Elem, FiniteGroup, GroupId, DEFAULT_MAX_ORDER};
pub use subgroup::{QuotientMap, Subgroup};
