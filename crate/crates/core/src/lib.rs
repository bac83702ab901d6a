pub mod error;
pub mod freealg;
pub mod bispan;
pub mod cli;
pub mod doc;
pub mod group;
pub mod groupoid;
pub mod gset;
pub mod spancat;
pub mod tambara;
pub mod verify;

pub use error::{Caps, Error, Result};
pub use group::{FiniteGroup, GroupHom, Subgroup, SubgroupLattice};
pub use gset::{GSet, GSetMap};
