//! Exact arithmetic for truncated `p`-typical Witt vectors and the structures
//! built from them: divided powers, primitive Witt vectors and their group
//! actions, graded coequalizers of finite categories, and prisms.
//!
//! Every base ring is a finite product of rings `Z/p^K[t]/(f)`, so all
//! identities are checked by exact equality.

pub mod api;
pub mod checks;
pub mod coeq;
pub mod error;
pub mod poly;
pub mod prism;
pub mod report;
pub mod ring;
pub mod sampling;
pub mod sharp;
pub mod sigma;
pub mod witt;

pub use error::{Error, Result};
pub use report::{Report, Status, Tally};
pub use ring::{Elem, HomKind, Ring, RingHom, RingSpec};
pub use witt::{Strategy, WittVector};
