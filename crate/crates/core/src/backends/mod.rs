//! Concrete groups: finite groups, `Q_p^d` with a rational matrix, and shift
//! groups over finite abelian alphabets.

pub mod finite;
pub mod identities;
pub mod linalg;
pub mod padic;
pub mod shift;

pub use finite::{ElemSet, FiniteGroup, FiniteSystem};
pub use padic::{newton_polygon, NewtonPolygon, PadicModule, PadicSystem};
pub use shift::{Direction, Profile, ShiftSystem, SubId, TailMode, TailVerdict};
