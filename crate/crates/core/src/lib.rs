// Row reduction reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod crosscheck;
pub mod delone;
pub mod io;
pub mod modelset;
pub mod proximality;
pub mod spectrum;
pub mod substitution;
pub mod tiling;
