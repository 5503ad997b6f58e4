pub mod acceptance;
pub mod error;
pub mod expr;
pub mod hyper;
pub mod odeseries;
pub mod quad;
pub mod radon;
pub mod spectral;

pub use error::{Error, Result};

/// The guide's chapters, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/hyperfunctions.md")]
    mod hyperfunctions {}
    #[doc = include_str!("../../../book/src/contours.md")]
    mod contours {}
    #[doc = include_str!("../../../book/src/moments.md")]
    mod moments {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/radon.md")]
    mod radon {}
    #[doc = include_str!("../../../book/src/support.md")]
    mod support {}
    #[doc = include_str!("../../../book/src/odeseries.md")]
    mod odeseries {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
