pub mod disorder;
pub mod error;
pub mod ffcore;
pub mod pfaffian;
pub mod qfi;
pub mod uniform;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/free-fermions.md")]
    pub struct FreeFermions;
    #[doc = include_str!("../../../book/src/pfaffian.md")]
    pub struct Pfaffian;
    #[doc = include_str!("../../../book/src/uniform.md")]
    pub struct Uniform;
    #[doc = include_str!("../../../book/src/qfi.md")]
    pub struct Qfi;
    #[doc = include_str!("../../../book/src/disorder.md")]
    pub struct Disorder;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
