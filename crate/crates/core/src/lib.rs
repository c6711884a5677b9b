pub mod cli;
pub mod error;
pub mod growth;
pub mod modular;
pub mod quantum;
pub mod rational;
pub mod rt;
pub mod seifert;
pub mod summation;
pub mod triangulation;
pub mod tv;

pub use error::{Error, Result};
pub use quantum::RootContext;
pub use rational::Rational;
pub use seifert::{Epsilon, Fiber, SeifertSymbol};
