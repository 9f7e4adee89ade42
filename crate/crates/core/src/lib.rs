//! Plane curves over small finite fields: rational point counts, line
//! spectra, projective classification under PGL(3,q), and the three-term
//! family of maximal curves of degree q-1.

pub mod error;
pub mod forms;
pub mod gf;
pub mod groups;
pub mod maximal;
pub mod plane;
pub mod quotient;
pub mod sziklai;

pub use error::{Error, Result};
pub use gf::{Fe, FieldCtx};
