//! Exact cyclotomic computations of fusion rings from Fourier-type matrices.

pub mod combin;
pub mod cyclo;
pub mod fusion;
pub mod kacpeterson;
pub mod modular;
pub mod smatrix;
