//! Explicit Ramanujan hypergraphs as Cayley graphs of PSL/PGL(d, F_{q^{dn}}).
//!
//! The pipeline runs bottom-up: exact finite-field towers ([`ff`]), the skew
//! polynomial ring F_{q^d}{τ} and the linear factorization of 1 − t
//! ([`skewpoly`]), the generator set indexed by subspaces of F_{q^d}
//! ([`genset`]), the matrix representation modulo f ([`psi`]), Cayley graph
//! closure ([`cayley`]) and eigenvalue verification ([`spectra`]).

pub mod cayley;
pub mod ff;
pub mod genset;
pub mod psi;
pub mod skewpoly;
pub mod spectra;
