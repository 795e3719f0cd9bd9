//! Graphs of groups, finite balls in Bass–Serre spaces, desk-scale Morse geometry,
//! and classification of Morse boundaries of closed 3-manifold groups.

pub mod boundary;
pub mod graph;
pub mod io;
pub mod manifold;
pub mod morse;
pub mod star;
pub mod gog;
pub mod group;
