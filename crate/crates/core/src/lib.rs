//! A Cl(3,0) geometric algebra kernel and a laboratory for bivector-valued
//! local hidden-variable models of EPR-Bohm correlations.
//!
//! * [`ga`]: multivectors, the geometric product, vectors and bivectors.
//! * [`rotor`]: rotors, Euler angles and the quaternion correspondence.
//! * [`beables`]: sign and bivector beables, pair products, algebra checks.
//! * [`expectation`]: ensemble averages, CHSH, Monte Carlo, measures.
//! * [`surface`]: directed integrals over closed meshes and curves.

pub mod beables;
pub mod expectation;
pub mod ga;
pub mod rotor;
pub mod sampling;
pub mod surface;
