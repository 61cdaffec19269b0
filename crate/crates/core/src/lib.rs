//! Integral quantization of measure spaces with density-operator valued measures.
//!
//! A family of density matrices `ρ(x)` that resolves the identity against a
//! measure `ν` turns functions on `X` into operators, `A_f = ∫ f(x) ρ(x) dν(x)`.
//! The crate provides the generic machinery together with four worked
//! geometries (circle, sphere, plane, half-plane) and the finite inverse problem.

pub mod circle;
pub mod numerics;
pub mod finite;
pub mod halfplane;
pub mod operators;
pub mod plane;
pub mod quantization;
pub mod sphere;
