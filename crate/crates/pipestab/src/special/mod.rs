//! Special functions used by the estimates and their validation.

pub mod airy;
pub mod bessel;
pub mod harmonic;
pub mod scales;

pub use airy::{
    adaptive_gk, airy, airy_a0, airy_on_ray, airy_profile_w, AiryEval, AiryLayerParams, AiryProfile, Ray, DELTA0,
};
pub use bessel::{bessel_j, bessel_zero};
pub use harmonic::{harmonic_axisym, harmonic_j, harmonic_j_star};
pub use scales::{frozen_a1, scale_a, tilde_lambda, ScaleValues};
