//! Finite ℤ/m-modules in invariant-factor form and their morphisms.

mod enumerate;
mod module;
mod morphism;
mod ops;
mod subgroups;

pub use enumerate::{
    divisors_above_one, enumerate_elements, enumerate_hom, hom_generators, hom_size, modules_up_to, Caps, HomIter,
};
pub use module::{FpModule, ModElement, Presentation, MAX_MODULUS};
pub use morphism::Morphism;
pub use ops::{
    cokernel, copair, direct_sum, direct_sum_many, extend_along, image, is_epi, is_iso, is_mono, kernel, lift_along,
    lift_element, module_from_presentation, pair, quotient_of_generators, subgroup_generated, subobject_leq, DirectSum,
    Generated, Image, Quotient,
};
pub(crate) use ops::{Extender, Lifter};
pub use subgroups::{enumerate_subgroups, minimal_subgroups, Subgroup};
pub(crate) use subgroups::{is_prime, IndexArith};
