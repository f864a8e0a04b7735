//! Exact linear algebra over Q and F_p, structure-constant models of
//! Z-graded rings, twisting sheaves on the associated projective line, their
//! cohomology, and a numeric check of the K0-level splitting.

pub mod cohomology;
pub mod error;
pub mod field;
pub mod matrix;
pub mod ring;
pub mod sheaf;
pub mod splitting;

pub use cohomology::{
    apply_pairing, class_dim, coh_map, coh_object, cohomology_table, component_class,
    component_pairing, euler, gamma, hypercoh, hypercoh_windowed, initial_window, k0_class,
    k0_len, object_euler, object_pairing, sections_complex, tensor_with_component,
    twist_theorem_check, CohomologyTable, HypercohResult, K0Class, R0Complex, R0Module,
    TableEntry,
};
pub use error::{Error, Result};
pub use field::{FieldTag, Scalar};
pub use matrix::Matrix;
pub use ring::{
    crossed_product_witness, is_strongly_graded, partition_of_unity, projectivity_certificate,
    CrossedProductWitness, DualBasis, FqData, GradedRing, Idempotent, PartitionOfUnity,
    RingElement, StrongGrading, TableData,
};
pub use sheaf::random::{random_complex, random_isomorphism, random_nonnegative_complex};
pub use sheaf::{
    cartesian_sequence, cone, hom_basis, psi, ChainMap, R0FreeComplex, RangedElement,
    SheafComplex, SheafMorphism, TwistSum,
};
pub use splitting::{
    additivity_check, adjunction_check, adjunction_dims, check_lemma_q0, is_acyclic, is_q_equiv,
    is_vect0, split_k0, split_k0_alt, verify_splitting, EquivKind, EquivalenceVerdict, K0Pair,
    SplitCell, SplittingReport, Witness,
};
