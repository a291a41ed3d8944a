//! Exact computational tools for low-dimensional categories: augmented
//! directed complexes with their chain homotopies, the objects and
//! morphisms of the cell-shape category built from simplices wreathed
//! over a base, finite 2-categories with their nerves, and integer
//! homology read off any of the above.
//!
//! Everything is exact: matrices are sparse integer matrices over
//! arbitrary-precision integers, homology comes out of Smith normal
//! form, and every truncated computation tracks the range in which its
//! answers are provably complete.

pub mod adc;
pub mod cat2;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod nerve;
pub mod theta;

pub use adc::{
    homotopy_h, is_isomorphism_via, oriental_complex, retraction_sr, tensor, validate_chain_map,
    verify_homotopy, AdcLabel, ChainHomotopy, ChainMap, DirectedComplex, HomotopyVerdict,
    HomotopyWitness,
};
pub use cat2::enumerate::{
    enumerate_2functors, enumerate_functors, iso1_isomorphic, iso2_isomorphic, validate_2functor,
    TwoFunctor,
};
pub use cat2::json::{fin2cat_from_value, fin2cat_to_value, two_functor_from_value, two_functor_to_value};
pub use cat2::{
    dualize, embed1as2, oriental2, point2, realize1, realize2, s_degeneracy, s_face, s_p,
    sigma_prime, tau1, two_disc, underlying1, wreath_glue, Arrow, Fin2Cat, Fin2CatBuilder, FinCat,
    Functor, SpCat,
};
pub use error::{Budget, Error, Result, DEFAULT_BUDGET};
pub use homology::{
    betti, chains_from_value, chains_to_value, ChainComplexZ, Completeness, HomologyResult,
};
pub use matrix::IntMat;
pub use nerve::{
    check_street_simplex, diagonal, multinerve2, nerve1, normalized_chains, street_nerve2,
    street_simplices, total_complex, BiSimplicialSet, SimplicialSet, StreetSimplex,
};
pub use theta::{
    compose, enumerate_morphisms, generator_counts, identity, m_n, m_n_map, mu, parse_object,
    random_morphism, random_object, sigma, theta_dual, ThetaMorphism, ThetaObject,
};
