//! Free group words, truncated Magnus expansions, Milnor invariants and the
//! algebra of flexible-cell trees.

pub mod builtin;
pub mod error;
pub mod io;
pub mod milnor;
pub mod obstruction;
pub mod oracle;
pub mod random;
pub mod selftest;
pub mod series;
pub mod solid_torus;
pub mod tree;
pub mod word;

pub use error::{Error, Result};
pub use milnor::{
    delta, homotopy_witness, is_almost_trivial, is_homotopically_trivial, mu, mu_bar,
    nilpotent_presentation, LinkPresentation, MuResidue, MuTable, Presentation, Witness,
};
pub use obstruction::{
    bottom_meridian_word, collection_phi, obstruct_bounding, phi_functional, phi_of_word,
    relator_samples, PhiCertificate, PhiFunctional, Verdict,
};
pub use series::{
    magnus_expand, magnus_expand_in, reduced_magnus, Monomial, PairIdeal, SeriesRing,
    TruncatedSeries,
};
pub use solid_torus::{compose, SolidTorusLink};
pub use tree::{FCellTree, TreeSpec};
pub use word::{Alphabet, GeneratorId, Homomorphism, Letter, Word};
