pub mod error;
pub mod evolution;
pub mod features;
pub mod generators;
pub mod genotype;
pub mod io;
pub mod landscape;
pub mod ols;
pub mod perturb;
pub mod snapshot;
pub mod stats;

pub use error::{Error, Result};
pub use features::{analyze, AnalysisOptions, Feature, FeatureReport, FeatureSet};
pub use genotype::{Alphabet, GenotypeCode, SequenceSpace};
pub use landscape::{AlphabetChoice, Landscape, Node, OptimaSet, VariantRecord, WalkOutcome};
