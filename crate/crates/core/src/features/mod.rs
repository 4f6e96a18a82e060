//! The twenty landscape features and the combined analysis report.
//!
//! [`analyze`] evaluates a selectable subset of features and collects them
//! into a flat [`FeatureReport`]. Features that are not selected, or that are
//! undefined on the given landscape, are `None` and serialize as `null`.

pub mod epistasis;
pub mod navigability;
pub mod ruggedness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::Landscape;

pub use epistasis::{EpistasisFractions, EpistasisKind, EpistasisSquare, PairwiseFit};
pub use navigability::{BasinCorrelation, BasinMode};
pub use ruggedness::RuggednessReport;

macro_rules! features {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// One of the twenty named features.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Feature {
            $($variant),*
        }

        impl Feature {
            pub const ALL: [Feature; 20] = [$(Feature::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Feature::$variant => $name),*
                }
            }
        }

        impl FromStr for Feature {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(Feature::$variant),)*
                    other => Err(Error::InvalidParameter(format!("unknown feature '{other}'"))),
                }
            }
        }
    };
}

features! {
    PhiLo => "phi_lo",
    RsRatio => "rs_ratio",
    RhoA => "rho_a",
    Gamma => "gamma",
    Nfc => "nfc",
    EpsMag => "eps_mag",
    EpsSign => "eps_sign",
    EpsReci => "eps_reci",
    EpsPos => "eps_pos",
    EpsNeg => "eps_neg",
    IId => "i_id",
    EpsDr => "eps_dr",
    EpsIc => "eps_ic",
    EpsPairwiseR2 => "eps_pairwise_r2",
    Fdc => "fdc",
    AlphaGo => "alpha_go",
    BfcAcc => "bfc_acc",
    BfcGreedy => "bfc_greedy",
    PhiEe => "phi_ee",
    Eta => "eta",
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of features to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureSet([bool; 20]);

impl FeatureSet {
    pub fn all() -> Self {
        FeatureSet([true; 20])
    }

    pub fn none() -> Self {
        FeatureSet([false; 20])
    }

    pub fn insert(&mut self, f: Feature) {
        self.0[f as usize] = true;
    }

    pub fn remove(&mut self, f: Feature) {
        self.0[f as usize] = false;
    }

    pub fn contains(&self, f: Feature) -> bool {
        self.0[f as usize]
    }

    fn any(&self, fs: &[Feature]) -> bool {
        fs.iter().any(|&f| self.contains(f))
    }
}

impl Default for FeatureSet {
    fn default() -> Self {
        Self::all()
    }
}

impl FromStr for FeatureSet {
    type Err = Error;

    /// `"all"` or a comma-separated list of feature names.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(Self::all());
        }
        let mut set = Self::none();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            set.insert(part.parse()?);
        }
        if set == Self::none() {
            return Err(Error::InvalidParameter("empty feature list".into()));
        }
        Ok(set)
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub features: FeatureSet,
    /// Tolerance on |ε| for calling a square epistatic.
    pub eps_tol: Option<f64>,
    /// Neutrality threshold on |Δf|.
    pub sigma: Option<f64>,
    pub walks: usize,
    /// Defaults to the number of loci.
    pub walk_length: Option<usize>,
    pub seed: u64,
    pub max_fit_nodes: usize,
    pub max_optima: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            features: FeatureSet::all(),
            eps_tol: None,
            sigma: None,
            walks: 1000,
            walk_length: None,
            seed: 0,
            max_fit_nodes: 100_000,
            max_optima: 10_000,
        }
    }
}

/// Flat report: twenty features followed by diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub phi_lo: Option<f64>,
    pub rs_ratio: Option<f64>,
    pub rho_a: Option<f64>,
    pub gamma: Option<f64>,
    pub nfc: Option<f64>,
    pub eps_mag: Option<f64>,
    pub eps_sign: Option<f64>,
    pub eps_reci: Option<f64>,
    pub eps_pos: Option<f64>,
    pub eps_neg: Option<f64>,
    pub i_id: Option<f64>,
    pub eps_dr: Option<f64>,
    pub eps_ic: Option<f64>,
    pub eps_pairwise_r2: Option<f64>,
    pub fdc: Option<f64>,
    pub alpha_go: Option<f64>,
    pub bfc_acc: Option<f64>,
    pub bfc_greedy: Option<f64>,
    pub phi_ee: Option<f64>,
    pub eta: Option<f64>,

    pub node_count: u64,
    pub edge_count: u64,
    pub completeness: f64,
    pub n_local_optima: u64,
    pub global_tie_count: u64,
    pub mean_acc_path: f64,
    pub sigma_used: f64,
    pub eps_tol_used: f64,
    pub seed: u64,
    pub walks: u64,
    pub walk_length: u64,
    pub n_squares_total: Option<u64>,
    pub n_squares_epistatic: Option<u64>,
    pub eps_no_epistatic_squares: bool,
    pub bfc_acc_sampled: bool,
    pub eps_pairwise_r2_sampled: bool,
    /// Selected features that came out undefined, `;`-separated.
    pub undefined_features: String,
    /// Features that were not selected, `;`-separated.
    pub skipped_features: String,
    /// Reasons for undefined features, `;`-separated.
    pub notes: String,
}

impl FeatureReport {
    pub fn get(&self, f: Feature) -> Option<f64> {
        use Feature::*;
        match f {
            PhiLo => self.phi_lo,
            RsRatio => self.rs_ratio,
            RhoA => self.rho_a,
            Gamma => self.gamma,
            Nfc => self.nfc,
            EpsMag => self.eps_mag,
            EpsSign => self.eps_sign,
            EpsReci => self.eps_reci,
            EpsPos => self.eps_pos,
            EpsNeg => self.eps_neg,
            IId => self.i_id,
            EpsDr => self.eps_dr,
            EpsIc => self.eps_ic,
            EpsPairwiseR2 => self.eps_pairwise_r2,
            Fdc => self.fdc,
            AlphaGo => self.alpha_go,
            BfcAcc => self.bfc_acc,
            BfcGreedy => self.bfc_greedy,
            PhiEe => self.phi_ee,
            Eta => self.eta,
        }
    }

    fn set(&mut self, f: Feature, v: Option<f64>) {
        use Feature::*;
        let slot = match f {
            PhiLo => &mut self.phi_lo,
            RsRatio => &mut self.rs_ratio,
            RhoA => &mut self.rho_a,
            Gamma => &mut self.gamma,
            Nfc => &mut self.nfc,
            EpsMag => &mut self.eps_mag,
            EpsSign => &mut self.eps_sign,
            EpsReci => &mut self.eps_reci,
            EpsPos => &mut self.eps_pos,
            EpsNeg => &mut self.eps_neg,
            IId => &mut self.i_id,
            EpsDr => &mut self.eps_dr,
            EpsIc => &mut self.eps_ic,
            EpsPairwiseR2 => &mut self.eps_pairwise_r2,
            Fdc => &mut self.fdc,
            AlphaGo => &mut self.alpha_go,
            BfcAcc => &mut self.bfc_acc,
            BfcGreedy => &mut self.bfc_greedy,
            PhiEe => &mut self.phi_ee,
            Eta => &mut self.eta,
        };
        *slot = v;
    }

    /// The twenty features in report order.
    pub fn features(&self) -> [(Feature, Option<f64>); 20] {
        Feature::ALL.map(|f| (f, self.get(f)))
    }
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    })
}

/// Median replicate standard deviation, when any node carries a variance.
pub fn median_replicate_sd(landscape: &Landscape) -> Option<f64> {
    median(
        landscape
            .variances()
            .iter()
            .flatten()
            .map(|v| v.sqrt())
            .collect(),
    )
}

struct Notes(Vec<String>);

impl Notes {
    fn record<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

pub fn analyze(landscape: &Landscape, opts: &AnalysisOptions) -> Result<FeatureReport> {
    use Feature::*;
    if opts.walks == 0 || opts.walk_length == Some(0) {
        return Err(Error::InvalidParameter(
            "walk count and walk length must be positive".into(),
        ));
    }
    for (name, v) in [("eps_tol", opts.eps_tol), ("sigma", opts.sigma)] {
        if let Some(v) = v {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative"
                )));
            }
        }
    }
    let sel = opts.features;
    let replicate_sd = median_replicate_sd(landscape);
    let sigma = opts.sigma.or(replicate_sd).unwrap_or(0.0);
    let eps_tol = opts.eps_tol.or(replicate_sd).unwrap_or(1e-9);
    let walk_length = opts.walk_length.unwrap_or(landscape.space().n_loci());
    let optima = landscape.local_optima();

    let mut notes = Notes(Vec::new());
    let mut r = FeatureReport {
        phi_lo: None,
        rs_ratio: None,
        rho_a: None,
        gamma: None,
        nfc: None,
        eps_mag: None,
        eps_sign: None,
        eps_reci: None,
        eps_pos: None,
        eps_neg: None,
        i_id: None,
        eps_dr: None,
        eps_ic: None,
        eps_pairwise_r2: None,
        fdc: None,
        alpha_go: None,
        bfc_acc: None,
        bfc_greedy: None,
        phi_ee: None,
        eta: None,
        node_count: landscape.node_count() as u64,
        edge_count: landscape.edge_count() as u64,
        completeness: landscape.completeness(),
        n_local_optima: optima.local_optima.len() as u64,
        global_tie_count: optima.global_tie_count as u64,
        mean_acc_path: navigability::mean_accessible_path_length(landscape),
        sigma_used: sigma,
        eps_tol_used: eps_tol,
        seed: opts.seed,
        walks: opts.walks as u64,
        walk_length: walk_length as u64,
        n_squares_total: None,
        n_squares_epistatic: None,
        eps_no_epistatic_squares: false,
        bfc_acc_sampled: false,
        eps_pairwise_r2_sampled: false,
        undefined_features: String::new(),
        skipped_features: String::new(),
        notes: String::new(),
    };

    if sel.contains(PhiLo) {
        r.phi_lo = Some(optima.local_optima.len() as f64 / landscape.node_count() as f64);
    }
    if sel.contains(RsRatio) {
        r.rs_ratio = notes
            .record("rs_ratio", ruggedness::rs_ratio(landscape))
            .flatten();
    }
    if sel.contains(RhoA) {
        r.rho_a = notes
            .record(
                "rho_a",
                ruggedness::autocorrelation(landscape, opts.walks, walk_length, opts.seed),
            )
            .flatten();
    }
    if sel.contains(Gamma) {
        r.gamma = notes
            .record("gamma", ruggedness::gamma1(landscape))
            .flatten();
    }
    if sel.contains(Nfc) {
        r.nfc = ruggedness::neighbor_fitness_correlation(landscape);
    }

    let fractions = [EpsMag, EpsSign, EpsReci, EpsPos, EpsNeg];
    if sel.any(&fractions) {
        if let Some(e) = notes.record(
            "epistasis squares",
            epistasis::classify_squares(landscape, eps_tol),
        ) {
            let values = [e.eps_mag, e.eps_sign, e.eps_reci, e.eps_pos, e.eps_neg];
            for (f, v) in fractions.into_iter().zip(values) {
                if sel.contains(f) {
                    r.set(f, Some(v));
                }
            }
            r.n_squares_total = Some(e.counts.total);
            r.n_squares_epistatic = Some(e.counts.epistatic);
            r.eps_no_epistatic_squares = e.no_epistatic_squares;
        }
    }
    if sel.contains(IId) {
        r.i_id = notes
            .record("i_id", epistasis::idiosyncrasy_index(landscape))
            .flatten();
    }
    if sel.any(&[EpsDr, EpsIc]) {
        let (dr, ic) = epistasis::global_epistasis(landscape);
        if sel.contains(EpsDr) {
            r.eps_dr = dr;
        }
        if sel.contains(EpsIc) {
            r.eps_ic = ic;
        }
    }
    if sel.contains(EpsPairwiseR2) {
        if let Some(p) = notes.record(
            "eps_pairwise_r2",
            epistasis::pairwise_r2(landscape, opts.max_fit_nodes, opts.seed),
        ) {
            r.eps_pairwise_r2 = p.r2;
            r.eps_pairwise_r2_sampled = p.sampled;
        }
    }

    if sel.contains(Fdc) {
        r.fdc = navigability::fdc(landscape);
    }
    if sel.contains(AlphaGo) {
        r.alpha_go = Some(navigability::global_accessibility(landscape));
    }
    if sel.contains(BfcAcc) {
        let b = navigability::basin_fitness_correlation(
            landscape,
            BasinMode::Accessible,
            opts.max_optima,
            opts.seed,
        );
        r.bfc_acc = b.value;
        r.bfc_acc_sampled = b.sampled;
    }
    if sel.contains(BfcGreedy) {
        r.bfc_greedy = navigability::basin_fitness_correlation(
            landscape,
            BasinMode::Greedy,
            opts.max_optima,
            opts.seed,
        )
        .value;
    }
    if sel.contains(PhiEe) {
        r.phi_ee = navigability::ee_fraction(landscape, sigma);
    }
    if sel.contains(Eta) {
        r.eta = navigability::neutrality(landscape, sigma);
    }

    let mut undefined = Vec::new();
    let mut skipped = Vec::new();
    for (f, v) in r.features() {
        if !sel.contains(f) {
            skipped.push(f.name());
        } else if v.is_none() {
            undefined.push(f.name());
        }
    }
    r.undefined_features = undefined.join(";");
    r.skipped_features = skipped.join(";");
    r.notes = notes.0.join(";");
    Ok(r)
}
