//! The `analyze` report. Lattice facts live in `exact` and carry no
//! tolerances; quadrature and ODE results live in `numeric`.

use std::time::{SystemTime, UNIX_EPOCH};

use momenta_core::cylinder::OrbitDescriptor;
use momenta_core::lattice::LatticeSubgroup;
use momenta_core::lie::DualVector;
use momenta_core::linalg;
use momenta_core::scalar::ExactScalar;
use momenta_core::scenario::Scenario;
use serde::{Deserialize, Serialize};

use crate::checks::{run_suite, CheckReport, SkippedCheck};
use crate::config::{GroupSpec, Loaded};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub header: Header,
    pub scenario: ScenarioSummary,
    pub exact: ExactSection,
    pub numeric: NumericSection,
}

/// The only part of a report that varies between identical runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioSummary {
    pub group: GroupSpec,
    pub field: String,
    pub dim: usize,
    pub fundamental_group_rank: usize,
    pub seed: u64,
    pub sample_count: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactSection {
    /// `J` of the standard loops, as exact scalars.
    pub holonomy_generators: Vec<Vec<String>>,
    pub rational_rank: usize,
    pub real_rank: usize,
    pub holonomy_closed: bool,
    pub non_closed_holonomy: bool,
    pub closure: ClosureSummary,
    /// Basis columns of `Γ₀`.
    pub gamma0: Vec<Vec<i64>>,
    pub cover: CoverSummary,
    pub momenta: Vec<MomentumEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClosureSummary {
    pub subspace_basis: Vec<Vec<String>>,
    pub lattice_basis: Vec<Vec<String>>,
    /// `𝔤*/H̄` as `ℝ^a × T^b`.
    pub quotient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverSummary {
    pub descriptor: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentumEntry {
    pub mu: Vec<f64>,
    pub orbit: Option<OrbitSummary>,
    /// `None` when the holonomy is not closed.
    pub reduction: Option<ReductionSummary>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum OrbitSummary {
    #[serde(rename_all = "camelCase")]
    AffineSubspace { base: Vec<f64>, directions: Vec<Vec<f64>> },
    #[serde(rename_all = "camelCase")]
    CasimirLevelSet { sigma: [f64; 2], value: f64 },
    #[serde(rename_all = "camelCase")]
    SampledCloud { points: Vec<Vec<f64>> },
}

impl OrbitSummary {
    pub fn from_descriptor(d: &OrbitDescriptor) -> Self {
        match d {
            OrbitDescriptor::AffineSubspace { base, directions } => {
                OrbitSummary::AffineSubspace { base: base.0.clone(), directions: directions.clone() }
            }
            OrbitDescriptor::CasimirLevelSet { sigma, value } => {
                OrbitSummary::CasimirLevelSet { sigma: *sigma, value: *value }
            }
            OrbitDescriptor::SampledCloud { points } => {
                OrbitSummary::SampledCloud { points: points.iter().map(|p| p.0.clone()).collect() }
            }
        }
    }

    /// One-line description used as the CSV header.
    pub fn describe(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
        match self {
            OrbitSummary::AffineSubspace { base, directions } => {
                format!("affineSubspace dim={} base=[{}]", directions.len(), list(base))
            }
            OrbitSummary::CasimirLevelSet { sigma, value } => {
                format!("casimirLevelSet sigma=[{}] value={value}", list(sigma))
            }
            OrbitSummary::SampledCloud { points } => format!("sampledCloud points={}", points.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReductionSummary {
    pub gamma_mu: LatticeSummary,
    pub covers: Vec<DeckSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LatticeSummary {
    pub rank: usize,
    pub basis: Vec<Vec<i64>>,
}

impl LatticeSummary {
    fn of(l: &LatticeSubgroup) -> Self {
        Self { rank: l.rank(), basis: l.basis_columns_i64() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeckSummary {
    /// `zero`, `gamma0` or `configured`.
    pub gamma_n_source: String,
    pub gamma_n: LatticeSummary,
    pub deck_group: String,
    pub symplectomorphism: bool,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NumericSection {
    pub holonomy_generators: Vec<Vec<f64>>,
    pub checks: Vec<CheckReport>,
    pub skipped: Vec<SkippedCheck>,
    pub all_passed: bool,
}

fn strings(vs: &[Vec<ExactScalar>]) -> Vec<Vec<String>> {
    vs.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect()
}

fn header() -> Header {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Header {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema: SCHEMA_VERSION,
        timestamp,
    }
}

fn reduction(scenario: &Scenario, mu: &DualVector, gamma_n: Option<&LatticeSubgroup>) -> Result<ReductionSummary, String> {
    let rank = scenario.fundamental_rank();
    let gamma_mu = scenario.gamma_mu(mu).map_err(|e| e.to_string())?;
    let mut sources = vec![("zero", LatticeSubgroup::zero(rank)), ("gamma0", scenario.gamma0())];
    sources.extend(gamma_n.map(|g| ("configured", g.clone())));
    let mut covers = Vec::new();
    for (source, lattice) in sources {
        let deck = scenario.deck_group(mu, &lattice).map_err(|e| e.to_string())?;
        let statement = if deck.symplectomorphism {
            "symplectomorphism".to_string()
        } else {
            format!("covering with deck group {}", deck.invariants)
        };
        covers.push(DeckSummary {
            gamma_n_source: source.into(),
            gamma_n: LatticeSummary::of(&lattice),
            deck_group: deck.invariants.to_string(),
            symplectomorphism: deck.symplectomorphism,
            statement,
        });
    }
    Ok(ReductionSummary { gamma_mu: LatticeSummary::of(&gamma_mu), covers })
}

fn momentum_entry(scenario: &Scenario, closed: bool, mu: &DualVector, gamma_n: Option<&LatticeSubgroup>) -> MomentumEntry {
    let mut notes = Vec::new();
    let orbit = match scenario.orbit_descriptor(mu) {
        Ok(d) => Some(OrbitSummary::from_descriptor(&d)),
        Err(e) => {
            notes.push(format!("orbit: {e}"));
            None
        }
    };
    let reduction = if !closed {
        notes.push("reduction suppressed: non-closed holonomy".into());
        None
    } else {
        match reduction(scenario, mu, gamma_n) {
            Ok(r) => Some(r),
            Err(e) => {
                notes.push(format!("reduction: {e}"));
                None
            }
        }
    };
    MomentumEntry { mu: mu.0.clone(), orbit, reduction, notes }
}

/// Build the full report, running the verification suite on the way.
pub fn analyze(loaded: &Loaded) -> AnalysisReport {
    let scenario = &loaded.scenario;
    let settings = &loaded.config.verify;
    let holonomy = scenario.holonomy();
    let closure = scenario.closure();
    let cylinder = scenario.cylinder();
    let cover = scenario.cover_description();
    let momenta = loaded
        .mu_list
        .iter()
        .map(|mu| momentum_entry(scenario, closure.closed, mu, loaded.gamma_n.as_ref()))
        .collect();
    let exact = ExactSection {
        holonomy_generators: strings(holonomy.generators()),
        rational_rank: holonomy.rational_rank(),
        real_rank: holonomy.real_rank(),
        holonomy_closed: closure.closed,
        non_closed_holonomy: !closure.closed,
        closure: ClosureSummary {
            subspace_basis: strings(&closure.subspace_basis),
            lattice_basis: strings(&closure.lattice_basis),
            quotient: format!("ℝ^{} × T^{}", cylinder.line_rank(), cylinder.torus_rank()),
        },
        gamma0: cover.gamma0.basis_columns_i64(),
        cover: CoverSummary { descriptor: cover.descriptor, name: cover.name },
        momenta,
    };
    let suite = run_suite(loaded, scenario, settings);
    let numeric_generators = match scenario.holonomy_generators_numeric() {
        Ok(gs) => gs.into_iter().map(|g| g.0).collect(),
        Err(e) => {
            log::warn!("numeric holonomy failed: {e}");
            Vec::new()
        }
    };
    let numeric = NumericSection {
        holonomy_generators: numeric_generators,
        all_passed: suite.all_passed(),
        checks: suite.checks,
        skipped: suite.skipped,
    };
    AnalysisReport {
        header: header(),
        scenario: ScenarioSummary {
            group: loaded.config.group.clone(),
            field: loaded.config.field.clone(),
            dim: scenario.dim(),
            fundamental_group_rank: scenario.fundamental_rank(),
            seed: settings.seed,
            sample_count: settings.sample_count,
            tolerance: settings.tolerance,
        },
        exact,
        numeric,
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Dimension of the affine span of `points`.
pub fn affine_rank(points: &[Vec<f64>]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| linalg::sub(p, first)).collect();
    linalg::orthonormalize(&diffs, 1e-9).len()
}
