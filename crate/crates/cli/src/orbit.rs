//! Sampled orbit points of the affine action.

use momenta_core::cylinder::{affine_action, heisenberg_casimir};
use momenta_core::scenario::ScenarioKind;

use crate::config::Loaded;
use crate::report::OrbitSummary;
use crate::sampling;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSample {
    pub id: usize,
    /// Endpoint of the sampled group path in the universal cover.
    pub g: Vec<f64>,
    pub mu: Vec<f64>,
    pub casimir: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSamples {
    pub descriptor: OrbitSummary,
    pub samples: Vec<OrbitSample>,
}

pub fn sample_orbit(loaded: &Loaded, mu_index: usize, count: usize) -> anyhow::Result<OrbitSamples> {
    let scenario = &loaded.scenario;
    let mu = loaded.mu_list.get(mu_index).ok_or_else(|| {
        anyhow::anyhow!("--mu {mu_index} is out of range: the config lists {} momenta", loaded.mu_list.len())
    })?;
    let descriptor = OrbitSummary::from_descriptor(&scenario.orbit_descriptor(mu)?);
    let sigma = match scenario.kind() {
        ScenarioKind::CentralExtension => scenario.sigma(),
        ScenarioKind::Torus { .. } => None,
    };
    let seed = loaded.config.verify.seed;
    let samples = (0..count)
        .map(|id| {
            let mut rng = sampling::rng_for(seed, "orbit", id);
            let g = sampling::path(&mut rng, scenario.cover());
            let image = affine_action(scenario.phase(), &g, mu)?;
            let casimir = sigma.map(|s| heisenberg_casimir(s, image[0], [image[1], image[2]]));
            Ok(OrbitSample { id, g: g.endpoint().0.clone(), mu: image.0, casimir })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(OrbitSamples { descriptor, samples })
}

impl OrbitSamples {
    /// A `# orbit: …` line followed by a CSV table.
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let n = self.samples.first().map_or(0, |s| s.g.len());
        let mut out = format!("# orbit: {}\n", self.descriptor.describe());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["sample".to_string()];
        header.extend((0..n).map(|i| format!("g{i}")));
        header.extend((0..n).map(|i| format!("mu{i}")));
        header.push("casimir".into());
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![s.id.to_string()];
            row.extend(s.g.iter().chain(&s.mu).map(|x| format!("{x:.17e}")));
            row.push(s.casimir.map_or(String::new(), |c| format!("{c:.17e}")));
            w.write_record(&row)?;
        }
        out.push_str(&String::from_utf8(w.into_inner()?)?);
        Ok(out)
    }
}
