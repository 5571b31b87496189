use std::io::Write;
use std::path::Path;

use affinewalk::exactdist::WalkConfig;
use affinewalk::fourier::{
    all_characters, bound_series, contraction_gap, default_ell_max, fitted_c9, mixing_time, orbit_analysis,
    survey_orbits, CharacterIndex, MixingMethod, MixingTime, OrbitSurvey, DEFAULT_C1,
};
use affinewalk::modmath::is_admissible;
use affinewalk::montecarlo::{
    empirical_tv_with_cap, projection_functional, scaling_sweep, simulate, SweepMethod, TaggedMatrix, DEFAULT_SEED,
};
use affinewalk::spectral::{classify, Classification, SpectrumReport, DEFAULT_TOLERANCE};
use anyhow::Result;
use serde::{Deserialize, Serialize};

use crate::config::{missing, ExperimentConfig, NRange};
use crate::failure::Failure;
use crate::output::{csv_preamble, open, write_json};

pub const DEFAULT_N_CAP: u64 = 100_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_SWEEP_EPSILON: f64 = 0.25;

fn walk(cfg: &ExperimentConfig) -> Result<WalkConfig> {
    Ok(WalkConfig::new(cfg.matrix()?.clone(), cfg.p()?)?)
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub p: u64,
    pub admissible: bool,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub spectrum: SpectrumReport,
    pub admissibility: Vec<Admissibility>,
}

pub fn classify_cmd(mut cfg: ExperimentConfig, out: Option<&Path>) -> Result<()> {
    let t = cfg.matrix()?.clone();
    let tol = *cfg.tol.get_or_insert(DEFAULT_TOLERANCE);
    let spectrum = classify(&t, tol)?;
    if spectrum.classification == Classification::Singular {
        return Err(Failure::Math(format!("matrix {t} is singular; no modulus makes the walk admissible")).into());
    }
    let ps: Vec<u64> = cfg.ps.clone().or_else(|| cfg.p.map(|p| vec![p])).unwrap_or_default();
    let admissibility = ps.into_iter().map(|p| Admissibility { p, admissible: p >= 2 && is_admissible(&t, p) }).collect();
    write_json(out, "classify", &cfg, &ClassifyResult { spectrum, admissibility })
}

pub fn bounds_cmd(cfg: ExperimentConfig, out: Option<&Path>) -> Result<()> {
    let walk = walk(&cfg)?;
    let ns = cfg.n.ok_or_else(|| missing("n"))?.values();
    let result = bound_series(&walk, &ns, &cfg.budgets());
    let mut w = open(out)?;
    csv_preamble(&mut *w, "bounds", &cfg)?;
    match result {
        Ok(series) => series.write_csv(&mut w)?,
        Err(e) => {
            // keep the header so partial files are recognisable
            writeln!(w, "{}", affinewalk::fourier::BoundSeries::CSV_HEADER)?;
            w.flush()?;
            return Err(e.into());
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtimeResult {
    pub method: MixingMethod,
    pub epsilon: f64,
    pub n_cap: u64,
    pub outcome: MixingTime,
}

fn mixing_method(tag: &str) -> Result<MixingMethod> {
    match tag {
        "ub" => Ok(MixingMethod::Ub),
        "exact" => Ok(MixingMethod::Exact),
        other => Err(Failure::Config(format!("unknown method {other:?}; expected ub or exact")).into()),
    }
}

pub fn mixtime_cmd(mut cfg: ExperimentConfig, out: Option<&Path>) -> Result<()> {
    let walk = walk(&cfg)?;
    let epsilon = cfg.epsilon.ok_or_else(|| missing("epsilon"))?;
    let method = mixing_method(cfg.method.get_or_insert_with(|| "ub".into()))?;
    let n_cap = *cfg.n_cap.get_or_insert(DEFAULT_N_CAP);
    let outcome = mixing_time(&walk, epsilon, method, n_cap, &cfg.budgets())?;
    write_json(out, "mixtime", &cfg, &MixtimeResult { method, epsilon, n_cap, outcome })
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSurveyResult {
    pub survey: OrbitSurvey,
    /// Certified contraction gap `delta` for this `c1` and dimension.
    pub contraction_gap: f64,
    pub fitted_c9: f64,
}

pub fn orbit_cmd(mut cfg: ExperimentConfig, all: bool, out: Option<&Path>) -> Result<()> {
    let walk = walk(&cfg)?;
    let c1 = *cfg.c1.get_or_insert(DEFAULT_C1);
    let ell_max = *cfg.ell_max.get_or_insert(default_ell_max(walk.modulus()));
    let budgets = cfg.budgets();
    if all {
        let chars = all_characters(&walk, budgets.character_cap)?;
        let survey = survey_orbits(&walk, &chars, c1, ell_max)?;
        let result = OrbitSurveyResult {
            survey,
            contraction_gap: contraction_gap(walk.dim(), c1),
            fitted_c9: fitted_c9(walk.modulus(), walk.dim(), c1, budgets.character_cap)?,
        };
        return write_json(out, "orbit", &cfg, &result);
    }
    let c = cfg.c.clone().ok_or_else(|| missing("c"))?;
    if c.len() != walk.dim() {
        return Err(Failure::Config(format!("character has {} entries, matrix dimension is {}", c.len(), walk.dim())).into());
    }
    let record = orbit_analysis(&CharacterIndex::new(walk.modulus(), c)?, &walk, c1, ell_max)?;
    write_json(out, "orbit", &cfg, &record)
}

pub fn project_cmd(mut cfg: ExperimentConfig, out: Option<&Path>) -> Result<()> {
    let t = cfg.matrix()?.clone();
    let p = cfg.p()?;
    let m = match cfg.m {
        Some(m) => m,
        None => {
            let class = classify(&t, cfg.tol.unwrap_or(DEFAULT_TOLERANCE))?.classification;
            class.root_of_unity_order().ok_or_else(|| {
                Failure::Math(format!("matrix {t} is {}; projection needs an eigenvalue that is a root of unity", class.tag()))
            })?
        }
    };
    cfg.m = Some(m);
    let report = projection_functional(&t, p, m)?;
    write_json(out, "project", &cfg, &report)
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    /// Absent when there are no samples or `p^d` exceeds the state budget.
    pub empirical_tv: Option<f64>,
}

fn single_n(n: Option<NRange>) -> Result<u64> {
    let n = n.ok_or_else(|| missing("n"))?;
    if n.end != n.start + 1 {
        return Err(Failure::Config(format!("simulate needs a single step count, got range {n}")).into());
    }
    Ok(n.start)
}

pub fn simulate_cmd(mut cfg: ExperimentConfig, dump: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let walk = walk(&cfg)?;
    let n = single_n(cfg.n)?;
    let samples = *cfg.samples.get_or_insert(DEFAULT_SAMPLES);
    let seed = *cfg.seed.get_or_insert(DEFAULT_SEED);
    let batch = simulate(&walk, n, samples, seed);
    if let Some(path) = dump {
        let mut w = open(Some(path))?;
        csv_preamble(&mut *w, "simulate", &cfg)?;
        batch.write_csv(&mut w)?;
        w.flush()?;
    }
    let empirical_tv = empirical_tv_with_cap(&batch, cfg.budgets().state_cap).ok();
    write_json(out, "simulate", &cfg, &SimulateResult { n, samples, seed, empirical_tv })
}

fn sweep_method(tag: &str) -> Result<SweepMethod> {
    match tag {
        "ub" => Ok(SweepMethod::Ub),
        "exact" => Ok(SweepMethod::Exact),
        "projected" => Ok(SweepMethod::Projected),
        other => Err(Failure::Config(format!("unknown method {other:?}; expected ub, exact or projected")).into()),
    }
}

pub fn sweep_cmd(mut cfg: ExperimentConfig, summary: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let specs = cfg.matrices.clone().or_else(|| cfg.matrix.clone().map(|m| vec![m])).ok_or_else(|| missing("matrices"))?;
    let matrices: Vec<TaggedMatrix> = match &cfg.tags {
        Some(tags) if tags.len() != specs.len() => {
            return Err(Failure::Config(format!("{} tags for {} matrices", tags.len(), specs.len())).into())
        }
        Some(tags) => tags.iter().zip(&specs).map(|(t, m)| TaggedMatrix::new(t.clone(), m.0.clone())).collect::<Result<_, _>>()?,
        None => specs.iter().map(|m| TaggedMatrix::untagged(m.0.clone())).collect(),
    };
    let ps = cfg.ps.clone().or_else(|| cfg.p.map(|p| vec![p])).ok_or_else(|| missing("ps"))?;
    let epsilon = *cfg.epsilon.get_or_insert(DEFAULT_SWEEP_EPSILON);
    let method = sweep_method(cfg.method.get_or_insert_with(|| "ub".into()))?;
    let n_cap = *cfg.n_cap.get_or_insert(DEFAULT_N_CAP);
    let report = scaling_sweep(&matrices, &ps, epsilon, method, n_cap, &cfg.budgets())?;
    for cell in &report.cells {
        if let Some(e) = &cell.error {
            eprintln!("warning: {} at p={}: {e}", cell.matrix_tag, cell.p);
        }
    }
    let mut w = open(out)?;
    csv_preamble(&mut *w, "sweep", &cfg)?;
    report.write_csv(&mut w)?;
    w.flush()?;
    if let Some(path) = summary {
        write_json(Some(path), "sweep", &cfg, &report)?;
    }
    Ok(())
}
