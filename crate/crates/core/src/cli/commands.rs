use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use log::{debug, info};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cone::{ConeConstruction, ConstructionKind, LorenzCone};
use crate::invariance::{
    certificate_scan, certify_cone, linear_grid, nagumo_falsify, simulate, SimulationOptions,
    TargetSet, NAGUMO_TOL,
};
use crate::linalg::lorentz_signature;
use crate::mesh::construction_mesh;
use crate::spectral::{inertia, SpectralReport};

use super::config::{rows, ConeSpec, ProblemConfig, ResolvedCone};
use super::report::{
    ConstructionSection, FalsifierSection, MeshSection, PlaneSection, Report,
    StandardizationSection,
};
use super::{CliError, Command};

/// Outcome of a command: the report and whether the analysis came out
/// negative (infeasible, counterexample, exit).
pub struct Outcome {
    pub report: Report,
    pub negative: bool,
}

struct Timer {
    enabled: bool,
    phases: BTreeMap<String, f64>,
}

impl Timer {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.phases
                .insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

fn construction_section(
    config: &ProblemConfig,
    resolved: &ResolvedCone,
) -> Result<ConstructionSection, CliError> {
    let cone = &resolved.cone;
    let vec = |v: &DVector<f64>| v.as_slice().to_vec();
    let mut section = ConstructionSection {
        kind: match config.cone {
            ConeSpec::Standard => "standard".into(),
            ConeSpec::Matrix { .. } => "matrix".into(),
            _ => String::new(),
        },
        axis_index: None,
        q: rows(cone.matrix()),
        inertia: inertia(cone.matrix())?,
        vertex: vec(&cone.vertex()),
        axis: cone.axis_hint().map(vec),
        plane: None,
        base_anchor: None,
        beta: None,
        residuals: None,
    };
    if let Some(cc) = &resolved.construction {
        section.kind = match cc.kind() {
            ConstructionKind::General => "general",
            ConstructionKind::Axis { .. } => "axis",
            ConstructionKind::Ones => "ones",
            ConstructionKind::TangentSphere => "tangent_sphere",
        }
        .into();
        if let ConstructionKind::Axis { index } = cc.kind() {
            section.axis_index = Some(index + 1);
        }
        section.plane = Some(PlaneSection {
            normal: vec(cc.plane().normal()),
            offset: cc.plane().offset(),
        });
        section.base_anchor = Some(vec(cc.base_anchor()));
        section.beta = Some(cc.beta());
        section.residuals = Some(cc.residuals());
    }
    Ok(section)
}

fn spectrum(resolved: &ResolvedCone) -> Result<SpectralReport, CliError> {
    Ok(match &resolved.construction {
        Some(cc) => cc.spectral_report()?,
        None => SpectralReport::analyze(resolved.cone.matrix())?,
    })
}

/// Members of the cone drawn by mapping points of the standard cone back
/// through the standardizing transform.
fn random_members(
    cone: &LorenzCone,
    count: usize,
    seed: u64,
) -> Result<Vec<DVector<f64>>, CliError> {
    let t = cone.standardize()?;
    let n = cone.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w = DVector::from_fn(n - 1, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = w.norm();
        if norm < 1e-12 {
            continue;
        }
        let radius: f64 = rng.random_range(0.0..0.95);
        let height: f64 = rng.random_range(0.2..2.0);
        let mut y = DVector::zeros(n);
        y.rows_mut(0, n - 1)
            .copy_from(&(w * (radius * height / norm)));
        y[n - 1] = height;
        let x = t.invert(&y);
        if cone.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

fn require_construction<'a>(
    resolved: &'a ResolvedCone,
    what: &str,
) -> Result<&'a ConeConstruction, CliError> {
    resolved.construction.as_ref().ok_or_else(|| {
        CliError::Usage(format!(
            "{what} needs a constructed cone (axis, ones, custom or sphere_tangent)"
        ))
    })
}

pub fn execute(
    command: Command,
    config: ProblemConfig,
    scan: bool,
    out: Option<&Path>,
    timings: bool,
) -> Result<Outcome, CliError> {
    let mut timer = Timer {
        enabled: timings,
        phases: BTreeMap::new(),
    };
    let resolved = timer.time("construct", || config.resolve_cone())?;
    info!("cone of dimension {} resolved", resolved.cone.dim());
    let mut report = Report::new(command.name(), config.clone());
    report.construction = Some(construction_section(&config, &resolved)?);
    let opts = &config.options;
    let mut negative = false;
    match command {
        Command::Construct(_) => {}
        Command::Spectrum(_) => {
            report.spectrum = Some(timer.time("spectrum", || spectrum(&resolved))?);
        }
        Command::Certify(_) => {
            let sys = config.system()?;
            let q = resolved.cone.matrix();
            let cert = timer.time("certify", || certify_cone(&sys, q, opts.tol))?;
            debug!(
                "a* = {}, f(a*) = {}",
                cert.a_star, cert.lambda_max_at_a_star
            );
            negative = !cert.feasible;
            report.certificate = Some(cert);
            if scan {
                let grid = linear_grid(opts.scan.min, opts.scan.max, opts.scan.count);
                report.scan = Some(timer.time("scan", || certificate_scan(&sys, q, &grid))?);
            }
        }
        Command::Falsify(_) => {
            let sys = config.system()?;
            let tol = opts.tol.unwrap_or(NAGUMO_TOL);
            let counterexample = timer.time("falsify", || {
                nagumo_falsify(
                    &sys,
                    resolved.cone.matrix(),
                    resolved.cone.axis_hint(),
                    opts.samples,
                    opts.seed,
                    tol,
                )
            })?;
            negative = counterexample.is_some();
            report.falsifier = Some(FalsifierSection {
                samples: opts.samples,
                seed: opts.seed,
                tol,
                counterexample,
            });
        }
        Command::Simulate(_) => {
            let sys = config.system()?;
            let points = match &config.initial_points {
                Some(p) => p.iter().map(|x| DVector::from_column_slice(x)).collect(),
                None => random_members(&resolved.cone, opts.trajectories, opts.seed)?,
            };
            let sim = SimulationOptions {
                step: opts.step,
                horizon: opts.horizon,
                integrator: opts.integrator,
                exit_tol: opts.exit_tol,
            };
            let target = TargetSet::Cone(resolved.cone.clone());
            let records = timer.time("simulate", || {
                points
                    .iter()
                    .map(|x0| simulate(&sys, &target, x0, &sim))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            negative = records.iter().any(|r| r.exited);
            report.trajectories = Some(records);
        }
        Command::Standardize(_) => {
            let t = timer.time("standardize", || resolved.cone.standardize())?;
            let n = resolved.cone.dim();
            report.standardization = Some(StandardizationSection {
                matrix: rows(t.matrix()),
                shift: t.shift().as_slice().to_vec(),
                congruence_residual: t
                    .congruence_residual(resolved.cone.matrix(), &lorentz_signature(n)),
                vertex_image: t.apply(&resolved.cone.vertex()).as_slice().to_vec(),
            });
        }
        Command::Mesh(_) => {
            let cc = require_construction(&resolved, "mesh export")?;
            let mesh = timer.time("mesh", || construction_mesh(cc, opts.resolution))?;
            let stem = out.map_or_else(|| "cone_mesh".to_string(), |p| p.display().to_string());
            let obj = format!("{stem}.obj");
            let csv = format!("{stem}.csv");
            std::fs::write(&obj, mesh.to_obj()).map_err(|e| CliError::Io(format!("{obj}: {e}")))?;
            std::fs::write(&csv, mesh.to_csv()).map_err(|e| CliError::Io(format!("{csv}: {e}")))?;
            report.mesh = Some(MeshSection {
                resolution: opts.resolution,
                obj,
                csv,
                cone_vertices: mesh.surfaces[0].vertices.len(),
                ellipsoid_vertices: mesh.surfaces[1].vertices.len(),
                faces: mesh.surfaces.iter().map(|s| s.faces.len()).sum(),
            });
        }
    }
    if timings {
        report.timings = Some(timer.phases);
    }
    Ok(Outcome { report, negative })
}
