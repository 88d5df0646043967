use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use radiant_core::{
    classify, energy_report, mc_oracle, photon_count_si, reduce, regime_map, spectral_density,
    spectral_density_general, spectrum_sweep, sweep_grid, trajectory, window, DeformationSpectrum,
    EnergyReport, McConfig, MirrorDrive, Mode, PhiInterval, QuadratureConfig, RegimeCell, RegimeId,
    TabulatedDensity, SPEED_OF_LIGHT,
};
use serde::{Deserialize, Serialize};

use crate::config::{at_least, non_negative, positive};
use crate::error::{CliError, Status};
use crate::output::{num, opt, Csv, Format, OutputRecord};

/// Energy mismatch above which `energy` exits with status 4.
pub const CONSERVATION_LIMIT: f64 = 5e-3;
/// Oracle z-score above which `oracle` exits with status 3.
pub const ORACLE_SIGMAS: f64 = 3.0;

pub struct Rendered {
    pub text: String,
    pub status: Status,
}

fn render<I: Serialize, P: Serialize>(
    command: &str,
    inputs: I,
    payload: P,
) -> Result<String, CliError> {
    OutputRecord::new(command, inputs, payload).to_json()
}

/// Drive in natural units. With `si`, `omega0` is rad/s, `k0` rad/m and `d` m.
fn natural_drive(omega0: f64, k0: f64, d: f64, si: bool) -> Result<MirrorDrive<f64>, CliError> {
    positive(omega0, "omega0")?;
    non_negative(k0, "k0")?;
    positive(d, "d")?;
    let (k0, d) = if si {
        (k0 * SPEED_OF_LIGHT, d / SPEED_OF_LIGHT)
    } else {
        (k0, d)
    };
    Ok(MirrorDrive::new(omega0, k0, d)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub edge_substitution: bool,
}

impl Tolerances {
    pub fn config(&self) -> Result<QuadratureConfig<f64>, CliError> {
        positive(self.rel_tol, "rel-tol")?;
        non_negative(self.abs_tol, "abs-tol")?;
        at_least(self.max_subdivisions, 1, "max-subdivisions")?;
        let cfg = QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            edge_substitution: self.edge_substitution,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        let cfg = QuadratureConfig::<f64>::default();
        Self {
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            max_subdivisions: cfg.max_subdivisions,
            edge_substitution: cfg.edge_substitution,
        }
    }
}

// classify

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyInputs {
    pub omega0: f64,
    pub k0: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub si: bool,
}

#[derive(Serialize)]
struct Classification {
    r: f64,
    kappa: f64,
    regime: RegimeId,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_beam: Option<f64>,
}

impl ClassifyInputs {
    pub fn validate(&self) -> Result<(MirrorDrive<f64>, f64), CliError> {
        let drive = natural_drive(self.omega0, self.k0, 1.0, self.si)?;
        Ok((drive, positive(self.omega, "Omega")?))
    }
}

fn classification(drive: &MirrorDrive<f64>, omega: f64) -> Result<Classification, CliError> {
    let (r, kappa) = ((drive.omega0() - omega) / omega, drive.k0() / omega);
    Ok(match reduce(drive, omega)? {
        Some(p) => {
            let w = window(&p);
            Classification {
                r,
                kappa,
                regime: w.regime(),
                phi_c: w.phi_c(),
                phi_max: w.phi_max(),
                theta_beam: w.theta_beam(),
            }
        }
        None => Classification {
            r,
            kappa,
            regime: RegimeId::NoEmission,
            phi_c: None,
            phi_max: None,
            theta_beam: None,
        },
    })
}

pub fn classify_cmd(inputs: ClassifyInputs, format: Format) -> Result<Rendered, CliError> {
    let (drive, omega) = inputs.validate()?;
    let c = classification(&drive, omega)?;
    let text = match format {
        Format::Json => render("classify", &inputs, &c)?,
        Format::Csv => {
            let mut csv = Csv::new("classify");
            csv.comment("omega0", num(inputs.omega0));
            csv.comment("k0", num(inputs.k0));
            csv.comment("Omega", num(inputs.omega));
            csv.comment("si", inputs.si);
            csv.row(&["r", "kappa", "regime", "phi_c", "phi_max", "theta_beam"]);
            csv.row(&[
                num(c.r),
                num(c.kappa),
                c.regime.to_string(),
                opt(c.phi_c),
                opt(c.phi_max),
                opt(c.theta_beam),
            ]);
            csv.finish()
        }
    };
    Ok(Rendered {
        text,
        status: Status::Ok,
    })
}

// window

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowInputs {
    pub omega0: f64,
    pub k0: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub phi_grid: usize,
    pub si: bool,
}

impl WindowInputs {
    pub fn validate(&self) -> Result<(MirrorDrive<f64>, f64), CliError> {
        at_least(self.phi_grid, 2, "phi-grid")?;
        let drive = natural_drive(self.omega0, self.k0, 1.0, self.si)?;
        Ok((drive, positive(self.omega, "Omega")?))
    }
}

#[derive(Serialize)]
struct WindowRow {
    phi: f64,
    theta_lo: f64,
    theta_hi: f64,
}

#[derive(Serialize)]
struct WindowPayload {
    #[serde(flatten)]
    classification: Classification,
    intervals: Vec<PhiInterval<f64>>,
    samples: Vec<WindowRow>,
}

pub fn window_cmd(inputs: WindowInputs, format: Format) -> Result<Rendered, CliError> {
    let (drive, omega) = inputs.validate()?;
    let classification = classification(&drive, omega)?;
    let w = reduce(&drive, omega)?.map(|p| window(&p));
    let n = inputs.phi_grid;
    let mut samples = Vec::new();
    if let Some(w) = &w {
        for i in 0..n {
            let phi = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
            if let Some((theta_lo, theta_hi)) = w.bounds_at(phi) {
                samples.push(WindowRow {
                    phi,
                    theta_lo,
                    theta_hi,
                });
            }
        }
    }
    let text = match format {
        Format::Json => {
            let payload = WindowPayload {
                classification,
                intervals: w.map(|w| w.intervals().to_vec()).unwrap_or_default(),
                samples,
            };
            render("window", &inputs, &payload)?
        }
        Format::Csv => {
            let mut csv = Csv::new("window");
            csv.comment("omega0", num(inputs.omega0));
            csv.comment("k0", num(inputs.k0));
            csv.comment("Omega", num(inputs.omega));
            csv.comment("phi_grid", n);
            csv.comment("si", inputs.si);
            csv.comment("r", num(classification.r));
            csv.comment("kappa", num(classification.kappa));
            csv.comment("regime", classification.regime);
            csv.row(&["phi", "theta_lo", "theta_hi"]);
            for s in &samples {
                csv.row(&[num(s.phi), num(s.theta_lo), num(s.theta_hi)]);
            }
            csv.finish()
        }
    };
    Ok(Rendered {
        text,
        status: Status::Ok,
    })
}

// spectrum

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumInputs {
    pub omega0: f64,
    pub k0: f64,
    pub d: f64,
    pub points: usize,
    pub tolerances: Tolerances,
    pub si: bool,
}

impl SpectrumInputs {
    pub fn validate(&self) -> Result<(MirrorDrive<f64>, QuadratureConfig<f64>), CliError> {
        at_least(self.points, 3, "points")?;
        let drive = natural_drive(self.omega0, self.k0, self.d, self.si)?;
        Ok((drive, self.tolerances.config()?))
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    #[serde(rename = "Omega")]
    omega: f64,
    #[serde(rename = "Omega_over_omega0")]
    omega_over_omega0: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "P_dimless")]
    p_dimless: f64,
    regime: RegimeId,
    err_estimate: f64,
}

#[derive(Serialize)]
struct SpectrumPayload {
    samples: Vec<SpectrumRow>,
    peak_index: Option<usize>,
    symmetry_defect: f64,
    within_tolerance: bool,
}

pub fn spectrum_cmd(inputs: SpectrumInputs, format: Format) -> Result<Rendered, CliError> {
    let (drive, cfg) = inputs.validate()?;
    let curve = spectrum_sweep(&drive, inputs.points, &cfg)?;
    let within = curve.within(&cfg);
    let scale = drive.d() * drive.d() * drive.omega0().powi(4);
    let rows: Vec<SpectrumRow> = curve
        .samples
        .iter()
        .map(|s| SpectrumRow {
            omega: s.omega,
            omega_over_omega0: s.omega / drive.omega0(),
            p: s.value,
            p_dimless: s.value / scale,
            regime: s.regime,
            err_estimate: s.error,
        })
        .collect();
    let text = match format {
        Format::Json => {
            let payload = SpectrumPayload {
                samples: rows,
                peak_index: curve.peak_index(),
                symmetry_defect: curve.symmetry_defect(),
                within_tolerance: within,
            };
            render("spectrum", &inputs, &payload)?
        }
        Format::Csv => {
            let mut csv = Csv::new("spectrum");
            csv.comment("omega0", num(inputs.omega0));
            csv.comment("k0", num(inputs.k0));
            csv.comment("d", num(inputs.d));
            csv.comment("points", inputs.points);
            csv.comment("rel_tol", num(inputs.tolerances.rel_tol));
            csv.comment("abs_tol", num(inputs.tolerances.abs_tol));
            csv.comment("max_subdivisions", inputs.tolerances.max_subdivisions);
            csv.comment("si", inputs.si);
            csv.row(&[
                "Omega",
                "Omega_over_omega0",
                "P",
                "P_dimless",
                "regime",
                "err_estimate",
            ]);
            for r in &rows {
                csv.row(&[
                    num(r.omega),
                    num(r.omega_over_omega0),
                    num(r.p),
                    num(r.p_dimless),
                    r.regime.to_string(),
                    num(r.err_estimate),
                ]);
            }
            csv.finish()
        }
    };
    let status = if within {
        Status::Ok
    } else {
        Status::Tolerance
    };
    Ok(Rendered { text, status })
}

// energy

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyInputs {
    pub omega0: f64,
    pub k0: f64,
    pub d: f64,
    pub tolerances: Tolerances,
    pub si: bool,
}

impl EnergyInputs {
    pub fn validate(&self) -> Result<(MirrorDrive<f64>, QuadratureConfig<f64>), CliError> {
        let drive = natural_drive(self.omega0, self.k0, self.d, self.si)?;
        Ok((drive, self.tolerances.config()?))
    }
}

#[derive(Serialize)]
struct EnergyPayload {
    #[serde(flatten)]
    report: EnergyReport<f64>,
    photon_mismatch: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    photons_per_m2_s: Option<f64>,
}

pub fn energy_cmd(inputs: EnergyInputs, format: Format) -> Result<Rendered, CliError> {
    let (drive, cfg) = inputs.validate()?;
    let report = energy_report(&drive, &cfg)?;
    let photons = inputs
        .si
        .then(|| photon_count_si(inputs.d, inputs.omega0, inputs.k0, 1.0, 1.0));
    let payload = EnergyPayload {
        report,
        photon_mismatch: report.photon_mismatch(),
        photons_per_m2_s: photons,
    };
    let text = match format {
        Format::Json => render("energy", &inputs, &payload)?,
        Format::Csv => {
            let mut csv = Csv::new("energy");
            csv.comment("omega0", num(inputs.omega0));
            csv.comment("k0", num(inputs.k0));
            csv.comment("d", num(inputs.d));
            csv.comment("si", inputs.si);
            csv.row(&["quantity", "value"]);
            let r = &payload.report;
            let mut fields = vec![
                ("r_numeric", num(r.r_numeric)),
                ("r_numeric_error", num(r.r_numeric_error)),
                ("r_closed", num(r.r_closed)),
                ("n_rate", num(r.n_rate)),
                ("n_rate_numeric", num(r.n_rate_numeric)),
                ("n_rate_numeric_error", num(r.n_rate_numeric_error)),
                ("mean_frequency", num(r.mean_frequency)),
                ("relative_mismatch", num(r.relative_mismatch)),
                ("photon_mismatch", num(payload.photon_mismatch)),
                ("converged", r.converged.to_string()),
            ];
            if let Some(n) = photons {
                fields.push(("photons_per_m2_s", num(n)));
            }
            for (k, v) in fields {
                csv.row(&[k.to_string(), v]);
            }
            csv.finish()
        }
    };
    Ok(Rendered {
        text,
        status: conservation_status(report.relative_mismatch),
    })
}

pub fn conservation_status(mismatch: f64) -> Status {
    // NaN fails
    if mismatch <= CONSERVATION_LIMIT {
        Status::Ok
    } else {
        Status::Conservation
    }
}

// regime-map

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeMapInputs {
    pub r_max: f64,
    pub kappa_max: f64,
    pub grid: usize,
    pub trajectory_points: usize,
}

impl RegimeMapInputs {
    pub fn validate(&self) -> Result<(), CliError> {
        positive(self.r_max, "r-max")?;
        positive(self.kappa_max, "kappa-max")?;
        at_least(self.grid, 2, "grid")?;
        at_least(self.trajectory_points, 2, "trajectory-points")?;
        Ok(())
    }
}

/// `omega0 / k0` of the three trajectory classes.
const CLASSES: [(&str, f64, f64); 3] = [("5/3", 5.0, 3.0), ("5/2", 5.0, 2.0), ("5", 5.0, 1.0)];

#[derive(Serialize)]
struct TrajectoryOverlay {
    ratio: &'static str,
    omega0: f64,
    k0: f64,
    regimes: Vec<RegimeId>,
    crossings: Vec<f64>,
    polyline: Vec<RegimeCell<f64>>,
}

#[derive(Serialize)]
struct RegimeMapPayload {
    cells: Vec<RegimeCell<f64>>,
    trajectories: Vec<TrajectoryOverlay>,
}

pub fn regime_map_cmd(inputs: RegimeMapInputs, format: Format) -> Result<Rendered, CliError> {
    inputs.validate()?;
    let cells = regime_map(inputs.r_max, inputs.kappa_max, inputs.grid)?;
    let mut trajectories = Vec::new();
    for (ratio, num_, den) in CLASSES {
        let drive = MirrorDrive::new(1.0, den / num_, 1.0)?;
        let t = trajectory(&drive);
        trajectories.push(TrajectoryOverlay {
            ratio,
            omega0: drive.omega0(),
            k0: drive.k0(),
            regimes: t.regimes(),
            crossings: t.crossings(),
            polyline: t.polyline(inputs.kappa_max, inputs.r_max, inputs.trajectory_points),
        });
    }
    let text = match format {
        Format::Json => render(
            "regime-map",
            &inputs,
            &RegimeMapPayload {
                cells,
                trajectories,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new("regime-map");
            csv.comment("r_max", num(inputs.r_max));
            csv.comment("kappa_max", num(inputs.kappa_max));
            csv.comment("grid", inputs.grid);
            csv.comment("trajectory_points", inputs.trajectory_points);
            for t in &trajectories {
                let regimes: Vec<String> = t.regimes.iter().map(ToString::to_string).collect();
                let crossings: Vec<String> = t.crossings.iter().map(|&c| num(c)).collect();
                csv.comment(
                    &format!("trajectory {}", t.ratio),
                    format!("{} crossings {}", regimes.join(" "), crossings.join(" ")),
                );
            }
            csv.row(&["series", "kappa", "r", "regime"]);
            for c in &cells {
                csv.row(&[
                    "map".to_string(),
                    num(c.kappa),
                    num(c.r),
                    c.regime.to_string(),
                ]);
            }
            for t in &trajectories {
                for c in &t.polyline {
                    csv.row(&[
                        t.ratio.to_string(),
                        num(c.kappa),
                        num(c.r),
                        c.regime.to_string(),
                    ]);
                }
            }
            csv.finish()
        }
    };
    Ok(Rendered {
        text,
        status: Status::Ok,
    })
}

// general-spectrum

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulatedFile {
    q1_axis: Vec<f64>,
    q2_axis: Vec<f64>,
    omega_axis: Vec<f64>,
    density: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeEntry {
    amplitude: f64,
    wavevector: [f64; 2],
    frequency: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModesFile {
    modes: Vec<ModeEntry>,
}

/// Reads a deformation spectrum: either a tabulated density
/// `{q1_axis, q2_axis, omega_axis, density}` with `density[i][j][k]` at
/// `(q1_axis[i], q2_axis[j], omega_axis[k])`, or `{modes: [...]}`.
pub fn load_spectrum(path: &Path) -> Result<DeformationSpectrum<f64>, CliError> {
    let bad = |e: String| CliError::Validation(format!("--input {}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if value.get("modes").is_some() {
        let file: ModesFile = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
        let modes = file
            .modes
            .into_iter()
            .map(|m| Mode {
                amplitude: m.amplitude,
                wavevector: m.wavevector,
                frequency: m.frequency,
            })
            .collect();
        DeformationSpectrum::modes(modes).map_err(|e| bad(e.to_string()))
    } else {
        let file: TabulatedFile = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
        let density = TabulatedDensity::from_nested(
            file.q1_axis,
            file.q2_axis,
            file.omega_axis,
            file.density,
        )
        .map_err(|e| bad(e.to_string()))?;
        Ok(DeformationSpectrum::tabulated(density))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralSpectrumInputs {
    pub input: String,
    pub points: usize,
    pub tolerances: Tolerances,
}

impl GeneralSpectrumInputs {
    pub fn validate(&self) -> Result<(DeformationSpectrum<f64>, QuadratureConfig<f64>), CliError> {
        at_least(self.points, 3, "points")?;
        let cfg = self.tolerances.config()?;
        Ok((load_spectrum(Path::new(&self.input))?, cfg))
    }
}

#[derive(Serialize)]
struct GeneralRow {
    #[serde(rename = "Omega")]
    omega: f64,
    #[serde(rename = "P")]
    p: f64,
    err_estimate: f64,
}

#[derive(Serialize)]
struct GeneralPayload {
    max_frequency: f64,
    samples: Vec<GeneralRow>,
    within_tolerance: bool,
}

pub fn general_spectrum_cmd(
    inputs: GeneralSpectrumInputs,
    format: Format,
) -> Result<Rendered, CliError> {
    let (spec, cfg) = inputs.validate()?;
    let top = spec.max_frequency();
    let mut rows = Vec::with_capacity(inputs.points);
    let mut within = true;
    for omega in sweep_grid(top, inputs.points) {
        let s = spectral_density_general(&spec, omega, &cfg)?;
        within &= s.within(&cfg);
        rows.push(GeneralRow {
            omega,
            p: s.value,
            err_estimate: s.error,
        });
    }
    let text = match format {
        Format::Json => {
            let payload = GeneralPayload {
                max_frequency: top,
                samples: rows,
                within_tolerance: within,
            };
            render("general-spectrum", &inputs, &payload)?
        }
        Format::Csv => {
            let mut csv = Csv::new("general-spectrum");
            csv.comment("input", &inputs.input);
            csv.comment("points", inputs.points);
            csv.comment("rel_tol", num(inputs.tolerances.rel_tol));
            csv.comment("abs_tol", num(inputs.tolerances.abs_tol));
            csv.comment("max_subdivisions", inputs.tolerances.max_subdivisions);
            csv.comment("max_frequency", num(top));
            csv.row(&["Omega", "P", "err_estimate"]);
            for r in &rows {
                csv.row(&[num(r.omega), num(r.p), num(r.err_estimate)]);
            }
            csv.finish()
        }
    };
    let status = if within {
        Status::Ok
    } else {
        Status::Tolerance
    };
    Ok(Rendered { text, status })
}

// oracle

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInputs {
    pub omega0: f64,
    pub k0: f64,
    pub d: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub samples: u64,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub si: bool,
}

impl OracleInputs {
    pub fn validate(
        &self,
    ) -> Result<(MirrorDrive<f64>, f64, McConfig, QuadratureConfig<f64>), CliError> {
        let drive = natural_drive(self.omega0, self.k0, self.d, self.si)?;
        let omega = positive(self.omega, "Omega")?;
        let mc = McConfig::new(self.samples, self.seed)
            .map_err(|e| CliError::Validation(format!("--samples: {e}")))?;
        Ok((drive, omega, mc, self.tolerances.config()?))
    }
}

#[derive(Serialize)]
struct OraclePayload {
    regime: RegimeId,
    estimate: f64,
    standard_error: f64,
    quadrature: f64,
    quadrature_error: f64,
    z_score: f64,
}

pub fn oracle_cmd(inputs: OracleInputs, format: Format) -> Result<Rendered, CliError> {
    let (drive, omega, mc, cfg) = inputs.validate()?;
    let regime = reduce(&drive, omega)?.map_or(RegimeId::NoEmission, |p| classify(&p));
    let est = mc_oracle(&drive, omega, &mc)?;
    let q = spectral_density(&drive, omega, &cfg)?;
    let payload = OraclePayload {
        regime,
        estimate: est.estimate,
        standard_error: est.standard_error,
        quadrature: q.value,
        quadrature_error: q.error,
        z_score: est.z_score(q.value),
    };
    let text = match format {
        Format::Json => render("oracle", &inputs, &payload)?,
        Format::Csv => {
            let mut csv = Csv::new("oracle");
            csv.comment("omega0", num(inputs.omega0));
            csv.comment("k0", num(inputs.k0));
            csv.comment("d", num(inputs.d));
            csv.comment("Omega", num(inputs.omega));
            csv.comment("samples", inputs.samples);
            csv.comment("seed", inputs.seed);
            csv.comment("si", inputs.si);
            csv.row(&[
                "regime",
                "estimate",
                "standard_error",
                "quadrature",
                "quadrature_error",
                "z_score",
            ]);
            csv.row(&[
                payload.regime.to_string(),
                num(payload.estimate),
                num(payload.standard_error),
                num(payload.quadrature),
                num(payload.quadrature_error),
                num(payload.z_score),
            ]);
            csv.finish()
        }
    };
    // a zero-variance estimate has an infinite z-score unless both paths agree exactly
    let agree = payload.z_score <= ORACLE_SIGMAS || payload.estimate == payload.quadrature;
    Ok(Rendered {
        text,
        status: if agree { Status::Ok } else { Status::Tolerance },
    })
}

/// Re-parses an emitted JSON record and re-validates its inputs.
pub fn validate_record(path: &Path) -> Result<String, CliError> {
    use crate::output::SCHEMA_VERSION;
    let bad = |e: String| CliError::Validation(format!("{}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let record: OutputRecord<serde_json::Value, serde_json::Value> =
        serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if record.schema_version != SCHEMA_VERSION {
        return Err(bad(format!(
            "schema_version {} is not {SCHEMA_VERSION}",
            record.schema_version
        )));
    }
    fn parse<T: for<'de> Deserialize<'de>>(v: serde_json::Value) -> Result<T, String> {
        serde_json::from_value(v).map_err(|e| e.to_string())
    }
    let inputs = record.inputs;
    let checked = match record.command.as_str() {
        "classify" => parse::<ClassifyInputs>(inputs)
            .map_err(bad)?
            .validate()
            .map(drop),
        "window" => parse::<WindowInputs>(inputs)
            .map_err(bad)?
            .validate()
            .map(drop),
        "spectrum" => parse::<SpectrumInputs>(inputs)
            .map_err(bad)?
            .validate()
            .map(drop),
        "energy" => parse::<EnergyInputs>(inputs)
            .map_err(bad)?
            .validate()
            .map(drop),
        "regime-map" => parse::<RegimeMapInputs>(inputs).map_err(bad)?.validate(),
        "general-spectrum" => parse::<GeneralSpectrumInputs>(inputs)
            .map_err(bad)?
            .validate()
            .map(drop),
        "oracle" => parse::<OracleInputs>(inputs)
            .map_err(bad)?
            .validate()
            .map(drop),
        other => return Err(bad(format!("unknown command {other:?}"))),
    };
    checked?;
    Ok(format!(
        "ok {} schema={}\n",
        record.command, record.schema_version
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conservation_threshold() {
        assert_eq!(conservation_status(0.0), Status::Ok);
        assert_eq!(conservation_status(CONSERVATION_LIMIT), Status::Ok);
        assert_eq!(conservation_status(5.0001e-3), Status::Conservation);
        assert_eq!(conservation_status(f64::NAN), Status::Conservation);
        assert_eq!(Status::Conservation.code(), 4);
        assert_eq!(Status::Tolerance.code(), 3);
    }

    #[test]
    fn si_drive_is_nondimensionalised() {
        let d = natural_drive(1e9, 0.6e9 / SPEED_OF_LIGHT, 1e-9, true).unwrap();
        assert!((d.k0() - 0.6e9).abs() < 1e-3);
        assert!((d.d() - 1e-9 / SPEED_OF_LIGHT).abs() < 1e-30);
    }
}
