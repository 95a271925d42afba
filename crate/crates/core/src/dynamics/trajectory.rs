use std::path::Path;

use num_complex::Complex64;

use super::equation::EquationSpec;
use super::integrator::{IntegratorSpec, Scheme, Stepper};
use crate::multipliers::{Domain, SymbolFamily, SymbolSpec};
use crate::norms::{lebesgue_norm, mass};
use crate::snapshot::{load_field, read_manifest, save_field, write_manifest};
use crate::{DiagnosticSeries, Error, Field, Representation, Result};

/// Physical-space snapshots at uniformly spaced times, with conserved series.
#[derive(Clone, Debug)]
pub struct Trajectory {
    snapshots: Vec<Field>,
    times: Vec<f64>,
    pub equation: EquationSpec,
    pub integrator: IntegratorSpec,
    pub stride: usize,
    pub mass: DiagnosticSeries,
    pub hamiltonian: DiagnosticSeries,
}

impl Trajectory {
    /// Assembles a trajectory from given snapshots; series are recomputed.
    pub fn from_snapshots(
        snapshots: Vec<Field>,
        times: Vec<f64>,
        equation: EquationSpec,
        integrator: IntegratorSpec,
        stride: usize,
    ) -> Result<Self> {
        if snapshots.is_empty() || snapshots.len() != times.len() {
            return Err(Error::InvalidParameter("need one time per snapshot and at least one snapshot".into()));
        }
        let g = *snapshots[0].grid();
        for s in &snapshots {
            g.ensure_same(s.grid())?;
        }
        let snapshots: Vec<Field> = snapshots.into_iter().map(Field::into_physical).collect();
        let m: Vec<f64> = snapshots.iter().map(mass).collect();
        let h = snapshots
            .iter()
            .map(|s| equation.hamiltonian(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mass: DiagnosticSeries::from_parts("mass", times.clone(), m)?,
            hamiltonian: DiagnosticSeries::from_parts("hamiltonian", times.clone(), h)?,
            snapshots,
            times,
            equation,
            integrator,
            stride,
        })
    }

    pub fn snapshots(&self) -> &[Field] {
        &self.snapshots
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn first(&self) -> &Field {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Field {
        self.snapshots.last().expect("trajectories are nonempty")
    }

    /// Linear interpolation in time between the bracketing snapshots.
    pub fn sample_at(&self, t: f64) -> Result<Field> {
        let t0 = self.times[0];
        let t1 = *self.times.last().unwrap();
        let slack = 1e-12 * t1.abs().max(t0.abs()).max(1.0);
        if t < t0 - slack || t > t1 + slack {
            return Err(Error::TimeOutOfRange(t));
        }
        if self.len() == 1 {
            return Ok(self.snapshots[0].clone());
        }
        let k = self
            .times
            .windows(2)
            .position(|w| t <= w[1] + slack)
            .unwrap_or(self.len() - 2);
        let (a, b) = (self.times[k], self.times[k + 1]);
        let w = ((t - a) / (b - a)).clamp(0.0, 1.0);
        if w <= slack {
            return Ok(self.snapshots[k].clone());
        }
        if 1.0 - w <= slack {
            return Ok(self.snapshots[k + 1].clone());
        }
        self.snapshots[k].combine(
            Complex64::new(1.0 - w, 0.0),
            &self.snapshots[k + 1],
            Complex64::new(w, 0.0),
        )
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let g = self.snapshots[0].grid();
        let mut pairs = vec![
            ("side".to_string(), format!("{:.17e}", g.side())),
            ("n".to_string(), g.n().to_string()),
            ("alpha".to_string(), format!("{:.17e}", self.equation.alpha)),
            ("scheme".to_string(), self.integrator.scheme.name().to_string()),
            ("dt".to_string(), format!("{:.17e}", self.integrator.dt)),
            ("tolerance".to_string(), format!("{:e}", self.integrator.tolerance)),
            ("max_iterations".to_string(), self.integrator.max_iterations.to_string()),
            ("stride".to_string(), self.stride.to_string()),
            ("snapshots".to_string(), self.len().to_string()),
            ("t_start".to_string(), format!("{:.17e}", self.times[0])),
        ];
        if let Some(q) = self.equation.outer_cut {
            pairs.push(("outer_cut".into(), format!("{q:.17e}")));
        }
        if let Some(m) = &self.equation.multiplier {
            pairs.extend(symbol_pairs(m));
        }
        write_manifest(dir.join("manifest.txt"), &pairs)?;
        for (k, s) in self.snapshots.iter().enumerate() {
            save_field(dir.join(format!("snapshot_{k:05}.nlsf")), s)?;
        }
        let mut csv = Vec::new();
        DiagnosticSeries::write_csv(&mut csv, &[&self.mass, &self.hamiltonian])?;
        std::fs::write(dir.join("conserved.csv"), csv)?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let pairs = read_manifest(dir.join("manifest.txt"))?;
        let get = |k: &str| -> Result<&str> {
            pairs
                .iter()
                .find(|(a, _)| a == k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Format(format!("manifest lacks {k}")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?.parse().map_err(|e| Error::Format(format!("{k}: {e}")))
        };
        let count = num("snapshots")? as usize;
        let stride = num("stride")? as usize;
        let mut integrator = IntegratorSpec::new(Scheme::parse(get("scheme")?)?, num("dt")?);
        integrator.tolerance = num("tolerance")?;
        integrator.max_iterations = num("max_iterations")? as usize;
        let equation = EquationSpec {
            alpha: num("alpha")?,
            multiplier: parse_symbol(&pairs)?,
            outer_cut: get("outer_cut").ok().map(str::parse).transpose().map_err(|e| Error::Format(format!("{e}")))?,
        };
        let t0 = num("t_start")?;
        let snapshots = (0..count)
            .map(|k| load_field(dir.join(format!("snapshot_{k:05}.nlsf"))))
            .collect::<Result<Vec<_>>>()?;
        let times = (0..count)
            .map(|k| t0 + (k * stride) as f64 * integrator.dt)
            .collect();
        Self::from_snapshots(snapshots, times, equation, integrator, stride)
    }
}

fn symbol_pairs(m: &SymbolSpec) -> Vec<(String, String)> {
    let mut v = Vec::new();
    let (fam, a, b) = match m.family {
        SymbolFamily::Identity => ("identity", 0.0, 0.0),
        SymbolFamily::LpLeq { n } => ("lp_leq", n, 0.0),
        SymbolFamily::LpBand { n } => ("lp_band", n, 0.0),
        SymbolFamily::Md { d, m } => ("md", d as f64, m),
        SymbolFamily::Sharp { n } => ("sharp", n, 0.0),
    };
    v.push(("multiplier".to_string(), fam.to_string()));
    v.push(("multiplier_p1".to_string(), format!("{a:.17e}")));
    v.push(("multiplier_p2".to_string(), format!("{b:.17e}")));
    if let Domain::Torus(l) = m.domain {
        v.push(("multiplier_torus".to_string(), format!("{l:.17e}")));
    }
    v
}

fn parse_symbol(pairs: &[(String, String)]) -> Result<Option<SymbolSpec>> {
    let get = |k: &str| pairs.iter().find(|(a, _)| a == k).map(|(_, v)| v.as_str());
    let Some(fam) = get("multiplier") else {
        return Ok(None);
    };
    let num = |k: &str| -> Result<f64> {
        get(k)
            .ok_or_else(|| Error::Format(format!("manifest lacks {k}")))?
            .parse()
            .map_err(|e| Error::Format(format!("{k}: {e}")))
    };
    let spec = match fam {
        "identity" => SymbolSpec::identity(),
        "lp_leq" => SymbolSpec::lp_leq(num("multiplier_p1")?)?,
        "lp_band" => SymbolSpec::lp_band(num("multiplier_p1")?)?,
        "md" => SymbolSpec::md(num("multiplier_p1")? as u64, num("multiplier_p2")?)?,
        "sharp" => SymbolSpec::sharp(num("multiplier_p1")?)?,
        other => return Err(Error::Format(format!("unknown multiplier family {other}"))),
    };
    Ok(Some(match get("multiplier_torus") {
        Some(l) => spec.on_torus(l.parse().map_err(|e| Error::Format(format!("{e}")))?),
        None => spec,
    }))
}

/// Evolves `f0` over `[0, T]`, recording every `stride`-th step.
///
/// The step count is rounded up to a multiple of `stride` and `dt` shrunk so
/// that the last snapshot lands exactly on `T`.
pub fn evolve(
    f0: &Field,
    eq: &EquationSpec,
    integ: &IntegratorSpec,
    t_final: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("final time {t_final} must be >= 0")));
    }
    if stride == 0 {
        return Err(Error::InvalidParameter("snapshot stride must be >= 1".into()));
    }
    if !f0.is_finite() {
        return Err(Error::NonFinite { step: 0, time: 0.0 });
    }
    let grid = *f0.grid();
    eq.validate(&grid)?;
    if !(integ.dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt = {} must be positive", integ.dt)));
    }
    let chunks = if t_final == 0.0 {
        0
    } else {
        ((t_final / (integ.dt * stride as f64)) - 1e-9).ceil().max(1.0) as usize
    };
    let steps = chunks * stride;
    let mut spec = *integ;
    if steps > 0 {
        spec.dt = t_final / steps as f64;
    }
    let mut u = f0.to_spectral().into_values();
    let mut snaps = vec![f0.to_physical()];
    let mut times = vec![0.0];
    if steps > 0 {
        let mut stepper = Stepper::new(eq, &spec, &grid)?;
        for k in 1..=steps {
            u = stepper.advance(&u)?;
            if k % stride == 0 || k == steps {
                let f = Field::from_values(grid, Representation::Spectral, u.clone())?.into_physical();
                let t = k as f64 * spec.dt;
                if !f.is_finite() {
                    return Err(Error::NonFinite { step: k, time: t });
                }
                snaps.push(f);
                times.push(t);
            } else if !u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite {
                    step: k,
                    time: k as f64 * spec.dt,
                });
            }
        }
    }
    Trajectory::from_snapshots(snaps, times, *eq, spec, stride)
}

/// Relative drift series of mass and of the equation's Hamiltonian.
pub fn conserved_report(traj: &Trajectory) -> (DiagnosticSeries, DiagnosticSeries) {
    (traj.mass.relative_drift(), traj.hamiltonian.relative_drift())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrichartzNorms {
    pub sup_l2: f64,
    pub l3_l6: f64,
    pub l4: f64,
    /// `sup_t ||u||_2 + ||u||_{L^3_t L^6_x}`.
    pub s: f64,
}

pub(crate) fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

pub fn strichartz_norms(traj: &Trajectory) -> Result<StrichartzNorms> {
    if traj.len() < 2 {
        return Err(Error::InvalidParameter("Strichartz norms need at least two snapshots".into()));
    }
    let mut l2 = Vec::new();
    let mut l6 = Vec::new();
    let mut l4 = Vec::new();
    for s in traj.snapshots() {
        l2.push(mass(s).sqrt());
        l6.push(lebesgue_norm(s, 6.0)?.powi(3));
        l4.push(lebesgue_norm(s, 4.0)?.powi(4));
    }
    let sup_l2 = l2.iter().cloned().fold(0.0, f64::max);
    let l3_l6 = trapezoid(traj.times(), &l6).cbrt();
    let l4 = trapezoid(traj.times(), &l4).powf(0.25);
    Ok(StrichartzNorms {
        sup_l2,
        l3_l6,
        l4,
        s: sup_l2 + l3_l6,
    })
}
