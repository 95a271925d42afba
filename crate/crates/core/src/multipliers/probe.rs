use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::symbol::{apply_symbol, SymbolSpec};
use crate::norms::{inner_product, mass};
use crate::transfer::covering::{cover_ratio, pull_back, push_forward, small_grid, Placement};
use crate::{Error, Field, GridSpec, Representation, Result};

/// Operator-norm estimate produced by power iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorProbe {
    pub operator: String,
    pub parameters: String,
    pub norm: f64,
    pub bound: f64,
    pub iterations: usize,
    pub residual: f64,
}

impl OperatorProbe {
    pub const CSV_HEADER: &'static str = "operator,parameters,norm,bound,iterations,residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.12e},{:.12e},{},{:.6e}",
            self.operator, self.parameters, self.norm, self.bound, self.iterations, self.residual
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PowerIteration {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 500,
            seed: 0x5eed,
        }
    }
}

pub struct NormEstimate {
    pub norm: f64,
    pub iterations: usize,
    pub residual: f64,
}

const RESTART: usize = 96;
const STABLE_STEPS: usize = 3;

/// Largest singular value of `op`, from a Lanczos-accelerated power iteration on `adj . op`.
///
/// Each iteration is one application of `adj . op`. The Krylov basis is fully
/// reorthogonalized and restarted from the current Ritz vector every 96 steps.
/// Convergence: the top Ritz value changes by less than `tolerance` (relative)
/// for three consecutive steps, or the Krylov space becomes invariant.
pub fn estimate_norm(
    grid: &GridSpec,
    op: impl Fn(&Field) -> Result<Field>,
    adj: impl Fn(&Field) -> Result<Field>,
    cfg: &PowerIteration,
) -> Result<NormEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = grid.n();
    let start = Array2::from_shape_fn((n, n), |_| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let mut q = Field::from_values(*grid, Representation::Physical, start)?;
    q = q.scaled(Complex64::new(1.0 / mass(&q).sqrt(), 0.0));

    let mut basis: Vec<Field> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut prev = f64::NAN;
    let mut stable = 0;
    let mut residual = f64::INFINITY;
    for it in 1..=cfg.max_iterations {
        let mut w = adj(&op(&q)?)?.into_physical();
        let a = inner_product(&q, &w)?.re;
        basis.push(q);
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = inner_product(v, &w)?;
                w = w.combine(Complex64::new(1.0, 0.0), v, -c)?;
            }
        }
        let b = mass(&w).sqrt();
        let (theta, s) = top_ritz(&alpha, &beta);
        let last = s[s.len() - 1].abs();
        residual = if theta > 0.0 { b * last / theta } else { 0.0 };
        let invariant = b <= 1e-13 * theta.abs();
        if (theta - prev).abs() < cfg.tolerance * theta.abs() {
            stable += 1;
        } else {
            stable = 0;
        }
        prev = theta;
        if invariant || stable >= STABLE_STEPS {
            return Ok(NormEstimate {
                norm: theta.max(0.0).sqrt(),
                iterations: it,
                residual,
            });
        }
        if basis.len() == RESTART {
            let mut y = Field::zeros(*grid, Representation::Physical);
            for (v, &c) in basis.iter().zip(&s) {
                y = y.combine(Complex64::new(1.0, 0.0), v, Complex64::new(c, 0.0))?;
            }
            q = y.scaled(Complex64::new(1.0 / mass(&y).sqrt(), 0.0));
            basis.clear();
            alpha.clear();
            beta.clear();
        } else {
            beta.push(b);
            q = w.scaled(Complex64::new(1.0 / b, 0.0));
        }
    }
    Err(Error::NonConvergence {
        what: "power iteration",
        iterations: cfg.max_iterations,
        residual,
    })
}

fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let t = nalgebra::DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = nalgebra::SymmetricEigen::new(t);
    let (idx, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    (theta, eig.eigenvectors.column(idx).iter().copied().collect())
}

fn real_weight(f: &Field) -> Array2<f64> {
    f.to_physical().values().mapv(|z| z.re)
}

fn weighted(w: &Array2<f64>, f: &Field) -> Field {
    let mut p = f.to_physical();
    ndarray::Zip::from(p.values_mut()).and(w).for_each(|z, &c| *z *= c);
    p
}

fn support(w: &Array2<f64>) -> Array2<bool> {
    w.mapv(|v| v != 0.0)
}

/// Periodic Euclidean distance between the supports of two sample sets.
pub fn support_distance(grid: &GridSpec, e: &Array2<bool>, f: &Array2<bool>) -> f64 {
    let n = grid.n();
    let edge = |s: &Array2<bool>| -> Vec<(usize, usize)> {
        s.indexed_iter()
            .filter(|&((a, b), &v)| {
                v && [(1, 0), (n - 1, 0), (0, 1), (0, n - 1)]
                    .iter()
                    .any(|&(da, db)| !s[[(a + da) % n, (b + db) % n]])
            })
            .map(|(i, _)| i)
            .collect()
    };
    let pe = edge(e);
    let pf = edge(f);
    let cyc = |d: usize| d.min(n - d) as f64;
    let mut best = f64::INFINITY;
    for &(a, b) in &pe {
        for &(c, d) in &pf {
            let da = cyc((a + n - c) % n);
            let db = cyc((b + n - d) % n);
            best = best.min(da.hypot(db));
        }
    }
    if e.iter().zip(f.iter()).any(|(x, y)| *x && *y) {
        return 0.0;
    }
    best * grid.spacing()
}

/// `|| chi_E P chi_F ||` for indicator-like weights `E`, `F`.
pub fn mismatch_norm(e: &Field, f: &Field, spec: &SymbolSpec, cfg: &PowerIteration) -> Result<OperatorProbe> {
    let grid = *e.grid();
    grid.ensure_same(f.grid())?;
    let symbol = spec.grid_symbol(&grid)?;
    let we = real_weight(e);
    let wf = real_weight(f);
    let (se, sf) = (support(&we), support(&wf));
    let empty = !sf.iter().any(|&v| v) || !se.iter().any(|&v| v);
    let a = if empty {
        f64::INFINITY
    } else {
        support_distance(&grid, &se, &sf)
    };
    if !empty && (a <= grid.spacing() || a < 1.0) {
        return Err(Error::Geometry(format!(
            "sets must be separated by a distance >= 1 and not touch, got {a}"
        )));
    }
    let est = estimate_norm(
        &grid,
        |g| Ok(weighted(&we, &apply_symbol(&weighted(&wf, g), &symbol))),
        |g| Ok(weighted(&wf, &apply_symbol(&weighted(&we, g), &symbol))),
        cfg,
    )?;
    let scale = match spec.family {
        super::symbol::SymbolFamily::Md { d, m } => d as f64 * m,
        super::symbol::SymbolFamily::LpLeq { n } | super::symbol::SymbolFamily::LpBand { n } => n,
        _ => 1.0,
    };
    Ok(OperatorProbe {
        operator: "mismatch".into(),
        parameters: format!("{};A={a}", spec.describe()),
        norm: est.norm,
        bound: 1.0 / (scale * a),
        iterations: est.iterations,
        residual: est.residual,
    })
}

fn md_m(spec: &SymbolSpec) -> f64 {
    match spec.family {
        super::symbol::SymbolFamily::Md { m, .. } => m,
        super::symbol::SymbolFamily::LpLeq { n } | super::symbol::SymbolFamily::LpBand { n } => n,
        _ => 1.0,
    }
}

/// `|| [chi, P] ||` for a real cutoff `chi` with values in `[0, 1]`.
pub fn commutator_norm(chi: &Field, spec: &SymbolSpec, cfg: &PowerIteration) -> Result<OperatorProbe> {
    let grid = *chi.grid();
    let phys = chi.to_physical();
    if phys
        .values()
        .iter()
        .any(|z| z.im.abs() > 1e-12 || z.re < -1e-12 || z.re > 1.0 + 1e-12)
    {
        return Err(Error::InvalidParameter("cutoff must be real with values in [0, 1]".into()));
    }
    let symbol = spec.grid_symbol(&grid)?;
    let w = real_weight(chi);
    let comm = |g: &Field| -> Result<Field> {
        weighted(&w, &apply_symbol(g, &symbol)).sub(&apply_symbol(&weighted(&w, g), &symbol).into_physical())
    };
    let est = estimate_norm(&grid, comm, |g| Ok(comm(g)?.scaled(Complex64::new(-1.0, 0.0))), cfg)?;
    Ok(OperatorProbe {
        operator: "commutator".into(),
        parameters: spec.describe(),
        norm: est.norm,
        bound: 1.0 / md_m(spec),
        iterations: est.iterations,
        residual: est.residual,
    })
}

/// Returns true when the nonzero rows (or columns) fit in a cyclic window of `width` samples.
fn fits_in_window(occupied: &[bool], width: usize) -> bool {
    let n = occupied.len();
    let Some(first) = occupied.iter().position(|&v| v) else {
        return true;
    };
    let mut longest_gap = 0;
    let mut gap = 0;
    for k in 1..=n {
        if occupied[(first + k) % n] {
            longest_gap = longest_gap.max(gap);
            gap = 0;
        } else {
            gap += 1;
        }
    }
    n - longest_gap <= width
}

/// `|| chi (P_plane - P_torus) chi ||` with the torus multiplier realized by
/// folding onto the small torus, multiplying there, and tiling back.
pub fn plane_torus_gap(
    chi: &Field,
    d: u64,
    m: f64,
    small_side: f64,
    cfg: &PowerIteration,
) -> Result<OperatorProbe> {
    let big = *chi.grid();
    cover_ratio(&big, small_side)?;
    let sg = small_grid(&big, small_side)?;
    let w = real_weight(chi);
    let n = big.n();
    let rows: Vec<bool> = (0..n).map(|a| (0..n).any(|b| w[[a, b]] != 0.0)).collect();
    let cols: Vec<bool> = (0..n).map(|b| (0..n).any(|a| w[[a, b]] != 0.0)).collect();
    if !fits_in_window(&rows, sg.n()) || !fits_in_window(&cols, sg.n()) {
        return Err(Error::Geometry(
            "cutoff is not supported in a single fundamental domain".into(),
        ));
    }
    let plane = SymbolSpec::md(d, m)?.grid_symbol(&big)?;
    let torus = SymbolSpec::md(d, m)?.on_torus(small_side).grid_symbol(&sg)?;
    let op = |g: &Field| -> Result<Field> {
        let cg = weighted(&w, g);
        let p = apply_symbol(&cg, &plane).into_physical();
        let folded = apply_symbol(&push_forward(&cg, small_side)?, &torus);
        let t = pull_back(&folded, &big, &Placement::Tile)?;
        Ok(weighted(&w, &p.sub(&t)?))
    };
    let est = estimate_norm(&big, &op, &op, cfg)?;
    Ok(OperatorProbe {
        operator: "plane_torus_gap".into(),
        parameters: format!("D={d};M={m};L_small={small_side};L_big={}", big.side()),
        norm: est.norm,
        bound: 1.0 / m,
        iterations: est.iterations,
        residual: est.residual,
    })
}
