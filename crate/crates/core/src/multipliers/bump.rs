pub const INNER_RADIUS: f64 = 1.41;
pub const OUTER_RADIUS: f64 = 1.42;
const WIDTH: f64 = OUTER_RADIUS - INNER_RADIUS;

/// Largest slope of [`smooth_step`], attained at `t = 1/2`.
pub const SMOOTH_STEP_MAX_SLOPE: f64 = 2.0;

fn sigma(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `C^infinity` monotone step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = sigma(t);
        let b = sigma(1.0 - t);
        a / (a + b)
    }
}

pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let a = sigma(t);
    let b = sigma(1.0 - t);
    let da = a / (t * t);
    let db = b / ((1.0 - t) * (1.0 - t));
    (da * b + a * db) / ((a + b) * (a + b))
}

/// The radial bump: 1 for `|x| <= 1.41`, 0 for `|x| >= 1.42`.
pub fn phi_eval(x: f64) -> f64 {
    smooth_step((OUTER_RADIUS - x.abs()) / WIDTH)
}

pub fn phi_eval2(xi1: f64, xi2: f64) -> f64 {
    phi_eval(xi1.hypot(xi2))
}
