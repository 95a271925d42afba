use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        let mut p = p.borrow_mut();
        let (planner, cache) = &mut *p;
        cache
            .entry((n, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

fn rows(values: &mut Array2<Complex64>, fft: &dyn Fft<f64>) {
    let buf = values
        .as_slice_mut()
        .expect("fields are stored in standard layout");
    fft.process(buf);
}

fn transpose(values: &mut Array2<Complex64>) {
    let n = values.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let t = values[[i, j]];
            values[[i, j]] = values[[j, i]];
            values[[j, i]] = t;
        }
    }
}

/// Unnormalized 2D DFT in natural (unshifted) order.
pub(crate) fn fft2(values: &mut Array2<Complex64>, inverse: bool) {
    let n = values.nrows();
    let p = plan(n, inverse);
    rows(values, p.as_ref());
    transpose(values);
    rows(values, p.as_ref());
    transpose(values);
}

/// Cyclic shift by `n/2` along both axes. It is its own inverse for even `n`.
pub(crate) fn half_shift(values: &Array2<Complex64>) -> Array2<Complex64> {
    let n = values.nrows();
    let h = n / 2;
    Array2::from_shape_fn((n, n), |(a, b)| values[[(a + h) % n, (b + h) % n]])
}
