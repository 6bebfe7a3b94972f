//! Data-parallel maps for parameter sweeps (step sizes, cruise speeds,
//! random samples). Uses rayon with the `parallel` feature and a plain
//! iterator otherwise; results keep input order either way.

use crate::error::Result;
use crate::integrators::TimeGrid;
use crate::liesys::{problem_error, Method, Problem};

/// True when sweeps run on the rayon pool.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// `items.map(f)`, in parallel when the `parallel` feature is enabled.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Sequential reference for [`map`].
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Global error of `method` on `problem` at each step size.
pub fn convergence_errors(problem: Problem, method: Method, hs: &[f64]) -> Result<Vec<f64>> {
    map(hs, |&h| error_at(problem, method, h)).into_iter().collect()
}

pub fn convergence_errors_sequential(problem: Problem, method: Method, hs: &[f64]) -> Result<Vec<f64>> {
    map_sequential(hs, |&h| error_at(problem, method, h)).into_iter().collect()
}

fn error_at(problem: Problem, method: Method, h: f64) -> Result<f64> {
    let (a, b) = problem.interval();
    problem_error(problem, method, &TimeGrid::with_step(a, b, h)?)
}
