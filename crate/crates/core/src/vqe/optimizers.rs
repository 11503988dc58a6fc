use std::collections::VecDeque;

/// Why an optimizer stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stop {
    /// Objective change below tolerance for three consecutive iterations
    /// (quasi-Newton) or simplex spread below tolerance (Nelder–Mead).
    Converged,
    /// Gradient vanished or the line search found no descent.
    Stationary,
    MaxIters,
    NonFinite,
}

pub(crate) struct Trace {
    pub x: Vec<f64>,
    pub f: f64,
    /// Objective at the start and after every iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub stop: Stop,
}

const MEMORY: usize = 10;
const ARMIJO_C1: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;
const CONSECUTIVE: usize = 3;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limited-memory BFGS with Armijo backtracking. `fg` returns the objective
/// and its gradient; `f` only the objective.
pub(crate) fn lbfgs(
    x0: Vec<f64>,
    mut fg: impl FnMut(&[f64]) -> (f64, Vec<f64>),
    mut f: impl FnMut(&[f64]) -> f64,
    max_iters: usize,
    tol: f64,
) -> Trace {
    let mut x = x0;
    let (mut fx, mut g) = fg(&x);
    let mut history = vec![fx];
    if !fx.is_finite() {
        return Trace { x, f: fx, history, iterations: 0, stop: Stop::NonFinite };
    }
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut quiet = 0;
    for iter in 0..max_iters {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm < 1e-12 {
            return Trace { x, f: fx, history, iterations: iter, stop: Stop::Stationary };
        }

        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(memory.len());
        for (s, y, rho) in memory.iter().rev() {
            let a = rho * dot(s, &d);
            d.iter_mut().zip(y).for_each(|(di, yi)| *di -= a * yi);
            alphas.push(a);
        }
        let gamma = match memory.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 1.0 / gnorm.max(1.0),
        };
        d.iter_mut().for_each(|di| *di *= gamma);
        for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(di, si)| *di += (a - b) * si);
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            memory.clear();
            d = g.iter().map(|v| -v / gnorm.max(1.0)).collect();
            slope = dot(&g, &d);
        }

        let mut t = 1.0;
        let (x_new, f_new) = loop {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            let ft = f(&trial);
            if ft.is_finite() && ft <= fx + ARMIJO_C1 * t * slope {
                break (trial, ft);
            }
            t *= 0.5;
            if t < MIN_STEP {
                return Trace { x, f: fx, history, iterations: iter, stop: Stop::Stationary };
            }
        };
        let (f_checked, g_new) = fg(&x_new);
        if !f_checked.is_finite() {
            return Trace { x, f: fx, history, iterations: iter, stop: Stop::NonFinite };
        }
        debug_assert!((f_checked - f_new).abs() <= 1e-9 * f_new.abs().max(1.0));

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if memory.len() == MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }

        let change = (f_new - fx).abs();
        x = x_new;
        fx = f_new;
        g = g_new;
        history.push(fx);
        quiet = if change < tol { quiet + 1 } else { 0 };
        if quiet >= CONSECUTIVE {
            return Trace { x, f: fx, history, iterations: iter + 1, stop: Stop::Converged };
        }
    }
    Trace { x, f: fx, history, iterations: max_iters, stop: Stop::MaxIters }
}

/// Nelder–Mead simplex with standard coefficients. One iteration is one
/// reflect/expand/contract/shrink decision.
pub(crate) fn nelder_mead(
    x0: Vec<f64>,
    mut f: impl FnMut(&[f64]) -> f64,
    step: f64,
    max_iters: usize,
    tol: f64,
) -> Trace {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = f(&x0);
    simplex.push((x0.clone(), f0));
    for i in 0..n {
        let mut v = x0.clone();
        v[i] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);
    let mut history = vec![simplex[0].1];
    if simplex.iter().any(|(_, v)| !v.is_finite()) {
        let (x, fx) = simplex.swap_remove(0);
        return Trace { x, f: fx, history, iterations: 0, stop: Stop::NonFinite };
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };
    for iter in 0..max_iters {
        if simplex[n].1 - simplex[0].1 < tol {
            let (x, fx) = simplex.swap_remove(0);
            return Trace { x, f: fx, history, iterations: iter, stop: Stop::Converged };
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let fe = f(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (toward, ft) = if fr < worst.1 { (&reflected, fr) } else { (&worst.0, worst.1) };
            let contracted = lerp(&centroid, toward, 0.5);
            let fc = f(&contracted);
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v = lerp(&best, &vertex.0, 0.5);
                    let fv = f(&v);
                    *vertex = (v, fv);
                }
            }
        }
        order(&mut simplex);
        history.push(simplex[0].1);
        if !simplex[0].1.is_finite() {
            let (x, fx) = simplex.swap_remove(0);
            return Trace { x, f: fx, history, iterations: iter + 1, stop: Stop::NonFinite };
        }
    }
    let (x, fx) = simplex.swap_remove(0);
    Trace { x, f: fx, history, iterations: max_iters, stop: Stop::MaxIters }
}
