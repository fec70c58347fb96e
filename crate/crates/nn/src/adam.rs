//! Adam with bias correction over named parameter subsets.

use std::collections::BTreeMap;

use crate::param::ParamSet;

#[derive(Debug, Clone, Copy)]
pub struct AdamHyper {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        AdamHyper {
            lr: 3e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Optimizer state for every tensor under one name prefix.
#[derive(Debug, Clone)]
pub struct Adam {
    pub hyper: AdamHyper,
    prefix: String,
    t: u64,
    moments: BTreeMap<String, (Vec<f64>, Vec<f64>)>,
}

impl Adam {
    /// `prefix` selects which tensors of the shared set this optimizer
    /// owns; the empty string owns everything.
    pub fn new(prefix: impl Into<String>, hyper: AdamHyper) -> Self {
        Adam {
            hyper,
            prefix: prefix.into(),
            t: 0,
            moments: BTreeMap::new(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    /// One update over all owned tensors. Gradient slots of the visited
    /// tensors are zeroed afterwards.
    pub fn step(&mut self, params: &mut ParamSet) {
        self.t += 1;
        let t = self.t;
        let AdamHyper { lr, beta1, beta2, eps } = self.hyper;
        let bc1 = 1.0 - beta1.powi(t as i32);
        let bc2 = 1.0 - beta2.powi(t as i32);
        for (name, entry) in params.iter_mut() {
            if !name.starts_with(&self.prefix) {
                continue;
            }
            let (m, v) = self
                .moments
                .entry(name.clone())
                .or_insert_with(|| (vec![0.0; entry.len()], vec![0.0; entry.len()]));
            for i in 0..entry.data.len() {
                let g = entry.grad[i];
                m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                entry.data[i] -= lr * mhat / (vhat.sqrt() + eps);
                entry.grad[i] = 0.0;
            }
        }
        params.bump_revision();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_param_set(value: f64, grad: f64) -> ParamSet {
        let mut p = ParamSet::new();
        p.register("x.w", vec![1], vec![value]).unwrap();
        p.grad_mut("x.w")[0] = grad;
        p
    }

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let mut p = one_param_set(1.5, 0.0);
        let mut opt = Adam::new("x.", AdamHyper::default());
        opt.step(&mut p);
        assert_eq!(p.data("x.w"), &[1.5]);
    }

    #[test]
    fn first_step_is_signed_unit_lr() {
        // After bias correction, step 1 moves by ~ lr * g / (|g| + eps).
        let g = 0.37;
        let lr = 1e-3;
        let mut p = one_param_set(0.0, g);
        let mut opt = Adam::new(
            "x.",
            AdamHyper {
                lr,
                ..AdamHyper::default()
            },
        );
        opt.step(&mut p);
        let expected = -lr * g / (g.abs() + 1e-8);
        assert!((p.data("x.w")[0] - expected).abs() < 1e-12);
        // gradient slot zeroed
        assert_eq!(p.get("x.w").grad, vec![0.0]);
    }

    #[test]
    fn deterministic_across_runs() {
        let run = || {
            let mut p = one_param_set(0.2, 0.0);
            let mut opt = Adam::new("x.", AdamHyper::default());
            for k in 1..50 {
                p.grad_mut("x.w")[0] = (k as f64 * 0.13).sin();
                opt.step(&mut p);
            }
            p.data("x.w")[0]
        };
        assert_eq!(run().to_bits(), run().to_bits());
    }

    #[test]
    fn prefix_filter_skips_other_tensors() {
        let mut p = ParamSet::new();
        p.register("a.w", vec![1], vec![1.0]).unwrap();
        p.register("b.w", vec![1], vec![1.0]).unwrap();
        p.grad_mut("a.w")[0] = 1.0;
        p.grad_mut("b.w")[0] = 1.0;
        let mut opt = Adam::new("a.", AdamHyper::default());
        opt.step(&mut p);
        assert_ne!(p.data("a.w")[0], 1.0);
        assert_eq!(p.data("b.w")[0], 1.0);
        assert_eq!(p.get("b.w").grad, vec![1.0]); // untouched, not zeroed
    }
}
