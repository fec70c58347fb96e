//! Fully-connected stacks with cached activations for reverse-mode
//! gradients.
//!
//! Parameters live in a [`ParamSet`] under `{prefix}.w{i}` / `{prefix}.b{i}`
//! so several networks can share one flat, checkpointable collection.

use rand::distributions::{Distribution, Uniform};
use rand::Rng;

use crate::error::NnError;
use crate::mat::{axpy, dot, Mat};
use crate::param::ParamSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Linear,
    Relu,
    Sigmoid,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Linear => z,
            Activation::Relu => z.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the post-activation value.
    #[inline]
    fn deriv_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Linear => 1.0,
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

/// Layer widths and activations for one stack.
#[derive(Debug, Clone)]
pub struct MlpSpec {
    pub input_dim: usize,
    /// `(width, activation)` per layer, in forward order.
    pub layers: Vec<(usize, Activation)>,
}

impl MlpSpec {
    pub fn new(input_dim: usize, layers: Vec<(usize, Activation)>) -> Self {
        assert!(input_dim >= 1, "input dim must be >= 1");
        assert!(!layers.is_empty(), "at least one layer");
        assert!(layers.iter().all(|(w, _)| *w >= 1), "layer widths must be >= 1");
        MlpSpec { input_dim, layers }
    }

    /// Hidden stack with a fixed activation plus a differently-activated
    /// output layer.
    pub fn with_head(
        input_dim: usize,
        hidden: &[usize],
        hidden_act: Activation,
        out_dim: usize,
        out_act: Activation,
    ) -> Self {
        let mut layers: Vec<(usize, Activation)> =
            hidden.iter().map(|&w| (w, hidden_act)).collect();
        layers.push((out_dim, out_act));
        MlpSpec::new(input_dim, layers)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().0
    }
}

/// Activations recorded during a forward pass; consumed by `backward`.
#[derive(Debug, Clone)]
pub struct MlpCache {
    /// `acts[0]` is the input batch, `acts[i]` the output of layer `i-1`.
    acts: Vec<Mat>,
    revision: u64,
}

impl MlpCache {
    pub fn output(&self) -> &Mat {
        self.acts.last().unwrap()
    }
}

/// A named FC stack whose tensors live in a shared [`ParamSet`].
#[derive(Debug, Clone)]
pub struct Mlp {
    pub prefix: String,
    pub spec: MlpSpec,
}

impl Mlp {
    pub fn new(prefix: impl Into<String>, spec: MlpSpec) -> Self {
        Mlp {
            prefix: prefix.into(),
            spec,
        }
    }

    fn weight_name(&self, i: usize) -> String {
        format!("{}.w{}", self.prefix, i)
    }

    fn bias_name(&self, i: usize) -> String {
        format!("{}.b{}", self.prefix, i)
    }

    /// Register weights `U(-1/sqrt(fan_in), 1/sqrt(fan_in))` and zero
    /// biases.
    pub fn register<R: Rng>(&self, params: &mut ParamSet, rng: &mut R) -> Result<(), NnError> {
        let mut fan_in = self.spec.input_dim;
        for (i, (width, _)) in self.spec.layers.iter().enumerate() {
            let bound = 1.0 / (fan_in as f64).sqrt();
            let dist = Uniform::new_inclusive(-bound, bound);
            let w: Vec<f64> = (0..width * fan_in).map(|_| dist.sample(rng)).collect();
            params.register(&self.weight_name(i), vec![*width, fan_in], w)?;
            params.register(&self.bias_name(i), vec![*width], vec![0.0; *width])?;
            fan_in = *width;
        }
        Ok(())
    }

    /// Batched forward pass. `x` has one sample per row.
    pub fn forward(&self, params: &ParamSet, x: &Mat) -> Result<(Mat, MlpCache), NnError> {
        if x.cols != self.spec.input_dim {
            return Err(NnError::DimMismatch {
                context: "mlp forward input",
                expected: self.spec.input_dim,
                got: x.cols,
            });
        }
        let mut acts = Vec::with_capacity(self.spec.layers.len() + 1);
        acts.push(x.clone());
        for (i, (width, act)) in self.spec.layers.iter().enumerate() {
            let w = params.try_get(&self.weight_name(i))?;
            let b = params.try_get(&self.bias_name(i))?;
            let input = acts.last().unwrap();
            let mut out = Mat::zeros(input.rows, *width);
            for r in 0..input.rows {
                let xin = input.row(r);
                let orow = out.row_mut(r);
                for (j, o) in orow.iter_mut().enumerate() {
                    let z = dot(xin, &w.data[j * xin.len()..(j + 1) * xin.len()]) + b.data[j];
                    *o = act.apply(z);
                }
            }
            acts.push(out);
        }
        let out = acts.last().unwrap().clone();
        Ok((
            out,
            MlpCache {
                acts,
                revision: params.revision(),
            },
        ))
    }

    /// Accumulate gradients of a scalar loss into the param set, given the
    /// loss gradient at the stack output. Returns the gradient with respect
    /// to the input batch.
    pub fn backward(
        &self,
        params: &mut ParamSet,
        cache: &MlpCache,
        grad_out: &Mat,
    ) -> Result<Mat, NnError> {
        if cache.revision != params.revision() {
            return Err(NnError::StaleCache {
                now: params.revision(),
                cached: cache.revision,
            });
        }
        let last = cache.acts.last().unwrap();
        if grad_out.cols != last.cols || grad_out.rows != last.rows {
            return Err(NnError::DimMismatch {
                context: "mlp backward grad",
                expected: last.cols,
                got: grad_out.cols,
            });
        }
        let mut grad = grad_out.clone();
        for i in (0..self.spec.layers.len()).rev() {
            let (_, act) = self.spec.layers[i];
            let out = &cache.acts[i + 1];
            let input = &cache.acts[i];
            // dZ = dA * act'(out)
            for r in 0..grad.rows {
                let orow = out.row(r);
                for (g, a) in grad.row_mut(r).iter_mut().zip(orow) {
                    *g *= act.deriv_from_output(*a);
                }
            }
            let wname = self.weight_name(i);
            let bname = self.bias_name(i);
            let w_data = params.get(&wname).data.clone();
            {
                let wg = params.grad_mut(&wname);
                for r in 0..grad.rows {
                    let dz = grad.row(r);
                    let xin = input.row(r);
                    for (j, dzj) in dz.iter().enumerate() {
                        axpy(*dzj, xin, &mut wg[j * xin.len()..(j + 1) * xin.len()]);
                    }
                }
            }
            {
                let bg = params.grad_mut(&bname);
                for r in 0..grad.rows {
                    axpy(1.0, grad.row(r), bg);
                }
            }
            // dInput = dZ . W
            let mut dinput = Mat::zeros(input.rows, input.cols);
            for r in 0..grad.rows {
                let dz = grad.row(r);
                let drow = dinput.row_mut(r);
                for (j, dzj) in dz.iter().enumerate() {
                    axpy(*dzj, &w_data[j * input.cols..(j + 1) * input.cols], drow);
                }
            }
            grad = dinput;
        }
        Ok(grad)
    }

    pub fn output_dim(&self) -> usize {
        self.spec.output_dim()
    }

    pub fn input_dim(&self) -> usize {
        self.spec.input_dim
    }
}
