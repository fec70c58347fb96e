//! Analytic gradients versus central finite differences over random stacks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use safecross_nn::{Activation, Mat, Mlp, MlpSpec, ParamSet};

const H: f64 = 1e-6;

/// Relative-error check with an absolute escape hatch for near-zero
/// gradients (finite differences lose all precision there).
fn grads_close(analytic: f64, numeric: f64) -> bool {
    let denom = analytic.abs().max(numeric.abs()).max(1e-8);
    let rel = (analytic - numeric).abs() / denom;
    rel < 1e-4 || (analytic - numeric).abs() < 1e-7
}

/// Scalar test loss: fixed random linear functional of the outputs.
fn loss(mlp: &Mlp, params: &ParamSet, x: &Mat, probe: &[f64]) -> f64 {
    let (y, _) = mlp.forward(params, x).unwrap();
    let mut l = 0.0;
    for r in 0..y.rows {
        for (v, p) in y.row(r).iter().zip(probe) {
            l += v * p;
        }
    }
    l
}

fn check_stack(seed: u64, layers: Vec<(usize, Activation)>, input_dim: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = MlpSpec::new(input_dim, layers);
    let out_dim = spec.output_dim();
    let mlp = Mlp::new("net", spec);
    let mut params = ParamSet::new();
    mlp.register(&mut params, &mut rng).unwrap();

    let batch = 3;
    let x = Mat::from_rows(
        (0..batch)
            .map(|_| (0..input_dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect(),
    );
    let probe: Vec<f64> = (0..out_dim).map(|_| rng.gen_range(-1.0..1.0)).collect();

    // analytic
    let (_, cache) = mlp.forward(&params, &x).unwrap();
    let grad_out = Mat::from_rows((0..batch).map(|_| probe.clone()).collect());
    let grad_in = mlp.backward(&mut params, &cache, &grad_out).unwrap();
    let analytic: Vec<(String, Vec<f64>)> = params
        .iter()
        .map(|(n, e)| (n.clone(), e.grad.clone()))
        .collect();

    // numeric, parameter by parameter
    for (name, agrad) in &analytic {
        for i in 0..agrad.len() {
            let orig = params.get(name).data[i];
            params.get_mut(name).data[i] = orig + H;
            let lp = loss(&mlp, &params, &x, &probe);
            params.get_mut(name).data[i] = orig - H;
            let lm = loss(&mlp, &params, &x, &probe);
            params.get_mut(name).data[i] = orig;
            let numeric = (lp - lm) / (2.0 * H);
            assert!(
                grads_close(agrad[i], numeric),
                "param grad mismatch at {name}[{i}]: analytic {} vs numeric {}",
                agrad[i],
                numeric
            );
        }
    }

    // input gradient
    let mut x_pert = x.clone();
    for r in 0..batch {
        for c in 0..input_dim {
            let orig = x_pert.row(r)[c];
            x_pert.row_mut(r)[c] = orig + H;
            let lp = loss(&mlp, &params, &x_pert, &probe);
            x_pert.row_mut(r)[c] = orig - H;
            let lm = loss(&mlp, &params, &x_pert, &probe);
            x_pert.row_mut(r)[c] = orig;
            let numeric = (lp - lm) / (2.0 * H);
            assert!(
                grads_close(grad_in.row(r)[c], numeric),
                "input grad mismatch at [{r}][{c}]"
            );
        }
    }
}

#[test]
fn gradcheck_relu_stack() {
    for seed in 0..25 {
        check_stack(seed, vec![(6, Activation::Relu), (3, Activation::Linear)], 4);
    }
}

#[test]
fn gradcheck_sigmoid_stack() {
    for seed in 100..125 {
        check_stack(seed, vec![(5, Activation::Sigmoid), (2, Activation::Sigmoid)], 3);
    }
}

#[test]
fn gradcheck_tanh_stack() {
    for seed in 200..225 {
        check_stack(seed, vec![(4, Activation::Tanh), (4, Activation::Tanh), (1, Activation::Linear)], 5);
    }
}

#[test]
fn gradcheck_mixed_deep_stack() {
    for seed in 300..325 {
        check_stack(
            seed,
            vec![
                (8, Activation::Relu),
                (6, Activation::Tanh),
                (4, Activation::Sigmoid),
                (2, Activation::Linear),
            ],
            6,
        );
    }
}
