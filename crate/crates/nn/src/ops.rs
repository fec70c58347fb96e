//! Small numeric helpers shared by the network code.

/// Numerically stable softmax (max-subtracted).
pub fn softmax(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    softmax_in_place(&mut out);
    out
}

pub fn softmax_in_place(v: &mut [f64]) {
    assert!(!v.is_empty(), "softmax of empty slice");
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in v.iter_mut() {
        *x /= sum;
    }
}

/// Backward through softmax: given probabilities `p` and upstream gradient
/// `dp`, returns the gradient with respect to the logits.
pub fn softmax_backward(p: &[f64], dp: &[f64]) -> Vec<f64> {
    debug_assert_eq!(p.len(), dp.len());
    let inner: f64 = p.iter().zip(dp).map(|(pi, di)| pi * di).sum();
    p.iter().zip(dp).map(|(pi, di)| pi * (di - inner)).collect()
}
