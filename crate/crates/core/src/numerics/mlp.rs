use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;

/// Elementwise activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Tanh,
    Relu,
    Linear,
}

impl Activation {
    #[inline]
    fn forward(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
            Activation::Linear => z,
        }
    }

    /// Derivative expressed through the post-activation value.
    #[inline]
    fn grad_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - y * y,
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Linear => 1.0,
        }
    }
}

/// Fixed-topology feedforward network with flat parameter storage.
///
/// Layer `l` maps `dims[l] -> dims[l+1]`; parameters are laid out as
/// `[W0 row-major, b0, W1, b1, ...]` so optimizers and checkpoints can treat
/// the whole network as one array.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    dims: Vec<usize>,
    acts: Vec<Activation>,
    params: Vec<f64>,
}

/// Post-activation values per layer (index 0 is the input), captured by
/// [`Mlp::forward_cached`] and consumed by [`Mlp::backward`].
#[derive(Debug, Clone)]
pub struct MlpCache {
    layer_outputs: Vec<Vec<f64>>,
}

impl MlpCache {
    pub fn output(&self) -> &[f64] {
        self.layer_outputs.last().expect("cache has layers")
    }
}

impl Mlp {
    /// `dims = [in, hidden.., out]`; every hidden layer uses `hidden`, the
    /// last layer uses `output`. Parameters start at zero.
    pub fn new(dims: &[usize], hidden: Activation, output: Activation) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::Parameter("mlp needs at least one layer".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Parameter("mlp layer widths must be positive".into()));
        }
        let n_layers = dims.len() - 1;
        let mut acts = vec![hidden; n_layers];
        acts[n_layers - 1] = output;
        let n_params: usize = (0..n_layers).map(|l| dims[l] * dims[l + 1] + dims[l + 1]).sum();
        Ok(Self {
            dims: dims.to_vec(),
            acts,
            params: vec![0.0; n_params],
        })
    }

    /// Uniform fan-in initialization (Glorot-style limits), zero biases.
    pub fn init_uniform(&mut self, rng: &mut RngStream) {
        let mut off = 0;
        for l in 0..self.num_layers() {
            let (fan_in, fan_out) = (self.dims[l], self.dims[l + 1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for w in &mut self.params[off..off + fan_in * fan_out] {
                *w = rng.uniform_in(-limit, limit);
            }
            off += fan_in * fan_out;
            for b in &mut self.params[off..off + fan_out] {
                *b = 0.0;
            }
            off += fan_out;
        }
    }

    pub fn in_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn out_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_layers(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn set_params(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.params.len() {
            return Err(Error::Dimension("set_params: length mismatch".into()));
        }
        self.params.copy_from_slice(values);
        Ok(())
    }

    fn layer_offsets(&self, l: usize) -> (usize, usize) {
        let mut off = 0;
        for k in 0..l {
            off += self.dims[k] * self.dims[k + 1] + self.dims[k + 1];
        }
        (off, off + self.dims[l] * self.dims[l + 1])
    }

    /// Pure forward pass.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.in_dim() {
            return Err(Error::Dimension(format!(
                "mlp forward: input length {} vs in_dim {}",
                input.len(),
                self.in_dim()
            )));
        }
        let mut cur = input.to_vec();
        let mut off = 0;
        for l in 0..self.num_layers() {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let w = &self.params[off..off + n_in * n_out];
            let b = &self.params[off + n_in * n_out..off + n_in * n_out + n_out];
            off += n_in * n_out + n_out;
            let act = self.acts[l];
            let mut next = vec![0.0; n_out];
            for (o, nx) in next.iter_mut().enumerate() {
                let row = &w[o * n_in..(o + 1) * n_in];
                let mut z = b[o];
                for (wi, xi) in row.iter().zip(&cur) {
                    z = wi.mul_add(*xi, z);
                }
                *nx = act.forward(z);
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Forward pass that records every layer's post-activation output for a
    /// subsequent [`Mlp::backward`] call.
    pub fn forward_cached(&self, input: &[f64]) -> Result<MlpCache> {
        if input.len() != self.in_dim() {
            return Err(Error::Dimension(format!(
                "mlp forward: input length {} vs in_dim {}",
                input.len(),
                self.in_dim()
            )));
        }
        let mut outputs = Vec::with_capacity(self.num_layers() + 1);
        outputs.push(input.to_vec());
        let mut off = 0;
        for l in 0..self.num_layers() {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let w = &self.params[off..off + n_in * n_out];
            let b = &self.params[off + n_in * n_out..off + n_in * n_out + n_out];
            off += n_in * n_out + n_out;
            let act = self.acts[l];
            let cur = outputs.last().unwrap();
            let mut next = vec![0.0; n_out];
            for (o, nx) in next.iter_mut().enumerate() {
                let row = &w[o * n_in..(o + 1) * n_in];
                let mut z = b[o];
                for (wi, xi) in row.iter().zip(cur) {
                    z = wi.mul_add(*xi, z);
                }
                *nx = act.forward(z);
            }
            outputs.push(next);
        }
        Ok(MlpCache {
            layer_outputs: outputs,
        })
    }

    /// Exact reverse-mode gradients of `output · output_grad`.
    ///
    /// Parameter gradients are *accumulated* into `param_grads` (callers zero
    /// it before a batch); the returned vector is the input gradient.
    pub fn backward(
        &self,
        cache: &MlpCache,
        output_grad: &[f64],
        param_grads: &mut [f64],
    ) -> Result<Vec<f64>> {
        if output_grad.len() != self.out_dim() {
            return Err(Error::Dimension(format!(
                "mlp backward: output_grad length {} vs out_dim {}",
                output_grad.len(),
                self.out_dim()
            )));
        }
        if param_grads.len() != self.params.len() {
            return Err(Error::Dimension(
                "mlp backward: param_grads length mismatch".into(),
            ));
        }
        if cache.layer_outputs.len() != self.num_layers() + 1 {
            return Err(Error::Dimension("mlp backward: stale cache".into()));
        }

        let mut delta = output_grad.to_vec();
        for l in (0..self.num_layers()).rev() {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let (off, b_off) = self.layer_offsets(l);
            let act = self.acts[l];
            let layer_in = &cache.layer_outputs[l];
            let layer_out = &cache.layer_outputs[l + 1];

            // dL/dz from dL/dy through the activation.
            let mut dz = delta;
            for (d, y) in dz.iter_mut().zip(layer_out) {
                *d *= act.grad_from_output(*y);
            }

            let w = &self.params[off..b_off];
            let (gw, rest) = param_grads[off..].split_at_mut(n_in * n_out);
            let gb = &mut rest[..n_out];

            let mut dinput = vec![0.0; n_in];
            for (o, d) in dz.iter().enumerate() {
                gb[o] += d;
                let row = &w[o * n_in..(o + 1) * n_in];
                let grow = &mut gw[o * n_in..(o + 1) * n_in];
                for i in 0..n_in {
                    grow[i] = layer_in[i].mul_add(*d, grow[i]);
                    dinput[i] = row[i].mul_add(*d, dinput[i]);
                }
            }
            delta = dinput;
        }
        Ok(delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_input(rng: &mut RngStream, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.uniform_in(-1.0, 1.0)).collect()
    }

    #[test]
    fn zero_weights_return_bias() {
        let mut net = Mlp::new(&[3, 2], Activation::Tanh, Activation::Linear).unwrap();
        // params layout: W (2x3) then b (2)
        let n_w = 6;
        net.params_mut()[n_w] = 0.7;
        net.params_mut()[n_w + 1] = -0.3;
        let y = net.forward(&[10.0, -5.0, 2.0]).unwrap();
        assert_eq!(y, vec![0.7, -0.3]);
    }

    #[test]
    fn identity_linear_layer() {
        let mut net = Mlp::new(&[3, 3], Activation::Tanh, Activation::Linear).unwrap();
        for i in 0..3 {
            net.params_mut()[i * 3 + i] = 1.0;
        }
        let v = vec![0.5, -1.25, 3.0];
        assert_eq!(net.forward(&v).unwrap(), v);
    }

    #[test]
    fn forward_matches_handrolled_two_layer_tanh() {
        let mut rng = RngStream::from_seed(2024);
        let mut net = Mlp::new(&[2, 3, 2], Activation::Tanh, Activation::Linear).unwrap();
        net.init_uniform(&mut rng);
        let x = random_input(&mut rng, 2);

        // Hand-rolled per-neuron evaluation from the flat layout.
        let p = net.params();
        let mut h = [0.0; 3];
        for o in 0..3 {
            let z = p[o * 2] * x[0] + p[o * 2 + 1] * x[1] + p[6 + o];
            h[o] = z.tanh();
        }
        let base = 9; // 2*3 weights + 3 biases
        let mut y = [0.0; 2];
        for o in 0..2 {
            y[o] = p[base + o * 3] * h[0]
                + p[base + o * 3 + 1] * h[1]
                + p[base + o * 3 + 2] * h[2]
                + p[base + 6 + o];
        }

        let out = net.forward(&x).unwrap();
        assert!((out[0] - y[0]).abs() < 1e-14);
        assert!((out[1] - y[1]).abs() < 1e-14);
    }

    #[test]
    fn forward_is_pure() {
        let mut rng = RngStream::from_seed(3);
        let mut net = Mlp::new(&[4, 8, 3], Activation::Tanh, Activation::Tanh).unwrap();
        net.init_uniform(&mut rng);
        let x = random_input(&mut rng, 4);
        let a = net.forward(&x).unwrap();
        let b = net.forward(&x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn forward_shape_mismatch_is_error() {
        let net = Mlp::new(&[3, 2], Activation::Tanh, Activation::Linear).unwrap();
        assert!(net.forward(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn linear_layer_backward_closed_form() {
        // y = Wx + b: dW = g xᵀ, db = g, dinput = Wᵀ g.
        let mut rng = RngStream::from_seed(7);
        let mut net = Mlp::new(&[3, 2], Activation::Tanh, Activation::Linear).unwrap();
        net.init_uniform(&mut rng);
        let x = random_input(&mut rng, 3);
        let g = vec![0.3, -1.1];

        let cache = net.forward_cached(&x).unwrap();
        let mut grads = vec![0.0; net.num_params()];
        let dinput = net.backward(&cache, &g, &mut grads).unwrap();

        let p = net.params();
        for o in 0..2 {
            for i in 0..3 {
                assert!((grads[o * 3 + i] - g[o] * x[i]).abs() < 1e-14);
            }
            assert!((grads[6 + o] - g[o]).abs() < 1e-14);
        }
        for i in 0..3 {
            let expect = p[i] * g[0] + p[3 + i] * g[1];
            assert!((dinput[i] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_output_grad_gives_zero_gradients() {
        let mut rng = RngStream::from_seed(8);
        let mut net = Mlp::new(&[3, 5, 2], Activation::Relu, Activation::Tanh).unwrap();
        net.init_uniform(&mut rng);
        let x = random_input(&mut rng, 3);
        let cache = net.forward_cached(&x).unwrap();
        let mut grads = vec![0.0; net.num_params()];
        let dinput = net.backward(&cache, &[0.0, 0.0], &mut grads).unwrap();
        assert!(grads.iter().all(|g| *g == 0.0));
        assert!(dinput.iter().all(|g| *g == 0.0));
    }

    /// Central finite differences of `output · g` w.r.t. a parameter subset
    /// and the full input, on random (params, input) draws. Tanh nets only;
    /// relu kinks are exercised separately away from the boundary.
    #[test]
    fn backward_matches_finite_differences() {
        let shapes: [&[usize]; 3] = [&[2, 3, 2], &[4, 16, 16, 3], &[5, 8, 1]];
        let mut rng = RngStream::from_seed(99);
        for dims in shapes {
            for _ in 0..20 {
                let mut net = Mlp::new(dims, Activation::Tanh, Activation::Linear).unwrap();
                net.init_uniform(&mut rng);
                let x = random_input(&mut rng, dims[0]);
                let g: Vec<f64> = (0..*dims.last().unwrap())
                    .map(|_| rng.uniform_in(-1.0, 1.0))
                    .collect();

                let cache = net.forward_cached(&x).unwrap();
                let mut grads = vec![0.0; net.num_params()];
                let dinput = net.backward(&cache, &g, &mut grads).unwrap();

                let scalar = |net: &Mlp, x: &[f64]| -> f64 {
                    net.forward(x)
                        .unwrap()
                        .iter()
                        .zip(&g)
                        .map(|(a, b)| a * b)
                        .sum()
                };

                let h = 1e-5;
                // Sample a handful of parameter coordinates per draw.
                for _ in 0..12 {
                    let k = rng.index(net.num_params());
                    let orig = net.params()[k];
                    net.params_mut()[k] = orig + h;
                    let plus = scalar(&net, &x);
                    net.params_mut()[k] = orig - h;
                    let minus = scalar(&net, &x);
                    net.params_mut()[k] = orig;
                    let numeric = (plus - minus) / (2.0 * h);
                    let denom = numeric.abs().max(grads[k].abs()).max(1e-6);
                    assert!(
                        (numeric - grads[k]).abs() / denom < 1e-4,
                        "param {k}: analytic {} vs numeric {numeric}",
                        grads[k]
                    );
                }
                for (i, di) in dinput.iter().enumerate() {
                    let mut xp = x.clone();
                    xp[i] += h;
                    let plus = scalar(&net, &xp);
                    xp[i] = x[i] - h;
                    let minus = scalar(&net, &xp);
                    let numeric = (plus - minus) / (2.0 * h);
                    let denom = numeric.abs().max(di.abs()).max(1e-6);
                    assert!((numeric - di).abs() / denom < 1e-4);
                }
            }
        }
    }

    #[test]
    fn relu_backward_away_from_kinks() {
        let mut rng = RngStream::from_seed(17);
        let mut net = Mlp::new(&[2, 6, 1], Activation::Relu, Activation::Linear).unwrap();
        net.init_uniform(&mut rng);
        // Push biases away from zero so no pre-activation sits near a kink.
        let (w_end, n) = (12, net.num_params());
        for b in &mut net.params_mut()[w_end..w_end + 6] {
            *b = 0.5;
        }
        let _ = n;
        let x = vec![0.3, -0.2];
        let cache = net.forward_cached(&x).unwrap();
        let mut grads = vec![0.0; net.num_params()];
        net.backward(&cache, &[1.0], &mut grads).unwrap();

        let h = 1e-6;
        for k in 0..net.num_params() {
            let orig = net.params()[k];
            net.params_mut()[k] = orig + h;
            let plus = net.forward(&x).unwrap()[0];
            net.params_mut()[k] = orig - h;
            let minus = net.forward(&x).unwrap()[0];
            net.params_mut()[k] = orig;
            let numeric = (plus - minus) / (2.0 * h);
            assert!(
                (numeric - grads[k]).abs() < 1e-5,
                "param {k}: {} vs {numeric}",
                grads[k]
            );
        }
    }

    #[test]
    fn init_is_deterministic_under_seed() {
        let mut a = Mlp::new(&[3, 8, 2], Activation::Tanh, Activation::Linear).unwrap();
        let mut b = a.clone();
        a.init_uniform(&mut RngStream::from_seed(55));
        b.init_uniform(&mut RngStream::from_seed(55));
        assert_eq!(a.params(), b.params());
    }
}
