use num_complex::Complex64;

use super::state::{lane_sum, StateVector};

/// Qubits whose pairs stay within one cache-resident block.
const BLOCK_QUBITS: usize = 11;

/// Contiguous entries moved together when gathering high qubits.
const STRIP: usize = 1 << 6;

/// High qubits handled per pass over the state.
const GROUP: usize = 4;

/// Amplitudes with real and imaginary parts in separate arrays, so that the
/// rotation kernels are plain lane-wise arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Split {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[inline]
fn rx_lanes(ar: &mut [f64], br: &mut [f64], ai: &mut [f64], bi: &mut [f64], c: f64, s: f64) {
    let n = ar.len();
    let (br, ai, bi) = (&mut br[..n], &mut ai[..n], &mut bi[..n]);
    for k in 0..n {
        let (xr, xi, yr, yi) = (ar[k], ai[k], br[k], bi[k]);
        ar[k] = c * xr + s * yi;
        ai[k] = c * xi - s * yr;
        br[k] = c * yr + s * xi;
        bi[k] = c * yi - s * xr;
    }
}

/// `RX(2β)` on the qubit with pair distance `stride`, `c = cos β`, `s = sin β`.
#[inline]
fn rx_stride(re: &mut [f64], im: &mut [f64], stride: usize, c: f64, s: f64) {
    if stride == 1 {
        for (r, i) in re.chunks_exact_mut(2).zip(im.chunks_exact_mut(2)) {
            let (xr, yr, xi, yi) = (r[0], r[1], i[0], i[1]);
            r[0] = c * xr + s * yi;
            i[0] = c * xi - s * yr;
            r[1] = c * yr + s * xi;
            i[1] = c * yi - s * xr;
        }
        return;
    }
    for (r, i) in re.chunks_exact_mut(2 * stride).zip(im.chunks_exact_mut(2 * stride)) {
        let (ar, br) = r.split_at_mut(stride);
        let (ai, bi) = i.split_at_mut(stride);
        rx_lanes(ar, br, ai, bi, c, s);
    }
}

/// `Im Σ_{pairs} conj(a_0) b_1 + conj(a_1) b_0` for one qubit.
#[inline]
fn x_stride_im(a: (&[f64], &[f64]), b: (&[f64], &[f64]), stride: usize) -> f64 {
    if stride == 1 {
        let pairs = a.0.chunks_exact(2).zip(a.1.chunks_exact(2)).zip(b.0.chunks_exact(2).zip(b.1.chunks_exact(2)));
        let mut acc = [0.0; 2];
        for ((ar, ai), (br, bi)) in pairs {
            acc[0] += ar[0] * bi[1] - ai[0] * br[1];
            acc[1] += ar[1] * bi[0] - ai[1] * br[0];
        }
        return acc[0] + acc[1];
    }
    let mut total = 0.0;
    let w = 2 * stride;
    let chunks = a.0.chunks_exact(w).zip(a.1.chunks_exact(w)).zip(b.0.chunks_exact(w).zip(b.1.chunks_exact(w)));
    for ((ar, ai), (br, bi)) in chunks {
        let (ar0, ar1) = ar.split_at(stride);
        let (ai0, ai1) = ai.split_at(stride);
        let (br0, br1) = br.split_at(stride);
        let (bi0, bi1) = bi.split_at(stride);
        total += lane_sum(stride, |k| {
            (ar0[k] * bi1[k] - ai0[k] * br1[k]) + (ar1[k] * bi0[k] - ai1[k] * br0[k])
        });
    }
    total
}

fn high_groups(num_qubits: usize) -> Vec<Vec<usize>> {
    let high: Vec<usize> = (BLOCK_QUBITS.min(num_qubits)..num_qubits).collect();
    high.chunks(GROUP).map(<[usize]>::to_vec).collect()
}

/// Index of strip `o` with zero bits inserted at every position of `group`.
#[inline]
fn strip_base(o: usize, group: &[usize]) -> usize {
    let mut idx = o * STRIP;
    for &h in group {
        idx = ((idx >> h) << (h + 1)) | (idx & ((1 << h) - 1));
    }
    idx
}

fn row_offsets(group: &[usize]) -> Vec<usize> {
    (0..1usize << group.len())
        .map(|r| {
            group
                .iter()
                .enumerate()
                .filter(|&(j, _)| r >> j & 1 == 1)
                .map(|(_, &h)| 1 << h)
                .sum()
        })
        .collect()
}

fn gather(src: &[f64], buf: &mut [f64], base: usize, offsets: &[usize]) {
    for (r, &off) in offsets.iter().enumerate() {
        buf[r * STRIP..(r + 1) * STRIP].copy_from_slice(&src[base + off..base + off + STRIP]);
    }
}

fn scatter(dst: &mut [f64], buf: &[f64], base: usize, offsets: &[usize]) {
    for (r, &off) in offsets.iter().enumerate() {
        dst[base + off..base + off + STRIP].copy_from_slice(&buf[r * STRIP..(r + 1) * STRIP]);
    }
}

impl Split {
    pub fn uniform(num_qubits: usize) -> Self {
        let len = 1usize << num_qubits;
        let a = 1.0 / (len as f64).sqrt();
        Self {
            re: vec![a; len],
            im: vec![0.0; len],
        }
    }

    pub fn set_uniform(&mut self) {
        let a = 1.0 / (self.len() as f64).sqrt();
        self.re.fill(a);
        self.im.fill(0.0);
    }

    pub fn copy_from(&mut self, other: &Split) {
        self.re.copy_from_slice(&other.re);
        self.im.copy_from_slice(&other.im);
    }

    /// Overwrites `self` with `E ψ`.
    pub fn set_times_energy(&mut self, psi: &Split, energies: &[f64]) {
        for ((d, x), e) in self.re.iter_mut().zip(&psi.re).zip(energies) {
            *d = x * e;
        }
        for ((d, x), e) in self.im.iter_mut().zip(&psi.im).zip(energies) {
            *d = x * e;
        }
    }

    pub fn from_state(state: &StateVector) -> Self {
        let (re, im) = state.amplitudes().iter().map(|a| (a.re, a.im)).unzip();
        Self { re, im }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn to_state(&self) -> StateVector {
        let amps = self.re.iter().zip(&self.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        StateVector::from_amplitudes(amps).expect("power-of-two length within the cap")
    }

    /// Multiplies entry `b` by `cos θ_b − i sin θ_b`, `θ_b` given by
    /// `(cos, sin)` tables looked up through `index`.
    pub fn phase_lookup(&mut self, index: &[u32], cos: &[f64], sin: &[f64]) {
        for ((r, i), &k) in self.re.iter_mut().zip(self.im.iter_mut()).zip(index) {
            let (c, s) = (cos[k as usize], sin[k as usize]);
            let (x, y) = (*r, *i);
            *r = c * x + s * y;
            *i = c * y - s * x;
        }
    }

    /// Multiplies entry `b` by `exp(−iγ E_b)`.
    pub fn phase(&mut self, energies: &[f64], gamma: f64) {
        for ((r, i), &e) in self.re.iter_mut().zip(self.im.iter_mut()).zip(energies) {
            let (s, c) = (gamma * e).sin_cos();
            let (x, y) = (*r, *i);
            *r = c * x + s * y;
            *i = c * y - s * x;
        }
    }

    /// `exp(−iβ Σ_k X_k)`.
    pub fn mix(&mut self, num_qubits: usize, beta: f64) {
        let (s, c) = beta.sin_cos();
        let low = num_qubits.min(BLOCK_QUBITS);
        let w = 1 << low;
        for (r, i) in self.re.chunks_exact_mut(w).zip(self.im.chunks_exact_mut(w)) {
            for q in 0..low {
                rx_stride(r, i, 1 << q, c, s);
            }
        }
        for group in high_groups(num_qubits) {
            let offsets = row_offsets(&group);
            let mut br = vec![0.0; offsets.len() * STRIP];
            let mut bi = br.clone();
            for o in 0..self.len() / br.len() {
                let base = strip_base(o, &group);
                gather(&self.re, &mut br, base, &offsets);
                gather(&self.im, &mut bi, base, &offsets);
                for j in 0..group.len() {
                    rx_stride(&mut br, &mut bi, STRIP << j, c, s);
                }
                scatter(&mut self.re, &br, base, &offsets);
                scatter(&mut self.im, &bi, base, &offsets);
            }
        }
    }

    /// `Σ_b |ψ_b|² E_b`.
    pub fn energy(&self, energies: &[f64]) -> f64 {
        let (re, im) = (&self.re, &self.im);
        lane_sum(energies.len(), |k| (re[k] * re[k] + im[k] * im[k]) * energies[k])
    }

    /// `Im ⟨self| E |other⟩`.
    pub fn energy_inner_im(&self, other: &Split, energies: &[f64]) -> f64 {
        let (ar, ai, br, bi) = (&self.re, &self.im, &other.re, &other.im);
        lane_sum(energies.len(), |k| (ar[k] * bi[k] - ai[k] * br[k]) * energies[k])
    }

    /// `Im Σ_k ⟨self| X_k |other⟩`.
    pub fn x_sum_im(&self, other: &Split, num_qubits: usize) -> f64 {
        let low = num_qubits.min(BLOCK_QUBITS);
        let w = 1 << low;
        let mut total = 0.0;
        let blocks = self
            .re
            .chunks_exact(w)
            .zip(self.im.chunks_exact(w))
            .zip(other.re.chunks_exact(w).zip(other.im.chunks_exact(w)));
        for (a, b) in blocks {
            for q in 0..low {
                total += x_stride_im(a, b, 1 << q);
            }
        }
        for group in high_groups(num_qubits) {
            let offsets = row_offsets(&group);
            let n = offsets.len() * STRIP;
            let (mut ar, mut ai, mut br, mut bi) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
            for o in 0..self.len() / n {
                let base = strip_base(o, &group);
                gather(&self.re, &mut ar, base, &offsets);
                gather(&self.im, &mut ai, base, &offsets);
                gather(&other.re, &mut br, base, &offsets);
                gather(&other.im, &mut bi, base, &offsets);
                for j in 0..group.len() {
                    total += x_stride_im((&ar, &ai), (&br, &bi), STRIP << j);
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::Gate;

    fn scrambled(q: usize) -> Split {
        let mut s = Split::uniform(q);
        let e: Vec<f64> = (0..1usize << q).map(|b| ((b * 7919) % 23) as f64 * 0.1).collect();
        s.phase(&e, 0.9);
        s.mix(q, 0.2);
        s.phase(&e, 1.3);
        s
    }

    #[test]
    fn mixer_matches_gates() {
        let q = 17;
        let start = scrambled(q);
        let mut fast = start.clone();
        fast.mix(q, 0.37);
        let mut slow = start.to_state();
        for k in 0..q {
            slow.apply_gate(&Gate::Rx(k, 0.74)).unwrap();
        }
        assert!((fast.to_state().inner(&slow) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn x_sum_matches_gates() {
        let q = 16;
        let a = scrambled(q);
        let mut b = a.clone();
        b.mix(q, 0.5);
        let (sa, sb) = (a.to_state(), b.to_state());
        let mut direct = Complex64::new(0.0, 0.0);
        for k in 0..q {
            let mut x = sb.clone();
            x.apply_gate(&Gate::H(k)).unwrap();
            x.apply_gate(&Gate::Rz(k, std::f64::consts::PI)).unwrap();
            x.apply_gate(&Gate::H(k)).unwrap();
            direct += sa.inner(&x) * Complex64::i();
        }
        assert!((a.x_sum_im(&b, q) - direct.im).abs() < 1e-10);
    }

    #[test]
    fn phase_lookup_matches_direct() {
        let q = 6;
        let e: Vec<f64> = (0..1 << q).map(|b| (b % 3) as f64).collect();
        let index: Vec<u32> = (0..1 << q).map(|b| (b % 3) as u32).collect();
        let (cos, sin): (Vec<f64>, Vec<f64>) = (0..3).map(|k| ((0.4 * k as f64).cos(), (0.4 * k as f64).sin())).unzip();
        let mut a = scrambled(q);
        let mut b = a.clone();
        a.phase(&e, 0.4);
        b.phase_lookup(&index, &cos, &sin);
        assert!((a.to_state().inner(&b.to_state()) - 1.0).norm() < 1e-14);
    }
}
