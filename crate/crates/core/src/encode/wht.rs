use crate::error::{Error, Result};

/// Unnormalized in-place butterfly: `x[S] ← Σ_v (−1)^{|S ∧ v|} x[v]`.
pub(crate) fn butterfly(x: &mut [f64]) {
    debug_assert!(x.len().is_power_of_two());
    let mut h = 1;
    while h < x.len() {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, t) = (*a + *b, *a - *b);
                *a = s;
                *b = t;
            }
        }
        h *= 2;
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(())
}

/// Unnormalized Walsh–Hadamard transform in place. Applying it twice
/// multiplies the input by its length.
pub fn wht_unnormalized_in_place(values: &mut [f64]) -> Result<()> {
    check_len(values.len())?;
    butterfly(values);
    Ok(())
}

/// Pauli-Z coefficients of a function on `d` bits given by its values:
/// `J_S = 2^{−d} Σ_v (−1)^{Σ_{a∈S} v_a} values[v]`, with `S` a bit mask.
pub fn wht(values: &[f64]) -> Result<Vec<f64>> {
    check_len(values.len())?;
    let mut out = values.to_vec();
    butterfly(&mut out);
    let scale = 1.0 / values.len() as f64;
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}

/// Two-sided transform of a row-major `size × size` block:
/// `J[S1][S2] = size^{−2} Σ_{v,w} (−1)^{|S1 ∧ v| + |S2 ∧ w|} block[v][w]`.
pub(crate) fn wht_2d(block: &mut [f64], size: usize) {
    debug_assert_eq!(block.len(), size * size);
    for row in block.chunks_exact_mut(size) {
        butterfly(row);
    }
    let mut column = vec![0.0; size];
    for w in 0..size {
        for (v, c) in column.iter_mut().enumerate() {
            *c = block[v * size + w];
        }
        butterfly(&mut column);
        for (v, c) in column.iter().enumerate() {
            block[v * size + w] = *c;
        }
    }
    let scale = 1.0 / (size * size) as f64;
    block.iter_mut().for_each(|x| *x *= scale);
}

/// `r(S, v) = 2^{−d} Π_{a∈S} (−1)^{v_a}`, bit `a` of `v` counted from the
/// least significant end.
pub fn r_coefficient(subset: &[usize], v: usize, d: usize) -> f64 {
    let flips = subset.iter().filter(|&&a| v >> a & 1 == 1).count();
    let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
    sign / (1u64 << d) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_oracle(values: &[f64]) -> Vec<f64> {
        let len = values.len();
        let d = len.trailing_zeros() as usize;
        (0..len)
            .map(|s| {
                let bits: Vec<usize> = (0..d).filter(|a| s >> a & 1 == 1).collect();
                (0..len).map(|v| r_coefficient(&bits, v, d) * values[v]).sum()
            })
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(wht(&[1.0, 0.0]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(wht(&[3.0; 4]).unwrap(), vec![3.0, 0.0, 0.0, 0.0]);
        assert_eq!(wht(&[0.0, 0.0, 0.0, 1.0]).unwrap(), vec![0.25, -0.25, -0.25, 0.25]);
        assert_eq!(wht(&[7.0]).unwrap(), vec![7.0]);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(matches!(wht(&[1.0, 2.0, 3.0]), Err(Error::NotPowerOfTwo(3))));
        assert!(wht(&[]).is_err());
        assert!(wht_unnormalized_in_place(&mut [0.0; 6]).is_err());
    }

    #[test]
    fn r_coefficient_examples() {
        assert_eq!(r_coefficient(&[], 2, 2), 0.25);
        assert_eq!(r_coefficient(&[0, 1], 3, 2), 0.25);
        assert_eq!(r_coefficient(&[0], 1, 1), -0.5);
    }

    #[test]
    fn butterfly_matches_dense_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 0..=6 {
            let x: Vec<f64> = (0..1 << d).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let fast = wht(&x).unwrap();
            for (a, b) in fast.iter().zip(dense_oracle(&x)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_sided_equals_row_then_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let size = 4;
        let block: Vec<f64> = (0..size * size).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut fast = block.clone();
        wht_2d(&mut fast, size);
        for s1 in 0..size {
            for s2 in 0..size {
                let b1: Vec<usize> = (0..2).filter(|a| s1 >> a & 1 == 1).collect();
                let b2: Vec<usize> = (0..2).filter(|a| s2 >> a & 1 == 1).collect();
                let mut expect = 0.0;
                for v in 0..size {
                    for w in 0..size {
                        expect += r_coefficient(&b1, v, 2) * r_coefficient(&b2, w, 2) * block[v * size + w];
                    }
                }
                assert!((fast[s1 * size + s2] - expect).abs() < 1e-14);
            }
        }
    }
}
