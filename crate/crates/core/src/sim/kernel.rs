//! In-place kernels over a complex amplitude vector indexed by bit strings.

use num_complex::Complex64;

/// Applies a 2x2 row-major matrix to the bit at position `bit`.
#[inline]
pub(crate) fn apply_1q(data: &mut [Complex64], bit: usize, m: &[Complex64; 4]) {
    let stride = 1usize << bit;
    let len = data.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let j = i + stride;
            let (x, y) = (data[i], data[j]);
            data[i] = m[0] * x + m[1] * y;
            data[j] = m[2] * x + m[3] * y;
        }
        base += stride << 1;
    }
}

/// Diagonal 2x2 matrix `diag(d0, d1)` on bit `bit`.
#[inline]
pub(crate) fn apply_diag(data: &mut [Complex64], bit: usize, d0: Complex64, d1: Complex64) {
    let mask = 1usize << bit;
    for (i, amp) in data.iter_mut().enumerate() {
        *amp *= if i & mask == 0 { d0 } else { d1 };
    }
}

/// Controlled-X permutation: swaps amplitudes whose control bit is set.
#[inline]
pub(crate) fn apply_cx(data: &mut [Complex64], control_bit: usize, target_bit: usize) {
    let c = 1usize << control_bit;
    let t = 1usize << target_bit;
    for i in 0..data.len() {
        if i & c != 0 && i & t == 0 {
            data.swap(i, i | t);
        }
    }
}

/// Applies a single-qubit gate matrix, using the diagonal fast path when possible.
#[inline]
pub(crate) fn apply_matrix(data: &mut [Complex64], bit: usize, m: &[Complex64; 4]) {
    if m[1] == Complex64::new(0.0, 0.0) && m[2] == Complex64::new(0.0, 0.0) {
        apply_diag(data, bit, m[0], m[3]);
    } else {
        apply_1q(data, bit, m);
    }
}
