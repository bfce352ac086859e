use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place 2-D FFT on row-major data. The inverse carries the 1/(nx·ny)
/// normalization so forward→inverse is the identity.
pub(crate) fn fft2_inplace(values: &mut [Complex64], nx: usize, ny: usize, forward: bool) {
    debug_assert_eq!(values.len(), nx * ny);
    let mut planner = FftPlanner::<f64>::new();
    let row_fft = if forward {
        planner.plan_fft_forward(nx)
    } else {
        planner.plan_fft_inverse(nx)
    };
    let col_fft = if forward {
        planner.plan_fft_forward(ny)
    } else {
        planner.plan_fft_inverse(ny)
    };

    for row in values.chunks_exact_mut(nx) {
        row_fft.process(row);
    }

    let mut col = vec![Complex64::new(0.0, 0.0); ny];
    for ix in 0..nx {
        for iy in 0..ny {
            col[iy] = values[iy * nx + ix];
        }
        col_fft.process(&mut col);
        for iy in 0..ny {
            values[iy * nx + ix] = col[iy];
        }
    }

    if !forward {
        let norm = 1.0 / (nx * ny) as f64;
        for v in values.iter_mut() {
            *v *= norm;
        }
    }
}

/// FFT spatial frequency (cycles per mm) for bin `i` of `n` samples at
/// pitch `d`.
#[inline]
pub(crate) fn fft_freq(i: usize, n: usize, d: f64) -> f64 {
    let i = i as isize;
    let n = n as isize;
    let signed = if i < n / 2 { i } else { i - n };
    signed as f64 / (n as f64 * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let nx = 64;
        let ny = 128;
        let mut data: Vec<Complex64> = (0..nx * ny)
            .map(|i| Complex64::new((i % 37) as f64 * 0.1, ((i * 13) % 11) as f64 - 5.0))
            .collect();
        let original = data.clone();
        fft2_inplace(&mut data, nx, ny, true);
        fft2_inplace(&mut data, nx, ny, false);
        for (a, b) in data.iter().zip(&original) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn frequencies_wrap_at_nyquist() {
        let n = 8;
        let d = 0.5;
        let freqs: Vec<f64> = (0..n).map(|i| fft_freq(i, n, d)).collect();
        assert_eq!(freqs[0], 0.0);
        assert_eq!(freqs[1], 0.25);
        assert_eq!(freqs[3], 0.75);
        assert_eq!(freqs[4], -1.0); // −Nyquist
        assert_eq!(freqs[7], -0.25);
    }
}
