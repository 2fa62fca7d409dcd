//! Floating-point eigenvalue oracle, independent of the exact linear
//! algebra it is used to check: characteristic polynomial via
//! Faddeev-LeVerrier, roots via Durand-Kerner iteration.

use num_complex::Complex64;

/// Characteristic polynomial coefficients of a square matrix, ascending
/// order, monic (`c[n] = 1`).
pub fn char_poly(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    // Faddeev-LeVerrier: M_0 = I, c_{n-k} = -tr(A M_{k-1} A-step)/k
    let mut mk: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for k in 1..=n {
        let am = mat_mul(m, &mk);
        let c = -trace(&am) / k as f64;
        coeffs[n - k] = c;
        mk = am;
        for i in 0..n {
            mk[i][i] += c;
        }
    }
    coeffs
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn trace(m: &[Vec<f64>]) -> f64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

/// All complex roots of a real polynomial (ascending coefficients) by
/// Durand-Kerner iteration. Intended as a numerical oracle; accuracy is
/// limited by `f64` conditioning.
pub fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x / lead, 0.0)).collect();
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1) * radius).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in monic.iter().rev() {
            acc = acc * z + ck;
        }
        acc
    };
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Eigenvalues of a square real matrix via the characteristic polynomial.
pub fn eigenvalues(m: &[Vec<f64>]) -> Vec<Complex64> {
    durand_kerner(&char_poly(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_triangular() {
        let m = vec![vec![2.0, 1.0], vec![0.0, 3.0]];
        // (x-2)(x-3) = x^2 - 5x + 6
        let c = char_poly(&m);
        assert!((c[0] - 6.0).abs() < 1e-12);
        assert!((c[1] + 5.0).abs() < 1e-12);
        assert!((c[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roots_of_cubic() {
        // (x-1)(x+2)(x-5) = x^3 - 4x^2 - 7x + 10
        let mut roots = durand_kerner(&[10.0, -7.0, -4.0, 1.0]);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let expect = [-2.0, 1.0, 5.0];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r.re - e).abs() < 1e-9 && r.im.abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 2.0]]; // eigenvalues 1, 3
        let mut ev = eigenvalues(&m);
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((ev[0].re - 1.0).abs() < 1e-9);
        assert!((ev[1].re - 3.0).abs() < 1e-9);
    }

    #[test]
    fn complex_pair() {
        // x^2 + 1
        let roots = durand_kerner(&[1.0, 0.0, 1.0]);
        let mut ims: Vec<f64> = roots.iter().map(|r| r.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-9 && (ims[1] - 1.0).abs() < 1e-9);
    }
}
