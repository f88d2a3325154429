//! Small dense linear-algebra helpers on top of `ndarray` / `ndarray-linalg`.

use ndarray::{s, Array1, Array2, ArrayView2};
use ndarray_linalg::{Eig, Inverse, Solve, SVD};

use crate::{Error, Result, C64};

pub fn eye(n: usize) -> Array2<f64> {
    Array2::eye(n)
}

pub fn i2() -> Array2<f64> {
    Array2::eye(2)
}

/// J = [[0, 1], [-1, 0]], the single-mode symplectic form.
pub fn j2() -> Array2<f64> {
    ndarray::array![[0.0, 1.0], [-1.0, 0.0]]
}

pub fn x2() -> Array2<f64> {
    ndarray::array![[0.0, 1.0], [1.0, 0.0]]
}

pub fn z2() -> Array2<f64> {
    ndarray::array![[1.0, 0.0], [0.0, -1.0]]
}

/// Ω = I_N ⊗ J for the ordering (q₁, p₁, …, q_N, p_N).
pub fn symplectic_form(n_modes: usize) -> Array2<f64> {
    let mut om = Array2::zeros((2 * n_modes, 2 * n_modes));
    for k in 0..n_modes {
        om.slice_mut(s![2 * k..2 * k + 2, 2 * k..2 * k + 2]).assign(&j2());
    }
    om
}

pub fn complexify(m: &Array2<f64>) -> Array2<C64> {
    m.mapv(|x| C64::new(x, 0.0))
}

pub fn complexify_vec(v: &Array1<f64>) -> Array1<C64> {
    v.mapv(|x| C64::new(x, 0.0))
}

pub fn re(m: &Array2<C64>) -> Array2<f64> {
    m.mapv(|z| z.re)
}

pub fn im(m: &Array2<C64>) -> Array2<f64> {
    m.mapv(|z| z.im)
}

/// 2×2 block (j, k) of a 2N×2N matrix.
pub fn block<T>(m: &Array2<T>, j: usize, k: usize) -> ArrayView2<'_, T> {
    m.slice(s![2 * j..2 * j + 2, 2 * k..2 * k + 2])
}

pub fn add_block(m: &mut Array2<f64>, j: usize, k: usize, b: &Array2<f64>) {
    let mut view = m.slice_mut(s![2 * j..2 * j + 2, 2 * k..2 * k + 2]);
    view += b;
}

pub fn symmetrize(m: &mut Array2<f64>) {
    let t = m.t().to_owned();
    *m += &t;
    *m *= 0.5;
}

pub fn symmetrize_c(m: &mut Array2<C64>) {
    let t = m.t().to_owned();
    *m += &t;
    m.mapv_inplace(|z| z * 0.5);
}

pub fn fro(m: &Array2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn fro_c(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm1_c(m: &Array2<C64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 2-norm condition number from singular values.
pub fn cond_c(m: &Array2<C64>) -> Result<f64> {
    let (_, sv, _) = m.svd(false, false)?;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(if min == 0.0 { f64::INFINITY } else { max / min })
}

pub fn eigenvalues(m: &Array2<f64>) -> Result<Array1<C64>> {
    let (w, _) = m.eig()?;
    Ok(w)
}

/// Largest real part of the spectrum.
pub fn spectral_abscissa(m: &Array2<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Solves `a X + X aᵀ = r` by vectorisation. Intended for the small
/// (2N ≲ 40) systems met here.
pub fn sylvester_c(a: &Array2<C64>, r: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    let mut k = Array2::<C64>::zeros((n * n, n * n));
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for m in 0..n {
                k[[row, m * n + j]] += a[[i, m]];
                k[[row, i * n + m]] += a[[j, m]];
            }
        }
    }
    let rhs = Array1::from_iter(r.iter().cloned());
    let x = k
        .solve(&rhs)
        .map_err(|e| Error::SingularLinearSystem(format!("Sylvester operator: {e}")))?;
    Ok(Array2::from_shape_vec((n, n), x.to_vec()).expect("square"))
}

/// Solves the Lyapunov equation `a X + X aᵀ + c = 0` (real).
pub fn lyapunov(a: &Array2<f64>, c: &Array2<f64>) -> Result<Array2<f64>> {
    let x = sylvester_c(&complexify(a), &complexify(&(-c)))?;
    let mut x = re(&x);
    symmetrize(&mut x);
    Ok(x)
}

/// Matrix exponential, degree-13 Padé with scaling and squaring.
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    let n = a.nrows();
    let nrm = norm1_c(a);
    let sq = if nrm > THETA13 { (nrm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.mapv(|z| z / 2f64.powi(sq));
    let id = complexify(&eye(n));
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let sc = |m: &Array2<C64>, x: f64| m.mapv(|z| z * x);
    let u_in = a6.dot(&(sc(&a6, B[13]) + sc(&a4, B[11]) + sc(&a2, B[9])))
        + sc(&a6, B[7])
        + sc(&a4, B[5])
        + sc(&a2, B[3])
        + sc(&id, B[1]);
    let u = a.dot(&u_in);
    let v = a6.dot(&(sc(&a6, B[12]) + sc(&a4, B[10]) + sc(&a2, B[8])))
        + sc(&a6, B[6])
        + sc(&a4, B[4])
        + sc(&a2, B[2])
        + sc(&id, B[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.inv()?.dot(&p);
    for _ in 0..sq {
        r = r.dot(&r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn symplectic_form_is_antisymmetric_and_squares_to_minus_one() {
        let om = symplectic_form(3);
        assert_eq!(om.t().to_owned(), -&om);
        assert_eq!(om.dot(&om), -eye(6));
    }

    #[test]
    fn lyapunov_damped_mode() {
        let a = array![[-0.5, 0.0], [0.0, -0.5]];
        let c = array![[1.5, 0.0], [0.0, 1.5]];
        let x = lyapunov(&a, &c).unwrap();
        assert!((x[[0, 0]] - 1.5).abs() < 1e-14);
        assert!(x[[0, 1]].abs() < 1e-14);
    }

    #[test]
    fn expm_rotation() {
        let t = 2.3;
        let a = complexify(&(j2() * t));
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]].re - t.cos()).abs() < 1e-13);
        assert!((e[[0, 1]].re - t.sin()).abs() < 1e-13);
        assert!((e[[1, 0]].re + t.sin()).abs() < 1e-13);
    }

    #[test]
    fn expm_large_norm_diagonal() {
        let a = array![[C64::new(-40.0, 3.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.5, -7.0)]];
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - a[[0, 0]].exp()).norm() < 1e-14);
        assert!((e[[1, 1]] - a[[1, 1]].exp()).norm() / a[[1, 1]].exp().norm() < 1e-12);
    }
}
