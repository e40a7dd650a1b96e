//! Exact linear algebra over a field, with fraction-field entry points for
//! PID matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Field, Frac, Pid, Ring};

/// Reduced row echelon form: nonzero rows only, with their pivot columns.
pub fn rref<F: Field>(a: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !r[(i, col)].is_zero()) else { continue };
        r.swap_rows(row, p);
        let inv = r[(row, col)].inv();
        r.scale_row(row, &inv);
        for i in 0..m {
            if i != row && !r[(i, col)].is_zero() {
                let c = r[(i, col)].neg();
                r.add_row_multiple(i, row, &c);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let keep: Vec<usize> = (0..row).collect();
    (r.select_rows(&keep), pivots)
}

pub fn rank<F: Field>(a: &Matrix<F>) -> usize {
    rref(a).1.len()
}

/// Basis of the right null space `{x : A x = 0}`.
pub fn kernel<F: Field>(a: &Matrix<F>) -> Vec<Vec<F>> {
    let n = a.cols();
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); n];
            x[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = r[(i, f)].neg();
            }
            x
        })
        .collect()
}

/// One solution of `A x = b`.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Vec<F>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension("right-hand side length differs from row count".into()));
    }
    let n = a.cols();
    let bcol = Matrix::from_fn(a.rows(), 1, |i, _| b[i].clone());
    let aug = a.hstack(&bcol)?;
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![F::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, n)].clone();
    }
    Ok(x)
}

/// Inverse of a square matrix.
pub fn inverse<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>> {
    if !a.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = a.rows();
    let aug = a.hstack(&Matrix::identity(n))?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular("matrix is not invertible".into()));
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(r.select_cols(&cols))
}

/// Solves `A x = b` over the fraction field of `R`.
pub fn solve_fraction<R: Pid>(a: &Matrix<R>, b: &[R]) -> Result<Vec<Frac<R>>> {
    let bf: Vec<Frac<R>> = b.iter().map(|x| Frac::from_ring(x.clone())).collect();
    solve(&a.to_frac(), &bf)
}

/// Null space of `A` over the fraction field of `R`.
pub fn kernel_fraction<R: Pid>(a: &Matrix<R>) -> Vec<Vec<Frac<R>>> {
    kernel(&a.to_frac())
}

// ---------------------------------------------------------------------------
// Row-space operations. A subspace is given by spanning row vectors of
// length `n`.

/// Canonical basis (RREF rows) of the span of `vs`.
pub fn span<F: Field>(vs: &[Vec<F>], n: usize) -> Matrix<F> {
    if vs.is_empty() {
        return Matrix::zeros(0, n);
    }
    rref(&Matrix::from_rows(vs, n).expect("uniform vector length")).0
}

pub fn span_sum<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let mut rows = a.row_vecs();
    rows.extend(b.row_vecs());
    span(&rows, a.cols())
}

/// Intersection of two row spaces.
pub fn span_intersection<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.cols();
    if a.rows() == 0 || b.rows() == 0 {
        return Matrix::zeros(0, n);
    }
    // x A = y B  <=>  [A; -B]^T (x, y) = 0
    let stacked = Matrix::from_fn(n, a.rows() + b.rows(), |i, j| {
        if j < a.rows() {
            a[(j, i)].clone()
        } else {
            b[(j - a.rows(), i)].neg()
        }
    });
    let vecs: Vec<Vec<F>> = kernel(&stacked)
        .into_iter()
        .map(|k| combine(&k[..a.rows()], a))
        .collect();
    span(&vecs, n)
}

/// `{x : <v, x> = 0 for all rows v}`.
pub fn annihilator<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let n = a.cols();
    let ker = kernel(a);
    span(&ker, n)
}

/// `Σ coeffs[i] * rows[i]`.
pub fn combine<F: Ring>(coeffs: &[F], rows: &Matrix<F>) -> Vec<F> {
    let mut out = vec![F::zero(); rows.cols()];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(rows.row(i)) {
            *o = o.add(&c.mul(x));
        }
    }
    out
}

pub fn contains<F: Field>(a: &Matrix<F>, v: &[F]) -> bool {
    let mut rows = a.row_vecs();
    rows.push(v.to_vec());
    span(&rows, a.cols()).rows() == rank(a)
}

/// Whether row space `a` is contained in row space `b`.
pub fn is_subspace<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    span_sum(a, b).rows() == rank(b)
}

/// Determinant over a field by elimination.
pub fn det_field<F: Field>(a: &Matrix<F>) -> F {
    let n = a.rows();
    let mut r = a.clone();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !r[(i, col)].is_zero()) else { return F::zero() };
        if p != col {
            r.swap_rows(p, col);
            det = det.neg();
        }
        let piv = r[(col, col)].clone();
        det = det.mul(&piv);
        let inv = piv.inv();
        for i in col + 1..n {
            if !r[(i, col)].is_zero() {
                let c = r[(i, col)].mul(&inv).neg();
                r.add_row_multiple(i, col, &c);
            }
        }
    }
    det
}

/// Clears denominators of a fraction vector, returning a primitive ring
/// vector on the same line.
pub fn primitive<R: Pid>(v: &[Frac<R>]) -> Vec<R> {
    let l = v.iter().fold(R::one(), |acc, x| acc.lcm(x.den()));
    let scaled: Vec<R> = v
        .iter()
        .map(|x| x.num().mul(&l.div_exact(x.den()).expect("lcm of denominators")))
        .collect();
    let g = scaled.iter().fold(R::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return scaled;
    }
    scaled.iter().map(|x| x.div_exact(&g).expect("content divides")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integer;
    use proptest::prelude::*;

    type Q = Frac<Integer>;

    fn q(v: i64) -> Q {
        Q::from_ring(Integer::new(v))
    }

    fn im(rows: usize, cols: usize, v: &[i64]) -> Matrix<Integer> {
        Matrix::new(rows, cols, v.iter().map(|&x| Integer::new(x)).collect()).unwrap()
    }

    #[test]
    fn solve_examples() {
        let b = [Integer::new(3), Integer::new(-4)];
        let x = solve_fraction(&Matrix::identity(2), &b).unwrap();
        assert_eq!(x, vec![q(3), q(-4)]);
        let a = im(1, 2, &[1, 1]);
        let x = solve_fraction(&a, &[Integer::new(1)]).unwrap();
        assert_eq!(a.to_frac().mul_vec(&x).unwrap(), vec![q(1)]);
        let k = kernel_fraction(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(a.to_frac().mul_vec(&k[0]).unwrap(), vec![q(0)]);
        // inconsistent system
        let s = im(2, 1, &[1, 1]);
        assert_eq!(solve_fraction(&s, &[Integer::new(0), Integer::new(1)]), Err(Error::NoSolution));
    }

    #[test]
    fn subspace_examples() {
        let a = span(&[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]], 3);
        let b = span(&[vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]], 3);
        let i = span_intersection(&a, &b);
        assert_eq!(i, span(&[vec![q(0), q(1), q(0)]], 3));
        assert_eq!(span_sum(&a, &b).rows(), 3);
        assert_eq!(annihilator(&a), span(&[vec![q(0), q(0), q(1)]], 3));
        assert!(contains(&a, &[q(2), q(3), q(0)]));
        assert!(!contains(&a, &[q(0), q(0), q(1)]));
    }

    fn arb_invertible() -> impl Strategy<Value = Matrix<Integer>> {
        proptest::collection::vec(-9i64..10, 16)
            .prop_map(|v| im(4, 4, &v))
            .prop_filter("invertible", |m| !m.det().unwrap().is_zero())
    }

    proptest! {
        #[test]
        fn random_invertible_solve(a in arb_invertible(), b in proptest::collection::vec(-9i64..10, 4)) {
            let b: Vec<Integer> = b.into_iter().map(Integer::new).collect();
            let x = solve_fraction(&a, &b).unwrap();
            let bq: Vec<Q> = b.iter().map(|v| Q::from_ring(v.clone())).collect();
            prop_assert_eq!(a.to_frac().mul_vec(&x).unwrap(), bq);
            let inv = inverse(&a.to_frac()).unwrap();
            prop_assert_eq!(inv.mul(&a.to_frac()).unwrap(), Matrix::identity(4));
            prop_assert_eq!(det_field(&a.to_frac()), Q::from_ring(a.det().unwrap()));
        }

        #[test]
        fn intersection_dimension_formula(
            a in proptest::collection::vec(-3i64..4, 8),
            b in proptest::collection::vec(-3i64..4, 8),
        ) {
            let a = span(&im(2, 4, &a).to_frac().row_vecs(), 4);
            let b = span(&im(2, 4, &b).to_frac().row_vecs(), 4);
            let s = span_sum(&a, &b);
            let i = span_intersection(&a, &b);
            prop_assert_eq!(s.rows() + i.rows(), a.rows() + b.rows());
            prop_assert!(is_subspace(&i, &a) && is_subspace(&i, &b));
        }
    }
}
