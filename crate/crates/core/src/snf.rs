//! Smith normal form and column Hermite form.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::matrix::Matrix;
use crate::ring::Pid;

/// `U * A * V = D` with `D` diagonal, factors in decreasing divisibility
/// order (`factors[n+1] | factors[n]`), zeros first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult<R: Pid> {
    pub u: Matrix<R>,
    pub v: Matrix<R>,
    pub d: Matrix<R>,
    pub factors: Vec<R>,
}

/// Bezout coefficients turning `(a, b)` into `(g, 0)` by a determinant-one
/// 2x2 transform `[[s, t], [-b/g, a/g]]`.
fn bezout<R: Pid>(a: &R, b: &R) -> [R; 4] {
    // plain elimination when the pivot already divides, so a clean pivot
    // row or column is never mixed back in
    if let Some(q) = b.div_exact(a) {
        return [R::one(), R::zero(), q.neg(), R::one()];
    }
    let (g, s, t) = a.ext_gcd(b);
    let a_g = a.div_exact(&g).expect("gcd divides");
    let b_g = b.div_exact(&g).expect("gcd divides");
    [s, t, b_g.neg(), a_g]
}

/// Diagonalizes in place with ascending factors. Row operations are mirrored
/// into `u`, column operations into `v` when present.
fn diagonalize<R: Pid>(a: &mut Matrix<R>, mut u: Option<&mut Matrix<R>>, mut v: Option<&mut Matrix<R>>) {
    let (m, n) = (a.rows(), a.cols());
    let k = m.min(n);
    for t in 0..k {
        // minimal-size pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[(i, j)].euclid_cmp(&a[(bi, bj)]) == Ordering::Less) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        if let Some(v) = v.as_deref_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            for i in t + 1..m {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let [s, tt, c, d] = bezout(&a[(t, t)], &a[(i, t)]);
                a.combine_rows(t, i, [&s, &tt, &c, &d]);
                if let Some(u) = u.as_deref_mut() {
                    u.combine_rows(t, i, [&s, &tt, &c, &d]);
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let [s, tt, c, d] = bezout(&a[(t, t)], &a[(t, j)]);
                a.combine_cols(t, j, [&s, &tt, &c, &d]);
                if let Some(v) = v.as_deref_mut() {
                    v.combine_cols(t, j, [&s, &tt, &c, &d]);
                }
            }
            if (t + 1..m).any(|i| !a[(i, t)].is_zero()) {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[(t, t)].divides(&a[(i, j)])));
            match bad {
                Some(i) => {
                    let one = R::one();
                    a.add_row_multiple(t, i, &one);
                    if let Some(u) = u.as_deref_mut() {
                        u.add_row_multiple(t, i, &one);
                    }
                }
                None => break,
            }
        }
        let inv = a[(t, t)].unit_part().unit_inv();
        if !inv.is_one() {
            a.scale_row(t, &inv);
            if let Some(u) = u.as_deref_mut() {
                u.scale_row(t, &inv);
            }
        }
    }
}

/// Full Smith normal form with unimodular transforms.
pub fn snf<R: Pid>(a: &Matrix<R>) -> SnfResult<R> {
    let (m, n) = (a.rows(), a.cols());
    let k = m.min(n);
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    diagonalize(&mut d, Some(&mut u), Some(&mut v));
    // Ascending chain to largest-first. Runs of associated factors keep
    // their relative order, so a matrix already in normal form is fixed.
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut end = k;
    while end > 0 {
        let mut start = end - 1;
        while start > 0 && d[(start - 1, start - 1)].normalized() == d[(end - 1, end - 1)].normalized() {
            start -= 1;
        }
        order.extend(start..end);
        end = start;
    }
    // `order[t]` is the current index of the entry that belongs at `t`.
    let mut at: Vec<usize> = (0..k).collect();
    let mut pos: Vec<usize> = (0..k).collect();
    for t in 0..k {
        let src = pos[order[t]];
        if src != t {
            d.swap_rows(t, src);
            u.swap_rows(t, src);
            d.swap_cols(t, src);
            v.swap_cols(t, src);
            let (a, b) = (at[t], at[src]);
            at.swap(t, src);
            pos[a] = src;
            pos[b] = t;
        }
    }
    let factors = (0..k).map(|i| d[(i, i)].clone()).collect();
    SnfResult { u, v, d, factors }
}

/// Invariant factors only, largest first.
pub fn snf_factors<R: Pid>(a: &Matrix<R>) -> Vec<R> {
    let mut d = a.clone();
    diagonalize(&mut d, None, None);
    let k = a.rows().min(a.cols());
    let mut f: Vec<R> = (0..k).map(|i| d[(i, i)].clone()).collect();
    f.reverse();
    f
}

/// Column Hermite form `H = G * W` of a generator matrix `G`.
///
/// The nonzero columns of `H` come first and are in lower echelon form:
/// column `c` has its pivot in row `pivots[c]`, zeros above it, a normalized
/// pivot, and every entry of row `pivots[c]` left of the pivot is reduced
/// modulo the pivot. The form is unique for the lattice spanned by `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteResult<R: Pid> {
    pub h: Matrix<R>,
    pub w: Matrix<R>,
    pub pivots: Vec<usize>,
}

impl<R: Pid> HermiteResult<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The leading `rank` columns, a basis of the lattice.
    pub fn basis(&self) -> Matrix<R> {
        let cols: Vec<usize> = (0..self.rank()).collect();
        self.h.select_cols(&cols)
    }

    /// Coordinates `x` with `basis * x = b`, or `None` when `b` is outside
    /// the lattice.
    pub fn solve(&self, b: &[R]) -> Option<Vec<R>> {
        let mut x: Vec<R> = Vec::with_capacity(self.rank());
        for (c, &p) in self.pivots.iter().enumerate() {
            let mut acc = b[p].clone();
            for (prev, xv) in x.iter().enumerate() {
                acc = acc.sub(&self.h[(p, prev)].mul(xv));
            }
            x.push(acc.div_exact(&self.h[(p, c)])?);
        }
        let ok = (0..self.h.rows()).all(|i| {
            let v = x.iter().enumerate().fold(R::zero(), |s, (c, xv)| s.add(&self.h[(i, c)].mul(xv)));
            v == b[i]
        });
        ok.then_some(x)
    }
}

fn hermite_impl<R: Pid>(g: &Matrix<R>, track: bool) -> HermiteResult<R> {
    let (m, n) = (g.rows(), g.cols());
    let mut h = g.clone();
    let mut w = if track { Matrix::identity(n) } else { Matrix::zeros(0, 0) };
    let mut pivots = Vec::new();
    let mut c = 0;
    for row in 0..m {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if h[(row, j)].is_zero() {
                continue;
            }
            if h[(row, c)].is_zero() {
                h.swap_cols(c, j);
                if track {
                    w.swap_cols(c, j);
                }
                continue;
            }
            let coeffs = bezout(&h[(row, c)], &h[(row, j)]);
            let [s, t, x, y] = &coeffs;
            h.combine_cols(c, j, [s, t, x, y]);
            if track {
                w.combine_cols(c, j, [s, t, x, y]);
            }
        }
        if h[(row, c)].is_zero() {
            continue;
        }
        let inv = h[(row, c)].unit_part().unit_inv();
        if !inv.is_one() {
            h.scale_col(c, &inv);
            if track {
                w.scale_col(c, &inv);
            }
        }
        for prev in 0..c {
            let (q, _) = h[(row, prev)].div_rem(&h[(row, c)]);
            if !q.is_zero() {
                let nq = q.neg();
                h.add_col_multiple(prev, c, &nq);
                if track {
                    w.add_col_multiple(prev, c, &nq);
                }
            }
        }
        pivots.push(row);
        c += 1;
    }
    HermiteResult { h, w, pivots }
}

pub fn hermite_columns<R: Pid>(g: &Matrix<R>) -> HermiteResult<R> {
    hermite_impl(g, true)
}

/// Hermite form without the transform.
pub fn hermite_basis<R: Pid>(g: &Matrix<R>) -> HermiteResult<R> {
    hermite_impl(g, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{GfPoly, Integer, Ring};
    use alloc::vec;
    use proptest::prelude::*;

    fn im(rows: usize, cols: usize, v: &[i64]) -> Matrix<Integer> {
        Matrix::new(rows, cols, v.iter().map(|&x| Integer::new(x)).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::new(x)).collect()
    }

    fn check<R: Pid>(a: &Matrix<R>, r: &SnfResult<R>) {
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.d);
        assert!(r.d.is_diagonal());
        assert!(r.u.det().unwrap().is_unit());
        assert!(r.v.det().unwrap().is_unit());
        for w in r.factors.windows(2) {
            assert!(w[1].divides(&w[0]), "{:?}", r.factors);
        }
        for f in &r.factors {
            assert_eq!(f, &f.normalized());
        }
    }

    #[test]
    fn snf_examples() {
        let r = snf(&Matrix::<Integer>::identity(3));
        assert_eq!(r.factors, ints(&[1, 1, 1]));
        assert_eq!(r.d, Matrix::identity(3));
        assert_eq!(snf(&im(2, 2, &[2, 0, 0, 3])).factors, ints(&[6, 1]));
        assert_eq!(snf(&im(2, 2, &[2, 0, 0, 2])).factors, ints(&[2, 2]));
        assert_eq!(snf(&im(2, 2, &[2, 1, 0, 2])).factors, ints(&[4, 1]));
        let z = snf(&Matrix::<Integer>::zeros(2, 3));
        assert_eq!(z.factors, ints(&[0, 0]));
        let r = snf(&im(2, 3, &[2, 4, 4, -6, 6, 12]));
        check(&im(2, 3, &[2, 4, 4, -6, 6, 12]), &r);
        assert_eq!(r.factors, ints(&[6, 2]));
    }

    #[test]
    fn rank_deficient_zeros_come_first() {
        let a = im(3, 3, &[1, 2, 3, 2, 4, 6, 0, 0, 5]);
        let r = snf(&a);
        check(&a, &r);
        assert_eq!(r.factors, ints(&[0, 5, 1]));
    }

    #[test]
    fn polynomial_snf() {
        type F = GfPoly<3>;
        let x = F::x();
        let a = Matrix::new(2, 2, vec![x.clone(), F::one(), F::zero(), x.clone()]).unwrap();
        let r = snf(&a);
        check(&a, &r);
        assert_eq!(r.factors, vec![x.mul(&x), F::one()]);
    }

    #[test]
    fn hermite_is_canonical() {
        // two generating sets of the same lattice
        let g1 = im(2, 2, &[2, 0, 1, 3]);
        let g2 = im(2, 3, &[2, 4, 0, 4, 11, 3]);
        let h1 = hermite_columns(&g1);
        let h2 = hermite_columns(&g2);
        assert_eq!(h1.basis(), h2.basis());
        assert_eq!(g2.mul(&h2.w).unwrap(), h2.h);
        assert!(h2.w.is_unimodular());
        assert_eq!(h1.basis(), im(2, 2, &[2, 0, 1, 3]));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix<Integer>> {
        (1usize..5, 1usize..5).prop_flat_map(|(m, n)| {
            proptest::collection::vec(-20i64..21, m * n).prop_map(move |v| im(m, n, &v))
        })
    }

    proptest! {
        #[test]
        fn snf_certificate(a in arb_matrix()) {
            let r = snf(&a);
            check(&a, &r);
            prop_assert_eq!(snf_factors(&a), r.factors.clone());
        }

        #[test]
        fn snf_idempotent(a in arb_matrix()) {
            let r = snf(&a);
            prop_assert_eq!(snf(&r.d).factors, r.factors);
        }

        #[test]
        fn hermite_certificate(a in arb_matrix()) {
            let h = hermite_columns(&a);
            prop_assert_eq!(a.mul(&h.w).unwrap(), h.h.clone());
            prop_assert!(h.w.is_unimodular());
            for (c, &p) in h.pivots.iter().enumerate() {
                for i in 0..p {
                    prop_assert!(h.h[(i, c)].is_zero());
                }
                let piv = &h.h[(p, c)];
                prop_assert!(piv.0 > num_bigint::BigInt::from(0));
                for prev in 0..c {
                    prop_assert!(h.h[(p, prev)].0 >= num_bigint::BigInt::from(0));
                    prop_assert!(h.h[(p, prev)].0 < piv.0);
                }
            }
            for c in h.rank()..a.cols() {
                prop_assert!(h.h.col(c).iter().all(|x| x.is_zero()));
            }
            // canonical: a column permutation of the generators gives the same basis
            let rev: Vec<usize> = (0..a.cols()).rev().collect();
            prop_assert_eq!(hermite_columns(&a.select_cols(&rev)).basis(), h.basis());
        }
    }
}
