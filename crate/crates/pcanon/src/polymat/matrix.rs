//! Dense square matrices and the two polynomial invariants read off them.

use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::numeric::{Field, TolerancePolicy};
use crate::polymat::Polynomial;

/// Row-major square matrix over a field scalar.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<F: Field> {
    order: usize,
    entries: Vec<F>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "matrices must have positive order");
        DenseMatrix { order, entries: vec![F::zero(); order * order] }
    }

    pub fn identity(order: usize) -> Self {
        Self::scalar(order, F::one())
    }

    /// `c * I`.
    pub fn scalar(order: usize, c: F) -> Self {
        let mut m = Self::zero(order);
        for i in 0..order {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        assert!(order > 0, "matrices must have positive order");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { order, entries }
    }

    /// Builds from rows; panics unless the shape is square and nonempty.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let order = rows.len();
        assert!(order > 0, "matrices must have positive order");
        assert!(
            rows.iter().all(|r| r.len() == order),
            "rows must form a square matrix"
        );
        DenseMatrix { order, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.entries[i * self.order + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        self.entries.chunks(self.order)
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DenseMatrix<G> {
        DenseMatrix {
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|e| e.clone() * c.clone())
    }

    pub fn trace(&self) -> F {
        (0..self.order).fold(F::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Largest entry magnitude; the scale for tolerance decisions.
    pub fn max_magnitude(&self) -> f64 {
        self.entries.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_zero_with(&self, pol: &TolerancePolicy, scale: f64) -> bool {
        self.entries.iter().all(|e| e.is_negligible(pol, scale))
    }

    pub fn eq_with(&self, other: &Self, pol: &TolerancePolicy) -> bool {
        self.order == other.order
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.eq_with(b, pol))
    }

    /// `A^k` by repeated squaring; `A^0 = I`.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::identity(self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Picks a pivot row in `rows` for column `col`: any structurally nonzero
    /// entry in the exact backend, the largest magnitude otherwise.
    fn pivot_row(&self, rows: std::ops::Range<usize>, col: usize) -> usize {
        if F::EXACT {
            let start = rows.start;
            rows.clone()
                .find(|&r| !self.get(r, col).is_zero())
                .unwrap_or(start)
        } else {
            rows.max_by(|&a, &b| {
                self.get(a, col)
                    .magnitude()
                    .total_cmp(&self.get(b, col).magnitude())
            })
            .unwrap()
        }
    }

    /// Row rank via Gaussian elimination with partial pivoting.
    pub fn rank(&self, pol: &TolerancePolicy) -> usize {
        let n = self.order;
        let scale = self.max_magnitude();
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..n {
            let pivot = m.pivot_row(rank..n, col);
            if m.get(pivot, col).is_negligible(pol, scale) {
                continue;
            }
            m.swap_rows(rank, pivot);
            let inv = m.get(rank, col).inv().unwrap();
            for r in (rank + 1)..n {
                let factor = m.get(r, col).clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(rank, c).clone();
                    m.set(r, c, v);
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// Gauss-Jordan inverse; `None` when singular under the active equality.
    pub fn inverse(&self, pol: &TolerancePolicy) -> Option<Self> {
        let n = self.order;
        let scale = self.max_magnitude();
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = m.pivot_row(col..n, col);
            if m.get(pivot, col).is_negligible(pol, scale) {
                return None;
            }
            m.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let piv_inv = m.get(col, col).inv()?;
            for c in 0..n {
                m.set(col, c, m.get(col, c).clone() * piv_inv.clone());
                inv.set(col, c, inv.get(col, c).clone() * piv_inv.clone());
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..n {
                    let mv = m.get(r, c).clone() - factor.clone() * m.get(col, c).clone();
                    m.set(r, c, mv);
                    let iv = inv.get(r, c).clone() - factor.clone() * inv.get(col, c).clone();
                    inv.set(r, c, iv);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.order {
            self.entries.swap(a * self.order + c, b * self.order + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.order {
            self.entries.swap(r * self.order + a, r * self.order + b);
        }
    }
}

impl<F: Field> Add for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn add(self, rhs: &DenseMatrix<F>) -> DenseMatrix<F> {
        assert_eq!(self.order, rhs.order, "matrix orders must match");
        DenseMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Sub for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn sub(self, rhs: &DenseMatrix<F>) -> DenseMatrix<F> {
        assert_eq!(self.order, rhs.order, "matrix orders must match");
        DenseMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Mul for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn mul(self, rhs: &DenseMatrix<F>) -> DenseMatrix<F> {
        assert_eq!(self.order, rhs.order, "matrix orders must match");
        let n = self.order;
        DenseMatrix::from_fn(n, |i, j| {
            let mut acc = F::zero();
            for l in 0..n {
                acc = acc + self.get(i, l).clone() * rhs.get(l, j).clone();
            }
            acc
        })
    }
}

impl<F: Field> fmt::Display for DenseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e.literal())?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for DenseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Characteristic polynomial
// ---------------------------------------------------------------------------

/// Monic characteristic polynomial `det(X*I - A)`.
///
/// Exact backend: Faddeev-LeVerrier, whose only divisions are by the integers
/// `1..=q` and therefore stay exact over the rationals. Approximate backend:
/// similarity reduction to Hessenberg form followed by the leading-principal-
/// minor recurrence, which behaves far better in floating point.
pub fn char_poly<F: Field>(a: &DenseMatrix<F>) -> Polynomial<F> {
    if F::EXACT {
        char_poly_faddeev(a)
    } else {
        char_poly_hessenberg(a)
    }
}

fn char_poly_faddeev<F: Field>(a: &DenseMatrix<F>) -> Polynomial<F> {
    let q = a.order();
    // descending coefficients: X^q + c_1 X^{q-1} + ... + c_q
    let mut cs = Vec::with_capacity(q);
    let mut m = a.clone();
    for k in 1..=q {
        let c = m.trace().neg() * F::from_i64(k as i64).inv().unwrap();
        cs.push(c.clone());
        if k < q {
            // next M = A (M + c I); M commutes with A, so either order works
            m = &(&m + &DenseMatrix::scalar(q, c)) * a;
        }
    }
    let mut coeffs = vec![F::zero(); q + 1];
    coeffs[q] = F::one();
    for (k, c) in cs.into_iter().enumerate() {
        coeffs[q - 1 - k] = c;
    }
    Polynomial::from_coeffs(coeffs)
}

/// In-place similarity reduction to upper Hessenberg form using stabilized
/// elementary transformations.
fn hessenberg_reduce<F: Field>(m: &mut DenseMatrix<F>) {
    let n = m.order();
    if n < 3 {
        return;
    }
    for col in 0..n - 2 {
        let pivot = m.pivot_row(col + 1..n, col);
        if m.get(pivot, col).is_zero() {
            continue;
        }
        m.swap_rows(col + 1, pivot);
        m.swap_cols(col + 1, pivot);
        let inv = m.get(col + 1, col).inv().unwrap();
        for row in col + 2..n {
            let factor = m.get(row, col).clone() * inv.clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = m.get(row, c).clone() - factor.clone() * m.get(col + 1, c).clone();
                m.set(row, c, v);
            }
            // compensate on columns to keep the similarity
            for r in 0..n {
                let v = m.get(r, col + 1).clone() + factor.clone() * m.get(r, row).clone();
                m.set(r, col + 1, v);
            }
        }
    }
}

fn char_poly_hessenberg<F: Field>(a: &DenseMatrix<F>) -> Polynomial<F> {
    let n = a.order();
    let mut h = a.clone();
    hessenberg_reduce(&mut h);
    // p_r = det(X I_r - H_r) over leading principal blocks:
    // p_r = (X - h[r-1][r-1]) p_{r-1}
    //       - sum_i h[i][r-1] * (prod_{j=i+1..r} h[j][j-1]) * p_i
    let mut ps: Vec<Polynomial<F>> = Vec::with_capacity(n + 1);
    ps.push(Polynomial::one());
    for r in 1..=n {
        let mut p = &Polynomial::linear_root(h.get(r - 1, r - 1)) * &ps[r - 1];
        let mut subdiag = F::one();
        for i in (0..r - 1).rev() {
            subdiag = subdiag * h.get(i + 1, i).clone();
            let term = ps[i]
                .scale(&(h.get(i, r - 1).clone() * subdiag.clone()));
            p = &p - &term;
        }
        ps.push(p);
    }
    ps.pop().unwrap()
}

// ---------------------------------------------------------------------------
// Minimal polynomial
// ---------------------------------------------------------------------------

/// Minimal polynomial together with a confidence flag.
///
/// `marginal` is only ever set by the approximate backend: it records that
/// some rank decision during the power-elimination landed within a factor of
/// ten of the tolerance threshold, so the reported degree should be treated
/// with suspicion.
#[derive(Clone, Debug)]
pub struct MinimalPolyReport<F: Field> {
    pub poly: Polynomial<F>,
    pub marginal: bool,
}

/// Monic least-degree annihilator of `A`.
pub fn minimal_poly<F: Field>(a: &DenseMatrix<F>, pol: &TolerancePolicy) -> Polynomial<F> {
    minimal_poly_report(a, pol).poly
}

/// As [`minimal_poly`], reporting whether any rank decision was marginal.
///
/// Vectorizes `I, A, A^2, ...` and finds the first linear dependence by
/// Gaussian elimination, tracking how each reduced vector decomposes over the
/// earlier powers so the dependence yields the polynomial directly.
pub fn minimal_poly_report<F: Field>(
    a: &DenseMatrix<F>,
    pol: &TolerancePolicy,
) -> MinimalPolyReport<F> {
    let q = a.order();
    let dim = q * q;

    // reduced basis vectors, their pivot positions, and their expression in
    // terms of the original power vectors
    let mut basis: Vec<Vec<F>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut exprs: Vec<Vec<F>> = Vec::new();
    let mut marginal = false;

    let mut power = DenseMatrix::identity(q);
    for d in 0..=q {
        let vec: Vec<F> = power.entries().to_vec();
        let col_scale = vec.iter().map(Field::magnitude).fold(0.0f64, f64::max);
        let threshold = pol.bound(col_scale);

        let mut residual = vec;
        let mut combo = vec![F::zero(); d];
        for ((b, &p), e) in basis.iter().zip(&pivots).zip(&exprs) {
            let factor = residual[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (r, bv) in residual.iter_mut().zip(b) {
                *r = r.clone() - factor.clone() * bv.clone();
            }
            for (c, ev) in combo.iter_mut().zip(e) {
                *c = c.clone() + factor.clone() * ev.clone();
            }
        }

        let (pivot, pivot_mag) = if F::EXACT {
            match residual.iter().position(|r| !r.is_zero()) {
                Some(p) => (p, residual[p].magnitude()),
                None => (0, 0.0),
            }
        } else {
            residual
                .iter()
                .map(Field::magnitude)
                .enumerate()
                .max_by(|(_, x), (_, y)| x.total_cmp(y))
                .unwrap()
        };
        let dependent = if F::EXACT {
            residual.iter().all(Zero::is_zero)
        } else {
            if pivot_mag > threshold / 10.0 && pivot_mag < threshold * 10.0 {
                marginal = true;
            }
            pivot_mag <= threshold
        };

        if dependent {
            // A^d = sum_j combo[j] A^j, so m = X^d - sum combo[j] X^j
            let mut coeffs: Vec<F> = combo.into_iter().map(|c| c.neg()).collect();
            coeffs.push(F::one());
            return MinimalPolyReport { poly: Polynomial::from_coeffs(coeffs), marginal };
        }

        // normalize so the pivot entry is one, then record
        let inv = residual[pivot].inv().unwrap();
        let normalized: Vec<F> = residual.iter().map(|r| r.clone() * inv.clone()).collect();
        let mut expr = combo.into_iter().map(|c| c.neg() * inv.clone()).collect::<Vec<_>>();
        expr.resize(d + 1, F::zero());
        expr[d] = inv.clone();
        debug_assert_eq!(normalized.len(), dim);
        basis.push(normalized);
        pivots.push(pivot);
        exprs.push(expr);

        if d < q {
            power = &power * a;
        }
    }
    unreachable!("a dependence must appear by degree q (Cayley-Hamilton)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{ApproxComplex, Rational};

    type M = DenseMatrix<Rational>;

    fn sample_4x4() -> M {
        M::from_i64_rows(&[
            &[1, 1, 1, 0],
            &[1, 1, 1, -1],
            &[0, 0, -1, 1],
            &[0, 0, 1, -1],
        ])
    }

    #[test]
    fn identity_and_zero_products() {
        let a = sample_4x4();
        let i = M::identity(4);
        let z = M::zero(4);
        assert_eq!(&i * &a, a);
        assert_eq!(&a * &z, z);
    }

    #[test]
    fn square_matches_direct_product() {
        let a = sample_4x4();
        assert_eq!(a.pow(2), &a * &a);
        assert_eq!(a.pow(0), M::identity(4));
        assert_eq!(a.pow(1), a);
    }

    /// Brute-force cofactor determinant over polynomials; the oracle for the
    /// characteristic polynomial tests.
    fn det_cofactor(rows: &[Vec<Polynomial<Rational>>]) -> Polynomial<Rational> {
        let n = rows.len();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = Polynomial::zero();
        for j in 0..n {
            if rows[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Polynomial<Rational>>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let term = &rows[0][j] * &det_cofactor(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn char_poly_oracle(a: &M) -> Polynomial<Rational> {
        let n = a.order();
        let rows: Vec<Vec<Polynomial<Rational>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let entry = Polynomial::constant(a.get(i, j).clone().neg());
                        if i == j {
                            &entry + &Polynomial::x()
                        } else {
                            entry
                        }
                    })
                    .collect()
            })
            .collect();
        det_cofactor(&rows)
    }

    #[test]
    fn char_poly_of_identity() {
        // (X - 1)^2
        let p = char_poly(&M::identity(2));
        assert_eq!(p, Polynomial::from_integers(&[1, -2, 1]));
    }

    #[test]
    fn char_poly_matches_cofactor_oracle() {
        let a = sample_4x4();
        let p = char_poly(&a);
        assert_eq!(p, char_poly_oracle(&a));
        // frozen: X^4 - 4 X^2
        assert_eq!(p, Polynomial::from_integers(&[0, 0, -4, 0, 1]));
    }

    #[test]
    fn char_poly_of_all_ones_circulant() {
        let p_val = 3usize;
        let a = M::from_fn(p_val, |_, _| Rational::integer(1));
        let p = char_poly(&a);
        assert_eq!(p, char_poly_oracle(&a));
        // frozen: X^3 - 3 X^2
        assert_eq!(p, Polynomial::from_integers(&[0, 0, -3, 1]));
    }

    #[test]
    fn hessenberg_route_agrees_with_exact() {
        let a = sample_4x4();
        let approx = a.map(|r| ApproxComplex::new(r.magnitude() * sign(r), 0.0));
        let p = char_poly(&approx);
        let expected = [0.0, 0.0, -4.0, 0.0, 1.0];
        for (i, want) in expected.iter().enumerate() {
            assert!((p.coeff(i).re() - want).abs() < 1e-9, "coeff {i}: {p}");
        }

        fn sign(r: &Rational) -> f64 {
            use num_traits::Zero;
            if r.numer() < &num_bigint::BigInt::zero() {
                -1.0
            } else {
                1.0
            }
        }
    }

    #[test]
    fn minimal_poly_examples() {
        let pol = TolerancePolicy::default();
        // X^2 (X - 2) (X + 2) = X^4 - 4X^2
        let a = sample_4x4();
        assert_eq!(
            minimal_poly(&a, &pol),
            Polynomial::from_integers(&[0, 0, -4, 0, 1])
        );
        // identity: X - 1
        assert_eq!(
            minimal_poly(&M::identity(5), &pol),
            Polynomial::from_integers(&[-1, 1])
        );
    }

    #[test]
    fn minimal_poly_of_shifted_circulant() {
        // (X - 1)(X + 1/(p-1)) for the averaging circulant with zero diagonal
        let pol = TolerancePolicy::default();
        for p_val in [2i64, 3, 5] {
            let q = p_val as usize;
            let b = DenseMatrix::from_fn(q, |i, j| {
                if i == j {
                    Rational::integer(0)
                } else {
                    Rational::from_integers(1, p_val - 1).unwrap()
                }
            });
            let m = minimal_poly(&b, &pol);
            let expected = &Polynomial::linear_root(&Rational::integer(1))
                * &Polynomial::linear_root(&Rational::from_integers(-1, p_val - 1).unwrap());
            assert_eq!(m, expected, "p = {p_val}");
        }
    }

    #[test]
    fn minimal_poly_divides_char_poly_and_annihilates() {
        let pol = TolerancePolicy::default();
        let a = sample_4x4();
        let m = minimal_poly(&a, &pol);
        let c = char_poly(&a);
        let (_, r) = c.div_rem(&m);
        assert!(r.is_zero());
        assert!(m.eval_matrix(&a).is_zero());
    }

    #[test]
    fn rank_and_inverse() {
        let pol = TolerancePolicy::default();
        let a = sample_4x4();
        assert_eq!(a.rank(&pol), 3);
        assert_eq!(M::identity(4).rank(&pol), 4);
        assert!(a.inverse(&pol).is_none());

        let b = M::from_i64_rows(&[&[1, 1, 0, 0], &[-2, 0, 1, 0], &[2, 0, 0, 1], &[-2, -1, -1, -1]]);
        let binv = b.inverse(&pol).expect("nonsingular");
        assert_eq!(&b * &binv, M::identity(4));
        assert_eq!(&binv * &b, M::identity(4));
    }
}
