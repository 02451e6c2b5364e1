//! Dense univariate polynomials, ascending coefficient order.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::numeric::{Field, TolerancePolicy};
use crate::polymat::DenseMatrix;

/// `coeffs[i]` is the coefficient of `X^i`. Canonical form: empty vector for
/// the zero polynomial, nonzero last element otherwise.
#[derive(Clone, PartialEq)]
pub struct Polynomial<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![F::one()] }
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Polynomial { coeffs: vec![F::zero(), F::one()] }
    }

    /// `X - r`.
    pub fn linear_root(r: &F) -> Self {
        Polynomial { coeffs: vec![r.clone().neg(), F::one()] }
    }

    /// Builds from ascending coefficients, stripping trailing structural zeros.
    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| F::from_i64(c)).collect())
    }

    /// `prod (X - lambda)^mult` over the given root multiset.
    pub fn from_root_multiplicities(roots: &[(F, usize)]) -> Self {
        let mut p = Self::one();
        for (root, mult) in roots {
            let lin = Self::linear_root(root);
            for _ in 0..*mult {
                p = &p * &lin;
            }
        }
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| c.clone() == F::one())
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Self {
        match self.leading().and_then(Field::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &DenseMatrix<F>) -> DenseMatrix<F> {
        let mut acc = DenseMatrix::zero(a.order());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &DenseMatrix::scalar(a.order(), c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor
            .leading()
            .unwrap()
            .inv()
            .expect("leading coefficient must be invertible");
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone() * lead_inv.clone();
            if q.is_zero() {
                continue;
            }
            quot[i - dd] = q.clone();
            for j in 0..=dd {
                rem[i - dd + j] =
                    rem[i - dd + j].clone() - q.clone() * divisor.coeffs[j].clone();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Monic gcd by the Euclidean algorithm. Intended for the exact backend.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Coefficients of `p(r + h)` in powers of `h`, up to `h^(order-1)`.
    ///
    /// Computed by repeated synthetic division by `(X - r)`.
    pub fn taylor_at(&self, r: &F, order: usize) -> Vec<F> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order);
        for _ in 0..order {
            if work.is_empty() {
                out.push(F::zero());
                continue;
            }
            // synthetic division: work = q(X)*(X - r) + rem
            let mut carry = F::zero();
            for c in work.iter_mut().rev() {
                carry = carry * r.clone() + c.clone();
                *c = carry.clone();
            }
            let rem = work.remove(0);
            out.push(rem);
        }
        out
    }

    /// Number of trailing zero coefficients, i.e. the multiplicity of the
    /// root 0 (with tolerance-based pruning in the approximate backend).
    pub fn zero_root_multiplicity(&self, pol: &TolerancePolicy) -> usize {
        let scale = self
            .coeffs
            .iter()
            .map(Field::magnitude)
            .fold(0.0f64, f64::max);
        self.coeffs
            .iter()
            .take_while(|c| c.is_negligible(pol, scale))
            .count()
    }

    pub fn eq_with(&self, other: &Self, pol: &TolerancePolicy) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i).eq_with(&other.coeff(i), pol))
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    /// Descending-degree display, e.g. `X^2 - 4` or `X^2 + [0, 1]*X`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = F::one();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let is_one = c.clone() == one;
            let is_neg_one = (c.clone() + one.clone()).is_zero();
            let (sign, body) = if is_neg_one {
                ("-", "1".to_string())
            } else {
                let lit = c.literal();
                match lit.strip_prefix('-') {
                    Some(rest) => ("-", rest.to_string()),
                    None => ("+", lit),
                }
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{body}")?,
                _ if is_one || is_neg_one => {}
                _ => write!(f, "{body}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;

    type P = Polynomial<Rational>;

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = P::from_integers(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(P::from_integers(&[0]).is_zero());
        assert_eq!(P::zero().degree(), None);
    }

    #[test]
    fn display_examples() {
        let p = P::from_integers(&[-4, 0, 1]);
        assert_eq!(p.to_string(), "X^2 - 4");
        let q = P::from_integers(&[0, -1, 0, 2]);
        assert_eq!(q.to_string(), "2*X^3 - X");
        assert_eq!(P::from_integers(&[3]).to_string(), "3");
    }

    #[test]
    fn div_rem_is_exact() {
        let num = P::from_integers(&[-4, 0, 1]); // X^2 - 4
        let den = P::from_integers(&[-2, 1]); // X - 2
        let (q, r) = num.div_rem(&den);
        assert!(r.is_zero());
        assert_eq!(q, P::from_integers(&[2, 1]));
    }

    #[test]
    fn taylor_expansion() {
        // p = X^2, around 3: 9 + 6h + h^2
        let p = P::from_integers(&[0, 0, 1]);
        let t = p.taylor_at(&Rational::integer(3), 3);
        assert_eq!(t, vec![
            Rational::integer(9),
            Rational::integer(6),
            Rational::integer(1)
        ]);
    }

    #[test]
    fn gcd_of_common_factor() {
        let a = P::from_integers(&[-1, 0, 1]); // (X-1)(X+1)
        let b = P::from_integers(&[-1, 1]); // X - 1
        assert_eq!(a.gcd(&b), b);
    }
}
