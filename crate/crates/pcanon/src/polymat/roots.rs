//! Root extraction with multiplicities, per backend.
//!
//! The exact backend expects the polynomial to split over the rationals and
//! finds roots by the rational-root candidates of the primitive integer form,
//! with multiplicities by repeated deflation. The approximate backend gets
//! every complex root from the shifted-QR eigenvalues of the companion matrix
//! and then merges clusters, since perturbed multiple roots scatter.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{ApproxComplex, Field, Rational, TolerancePolicy};
use crate::polymat::{DenseMatrix, Polynomial};

/// Roots of a polynomial, pairwise distinct under the active equality, with
/// multiplicities summing to the degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RootMultiset<F: Field> {
    pub roots: Vec<(F, usize)>,
}

impl<F: Field> RootMultiset<F> {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Multiplicity of the root zero (structural zero after clustering).
    pub fn zero_multiplicity(&self) -> usize {
        self.roots
            .iter()
            .find(|(r, _)| r.is_zero())
            .map_or(0, |(_, m)| *m)
    }

    /// The nonzero roots, in canonical order.
    pub fn nonzero(&self) -> impl Iterator<Item = &(F, usize)> {
        self.roots.iter().filter(|(r, _)| !r.is_zero())
    }

    fn sort(&mut self) {
        self.roots.sort_by(|(a, _), (b, _)| a.canonical_cmp(b));
    }
}

/// Backends that can split polynomials into linear factors.
pub trait RootField: Field {
    /// All roots with multiplicity.
    ///
    /// The exact backend fails with [`Error::NonSplitField`] (naming the
    /// residual factor) when deflation leaves a nonconstant factor without a
    /// rational root. Over the complex numbers every polynomial splits.
    fn roots(p: &Polynomial<Self>, pol: &TolerancePolicy) -> Result<RootMultiset<Self>>;
}

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

impl RootField for Rational {
    fn roots(p: &Polynomial<Self>, _pol: &TolerancePolicy) -> Result<RootMultiset<Self>> {
        let deg = p
            .degree()
            .ok_or_else(|| Error::Parse("cannot extract roots of the zero polynomial".into()))?;
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        if deg == 0 {
            return Ok(RootMultiset { roots });
        }

        // strip the power of X first
        let zero_mult = p
            .coeffs()
            .iter()
            .take_while(|c| c.is_zero())
            .count();
        if zero_mult > 0 {
            roots.push((Rational::zero(), zero_mult));
        }
        let mut work = Polynomial::from_coeffs(p.coeffs()[zero_mult..].to_vec());

        while work.degree().unwrap_or(0) > 0 {
            let root = match find_rational_root(&work) {
                Some(r) => r,
                None => {
                    return Err(Error::NonSplitField { residual: work.monic().to_string() })
                }
            };
            // deflate as many times as the root divides
            let lin = Polynomial::linear_root(&root);
            let mut mult = 0;
            loop {
                let (q, r) = work.div_rem(&lin);
                if r.is_zero() {
                    work = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            debug_assert!(mult > 0);
            roots.push((root, mult));
        }

        let mut set = RootMultiset { roots };
        set.sort();
        debug_assert_eq!(set.total_multiplicity(), deg);
        Ok(set)
    }
}

/// One rational root of a nonconstant polynomial with nonzero constant term,
/// via the candidates p/q with p | a_0 and q | a_n of the primitive integer
/// form. `None` when no candidate evaluates to zero.
fn find_rational_root(p: &Polynomial<Rational>) -> Option<Rational> {
    // clear denominators, then divide by the content
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let content = ints
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();

    let trailing = ints.first().cloned().unwrap_or_else(BigInt::zero).abs();
    let leading = ints.last().cloned().unwrap().abs();
    debug_assert!(!trailing.is_zero(), "zero roots must be stripped first");

    let nums = divisors(&trailing);
    let dens = divisors(&leading);
    for num in &nums {
        for den in &dens {
            if num.gcd(den) != BigInt::one() {
                continue;
            }
            for sign in [1i64, -1] {
                let candidate =
                    Rational::new(num * BigInt::from(sign), den.clone()).unwrap();
                if p.eval(&candidate).is_zero() {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// All positive divisors, via trial-division factoring. Factors above the
/// trial bound are kept whole, which is enough for the coefficient sizes the
/// minimal polynomials in this domain produce.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.abs();
    if m.is_zero() {
        return vec![BigInt::one()];
    }
    let mut d = BigInt::from(2);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= bound {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let base = out.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk = &pk * &p;
            out.extend(base.iter().map(|d| d * &pk));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Complex doubles
// ---------------------------------------------------------------------------

/// Cluster radius floor. QR eigenvalues of a multiplicity-m root scatter like
/// eps^(1/m), so the floor must sit well above sqrt(eps) to reunite double
/// and triple roots. Distinct eigenvalues closer than this (relative to the
/// root magnitudes) are outside the supported envelope.
const CLUSTER_FLOOR: f64 = 1e-5;

impl RootField for ApproxComplex {
    fn roots(p: &Polynomial<Self>, pol: &TolerancePolicy) -> Result<RootMultiset<Self>> {
        let deg = p
            .degree()
            .ok_or_else(|| Error::Parse("cannot extract roots of the zero polynomial".into()))?;
        if deg == 0 {
            return Ok(RootMultiset { roots: Vec::new() });
        }
        let monic = p.monic();

        let raw = companion_eigenvalues(&monic)?;

        // union-find cluster merge
        let max_mag = raw.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let radius = pol.abs_eps.max(CLUSTER_FLOOR) * (1.0 + max_mag);
        let mut parent: Vec<usize> = (0..raw.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let up = parent[i];
                let root = find(parent, up);
                parent[i] = root;
            }
            parent[i]
        }
        for i in 0..raw.len() {
            for j in (i + 1)..raw.len() {
                if (raw[i] - raw[j]).norm() <= radius {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut clusters: Vec<(ApproxComplex, usize)> = Vec::new();
        let mut seen: Vec<(usize, usize)> = Vec::new(); // representative index -> cluster slot
        for i in 0..raw.len() {
            let rep = find(&mut parent, i);
            match seen.iter().find(|(r, _)| *r == rep) {
                Some(&(_, slot)) => {
                    let (sum, count) = clusters[slot];
                    clusters[slot] = (sum + raw[i], count + 1);
                }
                None => {
                    seen.push((rep, clusters.len()));
                    clusters.push((raw[i], 1));
                }
            }
        }
        // centroid representative: first-order errors of a perturbed multiple
        // root cancel in the mean
        let inv_counts: Vec<ApproxComplex> = clusters
            .iter()
            .map(|(_, c)| ApproxComplex::new(1.0 / *c as f64, 0.0))
            .collect();
        let mut roots: Vec<(ApproxComplex, usize)> = clusters
            .iter()
            .zip(inv_counts)
            .map(|(&(sum, count), inv)| (sum * inv, count))
            .collect();

        // snap near-zero representatives so the index is well-defined
        for (r, _) in roots.iter_mut() {
            if r.norm() <= radius {
                *r = ApproxComplex::zero();
            }
        }

        // polynomials with real coefficients get a conjugate-symmetric set
        let scale = monic.coeffs().iter().map(Field::magnitude).fold(0.0, f64::max);
        let real_input = monic
            .coeffs()
            .iter()
            .all(|c| c.im().abs() <= pol.abs_eps * (1.0 + scale));
        if real_input {
            symmetrize_conjugates(&mut roots, radius);
        }

        let mut set = RootMultiset { roots };
        set.sort();
        debug_assert_eq!(set.total_multiplicity(), deg);
        Ok(set)
    }
}

/// Pairs conjugate clusters and averages them; snaps nearly-real roots onto
/// the real axis.
fn symmetrize_conjugates(roots: &mut [(ApproxComplex, usize)], radius: f64) {
    for i in 0..roots.len() {
        let (r, _) = roots[i];
        if r.im().abs() <= radius {
            roots[i].0 = ApproxComplex::new(r.re(), 0.0);
        }
    }
    for i in 0..roots.len() {
        let (r, mult) = roots[i];
        if r.im() <= 0.0 {
            continue;
        }
        let target = r.conj();
        if let Some(j) = roots
            .iter()
            .position(|&(s, m)| m == mult && (s - target).norm() <= radius)
        {
            let avg = ApproxComplex::new(
                (roots[i].0.re() + roots[j].0.re()) / 2.0,
                (roots[i].0.im() - roots[j].0.im()) / 2.0,
            );
            roots[i].0 = avg;
            roots[j].0 = avg.conj();
        }
    }
}

/// Eigenvalues of the companion matrix by complex shifted QR with deflation.
/// The companion matrix is already upper Hessenberg.
fn companion_eigenvalues(monic: &Polynomial<ApproxComplex>) -> Result<Vec<ApproxComplex>> {
    let n = monic.degree().unwrap();
    let mut h = DenseMatrix::<ApproxComplex>::zero(n);
    for i in 1..n {
        h.set(i, i - 1, ApproxComplex::one());
    }
    for i in 0..n {
        h.set(i, n - 1, -monic.coeff(i));
    }

    let mut eigs = Vec::with_capacity(n);
    let mut active = n;
    let mut stall = 0usize;
    let max_iters = 40 * n * n + 100;
    let mut iters = 0usize;

    while active > 0 {
        if active == 1 {
            eigs.push(*h.get(0, 0));
            break;
        }
        // deflate any negligible subdiagonal inside the active block
        let mut deflated = false;
        for i in (0..active - 1).rev() {
            let sub = h.get(i + 1, i).norm();
            let local = h.get(i, i).norm() + h.get(i + 1, i + 1).norm();
            if sub <= f64::EPSILON * (local + 1e-300) {
                h.set(i + 1, i, ApproxComplex::zero());
                if i + 1 == active - 1 {
                    eigs.push(*h.get(active - 1, active - 1));
                    active -= 1;
                    stall = 0;
                    deflated = true;
                    break;
                }
            }
        }
        if deflated {
            continue;
        }
        if active == 2 {
            let (l1, l2) = eig_2x2(
                *h.get(0, 0),
                *h.get(0, 1),
                *h.get(1, 0),
                *h.get(1, 1),
            );
            eigs.push(l1);
            eigs.push(l2);
            break;
        }

        iters += 1;
        if iters > max_iters {
            return Err(Error::InvariantViolation(
                "companion-matrix QR failed to converge".into(),
            ));
        }

        // Wilkinson shift from the trailing 2x2, with an exceptional shift
        // every ten stalled sweeps
        stall += 1;
        let m = active;
        let shift = if stall % 10 == 0 {
            let s = h.get(m - 1, m - 2).norm();
            *h.get(m - 1, m - 1) + ApproxComplex::new(1.5 * s, 0.5 * s)
        } else {
            let (l1, l2) = eig_2x2(
                *h.get(m - 2, m - 2),
                *h.get(m - 2, m - 1),
                *h.get(m - 1, m - 2),
                *h.get(m - 1, m - 1),
            );
            let corner = *h.get(m - 1, m - 1);
            if (l1 - corner).norm() <= (l2 - corner).norm() {
                l1
            } else {
                l2
            }
        };
        qr_step(&mut h, active, shift);
    }

    Ok(eigs)
}

/// Eigenvalues of `[[a, b], [c, d]]` by the quadratic formula.
fn eig_2x2(
    a: ApproxComplex,
    b: ApproxComplex,
    c: ApproxComplex,
    d: ApproxComplex,
) -> (ApproxComplex, ApproxComplex) {
    let half = ApproxComplex::new(0.5, 0.0);
    let mean = (a + d) * half;
    let det = a * d - b * c;
    let disc = mean * mean - det;
    let sqrt = complex_sqrt(disc);
    (mean + sqrt, mean - sqrt)
}

fn complex_sqrt(z: ApproxComplex) -> ApproxComplex {
    let r = z.norm().sqrt();
    let theta = z.arg() / 2.0;
    ApproxComplex::new(r * theta.cos(), r * theta.sin())
}

/// One explicit shifted QR sweep on the leading `active` block of the
/// Hessenberg matrix `h`, via Givens rotations: `H <- R Q + shift I`.
fn qr_step(h: &mut DenseMatrix<ApproxComplex>, active: usize, shift: ApproxComplex) {
    let n = h.order();
    debug_assert!(active <= n);
    for i in 0..active {
        let v = *h.get(i, i) - shift;
        h.set(i, i, v);
    }
    // forward pass: rotations G_i acting on rows (i, i+1) kill the subdiagonal
    let mut rotations: Vec<(ApproxComplex, ApproxComplex)> = Vec::with_capacity(active - 1);
    for i in 0..active - 1 {
        let x = *h.get(i, i);
        let y = *h.get(i + 1, i);
        let norm = (x.norm().powi(2) + y.norm().powi(2)).sqrt();
        let (c, s) = if norm == 0.0 {
            (ApproxComplex::one(), ApproxComplex::zero())
        } else {
            let inv = ApproxComplex::new(1.0 / norm, 0.0);
            (x.conj() * inv, y.conj() * inv)
        };
        rotations.push((c, s));
        for col in i..active {
            let a = *h.get(i, col);
            let b = *h.get(i + 1, col);
            h.set(i, col, c * a + s * b);
            h.set(i + 1, col, -s.conj() * a + c.conj() * b);
        }
    }
    // backward pass: multiply by Q on the right (conjugate-transposed rotations)
    for (i, (c, s)) in rotations.iter().enumerate() {
        let hi = (i + 2).min(active);
        for row in 0..hi {
            let a = *h.get(row, i);
            let b = *h.get(row, i + 1);
            h.set(row, i, a * c.conj() + b * s.conj());
            h.set(row, i + 1, a * (-*s) + b * *c);
        }
    }
    for i in 0..active {
        let v = *h.get(i, i) + shift;
        h.set(i, i, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_integers(n, d).unwrap()
    }

    #[test]
    fn exact_roots_with_multiplicities() {
        let pol = TolerancePolicy::default();
        // X^2 (X - 2)(X + 2) = X^4 - 4 X^2
        let p = Polynomial::<Rational>::from_integers(&[0, 0, -4, 0, 1]);
        let roots = Rational::roots(&p, &pol).unwrap();
        assert_eq!(
            roots.roots,
            vec![
                (rat(-2, 1), 1),
                (rat(0, 1), 2),
                (rat(2, 1), 1),
            ]
        );
        assert_eq!(roots.zero_multiplicity(), 2);
    }

    #[test]
    fn exact_roots_with_fractional_root() {
        let pol = TolerancePolicy::default();
        // (X - 1)(X + 1/2), cleared: 2X^2 - X - 1
        let p = Polynomial::from_coeffs(vec![rat(-1, 2), rat(-1, 2), rat(1, 1)]);
        let roots = Rational::roots(&p, &pol).unwrap();
        assert_eq!(roots.roots, vec![(rat(-1, 2), 1), (rat(1, 1), 1)]);
    }

    #[test]
    fn non_split_names_residual() {
        let pol = TolerancePolicy::default();
        let p = Polynomial::<Rational>::from_integers(&[1, 0, 1]); // X^2 + 1
        match Rational::roots(&p, &pol) {
            Err(Error::NonSplitField { residual }) => {
                assert_eq!(residual, "X^2 + 1");
            }
            other => panic!("expected NonSplitField, got {other:?}"),
        }
        // X^2 - 2 is the canonical irrational case
        let p = Polynomial::<Rational>::from_integers(&[-2, 0, 1]);
        assert!(matches!(
            Rational::roots(&p, &pol),
            Err(Error::NonSplitField { .. })
        ));
    }

    #[test]
    fn complex_roots_of_x2_plus_1() {
        let pol = TolerancePolicy::default();
        // oracle: quadratic formula on X^2 + 1 gives exactly +/- i
        let p = Polynomial::<ApproxComplex>::from_integers(&[1, 0, 1]);
        let roots = ApproxComplex::roots(&p, &pol).unwrap();
        assert_eq!(roots.roots.len(), 2);
        let expect = [ApproxComplex::new(0.0, -1.0), ApproxComplex::new(0.0, 1.0)];
        for ((r, m), e) in roots.roots.iter().zip(expect) {
            assert_eq!(*m, 1);
            assert!((*r - e).norm() < 1e-9, "{r} vs {e}");
        }
    }

    #[test]
    fn complex_double_roots_cluster() {
        let pol = TolerancePolicy::default();
        // (X^2 + 1)^2 = X^4 + 2X^2 + 1: double roots at +/- i
        let p = Polynomial::<ApproxComplex>::from_integers(&[1, 0, 2, 0, 1]);
        let roots = ApproxComplex::roots(&p, &pol).unwrap();
        assert_eq!(roots.roots.len(), 2, "{:?}", roots.roots);
        for (r, m) in &roots.roots {
            assert_eq!(*m, 2);
            assert!((r.norm() - 1.0).abs() < 1e-9);
            assert!(r.re().abs() < 1e-9);
        }
        // conjugate symmetry restored
        assert!((roots.roots[0].0 - roots.roots[1].0.conj()).norm() == 0.0);
    }

    #[test]
    fn complex_roots_with_zero_cluster() {
        let pol = TolerancePolicy::default();
        // X (X - 2) (X - 2) = X^3 - 4X^2 + 4X
        let p = Polynomial::<ApproxComplex>::from_integers(&[0, 4, -4, 1]);
        let roots = ApproxComplex::roots(&p, &pol).unwrap();
        assert_eq!(roots.zero_multiplicity(), 1);
        let two = roots
            .roots
            .iter()
            .find(|(r, _)| (r.re() - 2.0).abs() < 1e-6)
            .unwrap();
        assert_eq!(two.1, 2);
    }

    #[test]
    fn divisor_enumeration() {
        let ds = divisors(&BigInt::from(12));
        let mut ds: Vec<i64> = ds.iter().map(|d| i64::try_from(d).unwrap()).collect();
        ds.sort();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 12]);
    }
}
