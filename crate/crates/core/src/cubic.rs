//! Binary cubic forms over 𝒪_K and their covariants.
//!
//! For F = α₀x³ + α₁x²y + α₂xy² + α₃y³ the Hessian is
//! H = ¼(F_xx·F_yy − F_xy²) = (3α₀α₂ − α₁²)x² + (9α₀α₃ − α₁α₂)xy + (3α₁α₃ − α₂²)y²
//! and G = F_x·H_y − F_y·H_x. With these signs 4H³ + G² + 27·Δ_F·F² = 0.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::{divisors, factor_integer};
use crate::error::{Error, Result};
use crate::nf::{AlgInt, Fq, PrimeIdeal, QuadField, ResidueField};

/// Upper bound on residue fields scanned exhaustively.
pub const RESIDUE_SCAN_CAP: u128 = 1_000_000;

/// A homogeneous form Σ cᵢ·x^(n−i)·yⁱ of degree n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: QuadField,
    coeffs: Vec<AlgInt>,
}

impl BinaryForm {
    pub fn new(field: QuadField, coeffs: Vec<AlgInt>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(coeffs.iter().all(|c| c.field() == field));
        BinaryForm { field, coeffs }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[AlgInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AlgInt::is_zero)
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree());
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        BinaryForm::new(self.field, coeffs)
    }

    pub fn scale(&self, k: &AlgInt) -> BinaryForm {
        BinaryForm::new(self.field, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut coeffs = vec![self.field.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BinaryForm::new(self.field, coeffs)
    }

    /// ∂/∂x; the zero form of degree 0 for constants.
    pub fn partial_x(&self) -> BinaryForm {
        let n = self.degree();
        if n == 0 {
            return BinaryForm::new(self.field, vec![self.field.zero()]);
        }
        let coeffs = (0..n)
            .map(|i| self.coeffs[i].mul_int(&BigInt::from(n - i)))
            .collect();
        BinaryForm::new(self.field, coeffs)
    }

    pub fn partial_y(&self) -> BinaryForm {
        let n = self.degree();
        if n == 0 {
            return BinaryForm::new(self.field, vec![self.field.zero()]);
        }
        let coeffs = (1..=n)
            .map(|i| self.coeffs[i].mul_int(&BigInt::from(i)))
            .collect();
        BinaryForm::new(self.field, coeffs)
    }

    pub fn evaluate(&self, x: &AlgInt, y: &AlgInt) -> AlgInt {
        // homogeneous Horner: each step multiplies the earlier terms by x
        let n = self.degree();
        let mut acc = self.field.zero();
        let mut ypow = self.field.one();
        for i in 0..=n {
            acc = &acc * x + &(&self.coeffs[i] * &ypow);
            if i < n {
                ypow = &ypow * y;
            }
        }
        acc
    }

    /// The form with x and y exchanged.
    pub fn swap_xy(&self) -> BinaryForm {
        BinaryForm::new(self.field, self.coeffs.iter().rev().cloned().collect())
    }

    /// Coefficients reduced into a residue field.
    pub fn reduce_mod(&self, q: &PrimeIdeal) -> Vec<Fq> {
        self.coeffs.iter().map(|c| q.reduce(c)).collect()
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (n - i, i) {
                (0, 0) => String::new(),
                (px, 0) => pow_str("x", px),
                (0, py) => pow_str("y", py),
                (px, py) => format!("{}*{}", pow_str("x", px), pow_str("y", py)),
            };
            // rational coefficients carry their sign into the joining operator
            let negative = c.is_rational() && c.a().is_negative();
            let magnitude = if negative { -c } else { c.clone() };
            let coeff = if magnitude.is_rational() {
                magnitude.to_string()
            } else {
                format!("({magnitude})")
            };
            let term = match (mono.is_empty(), magnitude.is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}*{mono}"),
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
                (true, false) => {}
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{out}")
        }
    }
}

fn pow_str(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// F = α₀x³ + α₁x²y + α₂xy² + α₃y³.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCubic {
    form: BinaryForm,
}

/// q₀x² + q₁xy + q₂y².
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryQuadratic {
    form: BinaryForm,
}

impl BinaryCubic {
    pub fn new(coeffs: [AlgInt; 4]) -> Result<Self> {
        let field = coeffs[0].field();
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(BinaryCubic {
            form: BinaryForm::new(field, coeffs.to_vec()),
        })
    }

    /// Convenience constructor for forms over ℤ viewed in `field`.
    pub fn from_ints(field: QuadField, coeffs: [i64; 4]) -> Self {
        BinaryCubic::new(coeffs.map(|c| field.int(c))).unwrap()
    }

    pub fn from_form(form: BinaryForm) -> Result<Self> {
        if form.degree() != 3 {
            return Err(Error::Malformed(format!(
                "expected 4 coefficients, got {}",
                form.coeffs.len()
            )));
        }
        Ok(BinaryCubic { form })
    }

    pub fn field(&self) -> QuadField {
        self.form.field
    }

    pub fn coeff(&self, i: usize) -> &AlgInt {
        &self.form.coeffs[i]
    }

    pub fn coeffs(&self) -> &[AlgInt] {
        &self.form.coeffs
    }

    pub fn as_form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn evaluate(&self, x: &AlgInt, y: &AlgInt) -> AlgInt {
        self.form.evaluate(x, y)
    }

    pub fn swap_xy(&self) -> BinaryCubic {
        BinaryCubic {
            form: self.form.swap_xy(),
        }
    }

    /// Δ_F = 18α₀α₁α₂α₃ + α₁²α₂² − 27α₀²α₃² − 4α₀α₂³ − 4α₁³α₃.
    pub fn discriminant(&self) -> AlgInt {
        let [a, b, c, d] = self.parts();
        let k = |n: i64| self.field().int(n);
        &(&(&(&k(18) * &(&(a * b) * &(c * d))) + &(&(b * c) * &(b * c)))
            - &(&k(27) * &(&(a * d) * &(a * d))))
            - &(&(&k(4) * &(a * &(&(c * c) * c))) + &(&k(4) * &(&(&(b * b) * b) * d)))
    }

    pub fn hessian(&self) -> BinaryQuadratic {
        let [a, b, c, d] = self.parts();
        let k = |n: i64| self.field().int(n);
        let h0 = &(&k(3) * &(a * c)) - &(b * b);
        let h1 = &(&k(9) * &(a * d)) - &(b * c);
        let h2 = &(&k(3) * &(b * d)) - &(c * c);
        BinaryQuadratic {
            form: BinaryForm::new(self.field(), vec![h0, h1, h2]),
        }
    }

    /// G = F_x·H_y − F_y·H_x.
    pub fn covariant_g(&self) -> BinaryCubic {
        let h = self.hessian();
        let fx = self.form.partial_x();
        let fy = self.form.partial_y();
        let hx = h.form.partial_x();
        let hy = h.form.partial_y();
        let minus_one = -self.field().one();
        let g = fx.mul(&hy).add(&fy.mul(&hx).scale(&minus_one));
        BinaryCubic { form: g }
    }

    pub fn covariants(&self) -> CovariantTriple {
        CovariantTriple {
            f: self.clone(),
            h: self.hessian(),
            g: self.covariant_g(),
            disc: self.discriminant(),
        }
    }

    /// 4H³ + G² + 27·Δ_F·F², which vanishes identically.
    pub fn syzygy_residual(&self) -> BinaryForm {
        let field = self.field();
        let h = self.hessian().form;
        let g = self.covariant_g().form;
        let h3 = h.mul(&h).mul(&h).scale(&field.int(4));
        let g2 = g.mul(&g);
        let f2 = self
            .form
            .mul(&self.form)
            .scale(&(&field.int(27) * &self.discriminant()));
        h3.add(&g2).add(&f2)
    }

    /// Res(H, F) as the determinant of the 5×5 Sylvester matrix (H rows first).
    pub fn resultant_hf(&self) -> AlgInt {
        let field = self.field();
        let h = self.hessian();
        let mut m = vec![vec![field.zero(); 5]; 5];
        for r in 0..3 {
            for (j, c) in h.form.coeffs.iter().enumerate() {
                m[r][r + j] = c.clone();
            }
        }
        for r in 0..2 {
            for (j, c) in self.form.coeffs.iter().enumerate() {
                m[3 + r][r + j] = c.clone();
            }
        }
        leibniz_det(&m)
    }

    /// True iff F has no linear factor over K, i.e. F(x, 1) (or F(1, y) when
    /// α₀ = 0) has no root in K.
    ///
    /// With α₀ ≠ 0, a root x of F(x, 1) gives the algebraic integer y = α₀x,
    /// a root of the monic y³ + α₁y² + α₀α₂y + α₀²α₃. Such a y divides the
    /// constant term and is bounded by Cauchy's bound, so the candidates are
    /// elements whose norm is a small divisor of the constant term's norm.
    pub fn is_irreducible(&self) -> Result<bool> {
        let field = self.field();
        field.require_desk_scale("irreducibility testing")?;
        let [a0, a1, a2, a3] = self.parts();
        if a0.is_zero() {
            // y divides F
            return Ok(false);
        }
        let c1 = a1.clone();
        let c2 = a0 * a2;
        let c3 = &(a0 * a0) * a3;
        if c3.is_zero() {
            return Ok(false);
        }
        let g = |y: &AlgInt| &(&(&(&(y * y) * y) + &(&c1 * &(y * y))) + &(&c2 * y)) + &c3;
        let cauchy = 1.0
            + [&c1, &c2, &c3]
                .iter()
                .map(|c| c.abs_f64())
                .fold(0.0, f64::max);
        let norm_cap = BigInt::from((cauchy * cauchy).ceil() as u128 + 1);
        let n3 = c3.norm().abs();
        for n in divisors(&factor_integer(&n3)?) {
            if n > norm_cap {
                continue;
            }
            let mut cands = field.elements_of_norm(&n)?;
            if field.is_rationals() {
                cands.push(field.int(-n.clone()));
            }
            if cands.iter().any(|y| g(y).is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Factor F ≡ α₀(x − ay)²(x − by) modulo q, by exhaustive root search in
    /// the residue field. Also checks H ≡ −α₀²(a − b)²(x − ay)².
    pub fn factor_mod_q(&self, q: &PrimeIdeal) -> Result<DoubleRootFactorization> {
        let rf = q.residue_field();
        if rf.size() > RESIDUE_SCAN_CAP {
            return Err(Error::CapExceeded {
                size: rf.size(),
                cap: RESIDUE_SCAN_CAP,
            });
        }
        let two_a0 = self.coeff(0).mul_int(&BigInt::from(2));
        if q.divides(&two_a0) {
            return Err(Error::Degenerate(format!("{q} divides 2*alpha0")));
        }
        let f = self.form.reduce_mod(q);
        let roots = residue_roots(&rf, &f);
        let mut double = None;
        let mut simple = None;
        for (r, m) in roots {
            match m {
                2 => double = Some(r),
                1 => simple = Some(r),
                _ => {}
            }
        }
        let (Some(a), Some(b)) = (double, simple) else {
            return Err(Error::NotDoubleRoot);
        };

        let a0 = f[0];
        let xa = [rf.one(), rf.neg(a)];
        let xb = [rf.one(), rf.neg(b)];
        let sq = poly_mul(&rf, &xa, &xa);
        let expanded: Vec<Fq> = poly_mul(&rf, &sq, &xb)
            .into_iter()
            .map(|c| rf.mul(a0, c))
            .collect();
        let cubic_ok = expanded == f;

        let h = self.hessian().form.reduce_mod(q);
        let amb = rf.sub(a, b);
        let k = rf.neg(rf.mul(rf.square(a0), rf.square(amb)));
        let expected_h: Vec<Fq> = sq.iter().map(|&c| rf.mul(k, c)).collect();
        let hessian_ok = expected_h == h;
        Ok(DoubleRootFactorization {
            a,
            b,
            cubic_congruence: cubic_ok,
            hessian_congruence: hessian_ok,
        })
    }

    fn parts(&self) -> [&AlgInt; 4] {
        let c = &self.form.coeffs;
        [&c[0], &c[1], &c[2], &c[3]]
    }
}

impl fmt::Display for BinaryCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.form.fmt(f)
    }
}

impl BinaryQuadratic {
    pub fn new(coeffs: [AlgInt; 3]) -> Result<Self> {
        let field = coeffs[0].field();
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(BinaryQuadratic {
            form: BinaryForm::new(field, coeffs.to_vec()),
        })
    }

    pub fn coeff(&self, i: usize) -> &AlgInt {
        &self.form.coeffs[i]
    }

    pub fn coeffs(&self) -> &[AlgInt] {
        &self.form.coeffs
    }

    pub fn as_form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn evaluate(&self, x: &AlgInt, y: &AlgInt) -> AlgInt {
        self.form.evaluate(x, y)
    }
}

impl fmt::Display for BinaryQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.form.fmt(f)
    }
}

/// F together with H, G and Δ_F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovariantTriple {
    pub f: BinaryCubic,
    pub h: BinaryQuadratic,
    pub g: BinaryCubic,
    pub disc: AlgInt,
}

/// Residues a (double root) and b (simple root) of F(x, 1) modulo q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleRootFactorization {
    pub a: Fq,
    pub b: Fq,
    pub cubic_congruence: bool,
    pub hessian_congruence: bool,
}

fn leibniz_det(m: &[Vec<AlgInt>]) -> AlgInt {
    let n = m.len();
    let field = m[0][0].field();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = field.zero();
    permute(&mut perm, 0, &mut |p| {
        if p.iter().enumerate().any(|(i, &j)| m[i][j].is_zero()) {
            return;
        }
        let mut term = field.one();
        for (i, &j) in p.iter().enumerate() {
            term = &term * &m[i][j];
        }
        if permutation_is_odd(p) {
            total = &total - &term;
        } else {
            total = &total + &term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Multiply polynomials given from the leading coefficient down.
fn poly_mul(rf: &ResidueField, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let mut out = vec![rf.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = rf.add(out[i + j], rf.mul(x, y));
        }
    }
    out
}

/// Divide by (x − r), returning the quotient; the remainder must vanish.
fn deflate(rf: &ResidueField, f: &[Fq], r: Fq) -> Vec<Fq> {
    let mut out = Vec::with_capacity(f.len() - 1);
    let mut acc = rf.zero();
    for &c in &f[..f.len() - 1] {
        acc = rf.add(rf.mul(acc, r), c);
        out.push(acc);
    }
    out
}

/// Roots of a polynomial (leading coefficient nonzero) with multiplicities.
pub(crate) fn residue_roots(rf: &ResidueField, f: &[Fq]) -> Vec<(Fq, usize)> {
    let mut out = Vec::new();
    for x in rf.elements() {
        if rf.eval_poly(f, x) != rf.zero() {
            continue;
        }
        let mut g = f.to_vec();
        let mut m = 0;
        while g.len() > 1 && rf.eval_poly(&g, x) == rf.zero() {
            g = deflate(rf, &g, x);
            m += 1;
        }
        out.push((x, m));
    }
    out
}

#[cfg(test)]
mod tests {
    use num_traits::ToPrimitive;

    use super::*;
    use crate::nf::factor_rational_prime;

    fn q() -> QuadField {
        QuadField::rationals()
    }

    fn ints(f: &BinaryForm) -> Vec<i64> {
        f.coeffs().iter().map(|c| c.a().to_i64().unwrap()).collect()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            BinaryCubic::from_ints(q(), [1, 0, 0, 1]).discriminant(),
            q().int(-27)
        );
        assert_eq!(
            BinaryCubic::from_ints(q(), [1, 1, 1, 1]).discriminant(),
            q().int(-16)
        );
        assert_eq!(
            BinaryCubic::from_ints(q(), [0, 1, 1, 0]).discriminant(),
            q().int(1)
        );
        assert_eq!(
            BinaryCubic::from_ints(q(), [1, 1, 0, 1]).discriminant(),
            q().int(-31)
        );
    }

    #[test]
    fn covariant_examples() {
        let f = BinaryCubic::from_ints(q(), [1, 0, 0, 1]);
        assert_eq!(ints(f.hessian().as_form()), vec![0, 9, 0]);
        assert_eq!(ints(f.covariant_g().as_form()), vec![27, 0, 0, -27]);
        let cube = BinaryCubic::from_ints(q(), [1, 0, 0, 0]);
        assert!(cube.hessian().as_form().is_zero());
        assert!(cube.covariant_g().as_form().is_zero());
        assert!(cube.syzygy_residual().is_zero());
        // the mixed coefficient 9α₀α₃ − α₁α₂ is 8 here
        let all_ones = BinaryCubic::from_ints(q(), [1, 1, 1, 1]);
        assert_eq!(ints(all_ones.hessian().as_form()), vec![2, 8, 2]);
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(
            BinaryCubic::from_ints(q(), [1, 0, 0, 1]).resultant_hf(),
            q().int(-729)
        );
        assert_eq!(
            BinaryCubic::from_ints(q(), [1, 1, 1, 1]).resultant_hf(),
            q().int(-256)
        );
        assert_eq!(
            BinaryCubic::from_ints(q(), [0, 1, 1, 0]).resultant_hf(),
            q().int(-1)
        );
    }

    #[test]
    fn irreducibility_examples() {
        assert!(!BinaryCubic::from_ints(q(), [1, 1, 1, 1])
            .is_irreducible()
            .unwrap());
        assert!(BinaryCubic::from_ints(q(), [1, 0, 0, -2])
            .is_irreducible()
            .unwrap());
        let k = QuadField::new(-5).unwrap();
        assert!(!BinaryCubic::from_ints(k, [1, 0, 0, 1])
            .is_irreducible()
            .unwrap());
        // x³ − 2y³ stays irreducible over ℚ(√−5); 2x³ − 1 has no rational root
        assert!(BinaryCubic::from_ints(k, [1, 0, 0, -2])
            .is_irreducible()
            .unwrap());
        assert!(BinaryCubic::from_ints(q(), [2, 0, 0, -1])
            .is_irreducible()
            .unwrap());
        // (2x − y)(x² + y²) has the rational root x = 1/2
        assert!(!BinaryCubic::from_ints(q(), [2, -1, 2, -1])
            .is_irreducible()
            .unwrap());
        // x² + y² splits over ℚ(i) but the cubic needs a linear factor: (x − y)(x² + y²)
        let qi = QuadField::new(-1).unwrap();
        assert!(!BinaryCubic::from_ints(qi, [1, -1, 1, -1])
            .is_irreducible()
            .unwrap());
        assert!(
            BinaryCubic::from_ints(QuadField::new(3).unwrap(), [1, 0, 0, 1])
                .is_irreducible()
                .is_err()
        );
    }

    #[test]
    fn factor_mod_q_examples() {
        let p31 = factor_rational_prime(q(), 31)[0].0.clone();
        let f = BinaryCubic::from_ints(q(), [1, 1, 0, 1]);
        let fac = f.factor_mod_q(&p31).unwrap();
        assert_ne!(fac.a, fac.b);
        assert!(fac.cubic_congruence && fac.hessian_congruence);

        let p3 = factor_rational_prime(q(), 3)[0].0.clone();
        let sum = BinaryCubic::from_ints(q(), [1, 0, 0, 1]);
        assert_eq!(sum.factor_mod_q(&p3), Err(Error::NotDoubleRoot));

        // x³ − 2 is irreducible mod 7 (2 is not a cube mod 7)
        let p7 = factor_rational_prime(q(), 7)[0].0.clone();
        let cr = BinaryCubic::from_ints(q(), [1, 0, 0, -2]);
        assert_eq!(cr.factor_mod_q(&p7), Err(Error::NotDoubleRoot));

        let p2 = factor_rational_prime(q(), 2)[0].0.clone();
        assert!(matches!(sum.factor_mod_q(&p2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn evaluate_examples() {
        let f = BinaryCubic::from_ints(q(), [1, 0, 0, -2]);
        assert_eq!(f.evaluate(&q().int(3), &q().int(2)), q().int(11));
        let g = BinaryCubic::from_ints(q(), [1, 0, 0, 1]);
        assert_eq!(g.evaluate(&q().int(1), &q().int(0)), q().int(1));
        let k = QuadField::new(-5).unwrap();
        let f = BinaryCubic::from_ints(k, [2, -1, 3, 5]);
        let (x, y, xi) = (
            k.elem(1, 2).unwrap(),
            k.elem(-3, 1).unwrap(),
            k.elem(2, -1).unwrap(),
        );
        assert_eq!(
            f.evaluate(&(&xi * &x), &(&xi * &y)),
            &xi.pow(3) * &f.evaluate(&x, &y)
        );
    }
}
