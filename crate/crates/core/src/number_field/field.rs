//! A single number field ℚ(α) ≅ ℚ[x]/(f) with its complex embeddings.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational_core::mp::{self, Cplx};
use crate::rational_core::ratmat::{self, RatMatrix};
use crate::rational_core::roots::{certified_roots, RootPair};
use crate::rational_core::RationalPoly;

/// Which member of the tower an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    K,
    L,
}

impl FieldTag {
    pub fn generator_name(self) -> &'static str {
        match self {
            FieldTag::K => "φ",
            FieldTag::L => "θ",
        }
    }
}

/// An element of k or l: a polynomial residue in the field generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    owner: FieldTag,
    coeffs: RationalPoly,
}

impl FieldElement {
    pub(crate) fn from_reduced(owner: FieldTag, coeffs: RationalPoly) -> Self {
        FieldElement { owner, coeffs }
    }

    pub fn owner(&self) -> FieldTag {
        self.owner
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.coeffs
    }

    /// Power-basis coordinates padded with zeros to length `n`.
    pub fn coeff_vec(&self, n: usize) -> Vec<BigRational> {
        (0..n).map(|i| self.coeffs.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == RationalPoly::one()
    }

    /// The element as a rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.coeffs.coeff(0)),
            _ => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.coeffs.to_string_in(self.owner.generator_name()))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.owner, self)
    }
}

/// ℚ[x]/(minpoly) together with the certified complex roots of `minpoly`.
#[derive(Debug, Clone)]
pub struct NumberField {
    tag: FieldTag,
    minpoly: RationalPoly,
    degree: usize,
    embeddings: RootPair,
}

impl NumberField {
    /// Checks that `minpoly` is monic, nonconstant and squarefree and isolates
    /// its roots.
    pub fn new(tag: FieldTag, minpoly: RationalPoly, precision_bits: usize) -> Result<Self> {
        let degree = match minpoly.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::input("minimal polynomial must be nonconstant")),
        };
        if !minpoly.is_monic() {
            return Err(Error::input("minimal polynomial must be monic"));
        }
        if !minpoly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let (_, ints) = minpoly.primitive_part()?;
        let embeddings = certified_roots(&ints, precision_bits)?;
        Ok(NumberField { tag, minpoly, degree, embeddings })
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn minpoly(&self) -> &RationalPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn embeddings(&self) -> &RootPair {
        &self.embeddings
    }

    pub fn precision_bits(&self) -> usize {
        self.embeddings.precision_bits()
    }

    /// Number of real embeddings.
    pub fn real_embeddings(&self) -> usize {
        self.embeddings.lo.iter().filter(|r| r.is_real).count()
    }

    /// Unit rank `r1 + r2 - 1`.
    pub fn unit_rank(&self) -> usize {
        let r1 = self.real_embeddings();
        r1 + (self.degree - r1) / 2 - 1
    }

    pub fn element(&self, poly: RationalPoly) -> FieldElement {
        let reduced = poly.rem(&self.minpoly).expect("minimal polynomial is nonzero");
        FieldElement::from_reduced(self.tag, reduced)
    }

    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> Result<FieldElement> {
        if coeffs.len() > self.degree {
            return Err(Error::input(format!(
                "element has {} coefficients but the field has degree {}",
                coeffs.len(),
                self.degree
            )));
        }
        Ok(FieldElement::from_reduced(self.tag, RationalPoly::new(coeffs)))
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        FieldElement::from_reduced(self.tag, RationalPoly::constant(q))
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_reduced(self.tag, RationalPoly::zero())
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The class of `x`.
    pub fn generator(&self) -> FieldElement {
        self.element(RationalPoly::x())
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.owner != self.tag {
            return Err(Error::CrossField);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement::from_reduced(self.tag, a.coeffs.add(&b.coeffs)))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement::from_reduced(self.tag, a.coeffs.sub(&b.coeffs)))
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement::from_reduced(a.owner, a.coeffs.neg())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.element(a.coeffs.mul(&b.coeffs)))
    }

    pub fn scale(&self, a: &FieldElement, q: &BigRational) -> FieldElement {
        FieldElement::from_reduced(a.owner, a.coeffs.scale(q))
    }

    /// Inverse through the extended gcd with the minimal polynomial.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = a.coeffs.ext_gcd(&self.minpoly);
        if g.degree() != Some(0) {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.element(s))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.mul(a, &self.inv(b)?)
    }

    /// `a^n` for any integer `n` (negative powers invert first).
    pub fn pow(&self, a: &FieldElement, n: i64) -> Result<FieldElement> {
        self.check(a)?;
        let mut base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `a` on the power basis; column `j` holds
    /// the coordinates of `a * x^j`.
    pub fn mult_matrix(&self, a: &FieldElement) -> RatMatrix {
        let n = self.degree;
        let mut m = ratmat::zeros(n, n);
        let mut col = a.coeffs.clone();
        for j in 0..n {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = col.mul(&RationalPoly::x()).rem(&self.minpoly).expect("nonzero modulus");
        }
        m
    }

    /// Characteristic polynomial of multiplication by `a`, via
    /// Faddeev–LeVerrier.
    pub fn char_poly(&self, a: &FieldElement) -> RationalPoly {
        let n = self.degree;
        let am = self.mult_matrix(a);
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut mk = ratmat::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = ratmat::mat_mul(&am, &mk);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &c[n - k + 1];
            }
            let amk = ratmat::mat_mul(&am, &next);
            let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + &amk[i][i]);
            c[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
            mk = next;
        }
        RationalPoly::new(c)
    }

    /// Norm down to ℚ.
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        ratmat::determinant(&self.mult_matrix(a))
    }

    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let m = self.mult_matrix(a);
        (0..self.degree).fold(BigRational::zero(), |acc, i| acc + &m[i][i])
    }

    /// Algebraic integer test: the characteristic polynomial has integer
    /// coefficients.
    pub fn is_integral(&self, a: &FieldElement) -> bool {
        self.char_poly(a).has_integer_coeffs()
    }

    /// Integral with norm ±1.
    pub fn is_unit(&self, a: &FieldElement) -> bool {
        !a.is_zero() && self.is_integral(a) && self.norm(a).abs().is_one()
    }

    /// Image of `a` under embedding `idx`, at working precision (`high =
    /// false`) or twice the working precision.
    pub fn embed(&self, a: &FieldElement, idx: usize, high: bool) -> Cplx {
        let (root, p) = if high {
            (&self.embeddings.hi[idx], self.embeddings.hi[idx].precision_bits)
        } else {
            (&self.embeddings.lo[idx], self.embeddings.lo[idx].precision_bits)
        };
        mp::eval_rational(a.coeffs.coeffs(), &root.value, p)
    }

    /// Image of `a` under embedding `idx` as a pair of `f64`.
    pub fn embed_f64(&self, a: &FieldElement, idx: usize) -> (f64, f64) {
        self.embed(a, idx, false).to_f64()
    }

    /// Horner evaluation of a rational polynomial at a field element.
    pub fn eval_poly(&self, p: &RationalPoly, a: &FieldElement) -> Result<FieldElement> {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, a)?, &self.from_rational(c.clone()))?;
        }
        Ok(acc)
    }
}
