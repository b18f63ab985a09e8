use std::collections::BTreeSet;

use super::{Field, FieldElement};
use crate::error::{Error, Result};

/// Univariate polynomial in variable `x_{var}` (0-based), coefficients little-endian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    var: usize,
    coeffs: Vec<FieldElement>,
    field: Field,
}

impl UniPoly {
    pub fn new(field: &Field, var: usize, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            var,
            coeffs,
            field: field.clone(),
        }
    }

    pub fn zero(field: &Field, var: usize) -> Self {
        Self::new(field, var, Vec::new())
    }

    pub fn constant(field: &Field, var: usize, c: FieldElement) -> Self {
        Self::new(field, var, vec![c])
    }

    /// `x`.
    pub fn x(field: &Field, var: usize) -> Self {
        Self::new(field, var, vec![FieldElement::ZERO, FieldElement::ONE])
    }

    /// `prod (x - a)` over the given roots.
    pub fn from_roots(field: &Field, var: usize, roots: &[FieldElement]) -> Self {
        let mut acc = Self::constant(field, var, FieldElement::ONE);
        for &a in roots {
            acc = acc.mul(&Self::new(field, var, vec![field.neg(a), FieldElement::ONE]));
        }
        acc
    }

    /// `x^k - x`.
    pub fn frobenius_fixed(field: &Field, var: usize, k: u64) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; k as usize + 1];
        coeffs[k as usize] = FieldElement::ONE;
        coeffs[1] = field.sub(coeffs[1], FieldElement::ONE);
        Self::new(field, var, coeffs)
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    pub fn with_var(&self, var: usize) -> Self {
        UniPoly { var, ..self.clone() }
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.field;
        Self::new(f, self.var, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            self.var,
            (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            self.var,
            (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f, self.var);
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, self.var, out)
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let f = &self.field;
        let db = divisor.degree()?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElement::ZERO; rem.len().saturating_sub(db)];
        while rem.len() > db {
            let shift = rem.len() - 1 - db;
            let c = f.mul(*rem.last().unwrap(), lead_inv);
            quot[shift] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, b));
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Some((Self::new(f, self.var, quot), Self::new(f, self.var, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Option<Self> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.var != other.var {
            return Err(Error::DimensionMismatch(format!(
                "gcd of polynomials in x{} and x{}",
                self.var + 1,
                other.var + 1
            )));
        }
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroGcd);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int((i % f.p() as usize) as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// No repeated factor. Positive-degree polynomials with vanishing
    /// derivative are p-th powers and therefore not squarefree.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).map(|g| g.degree() == Some(0)).unwrap_or(false)
            }
        }
    }

    /// Roots in the whole field by exhaustive evaluation, plus the squarefree flag.
    pub fn roots(&self) -> (BTreeSet<FieldElement>, bool) {
        let roots = if self.is_zero() {
            BTreeSet::new()
        } else {
            self.field.elements().filter(|&a| self.eval(a).is_zero()).collect()
        };
        (roots, self.is_squarefree())
    }

    /// Roots in the base field F_q only.
    pub fn base_roots(&self) -> BTreeSet<FieldElement> {
        if self.is_zero() {
            return BTreeSet::new();
        }
        self.field
            .base_elements()
            .filter(|&a| self.eval(a).is_zero())
            .collect()
    }

    /// Squarefree with all `deg` roots in the field.
    pub fn splits_with_distinct_roots(&self) -> bool {
        let (roots, squarefree) = self.roots();
        squarefree && Some(roots.len()) == self.degree()
    }

    /// Renders as a polynomial in `x{var+1}`.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        if self.is_zero() {
            return "0".to_string();
        }
        let name = format!("x{}", self.var + 1);
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| match i {
                0 => f.format(c),
                1 => format!("{}*{name}", f.format(c)),
                _ => format!("{}*{name}^{i}", f.format(c)),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> UniPoly {
        UniPoly::new(f, 0, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn gcd_examples() {
        let f3 = Field::prime(3).unwrap();
        // x^3 - x and x^2 + 2
        let a = UniPoly::frobenius_fixed(&f3, 0, 3);
        let b = poly(&f3, &[2, 0, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
        // (f, 0) gives monic f
        let g = poly(&f3, &[1, 2]);
        assert_eq!(g.gcd(&UniPoly::zero(&f3, 0)).unwrap(), poly(&f3, &[2, 1]));
        assert!(matches!(
            UniPoly::zero(&f3, 0).gcd(&UniPoly::zero(&f3, 0)),
            Err(Error::ZeroGcd)
        ));

        let f4 = Field::new(2, 2, 1).unwrap();
        let t = f4.t().unwrap();
        let h = UniPoly::new(&f4, 0, vec![t, f4.one(), f4.one()]);
        let fix = UniPoly::frobenius_fixed(&f4, 0, 4);
        assert_eq!(h.gcd(&fix).unwrap(), UniPoly::constant(&f4, 0, f4.one()));
    }

    #[test]
    fn gcd_requires_same_variable() {
        let f = Field::prime(3).unwrap();
        let a = UniPoly::x(&f, 0);
        let b = UniPoly::x(&f, 1);
        assert!(a.gcd(&b).is_err());
    }

    #[test]
    fn roots_examples() {
        let f3 = Field::prime(3).unwrap();
        let (r, sf) = poly(&f3, &[2, 0, 1]).roots();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![f3.from_int(1), f3.from_int(2)]);
        assert!(sf);

        let (r, sf) = poly(&f3, &[0, 0, 1]).roots();
        assert_eq!(r.len(), 1);
        assert!(!sf);

        let f9 = Field::new(3, 1, 2).unwrap();
        let u = f9.u().unwrap();
        let (r, sf) = UniPoly::new(&f9, 0, vec![f9.one(), f9.zero(), f9.one()]).roots();
        assert!(sf);
        let expected: BTreeSet<_> = [u, f9.mul(f9.from_int(2), u)].into_iter().collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn p_th_powers_are_not_squarefree() {
        let f = Field::prime(3).unwrap();
        // x^3 + 1 = (x + 1)^3
        let g = poly(&f, &[1, 0, 0, 1]);
        assert!(g.derivative().is_zero());
        assert!(!g.is_squarefree());
    }

    #[test]
    fn from_roots_vanishes_on_roots() {
        let f = Field::new(2, 3, 1).unwrap();
        let roots: Vec<_> = f.elements().skip(2).take(3).collect();
        let g = UniPoly::from_roots(&f, 0, &roots);
        assert_eq!(g.degree(), Some(3));
        assert!(g.is_monic());
        assert!(g.splits_with_distinct_roots());
        for r in roots {
            assert!(g.eval(r).is_zero());
        }
    }
}
