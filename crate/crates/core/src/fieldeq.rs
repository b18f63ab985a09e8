//! Field equations `E = {x_i^q - x_i}`, their expanded form `E'` made of
//! cyclic p-power chains in `n*m` variables, and the gcd membership witness.

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, UniPoly};
use crate::lastfall::Filtration;
use crate::limits::Limits;
use crate::mpoly::{span_coords, Monomial, MultiPoly, PolySystem};

/// `{x_i^q - x_i : i = 1..n}`.
pub fn field_equations(n: usize, field: &Field, limits: &Limits) -> Result<PolySystem> {
    let q = field.q();
    if q > limits.degree {
        return Err(Error::cap("field equation degree", q, limits.degree));
    }
    let polys = (0..n)
        .map(|i| {
            MultiPoly::from_unipoly(n, &UniPoly::frobenius_fixed(field, i, q as u64))
        })
        .collect();
    PolySystem::new(field, n, polys)
}

/// `E'` over `n*m` variables `x_{ij}`, flat index `j*n + i`.
#[derive(Clone, Debug)]
pub struct ExpandedSystem {
    n: usize,
    m: usize,
    polys: PolySystem,
}

impl ExpandedSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Flat column of `x_{ij}`.
    pub fn var(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    pub fn system(&self) -> &PolySystem {
        &self.polys
    }
}

/// `x_{ij}^p - x_{i,j+1}` with `j+1` taken mod `m`, ordered by `i` then `j`.
pub fn expanded_field_equations(n: usize, field: &Field) -> ExpandedSystem {
    let m = field.m();
    let nm = n * m;
    let p = field.p() as u16;
    let mut polys = Vec::with_capacity(nm);
    for i in 0..n {
        for j in 0..m {
            let mut e = vec![0u16; nm];
            e[j * n + i] = p;
            let mut f = MultiPoly::term(field, Monomial::new(e), FieldElement::ONE);
            f.add_term(Monomial::var(nm, ((j + 1) % m) * n + i), field.neg(field.one()));
            polys.push(f);
        }
    }
    ExpandedSystem {
        n,
        m,
        polys: PolySystem::new(field, nm, polys).expect("uniform"),
    }
}

/// Renames `x_i` to `x_{i0}`.
pub fn lift_system(g: &PolySystem, x: &ExpandedSystem) -> Result<PolySystem> {
    if g.n() != x.n || g.field() != x.polys.field() {
        return Err(Error::DimensionMismatch(format!(
            "system in {} variables against an expansion of {}",
            g.n(),
            x.n
        )));
    }
    let map: Vec<usize> = (0..x.n).map(|i| x.var(i, 0)).collect();
    let polys = g
        .polys()
        .iter()
        .map(|f| f.rename(x.n * x.m, &map))
        .collect::<Result<_>>()?;
    PolySystem::new(g.field(), x.n * x.m, polys)
}

/// `g = gcd(f, x^q - x)` together with its membership in `V_{F,i}` for the
/// chain system `F = {f(x_0)} ∪ E'`.
#[derive(Clone, Debug)]
pub struct FallWitness {
    pub g: UniPoly,
    /// Smallest level at which `g` is in the filtration.
    pub degree: u32,
    /// Basis of the filtration at `degree`.
    pub basis: Vec<MultiPoly>,
    /// `g = sum coords[k] * basis[k]`.
    pub coords: Vec<FieldElement>,
}

pub fn gcd_fall_witness(f: &UniPoly, limits: &Limits) -> Result<FallWitness> {
    let field = f.field();
    let d = match f.degree() {
        Some(d) if d >= 1 => d as u32,
        _ => return Err(Error::Precondition("witness needs a positive-degree polynomial".into())),
    };
    let f = f.with_var(0);
    let g = f.gcd(&UniPoly::frobenius_fixed(field, 0, field.q() as u64))?;
    let x = expanded_field_equations(1, field);
    let chain = PolySystem::new(field, field.m(), vec![MultiPoly::from_unipoly(field.m(), &f)])?
        .union(x.system())?;
    let bound = d * field.p();
    let target = MultiPoly::from_unipoly(field.m(), &g);
    let mut filt = Filtration::new(&chain, bound, limits)?;
    while filt.advance().is_some() {
        if filt.contains(&target) {
            let basis = filt.basis();
            let coords = span_coords(&target, &basis)?.expect("member of the span");
            return Ok(FallWitness {
                g,
                degree: filt.level().expect("advanced"),
                basis,
                coords,
            });
        }
    }
    Err(Error::WitnessNotFound { degree: bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::combine;
    use crate::mpoly::support_of;
    use crate::points::zero_set_exhaustive;

    fn p(f: &Field, n: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(f, n, s).unwrap()
    }

    #[test]
    fn field_equation_examples() {
        let l = Limits::default();
        let f3 = Field::prime(3).unwrap();
        let e = field_equations(2, &f3, &l).unwrap();
        assert_eq!(e.polys(), &[p(&f3, 2, "x1^3 - x1"), p(&f3, 2, "x2^3 - x2")]);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(field_equations(1, &f2, &l).unwrap().polys(), &[p(&f2, 1, "x1^2 - x1")]);
        assert_eq!(zero_set_exhaustive(&e, 1, false, &l).unwrap().len(), 9);
    }

    #[test]
    fn expanded_examples() {
        let l = Limits::default();
        let f4 = Field::new(2, 2, 1).unwrap();
        let x = expanded_field_equations(1, &f4);
        assert_eq!(x.system().polys(), &[p(&f4, 2, "x1^2 - x2"), p(&f4, 2, "x2^2 - x1")]);

        let f9 = Field::new(3, 2, 1).unwrap();
        let x = expanded_field_equations(2, &f9);
        assert_eq!(x.system().len(), 4);
        assert!(x.system().polys().iter().all(|f| f.degree() == Some(3) && f.num_terms() == 2));
        assert_eq!(x.var(1, 1), 3);

        let f5 = Field::prime(5).unwrap();
        assert_eq!(
            expanded_field_equations(2, &f5).system(),
            &field_equations(2, &f5, &l).unwrap()
        );
    }

    #[test]
    fn lift_examples() {
        let l = Limits::default();
        let f4 = Field::new(2, 2, 1).unwrap();
        let x = expanded_field_equations(1, &f4);
        let g = PolySystem::new(&f4, 1, vec![p(&f4, 1, "x1^2 + t")]).unwrap();
        let lifted = lift_system(&g, &x).unwrap();
        assert_eq!(lifted.polys(), &[p(&f4, 2, "x1^2 + t")]);
        assert!(lift_system(&PolySystem::empty(&f4, 1), &x).unwrap().is_empty());

        // Zeros of the lift with E' project bijectively onto the rational zeros.
        let all = lifted.union(x.system()).unwrap();
        let z = zero_set_exhaustive(&all, 1, false, &l).unwrap();
        let base = zero_set_exhaustive(&g.union(&field_equations(1, &f4, &l).unwrap()).unwrap(), 1, false, &l)
            .unwrap();
        assert_eq!(z.project(&[0]).unwrap().sorted(), base);
    }

    #[test]
    fn witness_examples() {
        let l = Limits::default();
        let f4 = Field::new(2, 2, 1).unwrap();
        let t = f4.t().unwrap();
        let f = UniPoly::new(&f4, 0, vec![t, f4.one(), f4.one()]);
        let w = gcd_fall_witness(&f, &l).unwrap();
        assert_eq!(w.g, UniPoly::constant(&f4, 0, f4.one()));
        assert!(w.degree <= 4);
        let monos = support_of(&w.basis);
        let vecs: Vec<_> = w.basis.iter().map(|b| b.coeff_vector(&monos)).collect();
        let rebuilt = MultiPoly::from_coeff_vector(&f4, 2, &monos, &combine(&f4, &w.coords, &vecs));
        assert_eq!(rebuilt, MultiPoly::constant(&f4, 2, f4.one()));

        let f3 = Field::prime(3).unwrap();
        let f = UniPoly::new(&f3, 0, vec![f3.from_int(2), f3.zero(), f3.one()]);
        let w = gcd_fall_witness(&f, &l).unwrap();
        assert_eq!(w.g, f);
        assert_eq!(w.degree, 2);

        let f8 = Field::new(2, 3, 1).unwrap();
        let roots: Vec<_> = f8.elements().skip(2).take(3).collect();
        let f = UniPoly::from_roots(&f8, 0, &roots);
        let w = gcd_fall_witness(&f, &l).unwrap();
        assert_eq!(w.g, f);
    }
}
