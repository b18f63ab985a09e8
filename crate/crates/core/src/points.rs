//! Finite point sets, product sets, exhaustive zero sets and vanishing-ideal
//! slices `I(W)_{<=d}`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::gf::{Field, FieldElement};
use crate::limits::Limits;
use crate::mpoly::{LinearMap, Monomial, MultiPoly, PolySystem};

pub type Point = Vec<FieldElement>;

/// Distinct points of a common dimension over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    n: usize,
    field: Field,
    pts: Vec<Point>,
}

impl PointSet {
    /// Rejects duplicates, wrong lengths and coordinates outside the field.
    pub fn new(field: &Field, n: usize, pts: Vec<Point>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &pts {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "point of length {} in a set of dimension {n}",
                    p.len()
                )));
            }
            if p.iter().any(|&x| !field.contains(x)) {
                return Err(Error::InvalidField("coordinate outside the field".into()));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::Precondition(format!(
                    "duplicate point ({})",
                    p.iter().map(|&x| field.format(x)).collect::<Vec<_>>().join(", ")
                )));
            }
        }
        Ok(PointSet {
            n,
            field: field.clone(),
            pts,
        })
    }

    pub fn empty(field: &Field, n: usize) -> Self {
        PointSet {
            n,
            field: field.clone(),
            pts: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn contains(&self, p: &[FieldElement]) -> bool {
        self.pts.iter().any(|q| q == p)
    }

    pub fn to_set(&self) -> BTreeSet<Point> {
        self.pts.iter().cloned().collect()
    }

    /// Same points, in lexicographic order of element indices.
    pub fn sorted(&self) -> PointSet {
        let mut pts = self.pts.clone();
        pts.sort();
        PointSet { pts, ..self.clone() }
    }

    pub fn same_set(&self, other: &PointSet) -> bool {
        self.n == other.n && self.field == other.field && self.to_set() == other.to_set()
    }

    /// `lambda(W)`; fails if two points collide (singular map).
    pub fn image(&self, lambda: &LinearMap) -> Result<PointSet> {
        if lambda.n() != self.n {
            return Err(Error::DimensionMismatch("map and point set".into()));
        }
        let pts = self
            .pts
            .iter()
            .map(|p| lambda.apply(p))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(&self.field, self.n, pts)
    }

    /// Moves the points into a field containing this one.
    pub fn embed(&self, target: &Field) -> Result<PointSet> {
        let table = self.field.embedding_into(target)?;
        Ok(PointSet {
            n: self.n,
            field: target.clone(),
            pts: self
                .pts
                .iter()
                .map(|p| p.iter().map(|&x| table[x.index() as usize]).collect())
                .collect(),
        })
    }

    /// Coordinate projection onto the listed indices (duplicates in the
    /// image are an error).
    pub fn project(&self, coords: &[usize]) -> Result<PointSet> {
        let pts = self
            .pts
            .iter()
            .map(|p| coords.iter().map(|&i| p[i]).collect())
            .collect();
        PointSet::new(&self.field, coords.len(), pts)
    }

    /// Values taken by coordinate `i`.
    pub fn coordinate_values(&self, i: usize) -> BTreeSet<FieldElement> {
        self.pts.iter().map(|p| p[i]).collect()
    }
}

/// Cartesian product `V_1 x ... x V_n`, lexicographic.
pub fn product_set(field: &Field, sets: &[Vec<FieldElement>], limits: &Limits) -> Result<PointSet> {
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::Precondition("empty component set".into()));
    }
    let size = sets
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    if size > limits.enumeration as u128 {
        return Err(Error::cap("product set size", size, limits.enumeration));
    }
    let mut pts: Vec<Point> = vec![Vec::new()];
    for s in sets {
        pts = pts
            .into_iter()
            .flat_map(|prefix| {
                s.iter().map(move |&a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    PointSet::new(field, sets.len(), pts)
}

/// Precompiled evaluator: powers of each coordinate are computed once per point.
struct Evaluator {
    field: Field,
    polys: Vec<Vec<(FieldElement, Vec<u16>)>>,
    max_exp: usize,
}

impl Evaluator {
    fn new(sys: &PolySystem) -> Self {
        let polys: Vec<Vec<(FieldElement, Vec<u16>)>> = sys
            .polys()
            .iter()
            .map(|f| f.terms().map(|(m, &c)| (c, m.exps().to_vec())).collect())
            .collect();
        let max_exp = polys
            .iter()
            .flatten()
            .flat_map(|(_, e)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        Evaluator {
            field: sys.field().clone(),
            polys,
            max_exp,
        }
    }

    fn vanishes(&self, point: &[FieldElement], powers: &mut Vec<Vec<FieldElement>>) -> bool {
        let f = &self.field;
        powers.resize(point.len(), Vec::new());
        for (pw, &x) in powers.iter_mut().zip(point) {
            pw.clear();
            pw.push(FieldElement::ONE);
            for k in 1..=self.max_exp {
                let prev = pw[k - 1];
                pw.push(f.mul(prev, x));
            }
        }
        self.polys.iter().all(|terms| {
            f.sum(terms.iter().map(|(c, e)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| f.mul(acc, powers[i][k as usize]))
            }))
            .is_zero()
        })
    }
}

/// All common zeros in `F_{q^e}^n`, in lexicographic order. The system's
/// own field must embed into the enumeration field. An empty system is an
/// error unless `allow_empty`.
pub fn zero_set_exhaustive(
    sys: &PolySystem,
    e: usize,
    allow_empty: bool,
    limits: &Limits,
) -> Result<PointSet> {
    if sys.is_empty() && !allow_empty {
        return Err(Error::Precondition(
            "empty system would enumerate the whole space".into(),
        ));
    }
    let target = sys.field().with_extension(e)?;
    let sys = if &target == sys.field() {
        sys.clone()
    } else {
        sys.embed(&target)?
    };
    let n = sys.n();
    let order = target.order() as u128;
    let total = order.checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > limits.enumeration as u128 {
        return Err(Error::cap("zero-set enumeration", total, limits.enumeration));
    }
    let eval = Evaluator::new(&sys);
    let mut powers = Vec::new();
    let mut out = Vec::new();
    let mut idx = vec![0u32; n];
    for _ in 0..total {
        let point: Point = idx.iter().map(|&i| target.element(i).expect("in range")).collect();
        if eval.vanishes(&point, &mut powers) {
            out.push(point);
        }
        for k in (0..n).rev() {
            idx[k] += 1;
            if (idx[k] as u128) < order {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(PointSet {
        n,
        field: target,
        pts: out,
    })
}

/// A basis of `I(W)_{<=d}`.
#[derive(Clone, Debug)]
pub struct VanishingBasis {
    pub d: u32,
    pub basis: Vec<MultiPoly>,
    pub points: PointSet,
}

impl VanishingBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn evaluation_matrix(w: &PointSet, monos: &[Monomial]) -> Matrix {
    let f = w.field();
    let rows: Vec<Vec<FieldElement>> = w
        .points()
        .iter()
        .map(|p| monos.iter().map(|m| m.eval(f, p)).collect())
        .collect();
    Matrix::from_rows(f, monos.len(), &rows).expect("uniform rows")
}

/// Kernel of the evaluation matrix on all monomials of degree `<= d`
/// (columns in descending graded-lex order), read back as polynomials.
pub fn vanishing_ideal_basis(w: &PointSet, d: u32, limits: &Limits) -> Result<VanishingBasis> {
    if w.is_empty() {
        return Err(Error::Precondition("empty point set".into()));
    }
    let count = Monomial::count_up_to(w.n(), d);
    if count > limits.monomials as u128 {
        return Err(Error::cap("monomial count", count, limits.monomials as u128));
    }
    let mut monos = Monomial::all_up_to(w.n(), d);
    monos.reverse();
    let basis = evaluation_matrix(w, &monos)
        .kernel_basis()
        .iter()
        .map(|v| MultiPoly::from_coeff_vector(w.field(), w.n(), &monos, v))
        .collect();
    Ok(VanishingBasis {
        d,
        basis,
        points: w.clone(),
    })
}

/// The evaluation matrix of monomials with `deg_{x_i} < |V_i|` on `prod V_i`
/// is square; reports whether it is invertible.
pub fn product_evaluation_full_rank(
    field: &Field,
    sets: &[Vec<FieldElement>],
    limits: &Limits,
) -> Result<bool> {
    let w = product_set(field, sets, limits)?;
    let bounds: Vec<usize> = sets.iter().map(Vec::len).collect();
    let monos = Monomial::all_in_box(&bounds);
    Ok(evaluation_matrix(&w, &monos).rank() == w.len())
}
