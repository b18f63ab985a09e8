//! The filtration `V_{F,i}`, last fall degree, degree-bounded congruence and
//! rational-point solving.
//!
//! Every space lives inside `R_{<=D}` for a fixed final degree `D`, with
//! columns in descending graded-lex order. A semi-echelon row therefore has
//! its leading monomial at its pivot, and `V ∩ R_{<=k}` is spanned by the
//! rows whose pivot has degree `<= k`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::{Echelon, Matrix};
use crate::fieldeq;
use crate::gf::{FieldElement, UniPoly};
use crate::limits::Limits;
use crate::mpoly::{Monomial, MultiPoly, PolySystem};
use crate::points::{product_set, PointSet};

/// Incremental computation of `V_{F,0} ⊆ V_{F,1} ⊆ ...`.
#[derive(Clone, Debug)]
pub struct Filtration {
    sys: PolySystem,
    dmax: u32,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    col_degree: Vec<u32>,
    /// `times[j][c]`: column of `monos[c] * x_j`, if still within `dmax`.
    times: Vec<Vec<Option<usize>>>,
    echelon: Echelon,
    multiplied: Vec<bool>,
    rank_at: Vec<usize>,
    falls: Vec<u32>,
}

impl Filtration {
    pub fn new(sys: &PolySystem, dmax: u32, limits: &Limits) -> Result<Self> {
        if dmax > limits.degree {
            return Err(Error::cap("filtration degree", dmax, limits.degree));
        }
        let n = sys.n();
        let count = Monomial::count_up_to(n, dmax);
        if count > limits.monomials as u128 {
            return Err(Error::cap("monomial count", count, limits.monomials as u128));
        }
        let mut monos = Monomial::all_up_to(n, dmax);
        monos.reverse();
        let index: HashMap<Monomial, usize> =
            monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let col_degree = monos.iter().map(Monomial::degree).collect();
        let times = (0..n)
            .map(|j| {
                monos
                    .iter()
                    .map(|m| index.get(&m.times_var(j)).copied())
                    .collect()
            })
            .collect();
        Ok(Filtration {
            sys: sys.clone(),
            dmax,
            echelon: Echelon::new(sys.field(), monos.len()),
            monos,
            index,
            col_degree,
            times,
            multiplied: Vec::new(),
            rank_at: Vec::new(),
            falls: Vec::new(),
        })
    }

    pub fn system(&self) -> &PolySystem {
        &self.sys
    }

    /// Highest completed level, if any.
    pub fn level(&self) -> Option<u32> {
        self.rank_at.len().checked_sub(1).map(|l| l as u32)
    }

    pub fn max_degree(&self) -> u32 {
        self.dmax
    }

    /// Degrees completed so far at which a fall occurred.
    pub fn falls(&self) -> &[u32] {
        &self.falls
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// `dim (V ∩ R_{<=k})` for the current level.
    pub fn dim_le(&self, k: u32) -> usize {
        self.echelon
            .pivots()
            .iter()
            .filter(|&&c| self.col_degree[c] <= k)
            .count()
    }

    fn row_degree(&self, r: usize) -> u32 {
        self.col_degree[self.echelon.pivots()[r]]
    }

    fn vector(&self, f: &MultiPoly) -> Option<Vec<FieldElement>> {
        let mut v = vec![FieldElement::ZERO; self.monos.len()];
        for (m, &c) in f.terms() {
            v[*self.index.get(m)?] = c;
        }
        Some(v)
    }

    fn poly(&self, v: &[FieldElement]) -> MultiPoly {
        MultiPoly::from_coeff_vector(self.sys.field(), self.sys.n(), &self.monos, v)
    }

    fn insert(&mut self, v: Vec<FieldElement>) -> Option<usize> {
        let r = self.echelon.insert(v)?;
        self.multiplied.push(false);
        Some(r)
    }

    /// Computes the next level; returns whether it is a fall degree.
    /// Returns `None` once `dmax` is reached.
    pub fn advance(&mut self) -> Option<bool> {
        let level = match self.level() {
            None => 0,
            Some(l) if l >= self.dmax => return None,
            Some(l) => l + 1,
        };
        let seeds: Vec<Vec<FieldElement>> = self
            .sys
            .polys()
            .iter()
            .filter(|f| f.degree() == Some(level))
            .map(|f| self.vector(f).expect("degree within dmax"))
            .collect();
        for v in seeds {
            self.insert(v);
        }
        if level > 0 {
            let mut work: Vec<usize> = (0..self.echelon.rank())
                .filter(|&r| !self.multiplied[r] && self.row_degree(r) < level)
                .collect();
            while let Some(r) = work.pop() {
                self.multiplied[r] = true;
                for j in 0..self.sys.n() {
                    let mut v = vec![FieldElement::ZERO; self.monos.len()];
                    for (c, &x) in self.echelon.rows()[r].iter().enumerate() {
                        if !x.is_zero() {
                            v[self.times[j][c].expect("product stays within the level")] = x;
                        }
                    }
                    if let Some(new) = self.insert(v) {
                        if self.row_degree(new) < level {
                            work.push(new);
                        }
                    }
                }
            }
        }
        let fell = level > 0 && self.dim_le(level - 1) > self.rank_at[level as usize - 1];
        if fell {
            self.falls.push(level);
        }
        self.rank_at.push(self.echelon.rank());
        Some(fell)
    }

    /// Advances through level `i`.
    pub fn run_to(&mut self, i: u32) -> Result<()> {
        if i > self.dmax {
            return Err(Error::Precondition(format!(
                "level {i} beyond the filtration bound {}",
                self.dmax
            )));
        }
        while self.level().is_none_or(|l| l < i) {
            self.advance();
        }
        Ok(())
    }

    /// Basis of the current space in reduced row echelon form, leading terms descending.
    pub fn basis(&self) -> Vec<MultiPoly> {
        let r = self.echelon.to_rref();
        (0..r.rows()).map(|i| self.poly(r.row(i))).collect()
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.vector(f).is_some_and(|v| self.echelon.contains(&v))
    }

    /// Lowest-degree monic univariate member in each requested variable.
    pub fn eliminants(&self, vars: &[usize]) -> Vec<Option<UniPoly>> {
        let rref = self.echelon.to_rref();
        let pivots: Vec<usize> = (0..rref.rows())
            .map(|i| rref.row(i).iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect();
        vars.iter()
            .map(|&j| self.eliminant_from_rref(&rref, &pivots, j))
            .collect()
    }

    fn eliminant_from_rref(&self, rref: &Matrix, pivots: &[usize], j: usize) -> Option<UniPoly> {
        let f = self.sys.field();
        let pure = |c: usize| self.monos[c].exps().iter().enumerate().all(|(i, &e)| i == j || e == 0);
        // In rref, a member's coefficient on a row's pivot is that row's
        // coefficient, so univariate members only use rows with pure pivots.
        let rows: Vec<usize> = (0..rref.rows()).filter(|&r| pure(pivots[r])).collect();
        if rows.is_empty() {
            return None;
        }
        let mixed: Vec<usize> = (0..self.monos.len()).filter(|&c| !pure(c)).collect();
        let constraint: Vec<Vec<FieldElement>> = mixed
            .iter()
            .map(|&c| rows.iter().map(|&r| rref.get(r, c)).collect())
            .collect();
        let kernel = if constraint.is_empty() {
            Matrix::identity(f, rows.len()).row_vecs()
        } else {
            Matrix::from_rows(f, rows.len(), &constraint)
                .expect("uniform")
                .kernel_basis()
        };
        // Pure columns in descending degree order.
        let pure_cols: Vec<usize> = (0..self.monos.len()).filter(|&c| pure(c)).collect();
        let members: Vec<Vec<FieldElement>> = kernel
            .iter()
            .map(|k| {
                pure_cols
                    .iter()
                    .map(|&c| f.sum(k.iter().zip(&rows).map(|(&a, &r)| f.mul(a, rref.get(r, c)))))
                    .collect()
            })
            .collect();
        if members.is_empty() {
            return None;
        }
        let (m, piv) = Matrix::from_rows(f, pure_cols.len(), &members)
            .expect("uniform")
            .rref();
        let last = piv.len().checked_sub(1)?;
        let coeffs: Vec<FieldElement> = m.row(last).iter().rev().copied().collect();
        // pure_cols is ordered x_j^D, ..., x_j, 1; reversed gives little-endian.
        Some(UniPoly::new(f, j, coeffs).monic())
    }
}

/// `V_{F,i}` as an explicit basis.
#[derive(Clone, Debug)]
pub struct FilteredSpace {
    pub i: u32,
    pub basis: Vec<MultiPoly>,
    pub stable: bool,
}

impl FilteredSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn v_space(sys: &PolySystem, i: u32, limits: &Limits) -> Result<FilteredSpace> {
    let mut filt = Filtration::new(sys, i, limits)?;
    filt.run_to(i)?;
    Ok(FilteredSpace {
        i,
        basis: filt.basis(),
        stable: true,
    })
}

/// `f ≡_i g (mod F)`.
pub fn congruent(
    f: &MultiPoly,
    g: &MultiPoly,
    i: u32,
    sys: &PolySystem,
    limits: &Limits,
) -> Result<bool> {
    let diff = f.sub(g);
    if diff.degree().is_some_and(|d| d > i) {
        return Err(Error::Precondition(format!(
            "difference has degree {} above {i}",
            diff.degree().unwrap_or(0)
        )));
    }
    let mut filt = Filtration::new(sys, i, limits)?;
    filt.run_to(i)?;
    Ok(filt.contains(&diff))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FallRecord {
    pub last_fall: u32,
    pub cap: u32,
    pub falls_at: Vec<u32>,
    /// Set unless stabilization beyond `cap` was certified.
    pub capped: bool,
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.exps().iter().zip(b.exps()).all(|(x, y)| x <= y)
}

fn quotient(b: &Monomial, a: &Monomial) -> Monomial {
    Monomial::new(b.exps().iter().zip(a.exps()).map(|(y, x)| y - x).collect())
}

/// Full remainder of `f` under graded-lex division by `divisors`.
pub fn normal_form(f: &MultiPoly, divisors: &[MultiPoly]) -> MultiPoly {
    let field = f.field();
    let leads: Vec<(Monomial, FieldElement)> = divisors
        .iter()
        .map(|g| {
            let (m, &c) = g.leading().expect("nonzero divisor");
            (m.clone(), field.inv(c).expect("nonzero"))
        })
        .collect();
    let mut rest = f.clone();
    let mut rem = MultiPoly::zero(field, f.n());
    while let Some((m, c)) = rest.leading().map(|(m, &c)| (m.clone(), c)) {
        match leads.iter().position(|(lm, _)| divides(lm, &m)) {
            Some(k) => {
                let factor = field.mul(c, leads[k].1);
                rest = rest.sub(&divisors[k].mul_monomial(&quotient(&m, &leads[k].0)).scale(factor));
            }
            None => {
                rest.add_term(m.clone(), field.neg(c));
                rem.add_term(m, c);
            }
        }
    }
    rem
}

/// Whether the members of `basis` with minimal leading monomials form a
/// Gröbner basis (graded-lex) of an ideal containing every `f` in `sys`.
/// Buchberger's criterion, skipping pairs with coprime leading monomials.
pub fn contains_groebner_basis(basis: &[MultiPoly], sys: &PolySystem) -> bool {
    let leads: Vec<&Monomial> = basis.iter().map(|g| g.leading().expect("nonzero").0).collect();
    let minimal: Vec<MultiPoly> = basis
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !leads
                .iter()
                .enumerate()
                .any(|(j, lj)| j != *i && divides(lj, leads[*i]) && lj != &leads[*i])
        })
        .map(|(_, g)| g.clone())
        .collect();
    let field = sys.field();
    for (a, ga) in minimal.iter().enumerate() {
        let (ma, &ca) = ga.leading().expect("nonzero");
        for gb in &minimal[a + 1..] {
            let (mb, &cb) = gb.leading().expect("nonzero");
            if ma.exps().iter().zip(mb.exps()).all(|(x, y)| *x == 0 || *y == 0) {
                continue;
            }
            let lcm = Monomial::new(ma.exps().iter().zip(mb.exps()).map(|(x, y)| *x.max(y)).collect());
            let s = ga
                .mul_monomial(&quotient(&lcm, ma))
                .scale(field.inv(ca).expect("nonzero"))
                .sub(&gb.mul_monomial(&quotient(&lcm, mb)).scale(field.inv(cb).expect("nonzero")));
            if !normal_form(&s, &minimal).is_zero() {
                return false;
            }
        }
    }
    sys.polys().iter().all(|f| normal_form(f, &minimal).is_zero())
}

/// Last fall degree with all levels up to `cap`. `capped` is cleared when
/// the span at `cap` contains a graded Gröbner basis of the ideal of `F`:
/// every ideal member of degree `i >= cap` then reduces to zero through
/// degree-bounded multiples of span members, so the filtration equals the
/// ideal from `cap` on and no later fall is possible.
pub fn last_fall_degree(sys: &PolySystem, cap: u32, limits: &Limits) -> Result<FallRecord> {
    let maxdeg = sys.max_degree();
    if cap < maxdeg {
        return Err(Error::Precondition(format!(
            "cap {cap} below the system degree {maxdeg}"
        )));
    }
    let mut filt = Filtration::new(sys, cap, limits)?;
    filt.run_to(cap)?;
    let falls_at = filt.falls().to_vec();
    let certified = contains_groebner_basis(&filt.basis(), sys);
    Ok(FallRecord {
        last_fall: falls_at.last().copied().unwrap_or(0),
        cap,
        falls_at,
        capped: !certified,
    })
}

/// Which field equations accompany the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    /// `x_i^q - x_i`, working degree `d + q`.
    E,
    /// Expanded p-power chains, working degree `d * p`.
    EPrime,
}

/// `F_q`-rational zeros of `g` read off from univariate eliminants at the
/// working degree.
pub fn solve_rational(g: &PolySystem, method: SolveMethod, limits: &Limits) -> Result<PointSet> {
    let field = g.field();
    if field.e() != 1 {
        return Err(Error::Precondition("system must be over the base field F_q".into()));
    }
    let n = g.n();
    let d = g.max_degree().max(1);
    let (sys, degree, vars): (PolySystem, u32, Vec<usize>) = match method {
        SolveMethod::E => (
            g.union(&fieldeq::field_equations(n, field, limits)?)?,
            d + field.q(),
            (0..n).collect(),
        ),
        SolveMethod::EPrime => {
            let x = fieldeq::expanded_field_equations(n, field);
            let lifted = fieldeq::lift_system(g, &x)?;
            let vars = (0..n).map(|i| x.var(i, 0)).collect();
            (lifted.union(x.system())?, d * field.p(), vars)
        }
    };
    let mut filt = Filtration::new(&sys, degree, limits)?;
    filt.run_to(degree)?;
    let mut roots = Vec::with_capacity(n);
    for (i, h) in filt.eliminants(&vars).into_iter().enumerate() {
        let h = h.ok_or(Error::BoundInsufficient { var: i + 1, degree })?;
        roots.push(h.base_roots().into_iter().collect::<Vec<_>>());
    }
    if roots.iter().any(Vec::is_empty) {
        return Ok(PointSet::empty(field, n));
    }
    let candidates = product_set(field, &roots, limits)?;
    let mut pts = Vec::new();
    for p in candidates.points() {
        if g.vanishes_at(p)? {
            pts.push(p.clone());
        }
    }
    PointSet::new(field, n, pts).map(|w| w.sorted())
}
