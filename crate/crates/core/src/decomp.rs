//! Product decompositions `W -> V_1 x ... x V_n`: random instances,
//! verification, detection from points or systems, canonical forms, and the
//! unknown-coefficient system whose solutions are decompositions.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Echelon, Matrix};
use crate::gf::{Field, FieldElement, UniPoly};
use crate::limits::Limits;
use crate::mpoly::{same_span, span_coords, span_dim, LinearMap, Monomial, MultiPoly, PolySystem};
use crate::points::{product_set, vanishing_ideal_basis, zero_set_exhaustive, PointSet};

/// `lambda` maps `W` onto `prod V_i`; `f_i = prod_{a in V_i} (x_i - a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub lambda: LinearMap,
    pub sets: Vec<Vec<FieldElement>>,
    pub polys: Vec<UniPoly>,
    pub rho: Option<LinearMap>,
}

impl Decomposition {
    /// Builds `f_i` from the component sets, which are sorted.
    pub fn from_sets(lambda: LinearMap, mut sets: Vec<Vec<FieldElement>>, rho: Option<LinearMap>) -> Result<Self> {
        if sets.len() != lambda.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} component sets for a {}-dimensional map",
                sets.len(),
                lambda.n()
            )));
        }
        let field = lambda.field().clone();
        for s in &mut sets {
            s.sort();
            let before = s.len();
            s.dedup();
            if s.len() != before {
                return Err(Error::Precondition("repeated element in a component set".into()));
            }
        }
        let polys = sets
            .iter()
            .enumerate()
            .map(|(i, s)| UniPoly::from_roots(&field, i, s))
            .collect();
        Ok(Decomposition {
            lambda,
            sets,
            polys,
            rho,
        })
    }

    /// Takes `f_i` as given and reads `V_i` off as its roots in the field.
    pub fn from_polys(lambda: LinearMap, polys: Vec<UniPoly>, rho: Option<LinearMap>) -> Result<Self> {
        if polys.len() != lambda.n() {
            return Err(Error::DimensionMismatch("component polynomials".into()));
        }
        let sets = polys
            .iter()
            .map(|f| f.roots().0.into_iter().collect())
            .collect();
        Ok(Decomposition {
            lambda,
            sets,
            polys,
            rho,
        })
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn field(&self) -> &Field {
        self.lambda.field()
    }

    /// Component cardinalities `d_i`.
    pub fn degrees(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// `{f_i o lambda}`.
    pub fn system(&self) -> Result<PolySystem> {
        let n = self.n();
        let polys = self
            .polys
            .iter()
            .map(|f| MultiPoly::from_unipoly(1, &f.with_var(0)).compose(&[self.lambda.forms()[f.var()].clone()]))
            .collect::<Result<_>>()?;
        PolySystem::new(self.field(), n, polys)
    }

    /// `rho o (f_1, ..., f_n) o lambda`, with `rho` the identity when absent.
    pub fn presented_system(&self) -> Result<PolySystem> {
        let sys = self.system()?;
        match &self.rho {
            Some(rho) => sys.combine(rho),
            None => Ok(sys),
        }
    }

    /// The canonical representative; `rho`, when present, is recomputed so
    /// the presented system is unchanged.
    pub fn canonical(&self) -> Result<Decomposition> {
        let mut dec = canonicalize(self).to_decomposition(self.field())?;
        if self.rho.is_some() {
            dec.rho = Some(recover_rho(&self.presented_system()?, &dec)?);
        }
        Ok(dec)
    }

    /// `lambda^{-1}(prod V_i)`.
    pub fn points(&self, limits: &Limits) -> Result<PointSet> {
        let prod = product_set(self.field(), &self.sets, limits)?;
        prod.image(&self.lambda.inverse()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    NotSquarefree,
    ImageMismatch,
    Cardinality,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rejection::NotSquarefree => "not-squarefree",
            Rejection::ImageMismatch => "image-mismatch",
            Rejection::Cardinality => "cardinality",
        })
    }
}

/// Checks that every `f_i` is squarefree and splits with root set `V_i`,
/// and that `lambda` maps `W` bijectively onto `prod V_i`.
pub fn verify(w: &PointSet, cand: &Decomposition) -> std::result::Result<(), Rejection> {
    let field = cand.field();
    let w = if w.field() == field {
        w.clone()
    } else {
        w.embed(field).map_err(|_| Rejection::ImageMismatch)?
    };
    if w.n() != cand.n() {
        return Err(Rejection::Cardinality);
    }
    for (f, set) in cand.polys.iter().zip(&cand.sets) {
        if !f.is_squarefree() {
            return Err(Rejection::NotSquarefree);
        }
        let (roots, _) = f.roots();
        if Some(roots.len()) != f.degree() {
            return Err(Rejection::Cardinality);
        }
        if roots != set.iter().copied().collect::<BTreeSet<_>>() {
            return Err(Rejection::ImageMismatch);
        }
    }
    let size: usize = cand.sets.iter().map(Vec::len).product();
    if w.len() != size {
        return Err(Rejection::Cardinality);
    }
    let mut image = BTreeSet::new();
    for p in w.points() {
        let y = cand.lambda.apply(p).map_err(|_| Rejection::Cardinality)?;
        if y.iter().zip(&cand.sets).any(|(a, s)| s.binary_search(a).is_err()) {
            return Err(Rejection::ImageMismatch);
        }
        image.insert(y);
    }
    if image.len() != size {
        return Err(Rejection::ImageMismatch);
    }
    Ok(())
}

/// A generated instance: the presented system, the planted decomposition
/// and its point set.
#[derive(Clone, Debug)]
pub struct Instance {
    pub g: PolySystem,
    pub truth: Decomposition,
    pub w: PointSet,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GenOptions {
    /// Force `lambda = rho = identity`.
    pub identity: bool,
}

/// Random `d`-subsets `V_i` of `F_{q^e}` and random invertible `lambda`, `rho`
/// over `F_{q^e}`; `G = rho o (f_i) o lambda`.
pub fn generate(
    n: usize,
    d: usize,
    field: &Field,
    e: usize,
    seed: u64,
    opts: GenOptions,
    limits: &Limits,
) -> Result<Instance> {
    let big = field.with_extension(e)?;
    if (big.order() as usize) < d || d == 0 {
        return Err(Error::Precondition(format!(
            "cannot pick {d} distinct roots in a field of order {}",
            big.order()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<FieldElement>> = (0..n)
        .map(|_| {
            sample(&mut rng, big.order() as usize, d)
                .into_iter()
                .map(|k| big.element(k as u32).expect("in range"))
                .collect()
        })
        .collect();
    let (lambda, rho) = if opts.identity {
        (LinearMap::identity(&big, n), LinearMap::identity(&big, n))
    } else {
        (
            LinearMap::random_invertible(&big, n, false, &mut rng),
            LinearMap::random_invertible(&big, n, false, &mut rng),
        )
    };
    let truth = Decomposition::from_sets(lambda, sets, Some(rho))?;
    let g = truth.presented_system()?;
    let w = truth.points(limits)?.sorted();
    Ok(Instance { g, truth, w })
}

/// `rho o (f_1, ..., f_n) o lambda` with arbitrary monic `f_i` of degree `d`
/// over F_q and `lambda`, `rho` over F_q; the `f_i` need not split.
pub fn random_twisted_system(n: usize, d: usize, field: &Field, seed: u64) -> Result<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<UniPoly> = (0..n)
        .map(|i| {
            let mut c: Vec<FieldElement> = (0..d).map(|_| field.random_base(&mut rng)).collect();
            c.push(FieldElement::ONE);
            UniPoly::new(field, i, c)
        })
        .collect();
    let lambda = LinearMap::random_invertible(field, n, true, &mut rng);
    let rho = LinearMap::random_invertible(field, n, true, &mut rng);
    let dec = Decomposition {
        sets: vec![Vec::new(); n],
        lambda,
        polys,
        rho: Some(rho),
    };
    dec.presented_system()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DetectOptions {
    /// Try candidate functionals in reverse lexicographic order.
    pub reverse: bool,
    /// On failure retry once with the extension degree doubled.
    pub retry: bool,
}

fn integer_root(size: usize, n: usize) -> Option<usize> {
    if n == 0 {
        return None;
    }
    (1..=size).find(|d| d.checked_pow(n as u32) == Some(size))
}

fn working_field(w: &PointSet, e: usize) -> Result<(Field, PointSet)> {
    let k = w.field().with_extension(e.max(w.field().e()))?;
    let w = if &k == w.field() { w.clone() } else { w.embed(&k)? };
    Ok((k, w))
}

/// Functional search: normalized `l` with `|l(W)| = d`, then `n` independent
/// ones mapping `W` onto the product of their images.
pub fn detect_from_points(
    w: &PointSet,
    e: usize,
    opts: DetectOptions,
    limits: &Limits,
) -> Result<Option<Decomposition>> {
    let n = w.n();
    let Some(d) = integer_root(w.len(), n) else {
        return Ok(None);
    };
    let (k, w) = working_field(w, e)?;
    let order = k.order() as u128;
    let space = order.checked_pow(n as u32).unwrap_or(u128::MAX);
    if space > limits.enumeration as u128 {
        return Err(Error::cap("functional search space", space, limits.enumeration));
    }

    let mut candidates: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = Vec::new();
    let mut idx = vec![0u32; n];
    for _ in 0..space {
        if idx.iter().find(|&&x| x != 0) == Some(&1) {
            let l: Vec<FieldElement> = idx.iter().map(|&x| k.element(x).expect("in range")).collect();
            let image: BTreeSet<FieldElement> = w
                .points()
                .iter()
                .map(|p| k.sum(l.iter().zip(p).map(|(&a, &x)| k.mul(a, x))))
                .collect();
            if image.len() == d {
                let values = w
                    .points()
                    .iter()
                    .map(|p| k.sum(l.iter().zip(p).map(|(&a, &x)| k.mul(a, x))))
                    .collect();
                candidates.push((l, values));
            }
        }
        for j in (0..n).rev() {
            idx[j] += 1;
            if (idx[j] as u128) < order {
                break;
            }
            idx[j] = 0;
        }
    }
    if opts.reverse {
        candidates.reverse();
    }

    let mut search = Search {
        candidates: &candidates,
        n,
        d,
        tried: 0,
        cap: limits.subsets,
    };
    let mut chosen = Vec::new();
    if !search.dfs(0, &mut chosen, &Echelon::new(&k, n))? {
        return Ok(None);
    }
    let rows: Vec<Vec<FieldElement>> = chosen.iter().map(|&c| candidates[c].0.clone()).collect();
    let sets = chosen
        .iter()
        .map(|&c| {
            candidates[c]
                .1
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    Ok(Some(Decomposition::from_sets(
        LinearMap::from_rows(&k, &rows)?,
        sets,
        None,
    )?))
}

struct Search<'a> {
    candidates: &'a [(Vec<FieldElement>, Vec<FieldElement>)],
    n: usize,
    d: usize,
    tried: usize,
    cap: usize,
}

impl Search<'_> {
    fn dfs(&mut self, start: usize, chosen: &mut Vec<usize>, span: &Echelon) -> Result<bool> {
        if chosen.len() == self.n {
            return Ok(true);
        }
        for c in start..self.candidates.len() {
            let mut next = span.clone();
            if next.insert(self.candidates[c].0.clone()).is_none() {
                continue;
            }
            self.tried += 1;
            if self.tried > self.cap {
                return Err(Error::cap("functional subsets", self.tried as u128, self.cap as u128));
            }
            chosen.push(c);
            let tuples: BTreeSet<Vec<FieldElement>> = (0..self.candidates[c].1.len())
                .map(|p| chosen.iter().map(|&k| self.candidates[k].1[p]).collect())
                .collect();
            if tuples.len() == self.d.pow(chosen.len() as u32) && self.dfs(c + 1, chosen, &next)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Why a system was judged not decomposable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotDecomposable {
    /// The polynomials are linearly dependent.
    Dependent { rank: usize },
    /// The zero set is not of size `d^n`.
    ZeroSetSize { found: usize, expected: u128 },
    /// `G` does not span `I(W)_{<=d}`.
    IdealMismatch { dim: usize },
    /// No functional search succeeded.
    NoProduct,
}

impl fmt::Display for NotDecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotDecomposable::Dependent { rank } => write!(f, "dependent system (rank {rank})"),
            NotDecomposable::ZeroSetSize { found, expected } => {
                write!(f, "zero set has {found} points, expected {expected}")
            }
            NotDecomposable::IdealMismatch { dim } => {
                write!(f, "system does not span I(W)_d (dimension {dim})")
            }
            NotDecomposable::NoProduct => f.write_str("no product structure found"),
        }
    }
}

pub type Detection = std::result::Result<Decomposition, NotDecomposable>;

/// Detection from a presented system `G` with `|G| = n`; on success `rho`
/// expresses `G` in the basis `{f_i o lambda}`.
pub fn detect_from_system(
    g: &PolySystem,
    e: usize,
    opts: DetectOptions,
    limits: &Limits,
) -> Result<Detection> {
    let first = detect_once(g, e, opts, limits)?;
    match first {
        Err(NotDecomposable::Dependent { .. }) | Ok(_) => Ok(first),
        Err(reason) if opts.retry => match detect_once(g, 2 * e.max(g.field().e()), opts, limits) {
            Ok(Ok(dec)) => Ok(Ok(dec)),
            Ok(Err(_)) | Err(Error::CapExceeded { .. }) | Err(Error::InvalidField(_)) => Ok(Err(reason)),
            Err(other) => Err(other),
        },
        Err(reason) => Ok(Err(reason)),
    }
}

fn detect_once(g: &PolySystem, e: usize, opts: DetectOptions, limits: &Limits) -> Result<Detection> {
    let n = g.n();
    if g.len() != n {
        return Err(Error::Precondition(format!(
            "{} polynomials in {n} variables; detection needs a square system",
            g.len()
        )));
    }
    let rank = span_dim(g.polys());
    if rank != n {
        return Ok(Err(NotDecomposable::Dependent { rank }));
    }
    let d = g.max_degree();
    let w = zero_set_exhaustive(g, e.max(g.field().e()), false, limits)?;
    let expected = (d as u128).pow(n as u32);
    if w.len() as u128 != expected {
        return Ok(Err(NotDecomposable::ZeroSetSize {
            found: w.len(),
            expected,
        }));
    }
    let k = w.field().clone();
    let g = if g.field() == &k { g.clone() } else { g.embed(&k)? };
    let vb = vanishing_ideal_basis(&w, d, limits)?;
    if vb.dim() != n || !same_span(&vb.basis, g.polys())? {
        return Ok(Err(NotDecomposable::IdealMismatch { dim: vb.dim() }));
    }
    let Some(mut dec) = detect_from_points(&w, k.e(), opts, limits)? else {
        return Ok(Err(NotDecomposable::NoProduct));
    };
    dec.rho = Some(recover_rho(&g, &dec)?);
    Ok(Ok(dec))
}

/// Coordinates of each `g_k` in the basis `{f_i o lambda}`.
fn recover_rho(g: &PolySystem, dec: &Decomposition) -> Result<LinearMap> {
    let basis = dec.system()?;
    let rows = g
        .polys()
        .iter()
        .map(|gi| {
            span_coords(gi, basis.polys())?
                .ok_or_else(|| Error::Precondition("system outside the span of the components".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    LinearMap::from_rows(dec.field(), &rows)
}

/// Orbit representative under row permutation and row scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub rows: Vec<Vec<FieldElement>>,
    pub sets: Vec<Vec<FieldElement>>,
}

impl CanonicalForm {
    pub fn to_decomposition(&self, field: &Field) -> Result<Decomposition> {
        Decomposition::from_sets(LinearMap::from_rows(field, &self.rows)?, self.sets.clone(), None)
    }
}

/// Scales each row so its first nonzero entry is 1 (dividing `V_i` by the
/// same factor), sorts rows with their sets in descending lexicographic
/// order of entries, and sorts each set.
pub fn canonicalize(dec: &Decomposition) -> CanonicalForm {
    let f = dec.field();
    let mut pairs: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = dec
        .lambda
        .rows()
        .into_iter()
        .zip(&dec.sets)
        .map(|(row, set)| {
            let alpha = row.iter().copied().find(|x| !x.is_zero()).unwrap_or(FieldElement::ONE);
            let inv = f.inv(alpha).expect("nonzero");
            let row = row.iter().map(|&x| f.mul(x, inv)).collect();
            let mut set: Vec<FieldElement> = set.iter().map(|&x| f.mul(x, inv)).collect();
            set.sort();
            (row, set)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.cmp(&a.0));
    let (rows, sets) = pairs.into_iter().unzip();
    CanonicalForm { rows, sets }
}

/// Unknown-coefficient system: `rho o (f_1, ..., f_n) o lambda = G` with
/// monic `f_i` of degree `d`, one equation per output and monomial of degree `<= d`.
#[derive(Clone, Debug)]
pub struct Eq1System {
    pub n: usize,
    pub d: usize,
    pub field: Field,
    /// `a{i}{j}` (lambda), `r{i}{j}` (rho), `c{i}_{k}` (f_i), in that order.
    pub labels: Vec<String>,
    /// Polynomials in the unknowns that must vanish.
    pub equations: Vec<MultiPoly>,
    pub g: PolySystem,
}

impl Eq1System {
    pub fn num_unknowns(&self) -> usize {
        self.labels.len()
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    fn a(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    fn r(&self, i: usize, j: usize) -> usize {
        self.n * self.n + i * self.n + j
    }

    fn c(&self, i: usize, k: usize) -> usize {
        2 * self.n * self.n + i * self.d + k
    }

    pub fn is_satisfied(&self, values: &[FieldElement]) -> Result<bool> {
        for eq in &self.equations {
            if !eq.eval(values)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Flattens `(lambda, rho, f)` in unknown order.
    pub fn assignment(&self, lambda: &LinearMap, rho: &LinearMap, polys: &[UniPoly]) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.num_unknowns()];
        for i in 0..self.n {
            for j in 0..self.n {
                v[self.a(i, j)] = lambda.matrix().get(i, j);
                v[self.r(i, j)] = rho.matrix().get(i, j);
            }
            for k in 0..self.d {
                v[self.c(i, k)] = polys[i].coeff(k);
            }
        }
        v
    }
}

pub fn eq1_build(g: &PolySystem, d: usize, limits: &Limits) -> Result<Eq1System> {
    let n = g.n();
    if g.len() != n {
        return Err(Error::Precondition("system must have n polynomials".into()));
    }
    if g.max_degree() as usize > d {
        return Err(Error::Precondition(format!("system degree exceeds {d}")));
    }
    let field = g.field().clone();
    let unknowns = 2 * n * n + n * d;
    let monos = Monomial::all_up_to(n, d as u32);
    if monos.len() * n > limits.monomials {
        return Err(Error::cap("equation count", (monos.len() * n) as u128, limits.monomials as u128));
    }
    let mut labels = Vec::with_capacity(unknowns);
    for i in 1..=n {
        for j in 1..=n {
            labels.push(format!("a{i}{j}"));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            labels.push(format!("r{i}{j}"));
        }
    }
    for i in 1..=n {
        for k in 0..d {
            labels.push(format!("c{i}_{k}"));
        }
    }
    let sys = Eq1System {
        n,
        d,
        field: field.clone(),
        labels,
        equations: Vec::new(),
        g: g.clone(),
    };
    // Ring: unknowns first, then x_1..x_n.
    let total = unknowns + n;
    let var = |k: usize| MultiPoly::var(&field, total, k);
    let h: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let l = (0..n).fold(MultiPoly::zero(&field, total), |acc, j| {
                acc.add(&var(sys.a(i, j)).mul(&var(unknowns + j)))
            });
            let mut f = l.pow(d as u32);
            for k in 0..d {
                f = f.add(&var(sys.c(i, k)).mul(&l.pow(k as u32)));
            }
            f
        })
        .collect();
    let mut equations = Vec::with_capacity(n * monos.len());
    for (k, gk) in g.polys().iter().enumerate() {
        let out = (0..n).fold(MultiPoly::zero(&field, total), |acc, i| {
            acc.add(&var(sys.r(k, i)).mul(&h[i]))
        });
        // Split each term into its unknown part and its x part.
        let mut by_x: std::collections::HashMap<Vec<u16>, MultiPoly> = std::collections::HashMap::new();
        for (m, &c) in out.terms() {
            let (u, x) = m.exps().split_at(unknowns);
            by_x.entry(x.to_vec())
                .or_insert_with(|| MultiPoly::zero(&field, unknowns))
                .add_term(Monomial::new(u.to_vec()), c);
        }
        for mono in monos.iter().rev() {
            let mut eq = by_x
                .remove(mono.exps())
                .unwrap_or_else(|| MultiPoly::zero(&field, unknowns));
            eq.add_term(Monomial::one(unknowns), field.neg(gk.coeff(mono)));
            equations.push(eq);
        }
    }
    Ok(Eq1System { equations, ..sys })
}

/// One solution `(lambda, rho, f)` of the unknown-coefficient system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eq1Solution {
    pub lambda: LinearMap,
    pub rho: LinearMap,
    pub polys: Vec<UniPoly>,
}

impl Eq1Solution {
    /// The decomposition over the smallest extension in which every `f_i` splits.
    pub fn decomposition(&self) -> Result<Decomposition> {
        let base = self.lambda.field();
        for e in 1.. {
            let k = base.with_extension(e)?;
            let table = base.embedding_into(&k)?;
            let polys: Vec<UniPoly> = self
                .polys
                .iter()
                .map(|f| {
                    UniPoly::new(&k, f.var(), f.coeffs().iter().map(|c| table[c.index() as usize]).collect())
                })
                .collect();
            if polys.iter().all(UniPoly::splits_with_distinct_roots) {
                return Decomposition::from_polys(
                    self.lambda.embed(&k, &table),
                    polys,
                    Some(self.rho.embed(&k, &table)),
                );
            }
        }
        unreachable!("field construction fails before the loop ends")
    }
}

/// All solutions over F_q with `lambda`, `rho` invertible and each `f_i`
/// squarefree. Enumerates `(lambda, f)`; the equations are then linear in `rho`.
pub fn eq1_solve_exhaustive(s: &Eq1System, limits: &Limits) -> Result<Vec<Eq1Solution>> {
    let f = &s.field;
    let (n, d) = (s.n, s.d);
    let q = f.q() as u128;
    let outer = q.checked_pow((n * n + n * d) as u32).unwrap_or(u128::MAX);
    if outer > limits.enumeration as u128 {
        return Err(Error::cap("assignment enumeration", outer, limits.enumeration));
    }
    let base: Vec<FieldElement> = f.base_elements().collect();

    // Squarefree monic candidates for each f_i.
    let mut monics = Vec::new();
    for code in 0..q.pow(d as u32) {
        let mut c = Vec::with_capacity(d + 1);
        let mut x = code;
        for _ in 0..d {
            c.push(base[(x % q) as usize]);
            x /= q;
        }
        c.push(FieldElement::ONE);
        let u = UniPoly::new(f, 0, c);
        if u.is_squarefree() {
            monics.push(u);
        }
    }
    let mut lambdas = Vec::new();
    for code in 0..q.pow((n * n) as u32) {
        let mut x = code;
        let rows: Vec<Vec<FieldElement>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let v = base[(x % q) as usize];
                        x /= q;
                        v
                    })
                    .collect()
            })
            .collect();
        let lam = LinearMap::from_rows(f, &rows)?;
        if lam.is_invertible() {
            lambdas.push(lam);
        }
    }

    let unknowns = s.num_unknowns();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    let combos = (monics.len() as u128).pow(n as u32);
    for lam in &lambdas {
        for _ in 0..combos {
            let polys: Vec<UniPoly> = choice.iter().enumerate().map(|(i, &c)| monics[c].with_var(i)).collect();
            let mut values: Vec<Option<FieldElement>> = vec![None; unknowns];
            for i in 0..n {
                for j in 0..n {
                    values[s.a(i, j)] = Some(lam.matrix().get(i, j));
                }
                for k in 0..d {
                    values[s.c(i, k)] = Some(polys[i].coeff(k));
                }
            }
            for rho in solve_for_rho(s, &values, limits)? {
                out.push(Eq1Solution {
                    lambda: lam.clone(),
                    rho,
                    polys: polys.clone(),
                });
            }
            for slot in choice.iter_mut().rev() {
                *slot += 1;
                if *slot < monics.len() {
                    break;
                }
                *slot = 0;
            }
        }
    }
    Ok(out)
}

/// Invertible `rho` solving the equations once `lambda` and `f` are fixed.
fn solve_for_rho(
    s: &Eq1System,
    values: &[Option<FieldElement>],
    limits: &Limits,
) -> Result<Vec<LinearMap>> {
    let f = &s.field;
    let n = s.n;
    let nr = n * n;
    // Augmented rows [coefficients of r | constant].
    let mut rows = Vec::with_capacity(s.equations.len());
    for eq in &s.equations {
        let reduced = eq.partial_eval(values);
        let mut row = vec![FieldElement::ZERO; nr + 1];
        for (m, &c) in reduced.terms() {
            match m.support().as_slice() {
                [] => row[nr] = f.neg(c),
                [k] if m.degree() == 1 => row[*k - nr] = c,
                _ => unreachable!("equations are linear in rho"),
            }
        }
        rows.push(row);
    }
    let (r, pivots) = Matrix::from_rows(f, nr + 1, &rows)?.rref();
    if pivots.last() == Some(&nr) {
        return Ok(Vec::new());
    }
    let mut particular = vec![FieldElement::ZERO; nr];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r.get(row, nr);
    }
    let free: Vec<usize> = (0..nr).filter(|c| !pivots.contains(c)).collect();
    let q = f.q() as u128;
    let count = q.checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if count > limits.enumeration as u128 {
        return Err(Error::cap("rho solution space", count, limits.enumeration));
    }
    let base: Vec<FieldElement> = f.base_elements().collect();
    let mut out = Vec::new();
    for code in 0..count {
        let mut x = code;
        let mut sol = particular.clone();
        for &fc in &free {
            let t = base[(x % q) as usize];
            x /= q;
            sol[fc] = t;
            for (row, &p) in pivots.iter().enumerate() {
                sol[p] = f.sub(sol[p], f.mul(r.get(row, fc), t));
            }
        }
        let rho_rows: Vec<Vec<FieldElement>> = sol.chunks(n).map(<[FieldElement]>::to_vec).collect();
        let rho = LinearMap::from_rows(f, &rho_rows)?;
        if rho.is_invertible() {
            out.push(rho);
        }
    }
    Ok(out)
}
