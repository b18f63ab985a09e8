//! Sparse multivariate polynomials, invertible linear changes of variables
//! and the Frobenius-twisted block lift.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::gf::{Field, FieldElement, UniPoly};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self * x_i`.
    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of monomials of total degree at most `d` in `n` variables.
    pub fn count_up_to(n: usize, d: u32) -> u128 {
        // C(n + d, d)
        let mut c: u128 = 1;
        for k in 1..=d as u128 {
            c = c * (n as u128 + k) / k;
        }
        c
    }

    /// All monomials of total degree at most `d`, ascending graded-lex.
    pub fn all_up_to(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if cur.len() == n {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur.push(e as u16);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }

    /// Monomials with `exps[i] < bounds[i]` for each `i`, ascending graded-lex.
    pub fn all_in_box(bounds: &[usize]) -> Vec<Monomial> {
        let mut out = vec![Vec::new()];
        for &b in bounds {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u16>| {
                    (0..b as u16).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        let mut out: Vec<Monomial> = out.into_iter().map(Monomial).collect();
        out.sort();
        out
    }

    pub fn eval(&self, field: &Field, point: &[FieldElement]) -> FieldElement {
        self.0
            .iter()
            .zip(point)
            .fold(FieldElement::ONE, |acc, (&e, &x)| field.mul(acc, field.pow(x, e as u64)))
    }
}

/// Sparse polynomial in `n` variables over a field; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    n: usize,
    field: Field,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self.to_text())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, n: usize) -> Self {
        MultiPoly {
            n,
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, n: usize, c: FieldElement) -> Self {
        Self::term(field, Monomial::one(n), c)
    }

    pub fn var(field: &Field, n: usize, i: usize) -> Self {
        Self::term(field, Monomial::var(n, i), FieldElement::ONE)
    }

    pub fn term(field: &Field, mono: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(field, mono.n());
        p.add_term(mono, c);
        p
    }

    pub fn from_terms(
        field: &Field,
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(field, n);
        for (m, c) in terms {
            debug_assert_eq!(m.n(), n);
            p.add_term(m, c);
        }
        p
    }

    /// Embeds a univariate polynomial in `x_{var}` into `n` variables.
    pub fn from_unipoly(n: usize, u: &UniPoly) -> Self {
        let field = u.field();
        Self::from_terms(
            field,
            n,
            u.coeffs().iter().enumerate().map(|(k, &c)| {
                let mut e = vec![0; n];
                e[u.var()] = k as u16;
                (Monomial(e), c)
            }),
        )
    }

    pub fn add_term(&mut self, mono: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v = f.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i] as u32).max()
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &MultiPoly) {
        assert_eq!(self.n, other.n, "variable count mismatch");
        assert!(self.field == other.field, "field mismatch");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let f = &self.field;
        MultiPoly {
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.field, self.n);
        }
        let f = &self.field;
        MultiPoly {
            terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let f = &self.field;
        let mut out = Self::zero(f, self.n);
        for (ma, &a) in &self.terms {
            for (mb, &b) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(a, b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, &c)| (m.mul(mono), c)).collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::constant(&self.field, self.n, FieldElement::ONE);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.n
            )));
        }
        if let Some(bad) = point.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::InvalidField(format!(
                "coordinate index {} outside the field",
                bad.index()
            )));
        }
        let f = &self.field;
        Ok(f.sum(self.terms.iter().map(|(m, &c)| f.mul(c, m.eval(f, point)))))
    }

    /// Substitutes fixed values for some variables; the variable count is kept.
    pub fn partial_eval(&self, values: &[Option<FieldElement>]) -> MultiPoly {
        let f = &self.field;
        let mut out = Self::zero(f, self.n);
        for (m, &c) in &self.terms {
            let mut coeff = c;
            let mut exps = m.0.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(x) = v {
                    coeff = f.mul(coeff, f.pow(*x, exps[i] as u64));
                    exps[i] = 0;
                }
            }
            out.add_term(Monomial(exps), coeff);
        }
        out
    }

    /// `f(h_1, ..., h_n)`; all `h_i` share a variable count.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.n
            )));
        }
        let target_n = subs.first().map_or(0, MultiPoly::n);
        let f = &self.field;
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|h| vec![Self::constant(f, target_n, FieldElement::ONE), h.clone()])
            .collect();
        let mut out = Self::zero(f, target_n);
        for (m, &c) in &self.terms {
            let mut t = Self::constant(f, target_n, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Pullback `f o lambda`: substitutes `x_i -> l_i(x)`.
    pub fn compose_linear(&self, lambda: &LinearMap) -> Result<MultiPoly> {
        if lambda.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-dimensional map on {} variables",
                lambda.n(),
                self.n
            )));
        }
        self.compose(&lambda.forms())
    }

    /// Moves variable `i` to `map[i]` in a ring of `n` variables.
    pub fn rename(&self, n: usize, map: &[usize]) -> Result<MultiPoly> {
        if map.len() != self.n || map.iter().any(|&j| j >= n) {
            return Err(Error::DimensionMismatch("variable renaming".into()));
        }
        Ok(Self::from_terms(
            &self.field,
            n,
            self.terms.iter().map(|(m, &c)| {
                let mut e = vec![0; n];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] += x;
                }
                (Monomial(e), c)
            }),
        ))
    }

    /// The polynomial as a univariate in `x_{var}`, if it involves no other variable.
    pub fn as_univariate(&self, var: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (m, &c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            let k = m.0[var] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, FieldElement::ZERO);
            }
            coeffs[k] = c;
        }
        Some(UniPoly::new(&self.field, var, coeffs))
    }

    /// Coefficients against a fixed monomial list; terms outside it are dropped.
    pub fn coeff_vector(&self, monos: &[Monomial]) -> Vec<FieldElement> {
        monos.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coeff_vector(field: &Field, n: usize, monos: &[Monomial], v: &[FieldElement]) -> Self {
        Self::from_terms(field, n, monos.iter().cloned().zip(v.iter().copied()))
    }

    /// Re-expresses coefficients in a field that contains this one.
    pub fn embed(&self, target: &Field, table: &[FieldElement]) -> MultiPoly {
        MultiPoly::from_terms(
            target,
            self.n,
            self.terms.iter().map(|(m, &c)| (m.clone(), table[c.index() as usize])),
        )
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, &c)| {
                let coeff = self.field.format(c);
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{e}", i + 1)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    coeff
                } else {
                    format!("{coeff}*{}", vars.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses sums of products of coefficients, variables `x1..xn`, and
    /// parenthesized subexpressions, with `^` powers.
    pub fn parse(field: &Field, n: usize, text: &str) -> Result<MultiPoly> {
        let mut p = PolyParser {
            field,
            n,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        if p.chars.is_empty() {
            return Err(Error::parse(0, "empty polynomial"));
        }
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::parse(0, format!("trailing input in `{text}`")));
        }
        Ok(v)
    }
}

struct PolyParser<'a> {
    field: &'a Field,
    n: usize,
    chars: Vec<char>,
    pos: usize,
}

impl PolyParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::parse(0, format!("{msg} at column {}", self.pos))
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.integer()?;
            if k > u16::MAX as u64 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let f = self.field;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('x') => {
                self.pos += 1;
                let i = self.integer()? as usize;
                if i == 0 || i > self.n {
                    return Err(self.err(&format!("variable x{i} outside x1..x{}", self.n)));
                }
                Ok(MultiPoly::var(f, self.n, i - 1))
            }
            Some('t') => {
                self.pos += 1;
                let t = f.t().ok_or_else(|| self.err("`t` used in a field with m = 1"))?;
                Ok(MultiPoly::constant(f, self.n, t))
            }
            Some('u') => {
                self.pos += 1;
                let u = f.u().ok_or_else(|| self.err("`u` used in a field with e = 1"))?;
                Ok(MultiPoly::constant(f, self.n, u))
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                Ok(MultiPoly::constant(f, self.n, f.from_int((k % f.p() as u64) as i64)))
            }
            _ => Err(self.err("expected term")),
        }
    }
}

/// Monomials occurring in any of the polynomials, descending graded-lex.
pub fn support_of<'a>(polys: impl IntoIterator<Item = &'a MultiPoly>) -> Vec<Monomial> {
    let set: std::collections::BTreeSet<Monomial> = polys
        .into_iter()
        .flat_map(|p| p.terms.keys().cloned())
        .collect();
    set.into_iter().rev().collect()
}

/// Coordinates of `f` in the span of `basis`, if it lies there.
pub fn span_coords(f: &MultiPoly, basis: &[MultiPoly]) -> Result<Option<Vec<FieldElement>>> {
    let monos = support_of(basis.iter().chain(std::iter::once(f)));
    let vecs: Vec<Vec<FieldElement>> = basis.iter().map(|b| b.coeff_vector(&monos)).collect();
    crate::exactla::in_span(f.field(), &f.coeff_vector(&monos), &vecs)
}

/// Dimension of the span of the polynomials.
pub fn span_dim(polys: &[MultiPoly]) -> usize {
    let Some(first) = polys.first() else {
        return 0;
    };
    let monos = support_of(polys);
    let rows: Vec<Vec<FieldElement>> = polys.iter().map(|p| p.coeff_vector(&monos)).collect();
    Matrix::from_rows(first.field(), monos.len(), &rows)
        .expect("uniform width")
        .rank()
}

/// Both lists span the same space.
pub fn same_span(a: &[MultiPoly], b: &[MultiPoly]) -> Result<bool> {
    for f in a {
        if span_coords(f, b)?.is_none() {
            return Ok(false);
        }
    }
    for f in b {
        if span_coords(f, a)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Linear map `x -> (l_1(x), ..., l_n(x))` whose matrix rows are the forms `l_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Matrix,
    invertible: bool,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "linear map needs a square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let invertible = matrix.is_invertible();
        Ok(LinearMap { matrix, invertible })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<FieldElement>]) -> Result<Self> {
        Self::new(Matrix::from_rows(field, rows.len(), rows)?)
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(field, n),
            invertible: true,
        }
    }

    /// Rejection-sampled invertible map; entries from the base field F_q
    /// when `base_only`, otherwise from the whole field.
    pub fn random_invertible<R: Rng + ?Sized>(
        field: &Field,
        n: usize,
        base_only: bool,
        rng: &mut R,
    ) -> Self {
        loop {
            let rows: Vec<Vec<FieldElement>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if base_only {
                                field.random_base(rng)
                            } else {
                                field.random(rng)
                            }
                        })
                        .collect()
                })
                .collect();
            let map = Self::from_rows(field, &rows).expect("square");
            if map.invertible {
                return map;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.matrix.row_vecs()
    }

    pub fn apply(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.matrix.mul_vec(x)
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: self.matrix.inverse()?,
            invertible: true,
        })
    }

    /// `self o other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        let matrix = self.matrix.mul(&other.matrix)?;
        Ok(LinearMap {
            invertible: self.invertible && other.invertible,
            matrix,
        })
    }

    /// The forms `l_i` as polynomials in `n` variables.
    pub fn forms(&self) -> Vec<MultiPoly> {
        let n = self.n();
        let f = self.field();
        (0..n)
            .map(|i| {
                MultiPoly::from_terms(
                    f,
                    n,
                    (0..n).map(|j| (Monomial::var(n, j), self.matrix.get(i, j))),
                )
            })
            .collect()
    }

    /// Entrywise `sigma^j`.
    pub fn frobenius(&self, j: usize) -> LinearMap {
        let f = self.field().clone();
        LinearMap {
            matrix: self.matrix.map(|a| f.frobenius(a, j)),
            invertible: self.invertible,
        }
    }

    /// Block-diagonal map on `n*m` variables, block `j` acting on
    /// `(x_{1j}, ..., x_{nj})` by `sigma^j` applied entrywise. Variables are
    /// laid out block-major: `x_{ij}` sits at index `j*n + i`.
    pub fn block_frobenius_lift(&self, m: usize) -> Result<LinearMap> {
        if !self.invertible {
            return Err(Error::NotInvertible);
        }
        let n = self.n();
        let mut big = Matrix::zeros(self.field(), n * m, n * m);
        for j in 0..m {
            let block = self.frobenius(j);
            for r in 0..n {
                for c in 0..n {
                    big.set(j * n + r, j * n + c, block.matrix.get(r, c));
                }
            }
        }
        Ok(LinearMap {
            matrix: big,
            invertible: true,
        })
    }

    pub fn embed(&self, target: &Field, table: &[FieldElement]) -> LinearMap {
        let rows: Vec<Vec<FieldElement>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|&a| table[a.index() as usize]).collect())
            .collect();
        LinearMap {
            matrix: Matrix::from_rows(target, self.n(), &rows).expect("square"),
            invertible: self.invertible,
        }
    }
}

/// An ordered list of polynomials sharing a variable count and field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    n: usize,
    field: Field,
    polys: Vec<MultiPoly>,
}

impl PolySystem {
    pub fn new(field: &Field, n: usize, polys: Vec<MultiPoly>) -> Result<Self> {
        if let Some(bad) = polys.iter().find(|p| p.n() != n || p.field() != field) {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables in a system of {n}",
                bad.n()
            )));
        }
        Ok(PolySystem {
            n,
            field: field.clone(),
            polys,
        })
    }

    pub fn empty(field: &Field, n: usize) -> Self {
        PolySystem {
            n,
            field: field.clone(),
            polys: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Largest total degree; 0 for an empty or all-zero system.
    pub fn max_degree(&self) -> u32 {
        self.polys.iter().filter_map(MultiPoly::degree).max().unwrap_or(0)
    }

    /// `lambda^*(F) = {f o lambda}`.
    pub fn pullback(&self, lambda: &LinearMap) -> Result<PolySystem> {
        let polys = self
            .polys
            .iter()
            .map(|f| f.compose_linear(lambda))
            .collect::<Result<_>>()?;
        Ok(PolySystem { polys, ..self.clone() })
    }

    /// Linear change of equations: `g_k = sum_j rho_{kj} f_j`.
    pub fn combine(&self, rho: &LinearMap) -> Result<PolySystem> {
        if rho.n() != self.polys.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}-dimensional combination of {} polynomials",
                rho.n(),
                self.polys.len()
            )));
        }
        let f = &self.field;
        let polys = (0..rho.n())
            .map(|k| {
                self.polys
                    .iter()
                    .enumerate()
                    .fold(MultiPoly::zero(f, self.n), |acc, (j, p)| {
                        acc.add(&p.scale(rho.matrix().get(k, j)))
                    })
            })
            .collect();
        Ok(PolySystem { polys, ..self.clone() })
    }

    pub fn union(&self, other: &PolySystem) -> Result<PolySystem> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::DimensionMismatch("union of incompatible systems".into()));
        }
        let mut polys = self.polys.clone();
        polys.extend(other.polys.iter().cloned());
        Ok(PolySystem { polys, ..self.clone() })
    }

    pub fn vanishes_at(&self, point: &[FieldElement]) -> Result<bool> {
        for f in &self.polys {
            if !f.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Moves the system into a field containing its own.
    pub fn embed(&self, target: &Field) -> Result<PolySystem> {
        let table = self.field.embedding_into(target)?;
        Ok(PolySystem {
            n: self.n,
            field: target.clone(),
            polys: self.polys.iter().map(|p| p.embed(target, &table)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn p(f: &Field, n: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(f, n, s).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
        let all = Monomial::all_up_to(2, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all.first().unwrap(), &Monomial::one(2));
        assert_eq!(all.last().unwrap(), &a);
        assert_eq!(Monomial::count_up_to(3, 3), 20);
    }

    #[test]
    fn evaluation_examples() {
        let f = f3();
        let c = MultiPoly::constant(&f, 2, f.from_int(2));
        assert_eq!(c.eval(&[f.from_int(1), f.from_int(0)]).unwrap(), f.from_int(2));
        let g = p(&f, 2, "x1^2 + 2");
        for y in f.elements() {
            assert!(g.eval(&[f.one(), y]).unwrap().is_zero());
        }
        let h = p(&f, 2, "x1*x2");
        assert_eq!(h.eval(&[f.from_int(2), f.from_int(2)]).unwrap(), f.one());
        assert!(h.eval(&[f.one()]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = f3();
        let g = p(&f, 2, "1*x1^2 + 2");
        assert_eq!(g.to_text(), "1*x1^2 + 2");
        let h = p(&f, 2, "(x1 + x2)^2 - 1");
        assert_eq!(h.to_text(), "1*x1^2 + 2*x1*x2 + 1*x2^2 + 2");
        assert_eq!(p(&f, 2, &h.to_text()), h);
        assert!(MultiPoly::parse(&f, 2, "x3").is_err());
        assert!(MultiPoly::parse(&f, 2, "x1 +").is_err());

        let f4 = Field::new(2, 2, 1).unwrap();
        let q = p(&f4, 1, "x1^2 + x1 + t");
        assert_eq!(q.to_text(), "1*x1^2 + 1*x1 + (t)");
        assert_eq!(p(&f4, 1, &q.to_text()), q);
    }

    #[test]
    fn compose_linear_examples() {
        let f = f3();
        let g = p(&f, 2, "x1^2 + 2");
        let id = LinearMap::identity(&f, 2);
        assert_eq!(g.compose_linear(&id).unwrap(), g);
        let lam = LinearMap::from_rows(&f, &[vec![f.one(), f.one()], vec![f.zero(), f.one()]]).unwrap();
        assert_eq!(
            g.compose_linear(&lam).unwrap(),
            p(&f, 2, "x1^2 + 2*x1*x2 + x2^2 + 2")
        );
        let back = g
            .compose_linear(&lam)
            .unwrap()
            .compose_linear(&lam.inverse().unwrap())
            .unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn pullback_system_examples() {
        let f = f3();
        let lam = LinearMap::from_rows(&f, &[vec![f.one(), f.one()], vec![f.zero(), f.one()]]).unwrap();
        let empty = PolySystem::empty(&f, 2);
        assert!(empty.pullback(&lam).unwrap().is_empty());
        let sys = PolySystem::new(&f, 2, vec![p(&f, 2, "x1^2+2"), p(&f, 2, "x2^2+2")]).unwrap();
        let pulled = sys.pullback(&lam).unwrap();
        assert_eq!(pulled.polys()[0], p(&f, 2, "(x1+x2)^2+2"));
        assert_eq!(pulled.polys()[1], p(&f, 2, "x2^2+2"));
        assert_eq!(pulled.pullback(&lam.inverse().unwrap()).unwrap(), sys);
    }

    #[test]
    fn block_lift_examples() {
        let f4 = Field::new(2, 2, 1).unwrap();
        let t = f4.t().unwrap();
        let lam = LinearMap::from_rows(&f4, &[vec![t, f4.zero()], vec![f4.zero(), f4.one()]]).unwrap();
        let big = lam.block_frobenius_lift(2).unwrap();
        assert_eq!(big.n(), 4);
        let tp1 = f4.add(t, f4.one());
        assert_eq!(big.matrix().get(0, 0), t);
        assert_eq!(big.matrix().get(2, 2), tp1);
        assert_eq!(big.matrix().get(3, 3), f4.one());
        assert!(big.matrix().get(0, 2).is_zero());

        let id = LinearMap::identity(&f4, 2).block_frobenius_lift(3).unwrap();
        assert_eq!(id, LinearMap::identity(&f4, 6));

        let one = f4.one();
        let prime_entries = LinearMap::from_rows(&f4, &[vec![one, one], vec![f4.zero(), one]]).unwrap();
        let lifted = prime_entries.block_frobenius_lift(2).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(lifted.matrix().get(r, c), lifted.matrix().get(r + 2, c + 2));
            }
        }

        let singular = LinearMap::from_rows(&f4, &[vec![one, one], vec![one, one]]).unwrap();
        assert!(matches!(singular.block_frobenius_lift(2), Err(Error::NotInvertible)));
    }

    #[test]
    fn partial_eval_and_rename() {
        let f = f3();
        let g = p(&f, 3, "x1*x2 + x3^2");
        let h = g.partial_eval(&[Some(f.from_int(2)), None, None]);
        assert_eq!(h, p(&f, 3, "2*x2 + x3^2"));
        let r = p(&f, 2, "x1^2 + x2").rename(4, &[0, 2]).unwrap();
        assert_eq!(r, p(&f, 4, "x1^2 + x3"));
    }

    #[test]
    fn univariate_view() {
        let f = f3();
        let g = p(&f, 2, "x2^2 + 2");
        let u = g.as_univariate(1).unwrap();
        assert_eq!(u.degree(), Some(2));
        assert!(g.as_univariate(0).is_none());
        assert_eq!(MultiPoly::from_unipoly(2, &u), g);
        assert!(MultiPoly::constant(&f, 2, f.one()).as_univariate(0).is_some());
    }
}
