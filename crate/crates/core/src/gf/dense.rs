//! Little-endian coefficient-vector arithmetic used while a field is still
//! being constructed (before its log tables exist).

pub(crate) trait Scalars {
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
    fn size(&self) -> u32;
}

pub(crate) struct PrimeScalars(pub u32);

impl Scalars for PrimeScalars {
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        // Fermat; p is small.
        let mut result = 1u64;
        let mut base = a as u64 % self.0 as u64;
        let mut exp = self.0 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % self.0 as u64;
            }
            base = base * base % self.0 as u64;
            exp >>= 1;
        }
        result as u32
    }
    fn size(&self) -> u32 {
        self.0
    }
}

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn mul<S: Scalars>(s: &S, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = s.add(out[i + j], s.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `b`.
pub(crate) fn rem<S: Scalars>(s: &S, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = s.inv(b[db]);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = s.mul(*r.last().unwrap(), lead_inv);
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = s.sub(r[shift + j], s.mul(c, bj));
        }
        trim(&mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`size`
/// digits of `k` (little-endian).
pub(crate) fn monic_from_index(size: u32, deg: usize, mut k: u64) -> Vec<u32> {
    let mut v = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        v.push((k % size as u64) as u32);
        k /= size as u64;
    }
    v.push(1);
    v
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half the degree of `f`.
pub(crate) fn is_irreducible<S: Scalars>(s: &S, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    let size = s.size() as u64;
    for k in 1..=deg / 2 {
        for idx in 0..size.pow(k as u32) {
            let g = monic_from_index(s.size(), k, idx);
            if rem(s, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `deg`, scanning the
/// coefficient tuple (c_{deg-1}, ..., c_0) in ascending order.
pub(crate) fn first_irreducible<S: Scalars>(s: &S, deg: usize) -> Vec<u32> {
    let size = s.size() as u64;
    (0..size.pow(deg as u32))
        .map(|idx| monic_from_index(s.size(), deg, idx))
        .find(|f| is_irreducible(s, f))
        .expect("an irreducible polynomial exists in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics_over_f2() {
        let s = PrimeScalars(2);
        assert_eq!(first_irreducible(&s, 2), vec![1, 1, 1]);
    }

    #[test]
    fn quadratics_over_f3() {
        let s = PrimeScalars(3);
        assert_eq!(first_irreducible(&s, 2), vec![1, 0, 1]);
    }

    #[test]
    fn remainder() {
        let s = PrimeScalars(3);
        // x^3 - x = x (x^2 + 2) over F_3
        assert!(rem(&s, &[0, 2, 0, 1], &[2, 0, 1]).is_empty());
        assert_eq!(rem(&s, &[1, 0, 1], &[0, 1]), vec![1]);
    }
}
