//! Finite residue fields `F_{p^s} = F_p[z]/(f)`.

use std::fmt;

use super::LocalFieldError;

/// An element of a [`ResidueField`]: coefficients of `1, z, .., z^{s-1}` in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElem {
    coeffs: Vec<u64>,
}

impl ResidueElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (r, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (r, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, c) => format!("{c}*z"),
                (r, 1) => format!("z^{r}"),
                (r, c) => format!("{c}*z^{r}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The field `F_p[z]/(f)` for a monic irreducible `f` of degree `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    /// Monic modulus, low degree first, length `s + 1`.
    modulus: Vec<u64>,
}

impl ResidueField {
    /// Builds the field from an explicit monic modulus (low degree first).
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self, LocalFieldError> {
        if !is_prime(p) {
            return Err(LocalFieldError::InvalidTower(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(LocalFieldError::InvalidTower(
                "residue polynomial must be monic of degree >= 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(LocalFieldError::InvalidTower(format!(
                "residue polynomial coefficients must lie in [0, {p})"
            )));
        }
        if !is_irreducible(p, &modulus) {
            return Err(LocalFieldError::InvalidTower(
                "residue polynomial is reducible over F_p".into(),
            ));
        }
        Ok(ResidueField { p, modulus })
    }

    /// The field of degree `s` defined by the first monic irreducible polynomial in
    /// lexicographic order of `(c_0, c_1, ..)` read as base-p digits.
    pub fn with_degree(p: u64, s: u32) -> Result<Self, LocalFieldError> {
        if s == 0 {
            return Err(LocalFieldError::InvalidTower("residue degree must be >= 1".into()));
        }
        let modulus = first_irreducible(p, s as usize).ok_or_else(|| {
            LocalFieldError::InvalidTower(format!("no irreducible polynomial of degree {s}"))
        })?;
        ResidueField::new(p, modulus)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements `p^s`.
    pub fn size(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem { coeffs: vec![0; self.degree()] }
    }

    pub fn one(&self) -> ResidueElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> ResidueElem {
        let mut coeffs = vec![0; self.degree()];
        coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        ResidueElem { coeffs }
    }

    /// The class of `z`.
    pub fn generator(&self) -> ResidueElem {
        let mut poly = vec![0, 1];
        self.reduce_poly(&mut poly);
        poly.resize(self.degree(), 0);
        ResidueElem { coeffs: poly }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> ResidueElem {
        let mut poly: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        self.reduce_poly(&mut poly);
        poly.resize(self.degree(), 0);
        ResidueElem { coeffs: poly }
    }

    /// Element with base-p digit index `i` (inverse of [`Self::index`]).
    pub fn from_index(&self, mut i: u64) -> ResidueElem {
        let mut coeffs = vec![0; self.degree()];
        for c in coeffs.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        ResidueElem { coeffs }
    }

    pub fn index(&self, a: &ResidueElem) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        let mut out = a.clone();
        self.add_into(&mut out.coeffs, &b.coeffs);
        out
    }

    pub fn sub(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        ResidueElem { coeffs }
    }

    pub fn neg(&self, a: &ResidueElem) -> ResidueElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        let mut out = vec![0; self.degree()];
        self.mul_into(&a.coeffs, &b.coeffs, &mut out);
        ResidueElem { coeffs: out }
    }

    pub fn pow(&self, a: &ResidueElem, mut n: u64) -> ResidueElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &ResidueElem) -> Option<ResidueElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.size() - 2))
        }
    }

    /// `a^(1/p^k)`, the inverse of the k-fold Frobenius.
    pub fn frobenius_root(&self, a: &ResidueElem, k: u32) -> ResidueElem {
        let s = self.degree() as u32;
        let shift = (s - k % s) % s;
        self.pow(a, self.p.pow(shift))
    }

    /// Any square root of `a`, by exhaustive search.
    pub fn sqrt(&self, a: &ResidueElem) -> Option<ResidueElem> {
        self.elements().find(|x| &self.mul(x, x) == a)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &ResidueElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut ord = self.size() - 1;
        for (l, _) in factorize(ord) {
            while ord % l == 0 && self.pow(a, ord / l) == self.one() {
                ord /= l;
            }
        }
        Some(ord)
    }

    pub(crate) fn add_into(&self, acc: &mut [u64], b: &[u64]) {
        for (x, &y) in acc.iter_mut().zip(b) {
            *x = (*x + y) % self.p;
        }
    }

    /// `out += a * b`.
    pub(crate) fn mul_acc(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let s = self.degree();
        let p = self.p;
        if s == 1 {
            out[0] = (out[0] + a[0] * b[0]) % p;
            return;
        }
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        self.reduce_poly(&mut prod);
        for (o, &c) in out.iter_mut().zip(&prod) {
            *o = (*o + c) % p;
        }
    }

    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|c| *c = 0);
        self.mul_acc(a, b, out);
    }

    /// Reduces a polynomial (coefficients mod p) modulo the field polynomial, in place;
    /// afterwards only the first `s` entries are meaningful.
    fn reduce_poly(&self, poly: &mut Vec<u64>) {
        let s = self.degree();
        let p = self.p;
        for k in (s..poly.len()).rev() {
            let c = poly[k] % p;
            if c == 0 {
                continue;
            }
            poly[k] = 0;
            for i in 0..s {
                let sub = c * self.modulus[i] % p;
                poly[k - s + i] = (poly[k - s + i] + p - sub) % p;
            }
        }
        if poly.len() > s {
            poly.truncate(s);
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn poly_rem_is_zero(p: u64, num: &[u64], den: &[u64]) -> bool {
    // den monic
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    for k in (dd..r.len()).rev() {
        let c = r[k] % p;
        if c == 0 {
            continue;
        }
        for i in 0..=dd {
            let sub = c * den[i] % p;
            r[k - dd + i] = (r[k - dd + i] + p - sub) % p;
        }
    }
    r.iter().take(dd).all(|&c| c % p == 0)
}

fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut i = idx;
            for _ in 0..deg {
                g.push(i % p);
                i /= p;
            }
            g.push(1);
            if poly_rem_is_zero(p, f, &g) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, s: usize) -> Option<Vec<u64>> {
    let count = p.checked_pow(s as u32)?;
    (0..count).find_map(|idx| {
        let mut f = Vec::with_capacity(s + 1);
        let mut i = idx;
        for _ in 0..s {
            f.push(i % p);
            i /= p;
        }
        f.push(1);
        is_irreducible(p, &f).then_some(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_is_x2_x_1() {
        let f = ResidueField::with_degree(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let z = f.generator();
        assert_eq!(f.pow(&z, 3), f.one());
        assert_eq!(f.order(&z), Some(3));
    }

    #[test]
    fn f9_inverse_and_frobenius_root() {
        let f = ResidueField::with_degree(3, 2).unwrap();
        for a in f.elements().filter(|a| !a.is_zero()) {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), f.one());
            let r = f.frobenius_root(&a, 1);
            assert_eq!(f.pow(&r, 3), a);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(ResidueField::new(2, vec![1, 0, 1]).is_err());
        assert!(ResidueField::new(4, vec![1, 1]).is_err());
    }
}
