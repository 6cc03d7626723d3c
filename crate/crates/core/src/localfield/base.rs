//! The unramified base ring, truncated: `W(F_q)/p^m` in mixed characteristic and
//! `F_q[[u]]/u^m` in equal characteristic.
//!
//! Elements are flat `u64` slices ("chunks"). In mixed characteristic a chunk holds the
//! `s` coefficients of `1, z, .., z^{s-1}` modulo `p^m`; in equal characteristic it holds
//! `m` consecutive residue-field elements, the coefficients of `u^0, .., u^{m-1}`.

use super::residue::{ResidueElem, ResidueField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum BaseKind {
    Mixed { modulus: u64 },
    Equal,
}

#[derive(Clone, Debug)]
pub(crate) struct BaseRing {
    pub p: u64,
    pub field: ResidueField,
    /// Number of base-uniformizer digits carried.
    pub digits: u32,
    pub kind: BaseKind,
}

impl BaseRing {
    pub fn mixed(field: ResidueField, digits: u32) -> Option<Self> {
        let modulus = field.p().checked_pow(digits)?;
        Some(BaseRing { p: field.p(), field, digits, kind: BaseKind::Mixed { modulus } })
    }

    pub fn equal(field: ResidueField, digits: u32) -> Self {
        BaseRing { p: field.p(), field, digits, kind: BaseKind::Equal }
    }

    pub fn s(&self) -> usize {
        self.field.degree()
    }

    pub fn chunk(&self) -> usize {
        match self.kind {
            BaseKind::Mixed { .. } => self.s(),
            BaseKind::Equal => self.digits as usize * self.s(),
        }
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self.kind, BaseKind::Mixed { .. })
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            BaseKind::Mixed { modulus } => Some(modulus),
            BaseKind::Equal => None,
        }
    }

    pub fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        match self.kind {
            BaseKind::Mixed { modulus } => {
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = add_mod(*x, y, modulus);
                }
            }
            BaseKind::Equal => {
                let p = self.p;
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = (*x + y) % p;
                }
            }
        }
    }

    pub fn sub_assign(&self, a: &mut [u64], b: &[u64]) {
        match self.kind {
            BaseKind::Mixed { modulus } => {
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = sub_mod(*x, y, modulus);
                }
            }
            BaseKind::Equal => {
                let p = self.p;
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = (*x + p - y) % p;
                }
            }
        }
    }

    /// `acc += a * b`.
    pub fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        match self.kind {
            BaseKind::Mixed { modulus } => {
                let s = self.s();
                if s == 1 {
                    acc[0] = add_mod(acc[0], mul_mod(a[0], b[0], modulus), modulus);
                    return;
                }
                let mut prod = vec![0u64; 2 * s - 1];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, modulus), modulus);
                    }
                }
                let f = self.field.modulus();
                for k in (s..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    for i in 0..s {
                        prod[k - s + i] = sub_mod(prod[k - s + i], mul_mod(c, f[i], modulus), modulus);
                    }
                }
                for (o, &c) in acc.iter_mut().zip(&prod) {
                    *o = add_mod(*o, c, modulus);
                }
            }
            BaseKind::Equal => {
                let s = self.s();
                let m = self.digits as usize;
                for i in 0..m {
                    let ai = &a[i * s..(i + 1) * s];
                    if ai.iter().all(|&c| c == 0) {
                        continue;
                    }
                    for j in 0..m - i {
                        let bj = &b[j * s..(j + 1) * s];
                        if bj.iter().all(|&c| c == 0) {
                            continue;
                        }
                        let k = i + j;
                        self.field.mul_acc(ai, bj, &mut acc[k * s..(k + 1) * s]);
                    }
                }
            }
        }
    }

    /// Valuation in base-uniformizer units, `None` for zero.
    pub fn valuation(&self, a: &[u64]) -> Option<u32> {
        match self.kind {
            BaseKind::Mixed { .. } => a
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| {
                    let mut v = 0;
                    let mut c = c;
                    while c % self.p == 0 {
                        c /= self.p;
                        v += 1;
                    }
                    v
                })
                .min(),
            BaseKind::Equal => {
                let s = self.s();
                (0..self.digits as usize)
                    .find(|&i| a[i * s..(i + 1) * s].iter().any(|&c| c != 0))
                    .map(|i| i as u32)
            }
        }
    }

    /// Reduces modulo the k-th power of the base uniformizer, in place.
    pub fn truncate(&self, a: &mut [u64], k: u32) {
        if k >= self.digits {
            return;
        }
        match self.kind {
            BaseKind::Mixed { .. } => {
                let pk = self.p.pow(k);
                for c in a.iter_mut() {
                    *c %= pk;
                }
            }
            BaseKind::Equal => {
                let s = self.s();
                for c in a[k as usize * s..].iter_mut() {
                    *c = 0;
                }
            }
        }
    }

    /// Exact division by the t-th power of the uniformizer; requires divisibility.
    /// The top `t` digits of the result are unknown and are set to zero.
    pub fn div_uniformizer_pow(&self, a: &mut [u64], t: u32) {
        if t == 0 {
            return;
        }
        match self.kind {
            BaseKind::Mixed { .. } => {
                let pt = self.p.pow(t.min(self.digits));
                for c in a.iter_mut() {
                    debug_assert_eq!(*c % pt, 0);
                    *c /= pt;
                }
            }
            BaseKind::Equal => {
                let s = self.s();
                let shift = t as usize * s;
                let len = a.len();
                for i in 0..len {
                    a[i] = if i + shift < len { a[i + shift] } else { 0 };
                }
            }
        }
    }

    pub fn residue(&self, a: &[u64]) -> ResidueElem {
        let s = self.s();
        let coeffs: Vec<u64> = a[..s].iter().map(|c| c % self.p).collect();
        self.field.from_coeffs(&coeffs)
    }

    pub fn lift(&self, r: &ResidueElem) -> Vec<u64> {
        let mut out = vec![0; self.chunk()];
        out[..self.s()].copy_from_slice(r.coeffs());
        out
    }

    pub fn from_int(&self, n: i128) -> Vec<u64> {
        let mut out = vec![0; self.chunk()];
        match self.kind {
            BaseKind::Mixed { modulus } => {
                out[0] = n.rem_euclid(modulus as i128) as u64;
            }
            BaseKind::Equal => {
                out[0] = n.rem_euclid(self.p as i128) as u64;
            }
        }
        out
    }

    pub fn uniformizer(&self) -> Vec<u64> {
        match self.kind {
            BaseKind::Mixed { .. } => self.from_int(self.p as i128),
            BaseKind::Equal => {
                let mut out = vec![0; self.chunk()];
                if self.digits > 1 {
                    out[self.s()] = 1;
                }
                out
            }
        }
    }

    pub fn generator(&self) -> Vec<u64> {
        self.lift(&self.field.generator())
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, o) = a.overflowing_add(b);
    if o || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(m)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_mul_reduces_mod_residue_poly() {
        let f4 = ResidueField::with_degree(2, 2).unwrap();
        let base = BaseRing::mixed(f4, 5).unwrap();
        let z = base.generator();
        let mut z2 = vec![0; 2];
        base.mul_acc(&mut z2, &z, &z);
        // z^2 = -z - 1 mod 32
        assert_eq!(z2, vec![31, 31]);
    }

    #[test]
    fn equal_char_truncation_and_shift() {
        let f2 = ResidueField::with_degree(2, 1).unwrap();
        let base = BaseRing::equal(f2, 4);
        let mut a = vec![0, 1, 1, 1];
        assert_eq!(base.valuation(&a), Some(1));
        base.div_uniformizer_pow(&mut a, 1);
        assert_eq!(a, vec![1, 1, 1, 0]);
        base.truncate(&mut a, 2);
        assert_eq!(a, vec![1, 1, 0, 0]);
    }

    #[test]
    fn modular_helpers_near_u64_max() {
        let m = u64::MAX - 58; // large odd modulus
        assert_eq!(add_mod(m - 1, 2, m), 1);
        assert_eq!(sub_mod(1, 2, m), m - 1);
        assert_eq!(mul_mod(m - 1, m - 1, m), 1);
    }
}
