#![allow(dead_code)]

use splitred::localfield::{RingElem, Tower, TowerSpec};

/// `Σ lift(r_i) π^i`, with residue indices reduced into the residue field.
pub fn from_digits(t: &Tower, level: usize, digits: &[u64]) -> RingElem {
    let field = t.residue_field();
    let pi = t.uniformizer(level);
    let mut acc = t.zero(level);
    let mut pw = t.one(level);
    for &d in digits {
        acc = &acc + &(&t.lift(level, &field.from_index(d % field.size())) * &pw);
        pw = &pw * &pi;
    }
    acc
}

/// Same as [`from_digits`] but with a nonzero leading digit.
pub fn unit_from_digits(t: &Tower, level: usize, digits: &[u64]) -> RingElem {
    let size = t.residue_field().size();
    let mut d = digits.to_vec();
    if d.is_empty() {
        d.push(1);
    }
    d[0] = 1 + d[0] % (size - 1);
    from_digits(t, level, &d)
}

pub fn sample_towers() -> Vec<Tower> {
    [
        TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2"),
        TowerSpec::mixed(3, 2).base_name("K").level("L", "t^2 + 3*t + 3"),
        TowerSpec::mixed(2, 1).base_name("Q2").level("K", "t^2 - 2").level("L", "t^2 + pi_K*t + pi_K"),
        TowerSpec::equal(2, 2).base_name("K").level("L", "t^5 - pi_K"),
        TowerSpec::equal(3, 1).base_name("K").level("L", "t^4 - pi_K"),
        TowerSpec::mixed(5, 1).base_name("K").level("L", "t^2 - 5"),
    ]
    .iter()
    .map(|s| s.build().expect("sample tower"))
    .collect()
}
