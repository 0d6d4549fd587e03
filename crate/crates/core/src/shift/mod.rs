//! One-sided shifts of finite type: presentations, cylinders, eventually
//! periodic points and the metric `d(x, y) = 2^-min{i : x_i != y_i}`.

mod alphabet;
mod cylinder;
mod forbidden;
mod io;
mod point;
mod presentation;

pub use alphabet::{Alphabet, Symbol, Word};
pub use cylinder::{cylinder_diam, shift_image, Cylinder, ShiftImage};
pub use forbidden::build_from_forbidden;
pub use io::{parse_sft, to_json, SftDocument};
pub use point::{dist, least_rotation, primitive_root_len, Dist, PointRep};
pub use presentation::{Edge, Origin, SftPresentation};

/// Smallest word length `r` with `2^-r < 1/n`, i.e. `floor(log2 n) + 1`.
pub fn radius_len(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - n.leading_zeros()) as usize
}

/// Template placing `u` at 0 and `v` at `offset`; `None` on conflict.
pub fn overlay(u: &[Symbol], v: &[Symbol], offset: usize) -> Option<Vec<Option<Symbol>>> {
    let len = u.len().max(offset + v.len());
    let mut t: Vec<Option<Symbol>> = vec![None; len];
    for (i, &s) in u.iter().enumerate() {
        t[i] = Some(s);
    }
    for (j, &s) in v.iter().enumerate() {
        match t[offset + j] {
            Some(c) if c != s => return None,
            _ => t[offset + j] = Some(s),
        }
    }
    Some(t)
}
