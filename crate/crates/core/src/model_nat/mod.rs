//! Exact model of the strictified endomorphism monoid: partial bijections of
//! the naturals that are affine on dyadic residue classes.
//!
//! A [`Piece`] `(k, r, k', r')` sends every `n = r + 2^k q` to `r' + 2^k' q`.
//! Maps are kept in a canonical form (maximal pieces, sorted by `(k, r)`), so
//! structural equality of [`ResidueMap`]s is semantic equality.
//!
//! The associator here is `2m -> 4m`, `4j+1 -> 4j+2`, `4j+3 -> 2j+1`. The
//! frequently printed third clause `(n-3)/2` sends 3 to 0, which collides with
//! the even clause; `(n-1)/2` is the clause that makes it a bijection and the
//! one that satisfies the pentagon and naturality laws.

mod eval;
mod literal;
mod random;
pub mod typed;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use eval::{eval_monoid_term, eval_path, refute, AtomEnv, EvalError, Witness};
pub(crate) use eval::witness_between;
pub use literal::{parse_env, parse_map, LiteralError};
pub use random::{random_map, random_partial_map};

/// Largest admissible modulus exponent.
pub const MAX_BITS: u32 = 62;

/// `n ≡ r (mod 2^k)` maps to `2^k' ((n - r) / 2^k) + r'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub k: u32,
    pub r: u64,
    pub k_out: u32,
    pub r_out: u64,
}

impl Piece {
    pub const fn new(k: u32, r: u64, k_out: u32, r_out: u64) -> Piece {
        Piece { k, r, k_out, r_out }
    }

    pub fn apply(&self, n: u64) -> Option<u64> {
        if n & mask(self.k) != self.r {
            return None;
        }
        let q = n >> self.k;
        let out = ((q as u128) << self.k_out) + self.r_out as u128;
        Some(u64::try_from(out).expect("residue map output overflows u64"))
    }

    fn inverse(&self) -> Piece {
        Piece::new(self.k_out, self.r_out, self.k, self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("residue {r} is not below 2^{k}")]
    ResidueOutOfRange { k: u32, r: u64 },
    #[error("modulus 2^{0} exceeds the supported range")]
    ModulusTooLarge(u32),
    #[error("input classes {0}/2^{1} and {2}/2^{3} overlap")]
    OverlappingInputs(u64, u32, u64, u32),
    #[error("output classes {0}/2^{1} and {2}/2^{3} overlap")]
    OverlappingOutputs(u64, u32, u64, u32),
}

fn mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Whether the dyadic classes `r1 mod 2^k1` and `r2 mod 2^k2` intersect.
pub fn classes_overlap(k1: u32, r1: u64, k2: u32, r2: u64) -> bool {
    let m = mask(k1.min(k2));
    r1 & m == r2 & m
}

/// Checks that `pieces` describe a well-formed partial injection.
pub fn validate_pieces(pieces: &[Piece]) -> Result<(), MapError> {
    for p in pieces {
        for (k, r) in [(p.k, p.r), (p.k_out, p.r_out)] {
            if k > MAX_BITS {
                return Err(MapError::ModulusTooLarge(k));
            }
            if r > mask(k) {
                return Err(MapError::ResidueOutOfRange { k, r });
            }
        }
    }
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            if classes_overlap(a.k, a.r, b.k, b.r) {
                return Err(MapError::OverlappingInputs(a.r, a.k, b.r, b.k));
            }
            if classes_overlap(a.k_out, a.r_out, b.k_out, b.r_out) {
                return Err(MapError::OverlappingOutputs(a.r_out, a.k_out, b.r_out, b.k_out));
            }
        }
    }
    Ok(())
}

// Sum of class densities equals one iff pairwise-disjoint classes cover ℕ.
fn classes_partition(classes: impl Iterator<Item = u32> + Clone) -> bool {
    let Some(top) = classes.clone().max() else {
        return false;
    };
    let total: u128 = classes.map(|k| 1u128 << (top - k)).sum();
    total == 1u128 << top
}

/// Whether a raw piece list is a total bijection of ℕ: injective on
/// disjoint input classes, with inputs and outputs each covering ℕ.
pub fn pieces_form_bijection(pieces: &[Piece]) -> bool {
    validate_pieces(pieces).is_ok()
        && classes_partition(pieces.iter().map(|p| p.k))
        && classes_partition(pieces.iter().map(|p| p.k_out))
}

/// A partial bijection of ℕ, affine on dyadic residue classes, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueMap {
    pieces: Vec<Piece>,
}

impl ResidueMap {
    pub fn new(pieces: Vec<Piece>) -> Result<ResidueMap, MapError> {
        validate_pieces(&pieces)?;
        Ok(Self::canonical(pieces))
    }

    /// The empty partial map.
    pub fn empty() -> ResidueMap {
        ResidueMap { pieces: Vec::new() }
    }

    pub fn identity() -> ResidueMap {
        ResidueMap { pieces: vec![Piece::new(0, 0, 0, 0)] }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn apply(&self, n: u64) -> Option<u64> {
        self.pieces.iter().find_map(|p| p.apply(n))
    }

    pub fn is_total(&self) -> bool {
        classes_partition(self.pieces.iter().map(|p| p.k))
    }

    pub fn is_surjective(&self) -> bool {
        classes_partition(self.pieces.iter().map(|p| p.k_out))
    }

    pub fn is_total_bijection(&self) -> bool {
        self.is_total() && self.is_surjective()
    }

    pub fn is_identity(&self) -> bool {
        *self == ResidueMap::identity()
    }

    pub fn max_bits(&self) -> u32 {
        self.pieces.iter().map(|p| p.k.max(p.k_out)).max().unwrap_or(0)
    }

    /// `self` after `f`.
    pub fn after(&self, f: &ResidueMap) -> ResidueMap {
        compose(self, f)
    }

    pub fn inverse(&self) -> ResidueMap {
        invert(self)
    }

    // Merges sibling classes bottom-up until no merge applies. Every maximal
    // affine dyadic class is reached from any partition into affine classes,
    // so the result depends only on the map.
    fn canonical(pieces: Vec<Piece>) -> ResidueMap {
        let mut table: BTreeMap<(u32, u64), (u32, u64)> =
            pieces.into_iter().map(|p| ((p.k, p.r), (p.k_out, p.r_out))).collect();
        let top = table.keys().map(|&(k, _)| k).max().unwrap_or(0);
        for k in (1..=top).rev() {
            let half = 1u64 << (k - 1);
            let evens: Vec<u64> = table
                .range((k, 0)..(k + 1, 0))
                .map(|(&(_, r), _)| r)
                .filter(|r| r & half == 0)
                .collect();
            for r in evens {
                let (Some(&(e0, o0)), Some(&(e1, o1))) = (table.get(&(k, r)), table.get(&(k, r | half))) else {
                    continue;
                };
                if e0 == e1 && e0 >= 1 {
                    let out_half = 1u64 << (e0 - 1);
                    if o0 < out_half && o1 == o0 + out_half {
                        table.remove(&(k, r));
                        table.remove(&(k, r | half));
                        table.insert((k - 1, r), (e0 - 1, o0));
                    }
                }
            }
        }
        ResidueMap {
            pieces: table.into_iter().map(|((k, r), (ko, ro))| Piece::new(k, r, ko, ro)).collect(),
        }
    }

    /// Least `n` at which `self` and `other` differ in value or definedness.
    pub fn first_difference(&self, other: &ResidueMap) -> Option<u64> {
        if self == other {
            return None;
        }
        let mut best: Option<u64> = None;
        let mut offer = |n: u64| best = Some(best.map_or(n, |b| b.min(n)));
        for a in &self.pieces {
            for b in &other.pieces {
                if !classes_overlap(a.k, a.r, b.k, b.r) {
                    continue;
                }
                let (k, r) = if a.k >= b.k { (a.k, a.r) } else { (b.k, b.r) };
                // Both sides are affine in q on the common class, so they agree
                // everywhere there iff they agree at q = 0 and q = 1.
                let second = r + (1u64 << k);
                if a.apply(r) != b.apply(r) {
                    offer(r);
                } else if a.apply(second) != b.apply(second) {
                    offer(second);
                }
            }
        }
        for (mine, theirs) in [(self, other), (other, self)] {
            for p in &mine.pieces {
                if let Some(n) = least_uncovered(p.k, p.r, &theirs.pieces) {
                    offer(n);
                }
            }
        }
        best
    }
}

// Least element of the class `r mod 2^k` outside every input class of `covers`.
fn least_uncovered(k: u32, r: u64, covers: &[Piece]) -> Option<u64> {
    let mut inside = false;
    for c in covers {
        if classes_overlap(k, r, c.k, c.r) {
            if c.k <= k {
                return None;
            }
            inside = true;
        }
    }
    if !inside {
        return Some(r);
    }
    let left = least_uncovered(k + 1, r, covers);
    let right = least_uncovered(k + 1, r + (1u64 << k), covers);
    match (left, right) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// `g` after `f`, defined where `f` is defined and lands in the domain of `g`.
pub fn compose(g: &ResidueMap, f: &ResidueMap) -> ResidueMap {
    let mut out = Vec::new();
    for pf in &f.pieces {
        for pg in &g.pieces {
            if !classes_overlap(pf.k_out, pf.r_out, pg.k, pg.r) {
                continue;
            }
            // Restrict pf to the part of its domain whose image lies in pg's class.
            let (k, r, ko, ro) = if pf.k_out >= pg.k {
                (pf.k, pf.r, pf.k_out, pf.r_out)
            } else {
                let extra = pg.k - pf.k_out;
                let j = (pg.r.wrapping_sub(pf.r_out) & mask(pg.k)) >> pf.k_out;
                debug_assert!(j < (1u64 << extra));
                (pf.k + extra, pf.r + (j << pf.k), pg.k, pg.r)
            };
            assert!(k <= MAX_BITS, "composite modulus exceeds 2^{MAX_BITS}");
            // Now ro ≡ pg.r (mod 2^pg.k) and ko >= pg.k.
            let k_out = pg.k_out + ko - pg.k;
            assert!(k_out <= MAX_BITS, "composite modulus exceeds 2^{MAX_BITS}");
            let r_out = pg.r_out + (((ro - pg.r) >> pg.k) << pg.k_out);
            out.push(Piece::new(k, r, k_out, r_out));
        }
    }
    ResidueMap::canonical(out)
}

pub fn invert(f: &ResidueMap) -> ResidueMap {
    ResidueMap::canonical(f.pieces.iter().map(Piece::inverse).collect())
}

pub fn equal(f: &ResidueMap, g: &ResidueMap) -> bool {
    f == g
}

pub fn apply(m: &ResidueMap, n: u64) -> Option<u64> {
    m.apply(n)
}

/// The induced tensor: `f` acts on evens, `g` on odds.
pub fn interleave(f: &ResidueMap, g: &ResidueMap) -> ResidueMap {
    let evens = f.pieces.iter().map(|p| Piece::new(p.k + 1, 2 * p.r, p.k_out + 1, 2 * p.r_out));
    let odds = g.pieces.iter().map(|p| Piece::new(p.k + 1, 2 * p.r + 1, p.k_out + 1, 2 * p.r_out + 1));
    ResidueMap::canonical(evens.chain(odds).collect())
}

/// Associator of the induced tensor.
pub fn alpha_map() -> ResidueMap {
    ResidueMap::canonical(vec![Piece::new(1, 0, 2, 0), Piece::new(2, 1, 2, 2), Piece::new(2, 3, 1, 1)])
}

/// Swaps `2m` and `2m+1`.
pub fn sigma_map() -> ResidueMap {
    ResidueMap::canonical(vec![Piece::new(1, 0, 1, 1), Piece::new(1, 1, 1, 0)])
}

/// The pairing `ℕ ⊎ ℕ -> ℕ`, `(n, i) -> 2n + i`.
pub fn cantor_code(n: u64, i: u8) -> u64 {
    assert!(i <= 1, "cantor_code tag must be 0 or 1");
    2 * n + u64::from(i)
}

/// Tensor induced by the alternative code `c ∘ cantor`: `c (f ⋆ g) c⁻¹`.
pub fn star_with_code(c: &ResidueMap, f: &ResidueMap, g: &ResidueMap) -> ResidueMap {
    compose(c, &compose(&interleave(f, g), &invert(c)))
}

impl fmt::Display for ResidueMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{ ")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{} -> {}/{}", p.r, 1u64 << p.k, p.r_out, 1u64 << p.k_out)?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for ResidueMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Leaf-embedding oracle: position of the i-th element of each component
    // in x⋆(y⋆z) and in (x⋆y)⋆z, computed by nesting the pairing directly.
    fn right_nested(component: usize, i: u64) -> u64 {
        match component {
            0 => cantor_code(i, 0),
            1 => cantor_code(cantor_code(i, 0), 1),
            _ => cantor_code(cantor_code(i, 1), 1),
        }
    }

    fn left_nested(component: usize, i: u64) -> u64 {
        match component {
            0 => cantor_code(cantor_code(i, 0), 0),
            1 => cantor_code(cantor_code(i, 1), 0),
            _ => cantor_code(i, 1),
        }
    }

    #[test]
    fn alpha_matches_leaf_embeddings() {
        let alpha = alpha_map();
        for component in 0..3 {
            for i in 0..200 {
                assert_eq!(alpha.apply(right_nested(component, i)), Some(left_nested(component, i)));
            }
        }
        assert_eq!(alpha.apply(0), Some(0));
        assert_eq!(alpha.apply(5), Some(6));
        assert_eq!(alpha.apply(3), Some(1));
        assert!(alpha.is_total_bijection());
    }

    #[test]
    fn printed_third_clause_is_not_a_bijection() {
        let printed = [Piece::new(1, 0, 2, 0), Piece::new(2, 1, 2, 2), Piece::new(2, 3, 1, 0)];
        assert!(!pieces_form_bijection(&printed));
        assert!(matches!(ResidueMap::new(printed.to_vec()), Err(MapError::OverlappingOutputs(..))));
        // 3 and 0 both land on 0.
        assert_eq!(printed[2].apply(3), printed[0].apply(0));
    }

    #[test]
    fn sigma_pieces_and_values() {
        let s = sigma_map();
        assert_eq!(s.pieces(), &[Piece::new(1, 0, 1, 1), Piece::new(1, 1, 1, 0)]);
        assert_eq!(s.apply(0), Some(1));
        assert_eq!(s.apply(3), Some(2));
        assert!(compose(&s, &s).is_identity());
    }

    #[test]
    fn identity_and_cantor() {
        assert_eq!(ResidueMap::identity().apply(7), Some(7));
        assert_eq!(cantor_code(3, 0), 6);
        assert_eq!(cantor_code(3, 1), 7);
    }

    #[test]
    fn interleave_examples() {
        let id = ResidueMap::identity();
        let m = interleave(&sigma_map(), &id);
        assert_eq!(m.apply(0), Some(2));
        assert_eq!(m.apply(1), Some(1));
        assert!(interleave(&id, &id).is_identity());
        assert!(invert(&interleave(&id, &id)).is_identity());
    }

    #[test]
    fn canonical_form_ignores_piece_order_and_refinement() {
        let a = ResidueMap::new(vec![Piece::new(1, 1, 1, 0), Piece::new(1, 0, 1, 1)]).unwrap();
        assert_eq!(a, sigma_map());
        let refined = ResidueMap::new(vec![
            Piece::new(2, 0, 2, 0),
            Piece::new(2, 2, 2, 2),
            Piece::new(2, 1, 2, 1),
            Piece::new(3, 3, 3, 3),
            Piece::new(3, 7, 3, 7),
        ])
        .unwrap();
        assert!(refined.is_identity());
    }

    #[test]
    fn validation_rejects_bad_pieces() {
        assert!(matches!(
            ResidueMap::new(vec![Piece::new(1, 2, 1, 0)]),
            Err(MapError::ResidueOutOfRange { .. })
        ));
        assert!(matches!(
            ResidueMap::new(vec![Piece::new(1, 0, 1, 0), Piece::new(2, 2, 1, 1)]),
            Err(MapError::OverlappingInputs(..))
        ));
    }

    #[test]
    fn partial_maps_compose_on_intersected_domains() {
        let evens_only = ResidueMap::new(vec![Piece::new(1, 0, 1, 0)]).unwrap();
        let c = compose(&sigma_map(), &evens_only);
        assert_eq!(c.apply(0), Some(1));
        assert_eq!(c.apply(1), None);
        assert!(!c.is_total());
        let d = compose(&evens_only, &sigma_map());
        assert_eq!(d.apply(1), Some(0));
        assert_eq!(d.apply(0), None);
    }

    #[test]
    fn compose_refines_coarse_images() {
        // f doubles, g acts per class mod 4: g(f(n)) must be computed on refined classes.
        let double = ResidueMap::new(vec![Piece::new(0, 0, 1, 0)]).unwrap();
        let g = alpha_map();
        let c = compose(&g, &double);
        for n in 0..100 {
            assert_eq!(c.apply(n), Some(g.apply(2 * n).unwrap()));
        }
    }

    #[test]
    fn first_difference_is_least() {
        let alpha = alpha_map();
        let id = ResidueMap::identity();
        assert_eq!(alpha.first_difference(&id), Some(1));
        assert_eq!(alpha.first_difference(&alpha), None);
        let evens_only = ResidueMap::new(vec![Piece::new(1, 0, 1, 0)]).unwrap();
        assert_eq!(evens_only.first_difference(&id), Some(1));
        // Identity except for a swap of the classes 1000 and 1001 mod 1024.
        let swapped: Vec<Piece> = (0..1024u64)
            .map(|r| match r {
                1000 => Piece::new(10, 1000, 10, 1001),
                1001 => Piece::new(10, 1001, 10, 1000),
                _ => Piece::new(10, r, 10, r),
            })
            .collect();
        let b = ResidueMap::new(swapped).unwrap();
        assert!(b.is_total_bijection());
        assert!(b.pieces().len() < 30);
        let brute = |x: &ResidueMap, y: &ResidueMap| (0..5000).find(|&n| x.apply(n) != y.apply(n));
        assert_eq!(id.first_difference(&b), Some(1000));
        assert_eq!(id.first_difference(&b), brute(&id, &b));
        let partial = ResidueMap::new(vec![Piece::new(10, 1000, 10, 1001)]).unwrap();
        assert_eq!(partial.first_difference(&b), Some(0));
    }

    #[test]
    fn display_uses_literal_syntax() {
        assert_eq!(sigma_map().to_string(), "{ 0/2 -> 1/2, 1/2 -> 0/2 }");
        assert_eq!(ResidueMap::empty().to_string(), "{}");
    }
}
