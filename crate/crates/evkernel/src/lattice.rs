//! Finite frames of discernment and their subset lattice.
//!
//! A [`Frame`] is an ordered list of mutually exclusive, exhaustive atoms.
//! Every proposition over the frame is a subset of atoms, represented by
//! [`PropSet`] as a bitmask: atom `i` contributes bit `i`, so the canonical
//! index of a subset is its mask value and the full lattice is `0..2^n`.
//! [`Partition`] and [`Partitions`] enumerate set partitions of a carrier in
//! restricted-growth-string order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on frame size so masks fit comfortably in a `u32` and dense
/// tables over the lattice stay addressable.
pub const MAX_ATOMS: usize = 16;

/// Default cap on carrier size for partition enumeration (Bell(10) = 115 975).
pub const DEFAULT_PARTITION_CAP: usize = 10;

#[derive(Debug)]
struct FrameInner {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered frame of discernment. Cloning is cheap (shared storage).
#[derive(Clone, Debug)]
pub struct Frame {
    inner: Arc<FrameInner>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.atoms == other.inner.atoms
    }
}

impl Eq for Frame {}

impl Frame {
    /// Builds a frame from distinct atom names, in the given order.
    pub fn new<I, S>(names: I) -> Result<Frame>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = names.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::FrameTooLarge {
                got: atoms.len(),
                cap: MAX_ATOMS,
                context: String::new(),
            });
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::DuplicateAtom(a.clone()));
            }
        }
        Ok(Frame {
            inner: Arc::new(FrameInner { atoms, index }),
        })
    }

    /// Number of atoms.
    pub fn atom_count(&self) -> usize {
        self.inner.atoms.len()
    }

    /// Number of subsets in the lattice (`2^n`).
    pub fn subset_count(&self) -> usize {
        1usize << self.atom_count()
    }

    /// Atom names in frame order.
    pub fn atom_names(&self) -> &[String] {
        &self.inner.atoms
    }

    /// The empty proposition (contradiction).
    pub fn empty(&self) -> PropSet {
        PropSet {
            frame: self.clone(),
            mask: 0,
        }
    }

    /// The full proposition (tautology).
    pub fn full(&self) -> PropSet {
        PropSet {
            frame: self.clone(),
            mask: self.full_mask(),
        }
    }

    /// The singleton proposition for one atom.
    pub fn atom(&self, name: &str) -> Result<PropSet> {
        let i = self.atom_index(name)?;
        Ok(PropSet {
            frame: self.clone(),
            mask: 1 << i,
        })
    }

    /// The proposition containing exactly the named atoms.
    pub fn subset<I, S>(&self, names: I) -> Result<PropSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0u32;
        for name in names {
            mask |= 1 << self.atom_index(name.as_ref())?;
        }
        Ok(PropSet {
            frame: self.clone(),
            mask,
        })
    }

    /// The proposition with the given canonical index (bitmask).
    pub fn subset_from_mask(&self, mask: u32) -> Result<PropSet> {
        if mask > self.full_mask() {
            return Err(Error::ValidationError(format!(
                "subset index {mask} out of range for a {}-atom frame",
                self.atom_count()
            )));
        }
        Ok(PropSet {
            frame: self.clone(),
            mask,
        })
    }

    fn atom_index(&self, name: &str) -> Result<usize> {
        self.inner
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub(crate) fn full_mask(&self) -> u32 {
        ((1u64 << self.atom_count()) - 1) as u32
    }

    pub(crate) fn ensure_same(&self, other: &Frame) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

/// A proposition: a subset of the frame's atoms, stored as a bitmask.
#[derive(Clone, Debug)]
pub struct PropSet {
    frame: Frame,
    mask: u32,
}

impl PartialEq for PropSet {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && self.frame == other.frame
    }
}

impl Eq for PropSet {}

impl PropSet {
    /// The owning frame.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Canonical index of this subset (its bitmask over frame order).
    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Number of atoms in the subset.
    pub fn cardinality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == self.frame.full_mask()
    }

    /// Conjunction (set intersection).
    pub fn meet(&self, other: &PropSet) -> Result<PropSet> {
        self.frame.ensure_same(&other.frame)?;
        Ok(self.with_mask(self.mask & other.mask))
    }

    /// Disjunction (set union).
    pub fn join(&self, other: &PropSet) -> Result<PropSet> {
        self.frame.ensure_same(&other.frame)?;
        Ok(self.with_mask(self.mask | other.mask))
    }

    /// Negation (set complement within the frame).
    pub fn complement(&self) -> PropSet {
        self.with_mask(!self.mask & self.frame.full_mask())
    }

    /// Implication order: true when every atom of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &PropSet) -> Result<bool> {
        self.frame.ensure_same(&other.frame)?;
        Ok(self.mask & !other.mask == 0)
    }

    /// Atom names of this subset, in frame order.
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        let mask = self.mask;
        self.frame
            .inner
            .atoms
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.as_str())
    }

    pub(crate) fn with_mask(&self, mask: u32) -> PropSet {
        PropSet {
            frame: self.frame.clone(),
            mask,
        }
    }
}

impl fmt::Display for PropSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.atoms().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A set partition of a carrier proposition into disjoint non-empty cells.
///
/// Cells are ordered by their smallest atom, which is the order produced by
/// restricted-growth-string enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    carrier: PropSet,
    cells: Vec<PropSet>,
}

impl Partition {
    pub fn carrier(&self) -> &PropSet {
        &self.carrier
    }

    pub fn cells(&self) -> &[PropSet] {
        &self.cells
    }
}

/// Restricted-growth-string state shared by the public iterator and the
/// internal mask-level driver. `a[i]` is the cell label of the carrier's
/// `i`-th atom; `m[i]` tracks `1 + max(a[..=i])`.
#[derive(Debug)]
struct Rgs {
    a: Vec<usize>,
    m: Vec<usize>,
    started: bool,
    done: bool,
}

impl Rgs {
    fn new(k: usize) -> Rgs {
        Rgs {
            a: vec![0; k],
            m: vec![1; k],
            started: false,
            done: false,
        }
    }

    /// Advances to the next string; the first call yields the all-zeros string.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let k = self.a.len();
        // Find the rightmost position that can still be incremented.
        let mut i = k;
        while i > 1 {
            i -= 1;
            if self.a[i] < self.m[i - 1] {
                self.a[i] += 1;
                self.m[i] = self.m[i - 1].max(self.a[i] + 1);
                for j in i + 1..k {
                    self.a[j] = 0;
                    self.m[j] = self.m[j - 1];
                }
                return true;
            }
        }
        self.done = true;
        false
    }

    fn cell_count(&self) -> usize {
        self.m.last().copied().unwrap_or(1)
    }

    /// Writes the cells of the current string as bitmasks into `out`.
    fn cells_into(&self, atom_bits: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.resize(self.cell_count(), 0);
        for (i, &label) in self.a.iter().enumerate() {
            out[label] |= 1 << atom_bits[i];
        }
    }
}

/// Lazy enumeration of all partitions of a carrier, in restricted-growth-string
/// order: the one-cell partition comes first, the all-singletons partition last.
#[derive(Debug)]
pub struct Partitions {
    carrier: PropSet,
    atom_bits: Vec<u32>,
    rgs: Rgs,
    buf: Vec<u32>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if !self.rgs.advance() {
            return None;
        }
        self.rgs.cells_into(&self.atom_bits, &mut self.buf);
        let cells = self
            .buf
            .iter()
            .map(|&mask| self.carrier.with_mask(mask))
            .collect();
        Some(Partition {
            carrier: self.carrier.clone(),
            cells,
        })
    }
}

/// Enumerates set partitions of `carrier` lazily, using the default carrier
/// cap of [`DEFAULT_PARTITION_CAP`] atoms.
pub fn enumerate_partitions(carrier: &PropSet) -> Result<Partitions> {
    enumerate_partitions_capped(carrier, DEFAULT_PARTITION_CAP)
}

/// Like [`enumerate_partitions`] with an explicit carrier-size cap.
pub fn enumerate_partitions_capped(carrier: &PropSet, cap: usize) -> Result<Partitions> {
    let bits = check_carrier(carrier.mask(), cap)?;
    Ok(Partitions {
        carrier: carrier.clone(),
        rgs: Rgs::new(bits.len()),
        atom_bits: bits,
        buf: Vec::new(),
    })
}

fn check_carrier(mask: u32, cap: usize) -> Result<Vec<u32>> {
    if mask == 0 {
        return Err(Error::EmptyCarrier);
    }
    let bits: Vec<u32> = (0..32).filter(|b| mask >> b & 1 == 1).collect();
    if bits.len() > cap {
        return Err(Error::FrameTooLarge {
            got: bits.len(),
            cap,
            context: " for partition enumeration".to_string(),
        });
    }
    Ok(bits)
}

/// In-place subset-sum (zeta) transform: `a[x] <- sum over u subset of x of a[u]`.
/// `a.len()` must be a power of two; runs in `O(n * 2^n)`.
pub(crate) fn subset_sum_in_place(a: &mut [f64]) {
    let mut step = 1;
    while step < a.len() {
        for mask in 0..a.len() {
            if mask & step != 0 {
                a[mask] += a[mask ^ step];
            }
        }
        step <<= 1;
    }
}

/// Inverse of [`subset_sum_in_place`] (Moebius transform on the subset lattice).
pub(crate) fn subset_diff_in_place(a: &mut [f64]) {
    let mut step = 1;
    while step < a.len() {
        for mask in 0..a.len() {
            if mask & step != 0 {
                a[mask] -= a[mask ^ step];
            }
        }
        step <<= 1;
    }
}

/// In-place monotone closure: `a[x] <- max over u subset of x of a[u]`.
pub(crate) fn subset_max_in_place(a: &mut [f64]) {
    let mut step = 1;
    while step < a.len() {
        for mask in 0..a.len() {
            if mask & step != 0 && a[mask ^ step] > a[mask] {
                a[mask] = a[mask ^ step];
            }
        }
        step <<= 1;
    }
}

/// Mask-level partition driver for the engines: calls `f` with the cells of
/// each partition of `mask`; `f` returns `false` to stop early.
pub(crate) fn for_each_partition(
    mask: u32,
    cap: usize,
    mut f: impl FnMut(&[u32]) -> bool,
) -> Result<()> {
    let bits = check_carrier(mask, cap)?;
    let mut rgs = Rgs::new(bits.len());
    let mut buf = Vec::new();
    while rgs.advance() {
        rgs.cells_into(&bits, &mut buf);
        if !f(&buf) {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Frame {
        Frame::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn frame_construction_and_caps() {
        assert_eq!(Frame::new(Vec::<String>::new()).unwrap_err(), Error::EmptyFrame);
        assert_eq!(
            Frame::new(["a", "b", "a"]).unwrap_err(),
            Error::DuplicateAtom("a".into())
        );
        let names: Vec<String> = (0..17).map(|i| format!("x{i}")).collect();
        assert!(matches!(
            Frame::new(names).unwrap_err(),
            Error::FrameTooLarge { got: 17, cap: 16, .. }
        ));
        let full = Frame::new((0..16).map(|i| format!("x{i}"))).unwrap();
        assert_eq!(full.subset_count(), 65536);
    }

    #[test]
    fn canonical_index_is_binary_encoding() {
        let f = abc();
        assert_eq!(f.subset(["a", "c"]).unwrap().mask(), 0b101);
        assert_eq!(f.atom("b").unwrap().mask(), 0b010);
        assert_eq!(f.empty().mask(), 0);
        assert_eq!(f.full().mask(), 0b111);
        assert_eq!(f.subset(["d"]).unwrap_err(), Error::UnknownAtom("d".into()));
        assert!(f.subset_from_mask(8).is_err());
    }

    #[test]
    fn lattice_ops_satisfy_boolean_laws() {
        // Exhaustive over the 3-atom lattice.
        let f = abc();
        let sets: Vec<PropSet> = (0..8).map(|m| f.subset_from_mask(m).unwrap()).collect();
        for x in &sets {
            assert_eq!(x.complement().complement(), *x);
            assert_eq!(x.meet(&x.complement()).unwrap(), f.empty());
            assert_eq!(x.join(&x.complement()).unwrap(), f.full());
            for y in &sets {
                // De Morgan, both directions.
                assert_eq!(
                    x.meet(y).unwrap().complement(),
                    x.complement().join(&y.complement()).unwrap()
                );
                assert_eq!(
                    x.join(y).unwrap().complement(),
                    x.complement().meet(&y.complement()).unwrap()
                );
                assert_eq!(
                    x.is_subset_of(y).unwrap(),
                    x.meet(y).unwrap() == *x
                );
                for z in &sets {
                    assert_eq!(
                        x.meet(&y.meet(z).unwrap()).unwrap(),
                        x.meet(y).unwrap().meet(z).unwrap()
                    );
                    assert_eq!(
                        x.join(&y.join(z).unwrap()).unwrap(),
                        x.join(y).unwrap().join(z).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_frames_are_rejected() {
        let f = abc();
        let g = Frame::new(["a", "b"]).unwrap();
        let x = f.atom("a").unwrap();
        let y = g.atom("a").unwrap();
        assert_eq!(x.meet(&y).unwrap_err(), Error::FrameMismatch);
        // Same atom list built twice is the same frame.
        let f2 = Frame::new(["a", "b", "c"]).unwrap();
        assert!(x.meet(&f2.atom("a").unwrap()).is_ok());
    }

    /// Independent Bell-number oracle: B(n+1) = sum_k C(n,k) B(k).
    fn bell(n: usize) -> u64 {
        let mut b = vec![1u64];
        for m in 0..n {
            let mut next = 0u64;
            let mut binom = 1u64;
            for (k, bk) in b.iter().enumerate() {
                next += binom * bk;
                binom = binom * (m as u64 - k as u64) / (k as u64 + 1);
            }
            b.push(next);
        }
        b[n]
    }

    #[test]
    fn partition_counts_match_bell_numbers() {
        assert_eq!(bell(3), 5);
        assert_eq!(bell(4), 15);
        assert_eq!(bell(10), 115_975);
        let f = Frame::new((0..6).map(|i| format!("x{i}"))).unwrap();
        for k in 1..=6usize {
            let carrier = f.subset_from_mask((1u32 << k) - 1).unwrap();
            let n = enumerate_partitions(&carrier).unwrap().count() as u64;
            assert_eq!(n, bell(k), "carrier of {k} atoms");
        }
    }

    #[test]
    fn partitions_come_in_growth_string_order() {
        let f = abc();
        let got: Vec<Vec<String>> = enumerate_partitions(&f.full())
            .unwrap()
            .map(|p| p.cells().iter().map(|c| c.to_string()).collect())
            .collect();
        let want = vec![
            vec!["{a,b,c}".to_string()],
            vec!["{a,b}".into(), "{c}".into()],
            vec!["{a,c}".into(), "{b}".into()],
            vec!["{a}".into(), "{b,c}".into()],
            vec!["{a}".into(), "{b}".into(), "{c}".into()],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn partition_cells_cover_carrier_disjointly() {
        let f = Frame::new(["a", "b", "c", "d", "e"]).unwrap();
        let carrier = f.subset(["a", "c", "d", "e"]).unwrap();
        let mut count = 0;
        for p in enumerate_partitions(&carrier).unwrap() {
            count += 1;
            let mut seen = 0u32;
            for cell in p.cells() {
                assert!(!cell.is_empty());
                assert_eq!(seen & cell.mask(), 0, "cells overlap");
                seen |= cell.mask();
            }
            assert_eq!(seen, carrier.mask());
        }
        assert_eq!(count, 15); // Bell(4)
    }

    #[test]
    fn partition_caps_and_empty_carrier() {
        let f = Frame::new((0..12).map(|i| format!("x{i}"))).unwrap();
        assert_eq!(
            enumerate_partitions(&f.empty()).unwrap_err(),
            Error::EmptyCarrier
        );
        let big = f.subset_from_mask((1 << 11) - 1).unwrap();
        assert!(matches!(
            enumerate_partitions(&big).unwrap_err(),
            Error::FrameTooLarge { got: 11, cap: 10, .. }
        ));
        assert!(enumerate_partitions_capped(&big, 11).is_ok());
    }

    #[test]
    fn early_stop_in_mask_driver() {
        let mut seen = 0;
        for_each_partition(0b111, 10, |_| {
            seen += 1;
            seen < 2
        })
        .unwrap();
        assert_eq!(seen, 2);
    }
}
