use std::cmp::Ordering;

const WORD_BITS: usize = 64;

/// Dense set of variable ordinals over a fixed universe.
///
/// Ordering is by cardinality first, then lexicographic over the sorted
/// members, which is the canonical order used for every emitted term and
/// clause.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarSet {
    words: Vec<u64>,
}

impl VarSet {
    pub fn empty(universe: usize) -> Self {
        VarSet {
            words: vec![0; universe.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = usize>>(universe: usize, bits: I) -> Self {
        let mut set = VarSet::empty(universe);
        for b in bits {
            set.insert(b);
        }
        set
    }

    /// Capacity in bits, rounded up to a word boundary.
    pub fn capacity(&self) -> usize {
        self.words.len() * WORD_BITS
    }

    pub fn insert(&mut self, bit: usize) {
        self.words[bit / WORD_BITS] |= 1 << (bit % WORD_BITS);
    }

    pub fn remove(&mut self, bit: usize) {
        self.words[bit / WORD_BITS] &= !(1 << (bit % WORD_BITS));
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.words
            .get(bit / WORD_BITS)
            .is_some_and(|w| w & (1 << (bit % WORD_BITS)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VarSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn with(&self, bit: usize) -> VarSet {
        let mut out = self.clone();
        out.insert(bit);
        out
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    /// Position of the highest member, if any.
    pub fn max_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }
}

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
