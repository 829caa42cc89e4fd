//! Word-level helpers for fixed-width bit rows.

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
pub(crate) fn get(row: &[u64], i: usize) -> bool {
    row[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize) {
    row[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
}

#[inline]
pub(crate) fn clear(row: &mut [u64], i: usize) {
    row[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
}

/// Sets the first `n` bits of `row` and clears the rest.
pub(crate) fn fill_prefix(row: &mut [u64], n: usize) {
    for (w, slot) in row.iter_mut().enumerate() {
        let lo = w * WORD_BITS;
        *slot = if lo + WORD_BITS <= n {
            u64::MAX
        } else if lo >= n {
            0
        } else {
            (1u64 << (n - lo)) - 1
        };
    }
}

#[cfg(test)]
fn count(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

/// Iterator over the indices of set bits, ascending.
pub(crate) struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        let cur = words.first().copied().unwrap_or(0);
        Ones { words, idx: 0, cur }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD_BITS + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}
