/// Fixed-width bit array whose contents can be shifted toward higher indices.
///
/// The 312 detector keys bit `d` to the value `h - d`; raising `h` by `delta`
/// moves every bit up by `delta` and drops whatever falls off the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftBits {
    words: Vec<u64>,
    width: usize,
}

impl ShiftBits {
    pub fn new(width: usize) -> Self {
        ShiftBits {
            words: vec![0; width.div_ceil(64)],
            width,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.width && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.width, "bit {i} outside width {}", self.width);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Moves bit `i` to `i + delta`; bits pushed past the width are lost.
    pub fn shift_up(&mut self, delta: usize) {
        if delta >= self.width {
            self.clear();
            return;
        }
        let word_shift = delta / 64;
        let bit_shift = delta % 64;
        let len = self.words.len();
        for dst in (0..len).rev() {
            let mut w = 0u64;
            if dst >= word_shift {
                let src = dst - word_shift;
                w = self.words[src] << bit_shift;
                if bit_shift > 0 && src > 0 {
                    w |= self.words[src - 1] >> (64 - bit_shift);
                }
            }
            self.words[dst] = w;
        }
        self.mask_tail();
    }

    /// Smallest unset index in `[from, to)`, if any.
    pub fn first_zero_in(&self, from: usize, to: usize) -> Option<usize> {
        let to = to.min(self.width);
        let mut i = from;
        while i < to {
            let word = !self.words[i / 64] >> (i % 64);
            if word != 0 {
                let hit = i + word.trailing_zeros() as usize;
                return (hit < to).then_some(hit);
            }
            i = (i / 64 + 1) * 64;
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&i| self.get(i))
    }

    fn mask_tail(&mut self) {
        let rem = self.width % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}
