use crate::error::{Error, Result};

/// `Σ'_n = {0, s, 2s, …, (c−1)s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZShift {
    pub step: u64,
    pub count: u64,
}

impl ZShift {
    pub fn element(&self, i: u64) -> u64 {
        i * self.step
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.count).map(|i| i * self.step)
    }
}

/// The tiling of `ℤ` by intervals `T'_n = [0, |T_n| − 1]` matched to a tiling
/// shift of `Δ` through the sizes `|Σ_n|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZTiling {
    shift_sizes: Vec<u64>,
    tile_sizes: Vec<u64>,
}

impl ZTiling {
    /// From `|Σ_0|, …, |Σ_N|`.
    pub fn new(shift_sizes: Vec<u64>) -> Result<Self> {
        let mut tile_sizes = Vec::with_capacity(shift_sizes.len());
        let mut t: u64 = 1;
        for (n, &s) in shift_sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::Invariant(format!("Σ_{n} is empty")));
            }
            t = t.checked_mul(s).ok_or_else(|| Error::CapExceeded {
                what: "ℤ tile".into(),
                size: format!("more than {}", u64::MAX),
                cap: u64::MAX,
            })?;
            tile_sizes.push(t);
        }
        Ok(Self { shift_sizes, tile_sizes })
    }

    pub fn levels(&self) -> usize {
        self.shift_sizes.len()
    }

    /// `|T'_n| = |T_n|`.
    pub fn tile_len(&self, n: usize) -> u64 {
        self.tile_sizes[n]
    }

    /// `Σ'_n`; `Σ'_0 = [0, |T_0| − 1]` is the progression of step 1.
    pub fn z_shift(&self, n: usize) -> ZShift {
        let step = if n == 0 { 1 } else { self.tile_sizes[n - 1] };
        ZShift { step, count: self.shift_sizes[n] }
    }

    /// `T'_n` as the closed interval `(0, |T_n| − 1)`.
    pub fn z_tile(&self, n: usize) -> (u64, u64) {
        (0, self.tile_sizes[n] - 1)
    }

    /// `Σ_n i_n |T_{n−1}|` with `|T_{−1}| = 1`.
    pub fn addr_to_int(&self, addr: &[u64]) -> Result<u64> {
        let mut x = 0u64;
        for (n, &i) in addr.iter().enumerate() {
            let zs = self.z_shift(n);
            if i >= zs.count {
                return Err(Error::AddressOutOfRange { level: n, index: i, size: zs.count });
            }
            x += zs.element(i);
        }
        Ok(x)
    }

    /// Inverse of [`addr_to_int`](Self::addr_to_int) on `[0, |T_N| − 1]`.
    pub fn int_to_addr(&self, levels: usize, mut x: u64) -> Result<Vec<u64>> {
        let size = self.tile_sizes[levels - 1];
        if x >= size {
            return Err(Error::AddressOutOfRange { level: levels - 1, index: x, size });
        }
        let mut addr = vec![0; levels];
        for n in (0..levels).rev() {
            let step = self.z_shift(n).step;
            addr[n] = x / step;
            x %= step;
        }
        Ok(addr)
    }
}
