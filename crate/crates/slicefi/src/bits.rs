//! Fixed-width two-state values.

use std::fmt;

/// A two-state bit vector of up to 64 bits. The stored value is always
/// masked to the declared width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    width: u32,
    value: u64,
}

/// All-ones mask for a width in 1..=64.
#[inline]
pub fn mask(width: u32) -> u64 {
    debug_assert!((1..=64).contains(&width));
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitVector {
    /// Build a value, masking to `width`. Panics if width is 0 or > 64.
    pub fn new(width: u32, value: u64) -> Self {
        assert!((1..=64).contains(&width), "bit vector width out of range");
        Self {
            width,
            value: value & mask(width),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn bit(&self, index: u32) -> bool {
        assert!(index < self.width);
        (self.value >> index) & 1 == 1
    }

    /// Value with one bit inverted.
    pub fn flip_bit(&self, index: u32) -> Self {
        assert!(index < self.width);
        Self {
            width: self.width,
            value: self.value ^ (1u64 << index),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}'d{}", self.width, self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn masking() {
        assert_eq!(BitVector::new(4, 0x1f).value(), 0xf);
        assert_eq!(BitVector::new(64, u64::MAX).value(), u64::MAX);
        assert_eq!(BitVector::new(1, 2).value(), 0);
    }

    #[test]
    fn flip_is_involutive() {
        let v = BitVector::new(8, 0xa5);
        assert_eq!(v.flip_bit(3).flip_bit(3), v);
        assert!(v.flip_bit(1).bit(1));
    }

    proptest! {
        #[test]
        fn value_always_below_width_bound(width in 1u32..=64, value: u64) {
            let v = BitVector::new(width, value);
            if width < 64 {
                prop_assert!(v.value() < (1u64 << width));
            }
            prop_assert_eq!(v.value(), value & mask(width));
        }
    }
}
