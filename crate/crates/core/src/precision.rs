//! Working-precision policy.
//!
//! A [`Precision`] pairs the number of decimal digits the caller wants to be
//! correct with a number of guard digits carried on top of it. Every rounded
//! operation in the crate rounds to `digits + guard` fractional digits.

/// Requested decimal digits plus guard digits. The guard is never below
/// [`Precision::MIN_GUARD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
    guard: u32,
}

impl Precision {
    pub const MIN_GUARD: u32 = 10;

    /// Explicit guard; values below the minimum are clamped up.
    pub fn new(digits: u32, guard: u32) -> Self {
        Precision {
            digits,
            guard: guard.max(Self::MIN_GUARD),
        }
    }

    /// Default guard for `digits` when no series length is known.
    pub fn with_digits(digits: u32) -> Self {
        Self::for_series(digits, 0, 0)
    }

    /// Guard sized for a double sum of `n_max * m` terms:
    /// `10 + ceil(log10(n_max*M + 1)) + ceil(log10(p + 1))`.
    pub fn for_series(digits: u32, n_max: u32, m: u32) -> Self {
        let terms = u64::from(n_max) * u64::from(m);
        let guard = 10 + ceil_log10_plus_one(terms) + ceil_log10_plus_one(u64::from(digits));
        Self::new(digits, guard)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Number of fractional digits every rounded result carries.
    pub fn working_scale(&self) -> u32 {
        self.digits + self.guard
    }

    /// Same target digits, `extra` more guard digits.
    pub fn inflate(&self, extra: u32) -> Self {
        Precision::new(self.digits, self.guard + extra)
    }

    /// Same guard policy, different target digits.
    pub fn with_target(&self, digits: u32) -> Self {
        Precision::new(digits, self.guard)
    }
}

/// `ceil(log10(n + 1))`, which is the decimal digit count of `n` (0 for 0).
pub(crate) fn ceil_log10_plus_one(n: u64) -> u32 {
    if n == 0 {
        0
    } else {
        n.ilog10() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_is_clamped() {
        let p = Precision::new(50, 3);
        assert_eq!(p.guard(), 10);
        assert_eq!(p.working_scale(), 60);
    }

    #[test]
    fn series_guard_formula() {
        // n_max*M = 10 -> ceil(log10 11) = 2; p = 100 -> ceil(log10 101) = 3
        let p = Precision::for_series(100, 10, 1);
        assert_eq!(p.guard(), 15);
        // n_max*M = 9 -> ceil(log10 10) = 1; p = 9 -> 1
        assert_eq!(Precision::for_series(9, 9, 1).guard(), 12);
        assert_eq!(Precision::with_digits(0).guard(), 10);
    }

    #[test]
    fn ceil_log10_matches_float() {
        for n in [1u64, 2, 9, 10, 11, 99, 100, 101, 12345, 999_999] {
            let expect = ((n + 1) as f64).log10().ceil() as u32;
            assert_eq!(ceil_log10_plus_one(n), expect, "n = {n}");
        }
    }
}
