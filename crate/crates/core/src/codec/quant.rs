//! Saturating fixed-point LLR grid.

use std::fmt;
use std::str::FromStr;

/// Signed fixed-point format with `total_bits` bits of which `frac_bits` are
/// fractional. The grid is symmetric: `±(2^(total-1) - 1)` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantFormat {
    total_bits: u32,
    frac_bits: u32,
}

impl QuantFormat {
    pub fn new(total_bits: u32, frac_bits: u32) -> Option<Self> {
        if (2..=16).contains(&total_bits) && frac_bits < total_bits {
            Some(QuantFormat {
                total_bits,
                frac_bits,
            })
        } else {
            None
        }
    }

    pub fn total_bits(self) -> u32 {
        self.total_bits
    }

    pub fn frac_bits(self) -> u32 {
        self.frac_bits
    }

    /// Largest representable magnitude in grid steps.
    pub fn max_level(self) -> i32 {
        (1i32 << (self.total_bits - 1)) - 1
    }

    /// Value of one grid step.
    pub fn step(self) -> f64 {
        1.0 / f64::from(1u32 << self.frac_bits)
    }

    pub fn max_value(self) -> f64 {
        f64::from(self.max_level()) * self.step()
    }

    /// Nearest grid level, ties away from zero, saturated.
    pub fn to_level(self, x: f64) -> i32 {
        let scaled = x * f64::from(1u32 << self.frac_bits);
        let max = self.max_level();
        if scaled.is_nan() {
            return 0;
        }
        // f64::round rounds half away from zero
        let r = scaled.round();
        if r >= f64::from(max) {
            max
        } else if r <= -f64::from(max) {
            -max
        } else {
            r as i32
        }
    }

    pub fn from_level(self, level: i32) -> f64 {
        f64::from(level) * self.step()
    }

    pub fn quantize(self, x: f64) -> f64 {
        self.from_level(self.to_level(x))
    }

    /// True if `x` is exactly a multiple of the grid step.
    pub fn on_grid(self, x: f64) -> bool {
        let scaled = x * f64::from(1u32 << self.frac_bits);
        scaled == scaled.round()
    }
}

impl fmt::Display for QuantFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.total_bits, self.frac_bits)
    }
}

impl FromStr for QuantFormat {
    type Err = String;

    /// Parses `total:frac`, e.g. `6:2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (t, f) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `total:frac`, got `{s}`"))?;
        let t: u32 = t.trim().parse().map_err(|_| format!("bad total bits `{t}`"))?;
        let f: u32 = f.trim().parse().map_err(|_| format!("bad fractional bits `{f}`"))?;
        QuantFormat::new(t, f).ok_or_else(|| format!("unsupported format {t}:{f}"))
    }
}

/// Rounds `value` onto the 6-bit grid with `frac_bits` fractional bits.
///
/// Panics if `frac_bits > 5`.
pub fn quantize(value: f64, frac_bits: u32) -> f64 {
    QuantFormat::new(6, frac_bits)
        .expect("frac_bits must be in [0, 5]")
        .quantize(value)
}
