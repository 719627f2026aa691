use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use super::symbol::{Symbol, SymbolTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// How a concentration was written, kept so files round-trip byte for byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Notation {
    Decimal,
    Fraction,
}

/// An exact rational concentration in `(0, 1]`-ish territory; range is
/// checked by [`validate`](super::system::validate), not here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Concentration {
    value: Ratio<u64>,
    notation: Notation,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed concentration '{0}'")]
pub struct ConcentrationParseError(pub String);

impl Concentration {
    pub fn fraction(numer: u64, denom: u64) -> Self {
        assert!(denom > 0, "zero denominator");
        Concentration {
            value: Ratio::new(numer, denom),
            notation: Notation::Fraction,
        }
    }

    /// Equal share `1/k`, used for generated systems.
    pub fn uniform(k: usize) -> Self {
        Self::fraction(1, k.max(1) as u64)
    }

    pub fn numer(&self) -> u64 {
        *self.value.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.value.denom()
    }

    pub fn notation(&self) -> Notation {
        self.notation
    }

    pub fn as_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn same_value(&self, other: &Concentration) -> bool {
        self.value == other.value
    }
}

impl FromStr for Concentration {
    type Err = ConcentrationParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ConcentrationParseError(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.parse().map_err(|_| err())?;
            let d: u64 = d.parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Concentration::fraction(n, d));
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(err());
        }
        let scale = 10u64.pow(frac.len() as u32);
        let int_v: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        let numer = int_v
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(err)?;
        Ok(Concentration {
            value: Ratio::new(numer, scale),
            notation: Notation::Decimal,
        })
    }
}

impl fmt::Display for Concentration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        match self.notation {
            Notation::Fraction => write!(f, "{n}/{d}"),
            Notation::Decimal => {
                // Parsed decimals always reduce to a denominator dividing 10^k.
                let mut digits = 0u32;
                let mut scale: u128 = 1;
                while scale % d as u128 != 0 {
                    scale *= 10;
                    digits += 1;
                }
                let scaled = n as u128 * (scale / d as u128);
                let int = scaled / scale;
                let frac = scaled % scale;
                if digits == 0 {
                    write!(f, "{int}")
                } else {
                    write!(f, "{int}.{frac:0width$}", width = digits as usize)
                }
            }
        }
    }
}

/// A signed quadruple in polymer orientation.
///
/// Negative monomers are stored as they sit in the polymer, `(e, a*, d*, f)`
/// for a site `(a, b)(c, d)`; the rotated presentation some sources use is
/// never represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomer {
    pub quad: [Symbol; 4],
    pub sign: Sign,
    pub concentration: Concentration,
}

impl Monomer {
    pub fn new(quad: [Symbol; 4], sign: Sign, concentration: Concentration) -> Self {
        Monomer {
            quad,
            sign,
            concentration,
        }
    }

    pub fn positive(quad: [Symbol; 4], concentration: Concentration) -> Self {
        Self::new(quad, Sign::Positive, concentration)
    }

    pub fn negative(quad: [Symbol; 4], concentration: Concentration) -> Self {
        Self::new(quad, Sign::Negative, concentration)
    }

    /// Identity of the monomer type, ignoring concentration.
    pub fn key(&self) -> ([Symbol; 4], Sign) {
        (self.quad, self.sign)
    }

    pub fn left_half(&self) -> [Symbol; 2] {
        [self.quad[0], self.quad[1]]
    }

    pub fn right_half(&self) -> [Symbol; 2] {
        [self.quad[2], self.quad[3]]
    }

    pub fn rate(&self) -> f64 {
        self.concentration.as_f64()
    }

    /// `(a, b, c, d)+` in the table's names.
    pub fn render(&self, table: &SymbolTable) -> String {
        let [a, b, c, d] = self.quad.map(|s| table.render(s));
        format!("({a}, {b}, {c}, {d}){}", self.sign.as_char())
    }
}

pub(crate) fn sum_concentrations<'a>(iter: impl IntoIterator<Item = &'a Monomer>) -> BigRational {
    iter.into_iter()
        .fold(BigRational::zero(), |acc, m| acc + m.concentration.to_big())
}

pub(crate) fn big_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_round_trip() {
        for s in ["0.5", "1", "0.125", "0.000000001", "0.3333"] {
            let c: Concentration = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
            assert_eq!(c.notation(), Notation::Decimal);
        }
        let half: Concentration = "0.5".parse().unwrap();
        assert_eq!((half.numer(), half.denom()), (1, 2));
    }

    #[test]
    fn fraction_round_trip() {
        let c: Concentration = "1/39".parse().unwrap();
        assert_eq!(c.to_string(), "1/39");
        assert!((c.as_f64() - 1.0 / 39.0).abs() < 1e-15);
        // reduced on construction
        assert_eq!("2/4".parse::<Concentration>().unwrap().to_string(), "1/2");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", ".", "abc", "1/0", "-0.5", "0.5.1", "1e-3"] {
            assert!(s.parse::<Concentration>().is_err(), "{s}");
        }
    }
}
