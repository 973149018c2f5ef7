//! Simplicial-volume lower bounds from cocycle norms.
//!
//! For a closed manifold covered by the `n`-fold product of hyperbolic
//! planes, proportionality turns the cocycle sup-norm `v` into the bound
//! `||M|| >= Vol(M) / (pi^n * v)`. All rational parts stay exact; pi enters
//! only here, as a 50-digit constant, and decimal output is rounded half-even
//! from at least 30 significant digits of internal precision.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed};
use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Decimal digits of pi carried internally.
pub const PI_DIGITS: usize = 50;

/// pi to 50 decimal places.
const PI_DECIMALS: &str = "14159265358979323846264338327950288419716939937510";

/// pi as an exact fraction `p / 10^50`.
pub fn pi_rational() -> BigRational {
    let digits = format!("3{PI_DECIMALS}");
    let numer: BigInt = digits.parse().expect("constant digits");
    let denom = BigInt::from(10u8).pow(PI_DIGITS as u32);
    BigRational::new(numer, denom)
}

/// A volume expressed as `coeff * pi^pi_pow` with exact rational `coeff`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeSpec {
    pub coeff: Rat,
    pub pi_pow: u32,
}

impl VolumeSpec {
    pub fn is_positive(&self) -> bool {
        self.coeff > (0, 1)
    }
}

impl std::fmt::Display for VolumeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.pi_pow {
            0 => write!(f, "{}", self.coeff),
            1 if self.coeff == Rat::ONE => write!(f, "pi"),
            1 => write!(f, "{}*pi", self.coeff),
            p if self.coeff == Rat::ONE => write!(f, "pi^{p}"),
            p => write!(f, "{}*pi^{p}", self.coeff),
        }
    }
}

/// Parses a volume argument: a decimal/rational number (`"1"`, `"2.5"`,
/// `"7/3"`), a pi power (`"pi"`, `"pi^3"`), or a product (`"2*pi^3"`).
pub fn parse_volume(s: &str) -> Result<VolumeSpec> {
    let s = s.trim();
    let err = |msg: String| Error::Parse {
        line: 0,
        field: "volume".into(),
        message: msg,
    };
    let (coeff_str, pi_str) = match s.split_once('*') {
        Some((a, b)) => (Some(a.trim()), Some(b.trim())),
        None if s.starts_with("pi") => (None, Some(s)),
        None => (Some(s), None),
    };
    let coeff = match coeff_str {
        None => Rat::ONE,
        Some(c) => parse_decimal_or_rational(c)?,
    };
    let pi_pow = match pi_str {
        None => 0,
        Some("pi") => 1,
        Some(p) => {
            let rest = p
                .strip_prefix("pi^")
                .ok_or_else(|| err(format!("expected pi or pi^K, got `{p}`")))?;
            rest.parse::<u32>()
                .map_err(|e| err(format!("bad pi exponent `{rest}`: {e}")))?
        }
    };
    Ok(VolumeSpec { coeff, pi_pow })
}

/// Parses `"p/q"`, an integer, or a decimal like `"2.5"` into an exact `Rat`.
pub fn parse_decimal_or_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.len() as u32;
        if digits > 15 {
            return Err(Error::Validation(format!(
                "decimal `{s}` has more than 15 fractional digits"
            )));
        }
        let scale = 10i64.pow(digits);
        let int: i64 = if int_part.is_empty() || int_part == "-" {
            0
        } else {
            int_part.parse().map_err(|e| Error::Parse {
                line: 0,
                field: "volume".into(),
                message: format!("`{int_part}`: {e}"),
            })?
        };
        let frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|e| Error::Parse {
                line: 0,
                field: "volume".into(),
                message: format!("`{frac_part}`: {e}"),
            })?
        };
        let sign = if s.trim_start().starts_with('-') { -1 } else { 1 };
        let numer = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(sign * frac))
            .ok_or_else(|| Error::Overflow(format!("decimal `{s}`")))?;
        Rat::new(numer, scale)
    } else {
        s.parse()
    }
}

/// A computed lower bound for the simplicial volume.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundResult {
    pub n: usize,
    /// Cocycle sup-norm used (e.g. 11/45 for n = 3).
    pub norm: Rat,
    pub volume: VolumeSpec,
    /// Exact symbolic form `coeff/norm * pi^(pi_pow - n)`.
    pub symbolic: String,
    /// Decimal value to `digits` significant digits, round-half-even.
    pub decimal: String,
    pub digits: usize,
    /// Set when the pi powers cancel and the bound is an exact rational.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<Rat>,
}

/// Lower bound `volume / (pi^n * norm)`.
pub fn lower_bound(n: usize, norm: Rat, volume: &VolumeSpec, digits: usize) -> Result<BoundResult> {
    if norm <= (0, 1) {
        return Err(Error::Validation(format!("norm must be positive, got {norm}")));
    }
    if !volume.is_positive() {
        return Err(Error::Validation(format!(
            "volume must be positive, got coefficient {}",
            volume.coeff
        )));
    }
    if digits == 0 || digits > PI_DIGITS - 10 {
        return Err(Error::Validation(format!(
            "digits must be in 1..={} to stay within the pi precision",
            PI_DIGITS - 10
        )));
    }
    // exact part: coeff / norm, net pi exponent: pi_pow - n
    let exact_part = big(volume.coeff) / big(norm);
    let net_pi = volume.pi_pow as i64 - n as i64;

    let symbolic = symbolic_form(&exact_part, net_pi);
    let exact = if net_pi == 0 {
        let numer = exact_part
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Overflow("exact bound numerator".into()))?;
        let denom = exact_part
            .denom()
            .to_i64()
            .ok_or_else(|| Error::Overflow("exact bound denominator".into()))?;
        Some(Rat::new(numer, denom)?)
    } else {
        None
    };
    let value = if net_pi == 0 {
        exact_part
    } else {
        exact_part * pi_rational().pow(net_pi as i32)
    };
    let decimal = decimal_half_even(&value, digits);
    Ok(BoundResult {
        n,
        norm,
        volume: volume.clone(),
        symbolic,
        decimal,
        digits,
        exact,
    })
}

/// Product-form data for three hyperbolic surfaces of the given genera:
/// volume `prod 2*pi*(2g-2)` and the exact product `prod (4g-4)` of the
/// factor simplicial volumes.
pub fn surfaces_volume(genera: &[u32]) -> Result<(VolumeSpec, Rat)> {
    if genera.is_empty() {
        return Err(Error::Validation("need at least one genus".into()));
    }
    let mut coeff = Rat::ONE;
    let mut factor_norms = Rat::ONE;
    for &g in genera {
        if g < 2 {
            return Err(Error::Validation(format!(
                "genus {g} surface is not hyperbolic (need genus >= 2)"
            )));
        }
        let two_g_minus_2 = Rat::integer(2 * g as i64 - 2);
        coeff = coeff.checked_mul(&two_g_minus_2.checked_mul(&Rat::integer(2))?)?;
        factor_norms = factor_norms.checked_mul(&Rat::integer(4 * g as i64 - 4))?;
    }
    Ok((
        VolumeSpec {
            coeff,
            pi_pow: genera.len() as u32,
        },
        factor_norms,
    ))
}

fn big(r: Rat) -> BigRational {
    BigRational::new(BigInt::from(r.numer()), BigInt::from(r.denom()))
}

/// Signed decimal rendering of an exact rational to `digits` significant
/// digits ("0" for zero).
pub fn rat_decimal(value: &Rat, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let b = big(value.abs());
    let rendered = decimal_half_even(&b, digits);
    if value.numer() < 0 {
        format!("-{rendered}")
    } else {
        rendered
    }
}

fn symbolic_form(exact_part: &BigRational, net_pi: i64) -> String {
    let numer = exact_part.numer().clone();
    let denom = exact_part.denom().clone();
    match net_pi.cmp(&0) {
        std::cmp::Ordering::Equal => {
            if denom.is_one() {
                format!("{numer}")
            } else {
                format!("{numer}/{denom}")
            }
        }
        std::cmp::Ordering::Greater => {
            let pi = if net_pi == 1 {
                "pi".to_string()
            } else {
                format!("pi^{net_pi}")
            };
            if denom.is_one() {
                format!("{numer}*{pi}")
            } else {
                format!("({numer}*{pi})/{denom}")
            }
        }
        std::cmp::Ordering::Less => {
            let k = -net_pi;
            let pi = if k == 1 { "pi".to_string() } else { format!("pi^{k}") };
            if denom.is_one() {
                format!("{numer}/{pi}")
            } else {
                format!("{numer}/({denom}*{pi})")
            }
        }
    }
}

/// Renders a positive rational to `digits` significant decimal digits with
/// round-half-even, as plain decimal when the exponent is small and
/// scientific notation otherwise.
pub fn decimal_half_even(value: &BigRational, digits: usize) -> String {
    assert!(value.is_positive() && digits > 0);
    let one = BigInt::one();
    let ten = BigInt::from(10u8);

    // decimal exponent e: 10^e <= value < 10^(e+1)
    let mut e: i64 = 0;
    let mut probe = value.clone();
    while probe >= BigRational::from_integer(ten.clone()) {
        probe /= BigRational::from_integer(ten.clone());
        e += 1;
    }
    while probe < BigRational::one() {
        probe *= BigRational::from_integer(ten.clone());
        e -= 1;
    }

    // scaled = value * 10^(digits-1-e), an integer in [10^(digits-1), 10^digits)
    let shift = digits as i64 - 1 - e;
    let scaled = scale_pow10(value, shift);
    let (q, r) = (
        scaled.numer() / scaled.denom(),
        scaled.numer() % scaled.denom(),
    );
    let mut mantissa = q;
    // round half to even on the remainder
    let twice = &r * BigInt::from(2u8);
    let cmp = twice.cmp(scaled.denom());
    let round_up = match cmp {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => (&mantissa % &ten + &ten) % &ten % BigInt::from(2u8) == one,
    };
    if round_up {
        mantissa += &one;
    }
    let mut digits_str = mantissa.to_string();
    let mut exp = e;
    if digits_str.len() > digits {
        // rounding 9.99.. overflowed into an extra digit
        digits_str.truncate(digits);
        exp += 1;
    }

    if (-4..=(digits as i64 + 4)).contains(&exp) {
        // plain decimal
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= digits_str.len() {
                let zeros = int_len - digits_str.len();
                format!("{digits_str}{}", "0".repeat(zeros))
            } else {
                format!("{}.{}", &digits_str[..int_len], &digits_str[int_len..])
            }
        } else {
            let zeros = (-exp - 1) as usize;
            format!("0.{}{}", "0".repeat(zeros), digits_str)
        }
    } else {
        let (head, tail) = digits_str.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    }
}

fn scale_pow10(value: &BigRational, shift: i64) -> BigRational {
    let ten = BigInt::from(10u8);
    if shift >= 0 {
        value * BigRational::from_integer(ten.pow(shift as u32))
    } else {
        value / BigRational::from_integer(ten.pow((-shift) as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::Zero;

    #[test]
    fn volume_parsing() {
        assert_eq!(
            parse_volume("1").unwrap(),
            VolumeSpec {
                coeff: Rat::ONE,
                pi_pow: 0
            }
        );
        assert_eq!(parse_volume("pi^3").unwrap().pi_pow, 3);
        assert_eq!(parse_volume("2*pi").unwrap().pi_pow, 1);
        assert_eq!(
            parse_volume("2.5").unwrap().coeff,
            Rat::new(5, 2).unwrap()
        );
        assert_eq!(
            parse_volume("7/3").unwrap().coeff,
            Rat::new(7, 3).unwrap()
        );
        assert!(parse_volume("pi^x").is_err());
    }

    #[test]
    fn cancellation_gives_exact_rational() {
        let v = parse_volume("pi^3").unwrap();
        let b = lower_bound(3, Rat::new(11, 45).unwrap(), &v, 12).unwrap();
        assert_eq!(b.exact, Some(Rat::new(45, 11).unwrap()));
        assert_eq!(b.symbolic, "45/11");
        let v2 = parse_volume("pi^2").unwrap();
        let b2 = lower_bound(2, Rat::new(2, 3).unwrap(), &v2, 12).unwrap();
        assert_eq!(b2.exact, Some(Rat::new(3, 2).unwrap()));
        assert_eq!(b2.decimal, "1.50000000000");
    }

    #[test]
    fn unit_volume_symbolic_form() {
        let v = parse_volume("1").unwrap();
        let b = lower_bound(3, Rat::new(11, 45).unwrap(), &v, 12).unwrap();
        assert_eq!(b.symbolic, "45/(11*pi^3)");
        assert_eq!(b.decimal.len(), "0.131937318797".len());
    }

    #[test]
    fn nonpositive_volume_rejected() {
        let v = parse_volume("0").unwrap();
        assert!(lower_bound(3, Rat::new(11, 45).unwrap(), &v, 12).is_err());
        let v = parse_volume("-2").unwrap();
        assert!(lower_bound(3, Rat::new(11, 45).unwrap(), &v, 12).is_err());
    }

    #[test]
    fn surfaces_product_form() {
        let (vol, norms) = surfaces_volume(&[2, 2, 2]).unwrap();
        // each factor: 2*pi*(2g-2) = 4*pi; total 64*pi^3
        assert_eq!(vol.coeff, Rat::integer(64));
        assert_eq!(vol.pi_pow, 3);
        assert_eq!(norms, Rat::integer(64));
        assert!(surfaces_volume(&[1, 2, 2]).is_err());
    }

    #[test]
    fn decimal_rendering_half_even() {
        let half = BigRational::new(BigInt::from(25), BigInt::from(10));
        assert_eq!(decimal_half_even(&half, 1), "2");
        let half_up = BigRational::new(BigInt::from(35), BigInt::from(10));
        assert_eq!(decimal_half_even(&half_up, 1), "4");
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(decimal_half_even(&third, 5), "0.33333");
        let big_val = BigRational::from_integer(BigInt::from(1234567u64));
        assert_eq!(decimal_half_even(&big_val, 3), "1230000");
    }

    /// Independent source for pi: Machin's formula evaluated in exact
    /// arithmetic, truncation error below 1e-60.
    #[test]
    fn pi_constant_matches_arctan_series() {
        fn atan_inv(x: i64, terms: usize) -> BigRational {
            let mut sum = BigRational::zero();
            let xbig = BigInt::from(x);
            for k in 0..terms {
                let denom = BigInt::from(2 * k as i64 + 1) * xbig.pow(2 * k as u32 + 1);
                let term = BigRational::new(BigInt::one(), denom);
                if k % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            sum
        }
        let series = BigRational::from_integer(BigInt::from(16)) * atan_inv(5, 50)
            - BigRational::from_integer(BigInt::from(4)) * atan_inv(239, 25);
        let diff = (series - pi_rational()).abs();
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u8).pow(50));
        assert!(diff < tol, "pi constant disagrees with the series");
    }
}
