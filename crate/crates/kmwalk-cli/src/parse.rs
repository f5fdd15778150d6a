//! Flag-value parsing: scalars as rationals or decimals, batch-size lists
//! and ranges, and q-grids.

use kmwalk::Scalar;

/// Parses "2/5", "0.4", "-1", "3" into the active scalar backend. Rational
/// and decimal forms are exact on the rational backend.
pub fn scalar<S: Scalar>(text: &str) -> Result<S, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad_number(text))?;
        let d: i64 = den.trim().parse().map_err(|_| bad_number(text))?;
        if d == 0 {
            return Err(format!("zero denominator in '{text}'"));
        }
        return Ok(S::from_ratio(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad_number(text));
        }
        if frac_part.len() > 15 {
            return Err(format!("too many decimal digits in '{text}'"));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: i64 = if int_part == "-" || int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad_number(text))?
        };
        let scale = 10i64.pow(frac_part.len() as u32);
        let frac: i64 = frac_part.parse().map_err(|_| bad_number(text))?;
        let total = int.unsigned_abs() as i64 * scale + frac;
        let signed = if negative || int < 0 { -total } else { total };
        return Ok(S::from_ratio(signed, scale));
    }
    let n: i64 = text.parse().map_err(|_| bad_number(text))?;
    Ok(S::from_int(n))
}

fn bad_number(text: &str) -> String {
    format!("cannot parse '{text}' as a number")
}

/// Parses a comma-separated list of scalars.
pub fn scalar_list<S: Scalar>(text: &str) -> Result<Vec<S>, String> {
    text.split(',').map(scalar).collect()
}

/// Parses a batch-size argument: "3", "1,2,5" or an inclusive range "1..40".
pub fn batch_sizes(text: &str) -> Result<Vec<usize>, String> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad_number(text))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad_number(text))?;
        if lo > hi {
            return Err(format!("empty range '{text}'"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|part| part.trim().parse().map_err(|_| bad_number(part)))
        .collect()
}

/// Parses a grid "start:end:step" into the list of grid points
/// (inclusive of `end` up to a relative slack of 1e-9 on the float
/// backend; exact on the rational backend).
pub fn grid<S: Scalar>(text: &str) -> Result<Vec<S>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{text}' must look like start:end:step"));
    }
    let start: S = scalar(parts[0])?;
    let end: S = scalar(parts[1])?;
    let step: S = scalar(parts[2])?;
    if !step.is_positive() {
        return Err("grid step must be positive".into());
    }
    let slack = if S::EXACT { 0.0 } else { 1e-9 * step.to_f64() };
    let mut points = Vec::new();
    let mut i = 0i64;
    loop {
        let q = start.clone() + step.clone() * S::from_int(i);
        if q.to_f64() > end.to_f64() + slack {
            break;
        }
        points.push(q);
        i += 1;
        if i > 10_000_000 {
            return Err("grid has too many points".into());
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmwalk::Rational;

    #[test]
    fn scalars_parse_in_both_backends() {
        assert_eq!(scalar::<Rational>("2/5").unwrap(), Rational::from_ratio(2, 5));
        assert_eq!(scalar::<Rational>("0.005").unwrap(), Rational::from_ratio(1, 200));
        assert_eq!(scalar::<Rational>("-0.25").unwrap(), Rational::from_ratio(-1, 4));
        assert_eq!(scalar::<Rational>("3").unwrap(), Rational::from_int(3));
        assert_eq!(scalar::<f64>("1/4").unwrap(), 0.25);
        assert!(scalar::<f64>("x").is_err());
        assert!(scalar::<f64>("1/0").is_err());
    }

    #[test]
    fn batch_size_forms() {
        assert_eq!(batch_sizes("3").unwrap(), vec![3]);
        assert_eq!(batch_sizes("1,2,5").unwrap(), vec![1, 2, 5]);
        assert_eq!(batch_sizes("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert!(batch_sizes("4..1").is_err());
    }

    #[test]
    fn grids_are_inclusive() {
        let g: Vec<f64> = grid("0:1:0.25").unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[4] - 1.0).abs() < 1e-12);
        let g: Vec<Rational> = grid("0:1:0.005").unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!(g[200], Rational::from_int(1));
    }
}
