//! Parsing of numbers, complex points and comma lists from flag values.

use num_complex::Complex64;

use crate::CliError;

/// Parses `3`, `-1.5e2`, `2i`, `3+2i`, `1e-3-4.5i`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot parse {s:?} as a number or re+imi"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    // The split is the last sign that is neither leading nor part of an exponent.
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    let im = im.parse::<f64>().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// A comma list whose items are numbers or `lo:hi:count` ranges.
pub fn parse_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_complex(v)?),
            [lo, hi, count] => {
                let lo = parse_complex(lo)?;
                let hi = parse_complex(hi)?;
                let count: usize =
                    count.parse().map_err(|_| CliError::Usage(format!("bad range count in {item:?}")))?;
                if count < 2 {
                    return Err(CliError::Usage(format!("range {item:?} needs at least 2 points")));
                }
                out.extend((0..count).map(|i| lo + (hi - lo) * (i as f64 / (count - 1) as f64)));
            }
            _ => return Err(CliError::Usage(format!("cannot parse list item {item:?}"))),
        }
    }
    Ok(out)
}

/// A comma list of degrees, ascending.
pub fn parse_degrees(s: &str) -> Result<Vec<usize>, CliError> {
    let ns = s
        .split(',')
        .map(str::trim)
        .filter(|i| !i.is_empty())
        .map(|i| i.parse::<usize>().map_err(|_| CliError::Usage(format!("bad degree {i:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if ns.is_empty() {
        return Err(CliError::Usage("--n needs at least one degree".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--n list must be strictly ascending".into()));
    }
    Ok(ns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("3+2i").unwrap(), Complex64::new(3.0, 2.0));
        assert_eq!(parse_complex("-1.5").unwrap(), Complex64::new(-1.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3-4.5i").unwrap(), Complex64::new(1e-3, -4.5));
        assert_eq!(parse_complex("1e+2+1e-1i").unwrap(), Complex64::new(100.0, 0.1));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+xi").is_err());
    }

    #[test]
    fn lists_and_ranges() {
        let v = parse_list("1, 2:3:3,1+i").unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v[2], Complex64::new(2.5, 0.0));
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("1:2:1").is_err());
    }

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("128,256").unwrap(), vec![128, 256]);
        assert!(parse_degrees("256,128").is_err());
        assert!(parse_degrees("").is_err());
    }
}
