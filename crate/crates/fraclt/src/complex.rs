//! Parsing of complex numbers given on the command line.

use fraclt_core::Complex64;

/// Accepts `re,im`, `a+bi`, `a-bi`, `bi`, `i`, `-i` and plain reals.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("cannot parse {text:?} as a complex number (use re,im or a+bi)");
    if t.is_empty() {
        return Err(err());
    }
    if let Some((re, im)) = t.split_once(',') {
        let re = re.parse().map_err(|_| err())?;
        let im = im.parse().map_err(|_| err())?;
        return Ok(Complex64::new(re, im));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re: f64 = if re.is_empty() { 0.0 } else { re.parse().map_err(|_| err())? };
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().map_err(|_| err())?,
    };
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("4i").unwrap(), c(0.0, 4.0));
        assert_eq!(parse_complex("0.5+0.5i").unwrap(), c(0.5, 0.5));
        assert_eq!(parse_complex("-2-3i").unwrap(), c(-2.0, -3.0));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), c(1e-3, -20.0));
        assert_eq!(parse_complex("-0.25, 0.75").unwrap(), c(-0.25, 0.75));
        assert_eq!(parse_complex("1 - i").unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn rejected_forms() {
        for bad in ["", "x", "1+", "1,2,3", "i i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }
}
