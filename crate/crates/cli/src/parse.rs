//! Parsers for weight lists and complex arguments.

use num_complex::Complex64;

/// Parses `"6..24"` (inclusive, step 2), `"6,10,12"` or a single weight.
pub fn parse_weights(text: &str) -> Result<Vec<u32>, String> {
    let text = text.trim();
    let mut weights = Vec::new();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = parse_weight(lo)?;
        let hi = parse_weight(hi)?;
        if lo > hi {
            return Err(format!("empty weight range {text}"));
        }
        weights.extend((lo..=hi).step_by(2));
    } else {
        for part in text.split(',') {
            weights.push(parse_weight(part)?);
        }
    }
    weights.sort_unstable();
    weights.dedup();
    Ok(weights)
}

pub fn parse_weight(text: &str) -> Result<u32, String> {
    let k: u32 = text
        .trim()
        .parse()
        .map_err(|_| format!("invalid weight {text:?}"))?;
    if k == 0 || k % 2 == 1 {
        return Err(format!(
            "weight {k} is not allowed: k must be an even positive integer"
        ));
    }
    Ok(k)
}

/// Parses `2`, `2.5`, `3+2i`, `3-1.5i`, `2i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("invalid complex number {text:?}");
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|x| Complex64::new(x, 0.0))
            .map_err(|_| err());
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| err())?,
    };
    let re = re.parse::<f64>().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(parse_weights("6..12").unwrap(), vec![6, 8, 10, 12]);
        assert_eq!(parse_weights("12,6,10").unwrap(), vec![6, 10, 12]);
        assert_eq!(parse_weights("8").unwrap(), vec![8]);
        assert!(parse_weights("7").is_err());
        assert!(parse_weights("6..7").is_err());
        assert!(parse_weights("12..6").is_err());
        assert!(parse_weights("x").is_err());
    }

    #[test]
    fn complex() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("3+2i").unwrap(), Complex64::new(3.0, 2.0));
        assert_eq!(
            parse_complex("3 - 1.5i").unwrap(),
            Complex64::new(3.0, -1.5)
        );
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(
            parse_complex("1e-3+1e2i").unwrap(),
            Complex64::new(1e-3, 100.0)
        );
        assert!(parse_complex("3+2j").is_err());
        assert_eq!(parse_complex_list("2,3+2i").unwrap().len(), 2);
    }
}
