use csl_core::ComplexValue;

/// Parse `a+bi`, `a-bi`, a bare real `a`, or a bare imaginary `bi`.
/// Components are decimal (exponents allowed); no whitespace.
pub fn parse_complex(text: &str) -> Result<ComplexValue, String> {
    let bad = || format!("invalid complex number {text:?}; expected a+bi or a-bi, e.g. 0.5+14.134725i");
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let parse = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ if s.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) => {
                s.parse::<f64>().map_err(|_| bad())
            }
            _ => Err(bad()),
        }
    };
    let value = match text.strip_suffix('i') {
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
            match split {
                Some(i) => {
                    let re = &body[..i];
                    if re.is_empty() {
                        return Err(bad());
                    }
                    ComplexValue::new(parse(re)?, parse(&body[i..])?)
                }
                None => ComplexValue::new(0.0, parse(body)?),
            }
        }
        None => {
            if matches!(text, "+" | "-") {
                return Err(bad());
            }
            ComplexValue::new(parse(text)?, 0.0)
        }
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("2+0i"), Ok(c(2.0, 0.0)));
        assert_eq!(parse_complex("0.5+14.134725142i"), Ok(c(0.5, 14.134725142)));
        assert_eq!(parse_complex("0.5-21i"), Ok(c(0.5, -21.0)));
        assert_eq!(parse_complex("-0.25+3i"), Ok(c(-0.25, 3.0)));
        assert_eq!(parse_complex("0.75"), Ok(c(0.75, 0.0)));
        assert_eq!(parse_complex("3i"), Ok(c(0.0, 3.0)));
        assert_eq!(parse_complex("1+i"), Ok(c(1.0, 1.0)));
        assert_eq!(parse_complex("1e-3+2.5e+1i"), Ok(c(1e-3, 25.0)));
        assert_eq!(parse_complex("0.5+1e6i"), Ok(c(0.5, 1e6)));
    }

    #[test]
    fn rejected_forms() {
        for s in ["", "abc", "1 + 2i", "1+2j", "+i2", "nan", "inf+1i", "1++2i", "+", "i+1", "0x1+2i"] {
            assert!(parse_complex(s).is_err(), "{s:?} should be rejected");
        }
    }
}
