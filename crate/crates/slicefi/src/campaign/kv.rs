//! Line-oriented `key = value` files, used for configs and structured
//! reports. `#` starts a comment; blank lines are ignored.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for KvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Parse into ordered (key, value) pairs.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, KvError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(KvError {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(KvError {
                line: i + 1,
                message: "empty key".into(),
            });
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn format(pairs: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let text = "# header\n\na = 1\n  b = two words  \n";
        let pairs = parse(text).unwrap();
        assert_eq!(
            pairs,
            vec![
                ("a".to_string(), "1".to_string()),
                ("b".to_string(), "two words".to_string())
            ]
        );
    }

    #[test]
    fn rejects_lines_without_equals() {
        let err = parse("a = 1\nnot a pair\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn format_parse_round_trip() {
        let pairs = vec![
            ("design".to_string(), "x.mrtl".to_string()),
            ("observation".to_string(), "a,b".to_string()),
        ];
        assert_eq!(parse(&format(&pairs)).unwrap(), pairs);
    }
}
