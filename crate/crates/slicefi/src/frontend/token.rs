//! Lexer for MiniRTL source text.

use super::ast::SourceLoc;
use super::diag::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    /// Bare decimal literal, width inferred from context.
    Number(u64),
    /// Sized literal `<width>'<base><digits>`, e.g. `4'hF`.
    SizedNumber { width: u32, value: u64 },
    Keyword(Keyword),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Semi,
    Colon,
    Comma,
    Question,
    At,
    Assign,       // =
    NonBlocking,  // <=
    EqEq,
    NotEq,
    Lt,
    Bang,
    Tilde,
    Caret,
    Amp,
    Pipe,
    Plus,
    Minus,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Module,
    Endmodule,
    Input,
    Output,
    Wire,
    Reg,
    Assign,
    Always,
    Posedge,
    If,
    Else,
    Case,
    Default,
    Endcase,
    Begin,
    End,
}

fn keyword(s: &str) -> Option<Keyword> {
    Some(match s {
        "module" => Keyword::Module,
        "endmodule" => Keyword::Endmodule,
        "input" => Keyword::Input,
        "output" => Keyword::Output,
        "wire" => Keyword::Wire,
        "reg" => Keyword::Reg,
        "assign" => Keyword::Assign,
        "always" => Keyword::Always,
        "posedge" => Keyword::Posedge,
        "if" => Keyword::If,
        "else" => Keyword::Else,
        "case" => Keyword::Case,
        "default" => Keyword::Default,
        "endcase" => Keyword::Endcase,
        "begin" => Keyword::Begin,
        "end" => Keyword::End,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub loc: SourceLoc,
}

pub fn lex(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! bump {
        () => {{
            if bytes[i] == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < bytes.len() {
        let c = bytes[i];
        let loc = SourceLoc { line, col };
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => bump!(),
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    bump!();
                }
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                bump!();
                bump!();
                loop {
                    if i + 1 >= bytes.len() {
                        return Err(Diagnostic::error(loc, "unterminated block comment"));
                    }
                    if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                        bump!();
                        bump!();
                        break;
                    }
                    bump!();
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    bump!();
                }
                let word = &source[start..i];
                let kind = match keyword(word) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Ident(word.to_string()),
                };
                tokens.push(Token { kind, loc });
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                    bump!();
                }
                let digits: String = source[start..i].chars().filter(|c| *c != '_').collect();
                let n: u64 = digits
                    .parse()
                    .map_err(|_| Diagnostic::error(loc, "decimal literal does not fit in 64 bits"))?;
                if i < bytes.len() && bytes[i] == b'\'' {
                    // sized literal: n is the width
                    bump!();
                    if i >= bytes.len() {
                        return Err(Diagnostic::error(loc, "truncated sized literal"));
                    }
                    let base = bytes[i].to_ascii_lowercase();
                    let radix = match base {
                        b'd' => 10,
                        b'h' => 16,
                        b'b' => 2,
                        _ => {
                            return Err(Diagnostic::error(
                                loc,
                                format!("unknown literal base '{}'", bytes[i] as char),
                            ))
                        }
                    };
                    bump!();
                    let vstart = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        bump!();
                    }
                    let vdigits: String =
                        source[vstart..i].chars().filter(|c| *c != '_').collect();
                    if vdigits.is_empty() {
                        return Err(Diagnostic::error(loc, "sized literal has no digits"));
                    }
                    let value = u64::from_str_radix(&vdigits, radix).map_err(|_| {
                        Diagnostic::error(loc, "bad digits in sized literal")
                    })?;
                    if n == 0 || n > 64 {
                        return Err(Diagnostic::error(
                            loc,
                            format!("literal width {n} out of range 1..=64"),
                        ));
                    }
                    let width = n as u32;
                    if width < 64 && value >= (1u64 << width) {
                        return Err(Diagnostic::error(
                            loc,
                            format!("value {value} does not fit in {width} bits"),
                        ));
                    }
                    tokens.push(Token {
                        kind: TokenKind::SizedNumber { width, value },
                        loc,
                    });
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Number(n),
                        loc,
                    });
                }
            }
            b'(' => {
                tokens.push(Token { kind: TokenKind::LParen, loc });
                bump!();
            }
            b')' => {
                tokens.push(Token { kind: TokenKind::RParen, loc });
                bump!();
            }
            b'[' => {
                tokens.push(Token { kind: TokenKind::LBracket, loc });
                bump!();
            }
            b']' => {
                tokens.push(Token { kind: TokenKind::RBracket, loc });
                bump!();
            }
            b'{' => {
                tokens.push(Token { kind: TokenKind::LBrace, loc });
                bump!();
            }
            b'}' => {
                tokens.push(Token { kind: TokenKind::RBrace, loc });
                bump!();
            }
            b';' => {
                tokens.push(Token { kind: TokenKind::Semi, loc });
                bump!();
            }
            b':' => {
                tokens.push(Token { kind: TokenKind::Colon, loc });
                bump!();
            }
            b',' => {
                tokens.push(Token { kind: TokenKind::Comma, loc });
                bump!();
            }
            b'?' => {
                tokens.push(Token { kind: TokenKind::Question, loc });
                bump!();
            }
            b'@' => {
                tokens.push(Token { kind: TokenKind::At, loc });
                bump!();
            }
            b'=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token { kind: TokenKind::EqEq, loc });
                    bump!();
                    bump!();
                } else {
                    tokens.push(Token { kind: TokenKind::Assign, loc });
                    bump!();
                }
            }
            b'<' => {
                // `<=` is always the nonblocking assign; MiniRTL has no <=
                // comparison operator.
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token { kind: TokenKind::NonBlocking, loc });
                    bump!();
                    bump!();
                } else {
                    tokens.push(Token { kind: TokenKind::Lt, loc });
                    bump!();
                }
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token { kind: TokenKind::NotEq, loc });
                    bump!();
                    bump!();
                } else {
                    tokens.push(Token { kind: TokenKind::Bang, loc });
                    bump!();
                }
            }
            b'~' => {
                tokens.push(Token { kind: TokenKind::Tilde, loc });
                bump!();
            }
            b'^' => {
                tokens.push(Token { kind: TokenKind::Caret, loc });
                bump!();
            }
            b'&' => {
                tokens.push(Token { kind: TokenKind::Amp, loc });
                bump!();
            }
            b'|' => {
                tokens.push(Token { kind: TokenKind::Pipe, loc });
                bump!();
            }
            b'+' => {
                tokens.push(Token { kind: TokenKind::Plus, loc });
                bump!();
            }
            b'-' => {
                tokens.push(Token { kind: TokenKind::Minus, loc });
                bump!();
            }
            _ => {
                return Err(Diagnostic::error(
                    loc,
                    format!("unexpected character '{}'", c as char),
                ))
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        loc: SourceLoc { line, col },
    });
    Ok(tokens)
}
