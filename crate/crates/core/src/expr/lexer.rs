use super::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Paren,
    Comma,
}

/// A lexeme together with the character index where it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: usize,
}

/// Splits `src` into tokens using longest match.
///
/// Whitespace separates tokens and is otherwise dropped. Number literals are
/// decimal with an optional fraction and exponent (`1`, `2.5`, `.5`, `3e-4`).
pub fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match c {
            '+' | '-' | '*' | '/' | '^' => {
                i += 1;
                TokenKind::Operator
            }
            '(' | ')' => {
                i += 1;
                TokenKind::Paren
            }
            ',' => {
                i += 1;
                TokenKind::Comma
            }
            c if c.is_ascii_digit() || c == '.' => {
                i = scan_number(&chars, i)?;
                TokenKind::Number
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                TokenKind::Identifier
            }
            other => {
                return Err(ExprError::Lex {
                    pos: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        tokens.push(Token {
            kind,
            text: chars[start..i].iter().collect(),
            pos: start,
        });
    }
    Ok(tokens)
}

fn scan_number(chars: &[char], start: usize) -> Result<usize, ExprError> {
    let digits = |mut i: usize| {
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(start);
    let int_len = i - start;
    let mut frac_len = 0;
    if i < chars.len() && chars[i] == '.' {
        let after = digits(i + 1);
        frac_len = after - (i + 1);
        i = after;
    }
    if int_len == 0 && frac_len == 0 {
        return Err(ExprError::Lex {
            pos: start,
            message: "a number needs at least one digit".into(),
        });
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        let end = digits(j);
        if end == j {
            return Err(ExprError::Lex {
                pos: i,
                message: "exponent has no digits".into(),
            });
        }
        i = end;
    }
    let text: String = chars[start..i].iter().collect();
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(i),
        _ => Err(ExprError::Lex {
            pos: start,
            message: format!("number literal '{text}' is not finite"),
        }),
    }
}
