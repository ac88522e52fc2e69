use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    /// Digits with an optional fractional part, kept verbatim.
    Number(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Equals,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    /// `∘` or the keyword `of`
    Compose,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Number(n) => format!("number `{n}`"),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Colon => ":",
            TokenKind::Equals => "=",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Caret => "^",
            TokenKind::Compose => "∘",
            TokenKind::Ident(_) => "identifier",
            TokenKind::Number(_) => "number",
            TokenKind::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first character.
    pub offset: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = offset;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[offset..end];
            let kind = if word == "of" { TokenKind::Compose } else { TokenKind::Ident(word.to_string()) };
            tokens.push(Token { kind, offset });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = offset;
            let mut seen_point = false;
            while let Some(&(i, c)) = chars.peek() {
                let fractional_start = c == '.' && !seen_point && text[i + 1..].starts_with(|d: char| d.is_ascii_digit());
                if c.is_ascii_digit() || fractional_start {
                    seen_point |= c == '.';
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            end += exponent_len(&text[end..]);
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            tokens.push(Token { kind: TokenKind::Number(text[offset..end].to_string()), offset });
            continue;
        }
        let kind = match c {
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            ':' => TokenKind::Colon,
            '=' => TokenKind::Equals,
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '∘' => TokenKind::Compose,
            other => {
                return Err(Error::Parse {
                    offset,
                    message: format!("unexpected character {other:?}"),
                    expected: vec!["expression".to_string()],
                })
            }
        };
        chars.next();
        tokens.push(Token { kind, offset });
    }
    tokens.push(Token { kind: TokenKind::Eof, offset: text.len() });
    Ok(tokens)
}

/// Length of an exponent suffix such as `e-7`, or zero.
fn exponent_len(rest: &str) -> usize {
    let bytes = rest.as_bytes();
    if !matches!(bytes.first(), Some(b'e' | b'E')) {
        return 0;
    }
    let sign = usize::from(matches!(bytes.get(1), Some(b'+' | b'-')));
    let digits = bytes[1 + sign..].iter().take_while(|b| b.is_ascii_digit()).count();
    if digits == 0 {
        0
    } else {
        1 + sign + digits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn words_numbers_and_symbols() {
        assert_eq!(
            kinds("E of (Eplus) ∘ Z^2"),
            vec![
                TokenKind::Ident("E".into()),
                TokenKind::Compose,
                TokenKind::LParen,
                TokenKind::Ident("Eplus".into()),
                TokenKind::RParen,
                TokenKind::Compose,
                TokenKind::Ident("Z".into()),
                TokenKind::Caret,
                TokenKind::Number("2".into()),
                TokenKind::Eof,
            ]
        );
        assert_eq!(
            kinds("0.25 -3"),
            vec![TokenKind::Number("0.25".into()), TokenKind::Minus, TokenKind::Number("3".into()), TokenKind::Eof]
        );
        assert!(tokenize("3.").is_err());
        assert_eq!(kinds("1e-7"), vec![TokenKind::Number("1e-7".into()), TokenKind::Eof]);
        assert_eq!(kinds("2E"), vec![TokenKind::Number("2".into()), TokenKind::Ident("E".into()), TokenKind::Eof]);
    }

    #[test]
    fn offsets_are_bytes() {
        let t = tokenize("Z∘E").unwrap();
        assert_eq!(t.iter().map(|t| t.offset).collect::<Vec<_>>(), vec![0, 1, 4, 5]);
    }

    #[test]
    fn rejects_stray_characters() {
        match tokenize("Z + $") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
    }
}
