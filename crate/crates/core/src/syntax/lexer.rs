use std::fmt;

use super::error::SyntaxError;
use super::span::{FileId, Span};

/// Largest accepted number literal. Numerals desugar to unary `#succ`
/// chains, so the bound keeps expression depth manageable.
pub const MAX_NUMBER_LITERAL: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    MethodName,
    New,
    Def,
    Number(u32),
    Str(String),
    Assign,
    Semi,
    Eq,
    Bar,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    LBracket,
    RBracket,
    Arrow,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident => "identifier",
            TokenKind::MethodName => "method name",
            TokenKind::New => "`new`",
            TokenKind::Def => "`def`",
            TokenKind::Number(_) => "number literal",
            TokenKind::Str(_) => "string literal",
            TokenKind::Assign => "`:=`",
            TokenKind::Semi => "`;`",
            TokenKind::Eq => "`=`",
            TokenKind::Bar => "`|`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::Comma => "`,`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Arrow => "`=>`",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text of the token; method names keep their leading `#`.
    pub lexeme: String,
    pub span: Span,
}

impl Token {
    /// Name without the `#` sigil, for identifiers and method names.
    pub fn name(&self) -> &str {
        self.lexeme.strip_prefix('#').unwrap_or(&self.lexeme)
    }
}

pub fn tokenize(source: &str, file: FileId) -> Result<Vec<Token>, SyntaxError> {
    Lexer {
        src: source,
        pos: 0,
        file,
    }
    .run()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    file: FileId,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn span(&self, start: usize) -> Span {
        Span::new(self.file, start, self.pos)
    }

    fn run(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut tokens = Vec::new();
        while let Some(c) = self.peek() {
            let start = self.pos;
            if c.is_whitespace() {
                self.pos += c.len_utf8();
                continue;
            }
            if c == '/' && self.peek_at(1) == Some('/') {
                let rest = &self.src[self.pos..];
                self.pos += rest.find('\n').unwrap_or(rest.len());
                continue;
            }
            let kind = match c {
                '#' => {
                    self.pos += 1;
                    if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                        return Err(SyntaxError::IllegalCharacter {
                            found: '#',
                            span: self.span(start),
                        });
                    }
                    self.name();
                    TokenKind::MethodName
                }
                c if c.is_ascii_alphabetic() => {
                    self.name();
                    match &self.src[start..self.pos] {
                        "new" => TokenKind::New,
                        "def" => TokenKind::Def,
                        _ => TokenKind::Ident,
                    }
                }
                c if c.is_ascii_digit() => self.number(start)?,
                '"' => self.string(start)?,
                ':' if self.peek_at(1) == Some('=') => {
                    self.pos += 2;
                    TokenKind::Assign
                }
                '=' if self.peek_at(1) == Some('>') => {
                    self.pos += 2;
                    TokenKind::Arrow
                }
                _ => {
                    let kind = match c {
                        ';' => TokenKind::Semi,
                        '=' => TokenKind::Eq,
                        '|' => TokenKind::Bar,
                        '(' => TokenKind::LParen,
                        ')' => TokenKind::RParen,
                        '{' => TokenKind::LBrace,
                        '}' => TokenKind::RBrace,
                        ',' => TokenKind::Comma,
                        '[' => TokenKind::LBracket,
                        ']' => TokenKind::RBracket,
                        _ => {
                            return Err(SyntaxError::IllegalCharacter {
                                found: c,
                                span: Span::new(self.file, start, start + c.len_utf8()),
                            })
                        }
                    };
                    self.pos += 1;
                    kind
                }
            };
            tokens.push(Token {
                kind,
                lexeme: self.src[start..self.pos].to_string(),
                span: self.span(start),
            });
        }
        Ok(tokens)
    }

    /// `[A-Za-z][A-Za-z0-9-]*`, where `-` is only taken when an alphanumeric
    /// follows it.
    fn name(&mut self) {
        self.pos += 1;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_alphanumeric() => self.pos += 1,
                Some('-') if self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric()) => {
                    self.pos += 1
                }
                _ => break,
            }
        }
    }

    fn number(&mut self, start: usize) -> Result<TokenKind, SyntaxError> {
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        match text.parse::<u32>() {
            Ok(n) if n <= MAX_NUMBER_LITERAL => Ok(TokenKind::Number(n)),
            _ => Err(SyntaxError::NumberTooLarge {
                text: text.to_string(),
                max: MAX_NUMBER_LITERAL,
                span: self.span(start),
            }),
        }
    }

    fn string(&mut self, start: usize) -> Result<TokenKind, SyntaxError> {
        self.pos += 1;
        let mut text = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(SyntaxError::UnterminatedString {
                    span: self.span(start),
                });
            };
            self.pos += c.len_utf8();
            match c {
                '"' => return Ok(TokenKind::Str(text)),
                '\\' => {
                    let esc_start = self.pos - 1;
                    let Some(e) = self.peek() else {
                        return Err(SyntaxError::UnterminatedString {
                            span: self.span(start),
                        });
                    };
                    self.pos += e.len_utf8();
                    text.push(match e {
                        '"' => '"',
                        '\\' => '\\',
                        'n' => '\n',
                        _ => {
                            return Err(SyntaxError::BadEscape {
                                found: e,
                                span: self.span(esc_start),
                            })
                        }
                    });
                }
                c => text.push(c),
            }
        }
    }
}
