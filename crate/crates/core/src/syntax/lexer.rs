//! Tokenizer for `.kdb` sources.

use std::fmt;

use num_bigint::BigInt;

use super::ast::Span;
use super::parser::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `$name`
    Loc(String),
    Int(BigInt),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Semi,
    Bar,
    BarBar,
    ColonColon,
    Colon,
    ColonEq,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    PlusPlus,
    Minus,
    Star,
    Slash,
    Bang,
    BangAt,
    At,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Loc(s) => return write!(f, "`${s}`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Str(_) => "string literal",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Semi => "`;`",
            Tok::Bar => "`|`",
            Tok::BarBar => "`||`",
            Tok::ColonColon => "`::`",
            Tok::Colon => "`:`",
            Tok::ColonEq => "`:=`",
            Tok::Eq => "`=`",
            Tok::Ne => "`!=`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::Plus => "`+`",
            Tok::PlusPlus => "`++`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Slash => "`/`",
            Tok::Bang => "`!`",
            Tok::BangAt => "`!@`",
            Tok::At => "`@`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    Lexer { src, chars: src.char_indices().peekable(), line: 1, col: 1 }.run()
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: u32,
    col: u32,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn error(&self, line: u32, col: u32, msg: impl Into<String>) -> ParseError {
        ParseError { line, col, message: msg.into(), expected: Vec::new() }
    }

    /// Identifier body plus an optional `#k` freshness suffix.
    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| is_ident_char(c)) {
            s.push(c);
            self.bump();
        }
        if self.peek() == Some('#') {
            let mut rest = self.chars.clone();
            rest.next();
            if rest.peek().is_some_and(|&(_, c)| c.is_ascii_digit()) {
                self.bump();
                s.push('#');
                while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                    s.push(c);
                    self.bump();
                }
            }
        }
        s
    }

    fn run(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '/' && self.src[self.offset()..].starts_with("//") {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (start, line, col) = (self.offset(), self.line, self.col);
            let Some(c) = self.bump() else {
                out.push(Token { tok: Tok::Eof, span: Span::new(start, start, line, col) });
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ';' => Tok::Semi,
                '@' => Tok::At,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '-' => Tok::Minus,
                '=' => Tok::Eq,
                '|' if self.peek() == Some('|') => {
                    self.bump();
                    Tok::BarBar
                }
                '|' => Tok::Bar,
                ':' if self.peek() == Some(':') => {
                    self.bump();
                    Tok::ColonColon
                }
                ':' if self.peek() == Some('=') => {
                    self.bump();
                    Tok::ColonEq
                }
                ':' => Tok::Colon,
                '+' if self.peek() == Some('+') => {
                    self.bump();
                    Tok::PlusPlus
                }
                '+' => Tok::Plus,
                '<' if self.peek() == Some('=') => {
                    self.bump();
                    Tok::Le
                }
                '<' => Tok::Lt,
                '>' if self.peek() == Some('=') => {
                    self.bump();
                    Tok::Ge
                }
                '>' => Tok::Gt,
                '!' if self.peek() == Some('=') => {
                    self.bump();
                    Tok::Ne
                }
                '!' if self.peek() == Some('@') => {
                    self.bump();
                    Tok::BangAt
                }
                '!' => Tok::Bang,
                '$' => {
                    if !self.peek().is_some_and(is_ident_start) {
                        return Err(self.error(line, col, "expected a locality name after `$`"));
                    }
                    Tok::Loc(self.ident())
                }
                '"' => {
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None => return Err(self.error(line, col, "unterminated string literal")),
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                _ => {
                                    return Err(self.error(self.line, self.col, "unknown escape sequence"))
                                }
                            },
                            Some(ch) => s.push(ch),
                        }
                    }
                    Tok::Str(s)
                }
                c if c.is_ascii_digit() => {
                    let mut digits = c.to_string();
                    while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                        digits.push(d);
                        self.bump();
                    }
                    Tok::Int(digits.parse().expect("decimal digits"))
                }
                c if is_ident_start(c) => {
                    let mut s = c.to_string();
                    s.push_str(&self.ident());
                    Tok::Ident(s)
                }
                other => return Err(self.error(line, col, format!("unexpected character `{other}`"))),
            };
            let end = self.offset();
            out.push(Token { tok, span: Span::new(start, end, line, col) });
        }
    }
}
