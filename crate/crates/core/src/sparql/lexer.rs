use super::QueryError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Iri(String),
    /// `prefix:local`, unresolved.
    PName(String, String),
    Var(String),
    BlankNode(String),
    Str(String),
    LangTag(String),
    /// Numeric token as written; the parser picks the datatype.
    Number(String),
    /// Bare word: keywords, `a`, `true`, function names.
    Word(String),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(super) fn tokenize(text: &str) -> Result<Vec<Token>, QueryError> {
    let mut lexer = Lexer { chars: text.char_indices().peekable(), text, line: 1, column: 1 };
    let mut out = Vec::new();
    while let Some(t) = lexer.next_token()? {
        out.push(t);
    }
    Ok(out)
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    column: usize,
}

fn is_iri_char(c: char) -> bool {
    !(c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.clone().nth(n).map(|(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { line, column, message: message.into() }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    /// Local part of a prefixed name: name chars and inner dots.
    fn take_local(&mut self) -> String {
        let mut s = String::new();
        loop {
            match self.peek() {
                Some(c) if is_name_char(c) => {
                    s.push(c);
                    self.bump();
                }
                Some('.') if self.peek_at(1).is_some_and(is_name_char) && !s.is_empty() => {
                    s.push('.');
                    self.bump();
                }
                _ => return s,
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, QueryError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else { return Ok(None) };
        let tok = match c {
            '<' => {
                // IRI reference when a well-formed `<...>` follows, otherwise an operator.
                let start = self.chars.peek().map(|&(i, _)| i).unwrap_or(0);
                let rest = &self.text[start + 1..];
                let end = rest.find(|c: char| !is_iri_char(c));
                match end {
                    Some(e) if rest[e..].starts_with('>') => {
                        let iri = rest[..e].to_owned();
                        for _ in 0..iri.chars().count() + 2 {
                            self.bump();
                        }
                        Tok::Iri(iri)
                    }
                    _ => {
                        self.bump();
                        if self.peek() == Some('=') {
                            self.bump();
                            Tok::Punct("<=")
                        } else {
                            Tok::Punct("<")
                        }
                    }
                }
            }
            '?' | '$' => {
                self.bump();
                let name = self.take_while(is_name_char);
                if name.is_empty() {
                    return Err(self.error(line, column, "empty variable name"));
                }
                Tok::Var(name)
            }
            '"' | '\'' => Tok::Str(self.string(c, line, column)?),
            '@' => {
                self.bump();
                let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if tag.is_empty() {
                    return Err(self.error(line, column, "empty language tag"));
                }
                Tok::LangTag(tag)
            }
            '_' if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.take_local();
                if label.is_empty() {
                    return Err(self.error(line, column, "empty blank node label"));
                }
                Tok::BlankNode(label)
            }
            c if c.is_ascii_digit()
                || ((c == '+' || c == '-' || c == '.') && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                Tok::Number(self.number())
            }
            c if c.is_alphabetic() || c == ':' => {
                let word = self.take_while(is_name_char);
                if self.peek() == Some(':') {
                    self.bump();
                    let local = self.take_local();
                    Tok::PName(word, local)
                } else {
                    Tok::Word(word)
                }
            }
            _ => {
                self.bump();
                let two = |me: &mut Self, next: char, long: &'static str, short: Option<&'static str>| {
                    if me.peek() == Some(next) {
                        me.bump();
                        Some(long)
                    } else {
                        short
                    }
                };
                let p = match c {
                    '{' => Some("{"),
                    '}' => Some("}"),
                    '(' => Some("("),
                    ')' => Some(")"),
                    '.' => Some("."),
                    ';' => Some(";"),
                    ',' => Some(","),
                    '*' => Some("*"),
                    '/' => Some("/"),
                    '+' => Some("+"),
                    '-' => Some("-"),
                    '=' => Some("="),
                    '>' => two(self, '=', ">=", Some(">")),
                    '!' => two(self, '=', "!=", Some("!")),
                    '&' => two(self, '&', "&&", None),
                    '|' => two(self, '|', "||", Some("|")),
                    '^' => two(self, '^', "^^", Some("^")),
                    _ => None,
                };
                match p {
                    Some(p) => Tok::Punct(p),
                    None => return Err(self.error(line, column, format!("unexpected character {c:?}"))),
                }
            }
        };
        Ok(Some(Token { tok, line, column }))
    }

    fn number(&mut self) -> String {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            s.push('.');
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            let sign = self.peek_at(1).filter(|c| matches!(c, '+' | '-'));
            let digit_at = if sign.is_some() { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
                s.push(e);
                if let Some(sign) = sign {
                    self.bump();
                    s.push(sign);
                }
                s.push_str(&self.take_while(|c| c.is_ascii_digit()));
            }
        }
        s
    }

    fn string(&mut self, quote: char, line: usize, column: usize) -> Result<String, QueryError> {
        self.bump();
        let mut s = String::new();
        loop {
            let (l, c) = (self.line, self.column);
            match self.bump() {
                None | Some('\n') | Some('\r') => return Err(self.error(line, column, "unterminated string")),
                Some(ch) if ch == quote => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('t') => s.push('\t'),
                    Some('n') => s.push('\n'),
                    Some('r') => s.push('\r'),
                    Some('"') => s.push('"'),
                    Some('\'') => s.push('\''),
                    Some('\\') => s.push('\\'),
                    Some('u') => {
                        let hex: String = (0..4).filter_map(|_| self.bump()).collect();
                        let ch = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                        match ch {
                            Some(ch) if hex.len() == 4 => s.push(ch),
                            _ => return Err(self.error(l, c, "bad \\u escape")),
                        }
                    }
                    _ => return Err(self.error(l, c, "unsupported escape")),
                },
                Some(ch) => s.push(ch),
            }
        }
    }
}
