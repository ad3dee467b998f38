//! Byte-level scanner for the tuple notation.

use crate::error::Error;

pub(crate) struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn token(&self) -> String {
        let rest = self.rest();
        if rest.is_empty() {
            return "<end of input>".into();
        }
        let end = rest
            .char_indices()
            .skip(1)
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '-'))
            .map_or(rest.len(), |(i, _)| i);
        rest[..end].to_string()
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, token: self.token(), message: message.into() }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    /// Accepts `·`, `\cdot`, `x`, `X` or `*` as the degree separator.
    pub fn expect_dot(&mut self) -> Result<(), Error> {
        self.skip_ws();
        for sep in ["·", "\\cdot", "x", "X", "*"] {
            if self.rest().starts_with(sep) {
                self.pos += sep.len();
                return Ok(());
            }
        }
        Err(self.error("expected '·' or 'x' between u and n"))
    }

    pub fn int(&mut self) -> Result<i64, Error> {
        self.skip_ws();
        let rest = self.rest();
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            if c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')) {
                end = i + 1;
            } else {
                break;
            }
        }
        let text = &rest[..end];
        match text.parse::<i64>() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => Err(self.error("expected an integer")),
        }
    }

    pub fn uint(&mut self) -> Result<u32, Error> {
        let start = self.pos;
        let v = self.int()?;
        u32::try_from(v).map_err(|_| {
            self.pos = start;
            self.skip_ws();
            self.error("expected a non-negative integer")
        })
    }

    pub fn finish(&mut self) -> Result<(), Error> {
        if self.peek().is_some() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}
