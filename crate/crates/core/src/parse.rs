//! Byte-offset-aware cursor shared by the system, class and quadric literal
//! parsers. Whitespace is insignificant everywhere.

use crate::error::ParseError;

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    /// Builds an error pointing at the current (non-blank) position.
    pub fn error(&mut self, message: impl Into<String>) -> ParseError {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let token: String = if rest.is_empty() {
            "<end of input>".to_string()
        } else {
            let first = rest.chars().next().unwrap();
            if first.is_ascii_alphanumeric() || first == '-' {
                rest.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '-').collect()
            } else {
                first.to_string()
            }
        };
        ParseError { offset: self.pos, token, message: message.into() }
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub fn int(&mut self, allow_negative: bool) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if allow_negative && bytes.get(end) == Some(&b'-') {
            end += 1;
        }
        let digits_start = end;
        while bytes.get(end).is_some_and(u8::is_ascii_digit) {
            end += 1;
        }
        if end == digits_start {
            return Err(self.error(if allow_negative { "expected an integer" } else { "expected a non-negative integer" }));
        }
        let value = self.src[start..end].parse::<i64>().map_err(|_| self.error("integer out of range"))?;
        self.pos = end;
        Ok(value)
    }

    pub fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let v = self.int(false)?;
        u32::try_from(v).map_err(|_| {
            self.pos = at;
            self.error("integer out of range")
        })
    }

    /// `value[^count]`, expanded into `out`.
    pub fn repeated(&mut self, allow_negative: bool, out: &mut Vec<i64>) -> Result<(), ParseError> {
        let v = self.int(allow_negative)?;
        if self.eat('^') {
            let at = self.pos;
            let count = self.int(false)?;
            if count == 0 {
                self.pos = at;
                return Err(self.error("repetition count must be positive"));
            }
            if count > 1_000_000 {
                self.pos = at;
                return Err(self.error("repetition count too large"));
            }
            out.extend(std::iter::repeat_n(v, count as usize));
        } else {
            out.push(v);
        }
        Ok(())
    }

    /// Comma-separated `repeated` items up to (not including) `close`.
    pub fn list(&mut self, allow_negative: bool, close: char) -> Result<Vec<i64>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            return Ok(out);
        }
        loop {
            self.repeated(allow_negative, &mut out)?;
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Writes `values` with runs collapsed to `v^k`.
pub(crate) fn write_runs(out: &mut String, values: &[i64]) {
    let mut i = 0;
    let mut first = true;
    while i < values.len() {
        let v = values[i];
        let mut j = i;
        while j < values.len() && values[j] == v {
            j += 1;
        }
        if !first {
            out.push(',');
        }
        first = false;
        if j - i > 1 {
            out.push_str(&format!("{v}^{}", j - i));
        } else {
            out.push_str(&v.to_string());
        }
        i = j;
    }
}
