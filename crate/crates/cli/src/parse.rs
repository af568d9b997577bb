use thiserror::Error;
use unitri_core::rootsys::Root;
use unitri_core::superalg::ElemFactor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| ParseError { pos: start, msg: "number out of range".into() })
    }
}

/// Parses `"(i,j):t, ..."`; an empty or blank string is the empty list.
pub fn parse_factors(text: &str) -> Result<Vec<ElemFactor>, ParseError> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    c.skip_ws();
    if c.pos == c.s.len() {
        return Ok(out);
    }
    loop {
        c.expect(b'(')?;
        let at = c.pos;
        let i = c.number()?;
        c.expect(b',')?;
        let j = c.number()?;
        c.expect(b')')?;
        if i == 0 || j < i {
            return Err(ParseError { pos: at, msg: format!("({i},{j}) is not a positive root") });
        }
        c.expect(b':')?;
        let at = c.pos;
        let t = c.number()?;
        if t == 0 {
            return Err(ParseError { pos: at, msg: "parameter must be nonzero".into() });
        }
        let t = u8::try_from(t).map_err(|_| ParseError { pos: at, msg: "parameter out of range".into() })?;
        out.push(ElemFactor::new(Root::new(i as usize, j as usize), t));
        c.skip_ws();
        if c.pos == c.s.len() {
            return Ok(out);
        }
        c.expect(b',')?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists() {
        let v = parse_factors(" (1,2):1, (3,4):2").unwrap();
        assert_eq!(v, vec![ElemFactor::new(Root::new(1, 2), 1), ElemFactor::new(Root::new(3, 4), 2)]);
        assert!(parse_factors("").unwrap().is_empty());
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_factors("(1,2):1;").unwrap_err().pos, 7);
        assert_eq!(parse_factors("(1,2):0").unwrap_err().pos, 6);
        assert_eq!(parse_factors("(2,1):1").unwrap_err().pos, 1);
        assert_eq!(parse_factors("(1 2):1").unwrap_err().pos, 3);
    }
}
