//! S-expression reader with source positions.

use std::fmt;

use crate::error::{Error, Pos, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a, _) => Some(a),
            SExpr::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(xs, _) => Some(xs),
            SExpr::Atom(..) => None,
        }
    }

    /// The head atom of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.list()?.first()?.atom()
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(a, _) => write!(f, "{a}"),
            SExpr::List(xs, _) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn parse_error(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Reads every top-level form.  `;` starts a comment running to the end of the line.
pub fn read_all(src: &str) -> Result<Vec<SExpr>> {
    let mut r = Reader { chars: src.chars().collect(), i: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        r.skip();
        if r.i >= r.chars.len() {
            return Ok(out);
        }
        out.push(r.expr()?);
    }
}

/// Reads exactly one form.
pub fn read_one(src: &str) -> Result<SExpr> {
    let mut forms = read_all(src)?;
    match forms.len() {
        1 => Ok(forms.pop().unwrap()),
        0 => Err(parse_error(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(parse_error(forms[1].pos(), "expected a single form")),
    }
}

struct Reader {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Reader {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.i];
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn skip(&mut self) {
        while self.i < self.chars.len() {
            match self.chars[self.i] {
                c if c.is_whitespace() => {
                    self.bump();
                }
                ';' => {
                    while self.i < self.chars.len() && self.chars[self.i] != '\n' {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn expr(&mut self) -> Result<SExpr> {
        self.skip();
        let start = self.pos();
        match self.chars.get(self.i) {
            None => Err(parse_error(start, "unexpected end of input")),
            Some(')') => Err(parse_error(start, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip();
                    match self.chars.get(self.i) {
                        None => return Err(parse_error(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, start));
                        }
                        _ => items.push(self.expr()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.get(self.i) {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(self.bump());
                }
                Ok(SExpr::Atom(s, start))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_nesting() {
        let forms = read_all("(let (x 1)\n  ; note\n  (ret x))").unwrap();
        assert_eq!(forms.len(), 1);
        let xs = forms[0].list().unwrap();
        assert_eq!(xs[2].pos(), Pos { line: 3, col: 3 });
        assert_eq!(forms[0].to_string(), "(let (x 1) (ret x))");
    }

    #[test]
    fn errors_are_located() {
        match read_all("(a (b c)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, Pos { line: 1, col: 1 }),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_all("a )"), Err(Error::Parse { pos: Pos { line: 1, col: 3 }, .. })));
    }
}
