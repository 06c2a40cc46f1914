//! Word expressions over the generators of an sggi.
//!
//! `r0`, `r1`, … are the generators and products read left to right, so
//! `r1 r2` applies `r1` first. Juxtaposition or `*` multiplies, `x^k` is a
//! power (negative for inverses), `x^y` conjugates (`y⁻¹xy`), `id` is the
//! identity and a parenthesis followed by a digit opens a 1-based cycle
//! literal such as `(9,10,11)`. Other identifiers refer to named words.

use std::collections::HashMap;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("generator r{index} does not exist (rank {rank})")]
    Generator { index: usize, rank: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub fn evaluate(
    word: &str,
    generators: &[Permutation],
    degree: usize,
    named: &HashMap<String, Permutation>,
) -> Result<Permutation, WordError> {
    let mut p = Parser {
        src: word.as_bytes(),
        pos: 0,
        generators,
        degree,
        named,
    };
    let value = p.product()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    generators: &'a [Permutation],
    degree: usize,
    named: &'a HashMap<String, Permutation>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<Permutation, WordError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.then(&self.power()?);
                }
                Some(c) if c == b'(' || c.is_ascii_alphabetic() || c == b'_' => {
                    acc = acc.then(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Permutation, WordError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == b'-' || c.is_ascii_digit() => {
                    let exp = self.integer()?;
                    base = base.pow(exp);
                }
                Some(_) => {
                    let by = self.atom()?;
                    base = base.conjugate_by(&by);
                }
                None => return Err(self.error("missing exponent")),
            }
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| WordError::Syntax {
                offset: start,
                message: "bad integer".into(),
            })
    }

    fn atom(&mut self) -> Result<Permutation, WordError> {
        match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos = open;
                    return self.cycle();
                }
                let inner = self.product()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.lookup(name)
            }
            _ => Err(self.error("expected a generator, name, cycle or '('")),
        }
    }

    fn lookup(&self, name: &str) -> Result<Permutation, WordError> {
        if name == "id" {
            return Ok(Permutation::identity(self.degree));
        }
        if let Some(v) = self.named.get(name) {
            return Ok(*v);
        }
        if let Some(index) = name.strip_prefix('r').and_then(|d| d.parse::<usize>().ok()) {
            return self
                .generators
                .get(index)
                .copied()
                .ok_or(WordError::Generator {
                    index,
                    rank: self.generators.len(),
                });
        }
        Err(WordError::UnknownName(name.to_string()))
    }

    fn cycle(&mut self) -> Result<Permutation, WordError> {
        let start = self.pos;
        let close = self.src[start..]
            .iter()
            .position(|&c| c == b')')
            .ok_or_else(|| self.error("unclosed cycle"))?;
        self.pos = start + close + 1;
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(crate::perm::parse_cycles(text, self.degree)?)
    }
}
