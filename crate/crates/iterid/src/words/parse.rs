//! Recursive-descent parser for the word grammar. Errors carry the byte
//! offset of the offending character.

use super::Word;
use crate::error::{Error, Result};

pub(super) fn parse(text: &str) -> Result<Word> {
    let mut p = Parser { text, pos: 0 };
    p.skip_ws();
    let word = p.parse_word()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(word),
        Some(c) => Err(p.error(format!("unexpected {c:?} after a complete word"))),
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.error(format!("expected {want:?}, found end of input"))),
        }
    }

    fn starts_atom(c: char) -> bool {
        c == 'x' || c == '(' || c == '['
    }

    /// product level: factors joined by juxtaposition or '*'
    fn parse_word(&mut self) -> Result<Word> {
        let mut factors = vec![self.parse_factor()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    self.skip_ws();
                    factors.push(self.parse_factor()?);
                }
                Some(c) if Self::starts_atom(c) => factors.push(self.parse_factor()?),
                _ => break,
            }
        }
        if factors.len() == 1 {
            Ok(factors.pop().expect("one factor"))
        } else {
            Ok(Word::Product(factors))
        }
    }

    /// factor level: an atom with a left-associative chain of '^' suffixes
    fn parse_factor(&mut self) -> Result<Word> {
        let mut word = self.parse_atom()?;
        loop {
            let before = self.pos;
            self.skip_ws();
            if self.peek() != Some('^') {
                self.pos = before;
                break;
            }
            self.bump();
            self.skip_ws();
            word = match self.peek() {
                Some(c) if c == '-' || c.is_ascii_digit() => {
                    let n = self.parse_integer()?;
                    if n == -1 {
                        Word::Inverse(Box::new(word))
                    } else {
                        Word::Power(Box::new(word), n)
                    }
                }
                Some(c) if Self::starts_atom(c) => {
                    Word::Conjugate(Box::new(word), Box::new(self.parse_atom()?))
                }
                _ => {
                    return Err(self.error("expected an integer exponent or a word to conjugate by"))
                }
            };
        }
        Ok(word)
    }

    fn parse_atom(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.peek() {
            Some('x') => self.parse_variable(),
            Some('(') => {
                self.bump();
                let word = self.parse_word()?;
                self.skip_ws();
                self.expect(')')?;
                Ok(word)
            }
            Some('[') => self.parse_commutator(),
            Some(c) => Err(self.error(format!("expected a variable, '(' or '[', found {c:?}"))),
            None => Err(self.error("expected a variable, '(' or '[', found end of input")),
        }
    }

    fn parse_variable(&mut self) -> Result<Word> {
        let start = self.pos;
        self.expect('x')?;
        let index: u64 = self.parse_digits()?;
        if index == 0 {
            return Err(Error::Syntax {
                pos: start,
                msg: "variable indices start at x1".into(),
            });
        }
        let index = u32::try_from(index).map_err(|_| Error::Syntax {
            pos: start,
            msg: "variable index out of range".into(),
        })?;
        Ok(Word::Variable(index))
    }

    /// `[a,b]`, or the Engel shorthand `[a,_n b]` which expands on the spot.
    fn parse_commutator(&mut self) -> Result<Word> {
        self.expect('[')?;
        let left = self.parse_word()?;
        self.skip_ws();
        self.expect(',')?;
        self.skip_ws();
        let mut fold = 1u64;
        if self.peek() == Some('_') {
            self.bump();
            fold = self.parse_digits()?;
            self.skip_ws();
        }
        let right = self.parse_word()?;
        self.skip_ws();
        self.expect(']')?;
        let mut word = left;
        for _ in 0..fold {
            word = Word::Commutator(Box::new(word), Box::new(right.clone()));
        }
        Ok(word)
    }

    fn parse_digits(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "number out of range".into(),
            })
    }

    fn parse_integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        let slice = &self.text[start..self.pos];
        if slice.is_empty() || slice == "-" {
            return Err(Error::Syntax {
                pos: start,
                msg: "expected an integer".into(),
            });
        }
        slice.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: "exponent out of range".into(),
        })
    }
}
