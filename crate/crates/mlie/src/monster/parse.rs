//! Text grammar for elements:
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*
//! term  := [rational '*'] atom | rational
//! atom  := 'h1' | 'h2' | 'e(-1)' | 'f(-1)' | word | '[' expr ',' expr ']' | '(' expr ')'
//! word  := letter+        letter := ('e' | 'f') '(' l ',' j ',' k ')'
//! ```
//!
//! A word is a run of same-sign letters read as a Lyndon word; bracket atoms are
//! evaluated with the window-truncated bracket. A bare rational is only accepted as 0.

use num_traits::{One, Zero};

use super::{AlgebraCtx, AlgebraError, Basis, LieElem};
use crate::freelie::Sign;
use crate::monster::elem::{parse_word, word_letters};
use crate::scalar::{parse_q, Q};

struct Parser<'a> {
    ctx: &'a AlgebraCtx,
    src: &'a str,
    pos: usize,
}

pub(super) fn parse_elem(ctx: &AlgebraCtx, text: &str) -> Result<LieElem, AlgebraError> {
    let mut p = Parser { ctx, src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{what} at byte {} of {:?}", self.pos, self.src))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LieElem, AlgebraError> {
        let mut acc = self.ctx.zero();
        let mut neg = self.eat('-');
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &if neg { -Q::one() } else { Q::one() });
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LieElem, AlgebraError> {
        self.skip_ws();
        let r = self.rest();
        let n = r
            .find(|c: char| !(c.is_ascii_digit() || c == '/'))
            .unwrap_or(r.len());
        if n == 0 {
            return self.atom();
        }
        let c = parse_q(&r[..n]).ok_or_else(|| self.err("bad rational"))?;
        self.pos += n;
        if self.eat('*') {
            Ok(self.atom()?.scaled(&c))
        } else if c.is_zero() {
            Ok(self.ctx.zero())
        } else {
            Err(self.err("scalar without a basis element"))
        }
    }

    fn atom(&mut self) -> Result<LieElem, AlgebraError> {
        self.skip_ws();
        if self.eat('[') {
            let x = self.expr()?;
            if !self.eat(',') {
                return Err(self.err("expected ','"));
            }
            let y = self.expr()?;
            if !self.eat(']') {
                return Err(self.err("expected ']'"));
            }
            return self.ctx.bracket(&x, &y);
        }
        if self.eat('(') {
            let x = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(x);
        }
        let w = self.ctx.window;
        for (tok, b) in [
            ("h1", Basis::H1),
            ("h2", Basis::H2),
            ("e(-1)", Basis::Em1),
            ("f(-1)", Basis::Fm1),
        ] {
            if self.rest().starts_with(tok) {
                self.pos += tok.len();
                return Ok(LieElem::basis(b, Q::one(), w));
            }
        }
        let r = self.rest();
        let mut end = 0;
        while r[end..].starts_with("e(") || r[end..].starts_with("f(") {
            match r[end..].find(')') {
                Some(close) => end += close + 1,
                None => return Err(self.err("unclosed letter")),
            }
        }
        if end == 0 {
            return Err(self.err("expected a basis element"));
        }
        let compact: String = r[..end].chars().filter(|c| !c.is_whitespace()).collect();
        let (sign, word) = parse_word(&compact).ok_or_else(|| self.err("not a Lyndon word"))?;
        for idx in word_letters(&word) {
            if !self.ctx.subset.contains(&idx) {
                return Err(AlgebraError::OutsideSubset(idx));
            }
        }
        if word.grade() > w {
            return Err(AlgebraError::Overflow(word.grade()));
        }
        self.pos += end;
        let b = match sign {
            Sign::E => Basis::E(word),
            Sign::F => Basis::F(word),
        };
        Ok(LieElem::basis(b, Q::one(), w))
    }
}
