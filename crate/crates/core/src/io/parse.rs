use crate::error::{Error, Result};

use super::word::Word;

/// Longest word (in syllables) the parser will build.
const MAX_SYLLABLES: usize = 1_000_000;

/// Parses a word such as `a^2*b^3`, `[a,b]^-1 c` or `(a*B)^3`.
///
/// Products are written with `*` or whitespace; `[x,y]` is `x^-1 y^-1 x y`
/// and `[x,y,z]` is `[[x,y],z]`; `x^y` with a word exponent is `y^-1 x y`;
/// a name starting with an uppercase letter stands for the inverse of the
/// same name with that letter lowered. `1` is the empty word.
pub fn parse_word(text: &str) -> Result<Word> {
    Parser::new(text, 1, 1, None).whole()
}

/// Like [`parse_word`], but every generator must be among `generators`.
/// A declared name is taken literally even when it starts with an
/// uppercase letter.
pub fn parse_word_in(text: &str, generators: &[String]) -> Result<Word> {
    Parser::new(text, 1, 1, Some(generators)).whole()
}

/// Parses a word embedded at `line`/`column` of a larger document, so
/// errors point into that document.
pub(crate) fn parse_word_at(text: &str, line: usize, column: usize, generators: Option<&[String]>) -> Result<Word> {
    Parser::new(text, line, column, generators).whole()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    declared: Option<&'a [String]>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(text: &str, line: usize, column: usize, declared: Option<&'a [String]>) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, line, column, declared }
    }

    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, column: self.column + at, message: message.into() })
    }

    fn skip_space(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_space();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(self.pos, format!("expected `{c}`, found `{d}`")),
            None => self.error(self.pos, format!("expected `{c}`, found end of input")),
        }
    }

    fn whole(mut self) -> Result<Word> {
        if self.peek().is_none() {
            return self.error(self.pos, "empty word");
        }
        let w = self.product()?;
        match self.peek() {
            None => Ok(w),
            Some(c) => self.error(self.pos, format!("unexpected `{c}`")),
        }
    }

    fn starts_factor(c: char) -> bool {
        is_ident_start(c) || c == '(' || c == '[' || c == '1'
    }

    fn product(&mut self) -> Result<Word> {
        let mut w = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    w = self.checked(w.mul(&f))?;
                }
                Some(c) if Self::starts_factor(c) => {
                    let f = self.factor()?;
                    w = self.checked(w.mul(&f))?;
                }
                _ => return Ok(w),
            }
        }
    }

    fn checked(&self, w: Word) -> Result<Word> {
        if w.syllables().len() > MAX_SYLLABLES {
            return self.error(self.pos, format!("word longer than {MAX_SYLLABLES} syllables"));
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let mut w = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            if let Some(k) = self.integer()? {
                let len = w.syllables().len();
                if len > 1 && len.saturating_mul(k.unsigned_abs() as usize) > MAX_SYLLABLES {
                    return self.error(start, format!("word longer than {MAX_SYLLABLES} syllables"));
                }
                w = w.pow(k);
            } else {
                let g = self.atom()?;
                w = self.checked(g.inverse().mul(&w).mul(&g))?;
            }
        }
        Ok(w)
    }

    /// An optionally signed integer, possibly in parentheses. Leaves the
    /// position untouched when the input is not an integer.
    fn integer(&mut self) -> Result<Option<i64>> {
        let save = self.pos;
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_space();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            if neg || paren {
                if neg {
                    return self.error(self.pos, "expected digits after sign");
                }
                self.pos = save;
            }
            return Ok(None);
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let Ok(v) = digits.parse::<i64>() else { return self.error(start, "exponent out of range") };
        if v > i32::MAX as i64 {
            return self.error(start, "exponent out of range");
        }
        if paren {
            self.expect(')')?;
        }
        Ok(Some(if neg { -v } else { v }))
    }

    fn atom(&mut self) -> Result<Word> {
        let Some(c) = self.peek() else { return self.error(self.pos, "unexpected end of input") };
        match c {
            '(' => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(')')?;
                Ok(w)
            }
            '[' => {
                self.pos += 1;
                let mut w = self.product()?;
                let mut parts = 1;
                while self.peek() == Some(',') {
                    self.pos += 1;
                    let y = self.product()?;
                    w = self.checked(Word::commutator(&w, &y))?;
                    parts += 1;
                }
                if parts < 2 {
                    return self.error(self.pos, "commutator needs at least two entries");
                }
                self.expect(']')?;
                Ok(w)
            }
            '1' => {
                self.pos += 1;
                if self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                    return self.error(self.pos - 1, "a bare number is not a word");
                }
                Ok(Word::identity())
            }
            c if is_ident_start(c) => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|&c| is_ident_char(c)) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.generator(start, name)
            }
            c => self.error(self.pos, format!("unexpected `{c}`")),
        }
    }

    fn generator(&self, at: usize, name: String) -> Result<Word> {
        let declared = |n: &str| self.declared.is_none_or(|d| d.iter().any(|g| g == n));
        if self.declared.is_some() && declared(&name) {
            return Ok(Word::generator(name));
        }
        let first = name.chars().next().unwrap();
        if first.is_ascii_uppercase() {
            let lowered: String = first.to_ascii_lowercase().to_string() + &name[1..];
            if declared(&lowered) {
                return Ok(Word::generator(lowered).inverse());
            }
        } else if declared(&name) {
            return Ok(Word::generator(name));
        }
        self.error(at, format!("undeclared generator `{name}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(syl: &[(&str, i64)]) -> Word {
        Word::new(syl.iter().map(|&(n, e)| (n, e)))
    }

    #[test]
    fn examples() {
        assert_eq!(parse_word("[a,b]").unwrap(), w(&[("a", -1), ("b", -1), ("a", 1), ("b", 1)]));
        assert_eq!(parse_word("a^2*b^3").unwrap(), w(&[("a", 2), ("b", 3)]));
        assert_eq!(parse_word("(a*b)^-1").unwrap(), w(&[("b", -1), ("a", -1)]));
        assert_eq!(parse_word("a b  a^-1").unwrap(), w(&[("a", 1), ("b", 1), ("a", -1)]));
        assert_eq!(parse_word("A*b").unwrap(), w(&[("a", -1), ("b", 1)]));
        assert_eq!(parse_word("a^b").unwrap(), w(&[("b", -1), ("a", 1), ("b", 1)]));
        assert_eq!(parse_word("a^(-2)").unwrap(), w(&[("a", -2)]));
        assert_eq!(parse_word("1").unwrap(), Word::identity());
        assert_eq!(parse_word("a*A").unwrap(), Word::identity());
        assert_eq!(parse_word("a1^3 * A1").unwrap(), w(&[("a1", 2)]));
        assert_eq!(
            parse_word("[a,b,c]").unwrap(),
            Word::commutator(&parse_word("[a,b]").unwrap(), &Word::generator("c"))
        );
        assert_eq!(parse_word("[a1,a2][a3,a4]").unwrap().syllables().len(), 8);
        assert_eq!(parse_word("a^1000000000").unwrap(), w(&[("a", 1_000_000_000)]));
    }

    #[test]
    fn errors_carry_positions() {
        let at = |t: &str| match parse_word(t) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        };
        assert_eq!(at("a*"), (1, 3));
        assert_eq!(at("a^"), (1, 3));
        assert_eq!(at("[a]"), (1, 3));
        assert_eq!(at("a + b"), (1, 3));
        assert_eq!(at("(a*b"), (1, 5));
        assert_eq!(at(""), (1, 1));
        assert_eq!(at("a^-x"), (1, 4));
        assert_eq!(at("a^99999999999"), (1, 3));
        assert_eq!(at("(a*b)^100000000"), (1, 7));
        let gens = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(parse_word_in("a*c", &gens), Err(Error::Parse { column: 3, .. })));
        assert!(parse_word_in("A*B", &gens).is_ok());
        let upper = vec!["X".to_string()];
        assert_eq!(parse_word_in("X", &upper).unwrap(), Word::generator("X"));
    }

    #[test]
    fn display_round_trip() {
        for t in ["a^2*b^3", "[a,b]^3", "(a*B)^-2*c", "[[a,b],a]", "x1^-4*y_2"] {
            let w = parse_word(t).unwrap();
            let s = w.to_string();
            assert_eq!(parse_word(&s).unwrap(), w);
            assert_eq!(parse_word(&s).unwrap().to_string(), s);
        }
    }
}
