//! Text formats: structure-equation tuples like `(0,0,0,12,13,23,0)` and
//! form expressions like `6/5*e1235-34/25*e1237` or `2e257`.
//!
//! Both grammars accept the unicode minus and middle dot alongside ASCII
//! `-` and `*`. Parse errors carry the character offset into the input.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactla::Rational;
use crate::exterior::KForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A structure-equation tuple: entry k is de^k, a 2-form on n generators
/// (n = number of entries).
#[derive(Debug, Clone, PartialEq)]
pub struct SalamonSpec {
    pub entries: Vec<KForm>,
}

impl SalamonSpec {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    fn new(s: &str) -> Self {
        // Normalize the unicode variants the source tables use.
        let chars = s
            .chars()
            .map(|c| match c {
                '\u{2212}' => '-', // minus sign
                '\u{00b7}' => '*', // middle dot
                _ => c,
            })
            .collect();
        Scanner { chars, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    /// Unsigned decimal integer.
    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a digit"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits form an integer"))
    }

    /// Unsigned rational: integer ['/' integer].
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let numer = self.integer()?;
        if self.eat('/') {
            let at = self.pos;
            let denom = self.integer()?;
            if denom.is_zero() {
                return Err(ParseError {
                    position: at,
                    message: "zero denominator".into(),
                });
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }
}

/// One digit monomial read as index tuple; shared by both grammars.
/// Salamon pairs restrict the length to 2 at the call site.
fn digit_indices(sc: &mut Scanner, ambient_dim: usize) -> Result<Vec<u8>, ParseError> {
    let mut out = Vec::new();
    while let Some(c) = sc.peek() {
        if let Some(d) = c.to_digit(10) {
            if d == 0 {
                return Err(sc.error("index 0 is not a valid generator"));
            }
            if d as usize > ambient_dim {
                return Err(sc.error(format!("index {d} exceeds dimension {ambient_dim}")));
            }
            out.push(d as u8);
            sc.pos += 1;
        } else {
            break;
        }
    }
    if out.is_empty() {
        return Err(sc.error("expected index digits"));
    }
    Ok(out)
}

// ---- Salamon tuples -------------------------------------------------------

/// Parses `(item, item, ...)` where each item is `0` or a sum of signed
/// digit-pair terms with optional rational coefficients and parenthesized
/// groups, e.g. `2*(-16+25+26-34)` or `15+16+25-3*26+34`.
pub fn parse_salamon(s: &str) -> Result<SalamonSpec, ParseError> {
    let mut sc = Scanner::new(s);
    sc.skip_ws();
    sc.expect('(')?;
    // Count the items first to learn the ambient dimension: indices inside
    // any slot may reference any generator, so the bound must be known
    // before parsing terms.
    let ambient_dim = count_items(&sc)?;
    if ambient_dim > crate::exterior::MAX_AMBIENT_DIM {
        return Err(sc.error(format!("dimension {ambient_dim} exceeds 9")));
    }
    let mut entries = Vec::with_capacity(ambient_dim);
    loop {
        sc.skip_ws();
        entries.push(salamon_item(&mut sc, ambient_dim)?);
        sc.skip_ws();
        if sc.eat(',') {
            continue;
        }
        sc.expect(')')?;
        break;
    }
    sc.skip_ws();
    if !sc.at_end() {
        return Err(sc.error("trailing input after tuple"));
    }
    Ok(SalamonSpec { entries })
}

/// Counts top-level commas from just past '(' without consuming input.
fn count_items(sc: &Scanner) -> Result<usize, ParseError> {
    let mut depth = 0usize;
    let mut items = 1usize;
    for &c in &sc.chars[sc.pos..] {
        match c {
            '(' => depth += 1,
            ')' if depth == 0 => return Ok(items),
            ')' => depth -= 1,
            ',' if depth == 0 => items += 1,
            _ => {}
        }
    }
    Err(ParseError {
        position: sc.chars.len(),
        message: "unterminated tuple: missing ')'".into(),
    })
}

fn salamon_item(sc: &mut Scanner, ambient_dim: usize) -> Result<KForm, ParseError> {
    // Lone zero means de^k = 0; otherwise a sum of pair terms.
    let save = sc.pos;
    if sc.eat('0') {
        sc.skip_ws();
        if matches!(sc.peek(), Some(',') | Some(')')) {
            return Ok(KForm::zero(ambient_dim, 2));
        }
        sc.pos = save;
    }
    salamon_sum(sc, ambient_dim)
}

fn salamon_sum(sc: &mut Scanner, ambient_dim: usize) -> Result<KForm, ParseError> {
    let mut total = KForm::zero(ambient_dim, 2);
    let mut first = true;
    loop {
        sc.skip_ws();
        let sign = if sc.eat('-') {
            -1
        } else if sc.eat('+') {
            if first {
                return Err(sc.error("unexpected leading '+'"));
            }
            1
        } else if first {
            1
        } else {
            break;
        };
        first = false;
        sc.skip_ws();
        let term = salamon_term(sc, ambient_dim)?;
        total = if sign < 0 { total.sub(&term) } else { total.add(&term) };
        sc.skip_ws();
        if !matches!(sc.peek(), Some('+') | Some('-')) {
            break;
        }
    }
    Ok(total)
}

fn salamon_term(sc: &mut Scanner, ambient_dim: usize) -> Result<KForm, ParseError> {
    // A term is either a digit pair, a coefficient followed by a pair or a
    // parenthesized sum, or a bare parenthesized sum. Disambiguating a
    // leading digit run: exactly two digits not followed by '*', '/', or
    // '(' form a pair; otherwise the digits are a coefficient.
    sc.skip_ws();
    if sc.peek() == Some('(') {
        sc.bump();
        let inner = salamon_sum(sc, ambient_dim)?;
        sc.expect(')')?;
        return Ok(inner);
    }
    let start = sc.pos;
    let mut ndigits = 0usize;
    while matches!(sc.chars.get(sc.pos + ndigits), Some(c) if c.is_ascii_digit()) {
        ndigits += 1;
    }
    if ndigits == 0 {
        return Err(sc.error("expected a term"));
    }
    let after = sc.chars.get(sc.pos + ndigits).copied();
    let is_pair = ndigits == 2 && !matches!(after, Some('*') | Some('/') | Some('('));
    if is_pair {
        let indices = digit_indices(sc, ambient_dim)?;
        debug_assert_eq!(indices.len(), 2);
        return Ok(KForm::basis_monomial(ambient_dim, &indices));
    }
    // Coefficient path.
    let coeff = sc.rational()?;
    sc.skip_ws();
    sc.eat('*');
    sc.skip_ws();
    if sc.eat('(') {
        let inner = salamon_sum(sc, ambient_dim)?;
        sc.expect(')')?;
        return Ok(inner.scale(&coeff));
    }
    let at = sc.pos;
    let indices = digit_indices(sc, ambient_dim)?;
    if indices.len() != 2 {
        return Err(ParseError {
            position: at,
            message: format!("expected a 2-index pair, got {} digits", indices.len()),
        });
    }
    let _ = start;
    Ok(KForm::monomial(ambient_dim, &indices, coeff))
}

// ---- Form expressions -----------------------------------------------------

/// Parses a sum of monomial terms: coefficients as in the tuple grammar,
/// monomials written `e123`, `e^{123}`, `e^{1,2,3}`-free digit runs, or bare
/// digit runs. All monomials must have the same degree.
pub fn parse_form(s: &str, ambient_dim: usize) -> Result<KForm, ParseError> {
    let mut sc = Scanner::new(s);
    sc.skip_ws();
    // Lone zero.
    let save = sc.pos;
    if sc.eat('0') {
        sc.skip_ws();
        if sc.at_end() {
            return Ok(KForm::zero(ambient_dim, 0));
        }
        sc.pos = save;
    }
    let mut total: Option<KForm> = None;
    let mut degree: Option<usize> = None;
    let mut first = true;
    loop {
        sc.skip_ws();
        let sign = if sc.eat('-') {
            -1
        } else if sc.eat('+') {
            if first {
                return Err(sc.error("unexpected leading '+'"));
            }
            1
        } else if first {
            1
        } else {
            return Err(sc.error("expected '+' or '-'"));
        };
        first = false;
        sc.skip_ws();
        let at = sc.pos;
        let (coeff, indices) = form_term(&mut sc, ambient_dim)?;
        match degree {
            None => degree = Some(indices.len()),
            Some(d) if d != indices.len() => {
                return Err(ParseError {
                    position: at,
                    message: format!("mixed degrees: {} vs {}", d, indices.len()),
                });
            }
            _ => {}
        }
        let c = if sign < 0 { -coeff } else { coeff };
        let term = KForm::monomial(ambient_dim, &indices, c);
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term),
        });
        sc.skip_ws();
        if sc.at_end() {
            break;
        }
        if !matches!(sc.peek(), Some('+') | Some('-')) {
            return Err(sc.error("expected '+', '-', or end of input"));
        }
    }
    Ok(total.expect("at least one term parsed"))
}

fn form_term(sc: &mut Scanner, ambient_dim: usize) -> Result<(Rational, Vec<u8>), ParseError> {
    let mut coeff = Rational::one();
    let mut have_coeff = false;
    // Leading digits are a coefficient only if followed by '/', '*', 'e',
    // or whitespace-then-e; a bare digit run is a monomial.
    if matches!(sc.peek(), Some(c) if c.is_ascii_digit()) {
        let mut ndigits = 0usize;
        while matches!(sc.chars.get(sc.pos + ndigits), Some(c) if c.is_ascii_digit()) {
            ndigits += 1;
        }
        let after = sc.chars.get(sc.pos + ndigits).copied();
        let coeff_follows = matches!(after, Some('/') | Some('*') | Some('e'))
            || (after.is_some_and(char::is_whitespace) && {
                let mut k = sc.pos + ndigits;
                while matches!(sc.chars.get(k), Some(c) if c.is_whitespace()) {
                    k += 1;
                }
                sc.chars.get(k) == Some(&'e')
            });
        if coeff_follows {
            coeff = sc.rational()?;
            have_coeff = true;
            sc.skip_ws();
            sc.eat('*');
            sc.skip_ws();
        } else {
            let indices = digit_indices(sc, ambient_dim)?;
            return Ok((coeff, indices));
        }
    }
    if sc.eat('e') {
        sc.eat('^');
        let braced = sc.eat('{');
        let indices = digit_indices(sc, ambient_dim)?;
        if braced {
            sc.expect('}')?;
        }
        return Ok((coeff, indices));
    }
    if have_coeff {
        return Err(sc.error("expected a monomial after coefficient"));
    }
    Err(sc.error("expected a term"))
}

// ---- Rendering ------------------------------------------------------------

fn render_coeff(c: &Rational, out: &mut String, leading: bool) {
    // Writes the sign (and separator when not leading) plus the magnitude
    // unless it is 1.
    use num_traits::Signed;
    let neg = c.is_negative();
    if leading {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push('-');
    } else {
        out.push('+');
    }
    let mag = c.abs();
    if !mag.is_one() {
        out.push_str(&mag.numer().to_string());
        if !mag.denom().is_one() {
            out.push('/');
            out.push_str(&mag.denom().to_string());
        }
        out.push('*');
    }
}

/// Canonical rendering: terms in lexicographic tuple order, `e`-prefixed
/// monomials, explicit `*` after non-unit coefficients. `parse_form` of the
/// output reproduces the form.
pub fn render_form(f: &KForm) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut leading = true;
    for (tuple, coeff) in f.terms() {
        render_coeff(coeff, &mut out, leading);
        leading = false;
        if f.degree() == 0 {
            // Constant term: keep the magnitude, drop the trailing '*'.
            use num_traits::Signed;
            if coeff.abs().is_one() {
                out.push('1');
            } else {
                out.pop();
            }
            continue;
        }
        out.push('e');
        for &i in tuple {
            out.push(char::from_digit(i as u32, 10).expect("index < 10"));
        }
    }
    out
}

/// Renders a structure tuple back into digit-pair notation.
pub fn render_salamon(spec: &SalamonSpec) -> String {
    let mut out = String::from("(");
    for (k, entry) in spec.entries.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        if entry.is_zero() {
            out.push('0');
            continue;
        }
        let mut leading = true;
        for (tuple, coeff) in entry.terms() {
            render_coeff(coeff, &mut out, leading);
            leading = false;
            for &i in tuple {
                out.push(char::from_digit(i as u32, 10).expect("index < 10"));
            }
        }
    }
    out.push(')');
    out
}
