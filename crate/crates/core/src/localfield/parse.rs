//! The element expression language.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? INT)?
//! atom  := INT | 'z' | 'pi_' NAME | 't' | 'O' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `t` is only meaningful in level polynomials; `O(x)` is zero known to `v(x)` digits.

use super::elem::RingElem;
use super::field_elem::FieldElem;
use super::tower::Tower;
use super::LocalFieldError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u128),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
enum Expr {
    Int(u128),
    Sym(String, usize),
    BigO(Box<Expr>, usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

fn perr(position: usize, message: impl Into<String>) -> LocalFieldError {
    LocalFieldError::Parse { position, message: message.into() }
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, LocalFieldError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = s[start..i]
                    .parse::<u128>()
                    .map_err(|_| perr(start, "integer literal too large"))?;
                out.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(s[start..i].to_string()), start));
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push((Tok::Op(c), i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            _ => {
                let ch = s[i..].chars().next().unwrap();
                return Err(perr(i, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Expr, LocalFieldError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), at);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, LocalFieldError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), at);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, LocalFieldError> {
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, LocalFieldError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let at = self.here();
        self.pos += 1;
        let negative = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let n = i64::try_from(n).map_err(|_| perr(self.here(), "exponent too large"))?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }, at))
            }
            _ => Err(perr(self.here(), "expected an integer exponent after '^'")),
        }
    }

    fn atom(&mut self) -> Result<Expr, LocalFieldError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) if name == "O" => {
                self.pos += 1;
                if self.peek() != Some(&Tok::LParen) {
                    return Err(perr(self.here(), "expected '(' after O"));
                }
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::BigO(Box::new(inner), at))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Sym(name, at))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::RParen) => Err(perr(at, "unexpected ')'")),
            Some(Tok::Op(c)) => Err(perr(at, format!("unexpected operator '{c}'"))),
            None => Err(perr(at, "unexpected end of input")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), LocalFieldError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(perr(self.here(), "expected ')'"))
        }
    }
}

fn parse_ast(s: &str) -> Result<Expr, LocalFieldError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Degree in `t` of a level polynomial expression.
pub(crate) fn poly_degree(s: &str) -> Result<usize, LocalFieldError> {
    fn deg(e: &Expr) -> Result<usize, LocalFieldError> {
        Ok(match e {
            Expr::Int(_) | Expr::BigO(..) => 0,
            Expr::Sym(name, _) => usize::from(name == "t"),
            Expr::Neg(x) => deg(x)?,
            Expr::Bin('+' | '-', a, b, _) => deg(a)?.max(deg(b)?),
            Expr::Bin('*', a, b, _) => deg(a)? + deg(b)?,
            Expr::Bin(_, a, b, at) => {
                if deg(b)? > 0 {
                    return Err(perr(*at, "division by a polynomial in t"));
                }
                deg(a)?
            }
            Expr::Pow(x, n, at) => {
                let d = deg(x)?;
                if d > 0 && *n < 0 {
                    return Err(perr(*at, "negative power of a polynomial in t"));
                }
                d * (*n).max(0) as usize
            }
        })
    }
    deg(&parse_ast(s)?)
}

struct Ctx<'a> {
    tower: &'a Tower,
    level: usize,
}

impl Ctx<'_> {
    fn symbol(&self, name: &str, at: usize) -> Result<RingElem, LocalFieldError> {
        if name == "z" {
            return Ok(self.tower.generator(self.level));
        }
        if let Some(lvl) = name.strip_prefix("pi_") {
            if let Ok(i) = self.tower.level_index(lvl) {
                if i <= self.level {
                    return self.tower.uniformizer(i).embed(self.level);
                }
            }
        }
        Err(LocalFieldError::UnknownSymbol { position: at, symbol: name.to_string() })
    }

    fn int(&self, n: u128) -> Result<RingElem, LocalFieldError> {
        let n = i128::try_from(n).map_err(|_| perr(0, "integer literal too large"))?;
        Ok(self.tower.from_int(self.level, n))
    }

    fn big_o(&self, x: RingElem, at: usize) -> Result<RingElem, LocalFieldError> {
        let v = x
            .valuation()
            .map_err(|_| perr(at, "O(...) of an element indistinguishable from 0"))?;
        Ok(self.tower.zero(self.level).truncate(v))
    }

    fn eval(&self, e: &Expr) -> Result<RingElem, LocalFieldError> {
        match e {
            Expr::Int(n) => self.int(*n),
            Expr::Sym(name, at) => self.symbol(name, *at),
            Expr::BigO(x, at) => self.big_o(self.eval(x)?, *at),
            Expr::Neg(x) => Ok(-self.eval(x)?),
            Expr::Bin(op, a, b, _) => self.eval(a)?.arith(&self.eval(b)?, *op),
            Expr::Pow(x, n, _) => self.eval(x)?.pow_i64(*n),
        }
    }

    fn eval_field(&self, e: &Expr) -> Result<FieldElem, LocalFieldError> {
        Ok(match e {
            Expr::Neg(x) => self.eval_field(x)?.neg(),
            Expr::Bin(op, a, b, _) => {
                let (a, b) = (self.eval_field(a)?, self.eval_field(b)?);
                match op {
                    '+' => a.add(&b),
                    '-' => a.sub(&b),
                    '*' => a.mul(&b),
                    _ => a.div(&b)?,
                }
            }
            Expr::Pow(x, n, _) => {
                let x = self.eval_field(x)?;
                if *n >= 0 {
                    x.pow(*n as u64)
                } else {
                    FieldElem::one(self.tower, self.level).div(&x.pow(n.unsigned_abs()))?
                }
            }
            other => FieldElem::from_ring(&self.eval(other)?),
        })
    }

    /// Evaluates a polynomial in `t`, returning coefficients low degree first.
    fn eval_poly(&self, e: &Expr) -> Result<Vec<RingElem>, LocalFieldError> {
        let zero = || self.tower.zero(self.level);
        Ok(match e {
            Expr::Sym(name, _) if name == "t" => vec![zero(), self.tower.one(self.level)],
            Expr::Neg(x) => self.eval_poly(x)?.into_iter().map(|c| -c).collect(),
            Expr::Bin(op @ ('+' | '-'), a, b, _) => {
                let (a, b) = (self.eval_poly(a)?, self.eval_poly(b)?);
                let n = a.len().max(b.len());
                (0..n)
                    .map(|i| {
                        let x = a.get(i).cloned().unwrap_or_else(zero);
                        let y = b.get(i).cloned().unwrap_or_else(zero);
                        if *op == '+' {
                            x + y
                        } else {
                            x - y
                        }
                    })
                    .collect()
            }
            Expr::Bin('*', a, b, _) => poly_mul(&self.eval_poly(a)?, &self.eval_poly(b)?, zero()),
            Expr::Bin(_, a, b, at) => {
                let den = self.eval_poly(b)?;
                if den.len() != 1 {
                    return Err(perr(*at, "division by a polynomial in t"));
                }
                self.eval_poly(a)?
                    .iter()
                    .map(|c| c.checked_div(&den[0]))
                    .collect::<Result<_, _>>()?
            }
            Expr::Pow(x, n, at) => {
                let base = self.eval_poly(x)?;
                if base.len() == 1 {
                    vec![base[0].pow_i64(*n)?]
                } else if *n < 0 {
                    return Err(perr(*at, "negative power of a polynomial in t"));
                } else {
                    let mut acc = vec![self.tower.one(self.level)];
                    for _ in 0..*n {
                        acc = poly_mul(&acc, &base, zero());
                    }
                    acc
                }
            }
            other => vec![self.eval(other)?],
        })
    }
}

fn poly_mul(a: &[RingElem], b: &[RingElem], zero: RingElem) -> Vec<RingElem> {
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Parses an element expression and evaluates it at `level`.
pub fn parse_element(s: &str, tower: &Tower, level: usize) -> Result<RingElem, LocalFieldError> {
    let ast = parse_ast(s)?;
    let ctx = Ctx { tower, level };
    if contains_t(&ast) {
        return Err(LocalFieldError::UnknownSymbol { position: find_t(&ast), symbol: "t".into() });
    }
    ctx.eval(&ast)
}

/// Parses an expression whose value may have negative valuation.
pub fn parse_field_element(s: &str, tower: &Tower, level: usize) -> Result<FieldElem, LocalFieldError> {
    let ast = parse_ast(s)?;
    if contains_t(&ast) {
        return Err(LocalFieldError::UnknownSymbol { position: find_t(&ast), symbol: "t".into() });
    }
    Ctx { tower, level }.eval_field(&ast)
}

/// Parses a polynomial in `t` over `level`, trimming zero leading coefficients.
pub(crate) fn parse_poly(s: &str, tower: &Tower, level: usize) -> Result<Vec<RingElem>, LocalFieldError> {
    let ast = parse_ast(s)?;
    let mut coeffs = Ctx { tower, level }.eval_poly(&ast)?;
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero_at_precision()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn contains_t(e: &Expr) -> bool {
    match e {
        Expr::Sym(n, _) => n == "t",
        Expr::Int(_) => false,
        Expr::BigO(x, _) | Expr::Neg(x) | Expr::Pow(x, _, _) => contains_t(x),
        Expr::Bin(_, a, b, _) => contains_t(a) || contains_t(b),
    }
}

fn find_t(e: &Expr) -> usize {
    match e {
        Expr::Sym(_, at) => *at,
        Expr::BigO(x, _) | Expr::Neg(x) | Expr::Pow(x, _, _) => find_t(x),
        Expr::Bin(_, a, b, _) => {
            if contains_t(a) {
                find_t(a)
            } else {
                find_t(b)
            }
        }
        Expr::Int(_) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::super::tower::TowerSpec;
    use super::*;

    fn tower() -> Tower {
        TowerSpec::mixed(2, 1).level("K", "t^3 - 2").level("L", "t^2 - pi_K").build().unwrap()
    }

    #[test]
    fn precedence_and_powers() {
        let t = tower();
        let x = parse_element("pi_L^2 * (1 + pi_L)", &t, 2).unwrap();
        let pi = t.uniformizer(2);
        assert!(x.eq_at_precision(&(pi.pow(2) * (t.one(2) + &pi))));
        let y = parse_element("1 + 2*3^2 - -1", &t, 2).unwrap();
        assert!(y.eq_at_precision(&t.from_int(2, 20)));
    }

    #[test]
    fn inverse_series() {
        let t = tower();
        let x = parse_element("1/(1+pi_L)", &t, 2).unwrap();
        assert!((x * (t.one(2) + t.uniformizer(2))).eq_at_precision(&t.one(2)));
    }

    #[test]
    fn lower_uniformizers_embed() {
        let t = tower();
        let x = parse_element("pi_K - pi_L^2", &t, 2).unwrap();
        assert!(x.is_zero_at_precision());
    }

    #[test]
    fn double_caret_is_a_parse_error() {
        let t = tower();
        let err = parse_element("pi_L^^2", &t, 2).unwrap_err();
        assert_eq!(err, LocalFieldError::Parse { position: 5, message: "expected an integer exponent after '^'".into() });
    }

    #[test]
    fn unknown_symbols_are_reported() {
        let t = tower();
        assert!(matches!(
            parse_element("pi_M + 1", &t, 2),
            Err(LocalFieldError::UnknownSymbol { position: 0, .. })
        ));
        assert!(matches!(parse_element("1 + y", &t, 2), Err(LocalFieldError::UnknownSymbol { position: 4, .. })));
        assert!(matches!(parse_element("pi_L", &t, 1), Err(LocalFieldError::UnknownSymbol { .. })));
    }

    #[test]
    fn big_o_lowers_precision() {
        let t = tower();
        let x = parse_element("1 + pi_L + O(pi_L^4)", &t, 2).unwrap();
        assert_eq!(x.precision(), 4);
    }

    #[test]
    fn poly_degree_counts_t() {
        assert_eq!(poly_degree("t^2 + pi_L*t + pi_L").unwrap(), 2);
        assert_eq!(poly_degree("(t - 1)^3").unwrap(), 3);
        assert!(poly_degree("1/t").is_err());
    }

    #[test]
    fn field_elements_may_have_poles() {
        let t = tower();
        let x = parse_field_element("1/pi_L^3 + 1", &t, 2).unwrap();
        assert_eq!(x.valuation().unwrap(), -3);
    }
}
