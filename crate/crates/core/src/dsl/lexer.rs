use num_bigint::BigInt;
use num_rational::BigRational;

use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(BigRational),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits `.qalg` source into tokens with 1-based line/column positions.
/// Comments run from `#` or `//` to the end of the line.
pub fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            if i < chars.len() && chars[i] == '\'' {
                s.push('\'');
                advance(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let mut num = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                num.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            let mut den = String::from("1");
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
                den.clear();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    den.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
            }
            let n: BigInt = num.parse().expect("digits");
            let d: BigInt = den.parse().expect("digits");
            if d == BigInt::from(0) {
                return Err(DslError::new(tl, tc, "zero denominator"));
            }
            out.push(Token { tok: Tok::Number(BigRational::new(n, d)), line: tl, col: tc });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
            continue;
        }
        if "{}();=,[]+-*^|:".contains(c) {
            advance(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Sym(c), line: tl, col: tc });
            continue;
        }
        return Err(DslError::new(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_primes() {
        let toks = lex("gen a;\n  rel a' b = 3/4 q^-4 a;").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("gen".into()));
        let ap = toks.iter().find(|t| t.tok == Tok::Ident("a'".into())).unwrap();
        assert_eq!((ap.line, ap.col), (2, 7));
        assert!(toks.iter().any(|t| t.tok == Tok::Number(BigRational::new(3.into(), 4.into()))));
    }

    #[test]
    fn comments_and_arrow() {
        let toks = lex("# x\nb a -> a b // tail\n").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[2], Tok::Arrow);
        assert_eq!(kinds.len(), 6);
    }

    #[test]
    fn bad_character_is_located() {
        let e = lex("gen a;\n  @").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }
}
