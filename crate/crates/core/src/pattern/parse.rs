//! Surface syntax:
//!
//! ```text
//! p ::= 'Bot' | 'Top' | ident | '$' ident [ '(' p {',' p} ')' ] | p p
//!     | 'not' p | p '/\' p | p '\/' p | p '->' p
//!     | ('exists'|'forall'|'mu'|'nu') ident '.' p | '(' p ')'
//! ```
//!
//! Application binds tightest and associates to the left, then `not`, `/\`,
//! `\/`, and `->` (right-associative). Binders extend as far right as
//! possible. A notation's argument list must follow its head without
//! whitespace; `$h (x)` applies a nullary notation to `x`.

use super::{is_set_var_name, Pattern, PatternError, Signature};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Notation(String),
    LParen,
    RParen,
    Dot,
    Comma,
    And,
    Or,
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    /// True when no whitespace separates this token from the previous one.
    glued: bool,
}

fn lex(text: &str) -> Result<Vec<Token>, PatternError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut glued = false;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            glued = false;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            glued = false;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let err = |msg: String| PatternError::Syntax {
            line: start_line,
            col: start_col,
            msg,
        };
        let ident_at = |mut j: usize| {
            let begin = j;
            while j < chars.len()
                && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
            {
                j += 1;
            }
            (chars[begin..j].iter().collect::<String>(), j)
        };
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '.' => (Tok::Dot, 1),
            ',' => (Tok::Comma, 1),
            '/' if chars.get(i + 1) == Some(&'\\') => (Tok::And, 2),
            '\\' if chars.get(i + 1) == Some(&'/') => (Tok::Or, 2),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            '$' => {
                let (name, end) = ident_at(i + 1);
                if name.is_empty() || !name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                    return Err(err("expected notation name after `$`".into()));
                }
                (Tok::Notation(name), end - i)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let (name, end) = ident_at(i);
                (Tok::Ident(name), end - i)
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        };
        out.push(Token {
            tok,
            line,
            col,
            glued,
        });
        i += len;
        col += len;
        glued = true;
    }
    Ok(out)
}

const KEYWORDS: &[&str] = &["Bot", "Top", "not", "exists", "forall", "mu", "nu"];

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    end: (usize, usize),
}

/// Parses a pattern. Identifiers declared in `sig` are symbols; other
/// identifiers are element variables (lower-case initial) or set variables
/// (upper-case initial).
pub fn parse_pattern(text: &str, sig: &Signature) -> Result<Pattern, PatternError> {
    let toks = lex(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        end,
    };
    let pat = p.implies()?;
    if let Some(t) = p.toks.get(p.pos) {
        return Err(PatternError::Syntax {
            line: t.line,
            col: t.col,
            msg: format!("unexpected trailing token {:?}", t.tok),
        });
    }
    Ok(pat)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn error(&self, msg: impl Into<String>) -> PatternError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end);
        PatternError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), PatternError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn implies(&mut self) -> Result<Pattern, PatternError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implies()?;
            return Ok(Pattern::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Pattern, PatternError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Pattern::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Pattern, PatternError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Pattern::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Pattern, PatternError> {
        match self.peek() {
            Some(Tok::Ident(k)) if k == "not" => {
                self.pos += 1;
                Ok(Pattern::not(self.unary()?))
            }
            Some(Tok::Ident(k)) if matches!(k.as_str(), "exists" | "forall" | "mu" | "nu") => {
                let kind = k.clone();
                self.pos += 1;
                self.binder(&kind)
            }
            _ => self.application(),
        }
    }

    fn binder(&mut self, kind: &str) -> Result<Pattern, PatternError> {
        let var = match self.peek() {
            Some(Tok::Ident(v)) if !KEYWORDS.contains(&v.as_str()) => v.clone(),
            _ => return Err(self.error("expected a variable after binder")),
        };
        if self.sig.contains(&var) {
            return Err(PatternError::NameClash(var));
        }
        let wants_set = matches!(kind, "mu" | "nu");
        if wants_set != is_set_var_name(&var) {
            let expect = if wants_set { "set" } else { "element" };
            return Err(self.error(format!("`{kind}` binds a {expect} variable, got `{var}`")));
        }
        self.pos += 1;
        self.expect(Tok::Dot, "`.` after bound variable")?;
        let body = self.implies()?;
        Ok(match kind {
            "exists" => Pattern::exists(var, body),
            "forall" => Pattern::forall(var, body),
            "mu" => Pattern::mu(var, body),
            _ => Pattern::nu(var, body),
        })
    }

    fn application(&mut self) -> Result<Pattern, PatternError> {
        let mut head = self.atom()?;
        while self.starts_atom() {
            head = Pattern::app(head, self.atom()?);
        }
        Ok(head)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::LParen) | Some(Tok::Notation(_)) => true,
            Some(Tok::Ident(k)) => {
                !KEYWORDS.contains(&k.as_str()) || k == "Bot" || k == "Top"
            }
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Pattern, PatternError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error("unexpected end of input")),
        };
        match tok {
            Tok::LParen => {
                self.pos += 1;
                let inner = self.implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "Bot" => Ok(Pattern::Bot),
                    "Top" => Ok(Pattern::Top),
                    _ if KEYWORDS.contains(&name.as_str()) => {
                        self.pos -= 1;
                        Err(self.error(format!("unexpected keyword `{name}`")))
                    }
                    _ => Ok(self.classify(name)),
                }
            }
            Tok::Notation(head) => {
                self.pos += 1;
                let mut args = Vec::new();
                let glued_paren = self
                    .toks
                    .get(self.pos)
                    .is_some_and(|t| t.tok == Tok::LParen && t.glued);
                if glued_paren {
                    self.pos += 1;
                    loop {
                        args.push(self.implies()?);
                        match self.peek() {
                            Some(Tok::Comma) => self.pos += 1,
                            Some(Tok::RParen) => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.error("expected `,` or `)` in notation arguments")),
                        }
                    }
                }
                Ok(Pattern::Notation(head, args))
            }
            _ => Err(self.error(format!("unexpected token {tok:?}"))),
        }
    }

    fn classify(&self, name: String) -> Pattern {
        if self.sig.contains(&name) {
            Pattern::Sym(name)
        } else if is_set_var_name(&name) {
            Pattern::SVar(name)
        } else {
            Pattern::EVar(name)
        }
    }
}
