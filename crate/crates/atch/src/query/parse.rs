//! Scannerless parser for the line-oriented pattern-query DSL.
//!
//! ```text
//! query    := "match" template+ clause*
//! template := "(" term ("," term)* ")" [ "{" attrpred ("," attrpred)* "}" ]
//! term     := VAR | CONST | VAR ":" LABEL
//! clause   := "where conf >" NUM | "at time" TS | "during [" TS "," TS "]"
//! attrpred := KEY OP LITERAL
//! ```
//!
//! Variables start with a lowercase letter or `_`; bare constants start
//! with an uppercase letter or digit; anything can be a constant when
//! double-quoted (`"print_failure_e3"`). Literals are classified as int,
//! real, bool, timestamp, then string; quote a literal to force string
//! (`"6.1"` the string vs `6.1` the number).

use std::fmt;

use crate::model::{AttrValue, CompareOp, TimeInterval, Timestamp};

use super::{AttrPredicate, EdgeTemplate, PatternQuery, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for SyntaxError {}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0, line: 1, col: 1 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError { line: self.line, col: self.col, message: message.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, context: &str) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!(
                "expected '{c}' {context}, found {}",
                describe(self.peek())
            )))
        }
    }

    /// A bare word: identifier-ish, also covering numbers.
    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || matches!(c, '_' | '.' | '-')) {
            self.bump();
        }
        if self.pos == start {
            None
        } else {
            Some(self.src[start..self.pos].to_string())
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        self.skip_ws();
        let at = (self.line, self.col);
        match self.word() {
            Some(w) if w == kw => Ok(()),
            got => Err(SyntaxError {
                line: at.0,
                col: at.1,
                message: format!("expected '{kw}', found {}", describe_word(got)),
            }),
        }
    }

    fn quoted(&mut self) -> Result<String, SyntaxError> {
        // Caller has seen the opening quote.
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => out.push(c),
                    Some('n') => out.push('\n'),
                    other => {
                        return Err(self.err(format!(
                            "unsupported escape {}",
                            describe(other)
                        )))
                    }
                },
                Some(c) => out.push(c),
                None => return Err(self.err("unterminated string literal")),
            }
        }
    }

    /// A raw token for timestamp positions: everything up to whitespace
    /// or a delimiter.
    fn raw_token(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if !c.is_whitespace() && !matches!(c, ',' | ']' | ')' | '}')) {
            self.bump();
        }
        if self.pos == start {
            None
        } else {
            Some(self.src[start..self.pos].to_string())
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }
}

fn describe(c: Option<char>) -> String {
    match c {
        Some(c) => format!("'{c}'"),
        None => "end of input".to_string(),
    }
}

fn describe_word(w: Option<String>) -> String {
    match w {
        Some(w) => format!("'{w}'"),
        None => "end of input".to_string(),
    }
}

pub fn parse_query(text: &str) -> Result<PatternQuery, SyntaxError> {
    let mut cur = Cursor::new(text);
    cur.expect_keyword("match")?;

    let mut templates = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek() == Some('(') {
            templates.push(parse_template(&mut cur)?);
        } else {
            break;
        }
    }
    if templates.is_empty() {
        return Err(cur.err("expected at least one '(' template after 'match'"));
    }

    let mut query = PatternQuery {
        templates,
        window: None,
        at_time: None,
        min_confidence: None,
    };

    while !cur.at_end() {
        let at = (cur.line, cur.col);
        let word = cur.word();
        match word.as_deref() {
            Some("where") => {
                cur.expect_keyword("conf")?;
                cur.expect('>', "after 'where conf'")?;
                cur.skip_ws();
                let at = (cur.line, cur.col);
                let tok = cur.word().ok_or_else(|| cur.err("expected a number"))?;
                let num: f64 = tok.parse().map_err(|_| SyntaxError {
                    line: at.0,
                    col: at.1,
                    message: format!("'{tok}' is not a number"),
                })?;
                query.min_confidence = Some(num);
            }
            Some("at") => {
                cur.expect_keyword("time")?;
                query.at_time = Some(timestamp(&mut cur)?);
            }
            Some("during") => {
                cur.expect('[', "after 'during'")?;
                let start = timestamp(&mut cur)?;
                cur.expect(',', "between interval endpoints")?;
                let end = timestamp(&mut cur)?;
                cur.expect(']', "to close the interval")?;
                query.window = Some(TimeInterval::between(start, end).map_err(|e| SyntaxError {
                    line: at.0,
                    col: at.1,
                    message: e.to_string(),
                })?);
            }
            other => {
                return Err(SyntaxError {
                    line: at.0,
                    col: at.1,
                    message: format!(
                        "expected 'where', 'at', or 'during', found {}",
                        describe_word(other.map(str::to_string))
                    ),
                })
            }
        }
    }
    Ok(query)
}

fn timestamp(cur: &mut Cursor<'_>) -> Result<Timestamp, SyntaxError> {
    cur.skip_ws();
    let at = (cur.line, cur.col);
    let tok = cur
        .raw_token()
        .ok_or_else(|| cur.err("expected a timestamp"))?;
    Timestamp::parse_flex(&tok).map_err(|_| SyntaxError {
        line: at.0,
        col: at.1,
        message: format!("'{tok}' is not a timestamp"),
    })
}

fn parse_template(cur: &mut Cursor<'_>) -> Result<EdgeTemplate, SyntaxError> {
    cur.expect('(', "to open a template")?;
    let mut terms = vec![parse_term(cur)?];
    while cur.eat(',') {
        terms.push(parse_term(cur)?);
    }
    cur.expect(')', "to close the template")?;

    let mut predicates = Vec::new();
    cur.skip_ws();
    if cur.peek() == Some('{') {
        cur.bump();
        predicates.push(parse_attrpred(cur)?);
        while cur.eat(',') {
            predicates.push(parse_attrpred(cur)?);
        }
        cur.expect('}', "to close the attribute block")?;
    }
    Ok(EdgeTemplate { terms, predicates, min_confidence: None })
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Term, SyntaxError> {
    cur.skip_ws();
    if cur.peek() == Some('"') {
        return Ok(Term::Const(cur.quoted()?));
    }
    let at = (cur.line, cur.col);
    let word = cur.word().ok_or_else(|| {
        cur.err(format!("expected a term, found {}", describe(cur.peek())))
    })?;
    let first = word.chars().next().unwrap();
    if first.is_lowercase() || first == '_' {
        let role = if cur.eat(':') {
            Some(cur.word().ok_or_else(|| cur.err("expected a role label after ':'"))?)
        } else {
            None
        };
        Ok(Term::Var { name: word, role })
    } else if cur.eat(':') {
        Err(SyntaxError {
            line: at.0,
            col: at.1,
            message: format!("role constraints apply to variables, but '{word}' is a constant"),
        })
    } else {
        Ok(Term::Const(word))
    }
}

fn parse_attrpred(cur: &mut Cursor<'_>) -> Result<AttrPredicate, SyntaxError> {
    cur.skip_ws();
    let key = cur
        .word()
        .ok_or_else(|| cur.err("expected an attribute key"))?;
    cur.skip_ws();
    let at = (cur.line, cur.col);
    let op_str = {
        let mut s = String::new();
        while matches!(cur.peek(), Some('=' | '!' | '<' | '>')) {
            s.push(cur.bump().unwrap());
        }
        s
    };
    let op: CompareOp = op_str.parse().map_err(|_| SyntaxError {
        line: at.0,
        col: at.1,
        message: format!("'{op_str}' is not a comparison operator"),
    })?;
    cur.skip_ws();
    let value = if cur.peek() == Some('"') {
        AttrValue::Str(cur.quoted()?)
    } else {
        let tok = literal_token(cur).ok_or_else(|| cur.err("expected a literal"))?;
        classify_literal(&tok)
    };
    Ok(AttrPredicate { key, op, value })
}

/// Literal tokens additionally admit ':' and '+' so bare timestamps work.
fn literal_token(cur: &mut Cursor<'_>) -> Option<String> {
    cur.skip_ws();
    let start = cur.pos;
    while matches!(cur.peek(), Some(c) if c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | ':' | '+')) {
        cur.bump();
    }
    if cur.pos == start {
        None
    } else {
        Some(cur.src[start..cur.pos].to_string())
    }
}

fn classify_literal(tok: &str) -> AttrValue {
    if tok == "true" {
        return AttrValue::Bool(true);
    }
    if tok == "false" {
        return AttrValue::Bool(false);
    }
    if let Ok(i) = tok.parse::<i64>() {
        return AttrValue::Int(i);
    }
    if let Ok(r) = tok.parse::<f64>() {
        return AttrValue::Real(r);
    }
    if let Ok(t) = Timestamp::parse_flex(tok) {
        return AttrValue::Time(t);
    }
    AttrValue::Str(tok.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pattern_with_confidence_floor() {
        let q = parse_query("match (x, y, z) where conf > 0.8").unwrap();
        assert_eq!(q.templates.len(), 1);
        assert_eq!(q.templates[0].terms.len(), 3);
        assert!(q.templates[0]
            .terms
            .iter()
            .all(|t| matches!(t, Term::Var { role: None, .. })));
        assert_eq!(q.min_confidence, Some(0.8));
        assert_eq!(q.at_time, None);
        assert_eq!(q.window, None);
    }

    #[test]
    fn roles_constants_and_at_time() {
        let q = parse_query("match (d:Doctor, g:Drug, p) at time 2024-07-01").unwrap();
        let t = &q.templates[0];
        assert_eq!(
            t.terms[0],
            Term::Var { name: "d".into(), role: Some("Doctor".into()) }
        );
        assert_eq!(
            t.terms[1],
            Term::Var { name: "g".into(), role: Some("Drug".into()) }
        );
        assert_eq!(t.terms[2], Term::Var { name: "p".into(), role: None });
        let at = q.at_time.unwrap();
        assert_eq!(at, Timestamp::parse_flex("2024-07-01").unwrap());
    }

    #[test]
    fn dangling_comma_is_a_syntax_error_with_position() {
        let err = parse_query("match (x,").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 10);
        assert!(err.message.contains("expected a term"), "{}", err.message);
    }

    #[test]
    fn attribute_predicates_classify_literals() {
        let q = parse_query(
            "match (x, y) { type = meeting, productive = true, severity >= 3, load < 0.5, driver = \"6.1\", since > 2024-01-01 }",
        )
        .unwrap();
        let p = &q.templates[0].predicates;
        assert_eq!(p.len(), 6);
        assert_eq!(p[0].value, AttrValue::Str("meeting".into()));
        assert_eq!(p[1].value, AttrValue::Bool(true));
        assert_eq!(p[1].op, CompareOp::Eq);
        assert_eq!(p[2].value, AttrValue::Int(3));
        assert_eq!(p[2].op, CompareOp::Ge);
        assert_eq!(p[3].value, AttrValue::Real(0.5));
        assert_eq!(p[4].value, AttrValue::Str("6.1".into()));
        assert_eq!(
            p[5].value,
            AttrValue::Time(Timestamp::parse_flex("2024-01-01").unwrap())
        );
    }

    #[test]
    fn multi_template_join_and_during() {
        let q = parse_query(
            "match (x, y) (y, z) { kind != noise } during [2024-03-01, 2024-04-01T00:00:00]",
        )
        .unwrap();
        assert_eq!(q.templates.len(), 2);
        assert_eq!(q.templates[1].predicates.len(), 1);
        let w = q.window.unwrap();
        assert_eq!(w.start(), Timestamp::parse_flex("2024-03-01").unwrap());
    }

    #[test]
    fn quoted_constants_reach_lowercase_ids() {
        let q = parse_query("match (\"print_failure_e3\", x, Alice)").unwrap();
        let t = &q.templates[0];
        assert_eq!(t.terms[0], Term::Const("print_failure_e3".into()));
        assert_eq!(t.terms[2], Term::Const("Alice".into()));
    }

    #[test]
    fn error_positions_and_messages() {
        let err = parse_query("fetch (x)").unwrap_err();
        assert!(err.message.contains("expected 'match'"));
        assert_eq!((err.line, err.col), (1, 1));

        let err = parse_query("match (x) where conf < 0.5").unwrap_err();
        assert!(err.message.contains("expected '>'"));

        let err = parse_query("match (Alice:Doctor)").unwrap_err();
        assert!(err.message.contains("constant"));

        let err = parse_query("match (x) at time tomorrow").unwrap_err();
        assert!(err.message.contains("not a timestamp"));
        assert_eq!((err.line, err.col), (1, 19));

        let err = parse_query("match (x) garbage").unwrap_err();
        assert!(err.message.contains("'garbage'"));

        let err = parse_query("match (x) during [2024-05-01, 2024-04-01]").unwrap_err();
        assert!(err.message.contains("interval"), "{}", err.message);
    }

    #[test]
    fn newlines_are_ordinary_whitespace() {
        let q = parse_query("match (x, y)\n  (y, z)\n  where conf > 0.2\n").unwrap();
        assert_eq!(q.templates.len(), 2);
        assert_eq!(q.min_confidence, Some(0.2));
    }
}
